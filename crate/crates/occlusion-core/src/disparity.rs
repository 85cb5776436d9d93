//! Disparity grids, global statistics and pixel-wise median fusion.
//!
//! Coordinate convention used throughout the crate: origin at the top-left
//! corner, x grows rightward, y grows downward, angles are measured from +x
//! toward +y. Grids are stored row-major.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Policy for non-finite values (inf/NaN) at ingestion.
///
/// The detector's min/max statistics and warping are undefined on non-finite
/// values, so they are never stored in a [`DisparityMap`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NonFinitePolicy {
    /// Reject the input with [`Error::NonFinite`].
    #[default]
    Reject,
    /// Replace each non-finite value with the value of the nearest finite
    /// pixel (multi-source BFS over the 4-neighborhood, deterministic).
    Sanitize,
}

/// A dense per-pixel disparity grid in pixels, row-major.
///
/// Every stored value is finite; constructors enforce this.
#[derive(Debug, Clone, PartialEq)]
pub struct DisparityMap {
    width: usize,
    height: usize,
    values: Vec<f32>,
}

impl DisparityMap {
    /// Builds a map from row-major values, rejecting non-finite entries.
    pub fn new(width: usize, height: usize, values: Vec<f32>) -> Result<Self> {
        Self::with_policy(width, height, values, NonFinitePolicy::Reject)
    }

    /// Builds a map from row-major values under the given non-finite policy.
    pub fn with_policy(
        width: usize,
        height: usize,
        mut values: Vec<f32>,
        policy: NonFinitePolicy,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyInput);
        }
        if values.len() != width * height {
            return Err(Error::InvalidParams(format!(
                "expected {} values for {}x{}, got {}",
                width * height,
                width,
                height,
                values.len()
            )));
        }
        match policy {
            NonFinitePolicy::Reject => {
                if let Some(i) = values.iter().position(|v| !v.is_finite()) {
                    return Err(Error::NonFinite {
                        x: i % width,
                        y: i / width,
                    });
                }
            }
            NonFinitePolicy::Sanitize => sanitize_in_place(width, height, &mut values)?,
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    /// Constant-valued map.
    pub fn constant(width: usize, height: usize, value: f32) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f32 {
        debug_assert!(x < self.width && y < self.height);
        self.values[y * self.width + x]
    }

    #[inline]
    pub fn in_bounds(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height
    }

    /// Global minimum and maximum disparity.
    pub fn stats(&self) -> (f32, f32) {
        let mut min = f32::INFINITY;
        let mut max = f32::NEG_INFINITY;
        for &v in &self.values {
            min = min.min(v);
            max = max.max(v);
        }
        (min, max)
    }

    /// Rotates the grid by 90 degrees: pixel (x, y) maps to (h-1-y, x) in the
    /// rotated w'=h, h'=w grid. Composing with a +pi/2 shift of direction
    /// angles preserves the geometry.
    pub fn rot90(&self) -> DisparityMap {
        let (w, h) = (self.width, self.height);
        let mut out = vec![0.0f32; w * h];
        for y in 0..h {
            for x in 0..w {
                let (rx, ry) = (h - 1 - y, x);
                out[ry * h + rx] = self.values[y * w + x];
            }
        }
        DisparityMap {
            width: h,
            height: w,
            values: out,
        }
    }
}

/// Global minimum and maximum of a disparity map.
///
/// These feed the scan-length rule of the detector.
pub fn disparity_stats(d: &DisparityMap) -> Result<(f32, f32)> {
    if d.values.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(d.stats())
}

/// Fuses a stack of equally-sized disparity maps by pixel-wise median.
///
/// For an even number of maps the median is the arithmetic mean of the two
/// middle values.
pub fn fuse_median(stack: &[DisparityMap]) -> Result<DisparityMap> {
    let first = stack.first().ok_or(Error::EmptyInput)?;
    let (w, h) = (first.width, first.height);
    for m in stack {
        if m.width != w || m.height != h {
            return Err(Error::DimensionMismatch(w, h, m.width, m.height));
        }
    }
    let n = stack.len();
    let fuse_pixel = |i: usize| -> f32 {
        let mut vals: Vec<f32> = stack.iter().map(|m| m.values[i]).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
        if n % 2 == 1 {
            vals[n / 2]
        } else {
            (vals[n / 2 - 1] + vals[n / 2]) / 2.0
        }
    };
    let values = crate::parallel::map_indices(w * h, fuse_pixel);
    DisparityMap::new(w, h, values)
}

/// Replaces non-finite entries with the nearest finite value (BFS order).
fn sanitize_in_place(width: usize, height: usize, values: &mut [f32]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        return Ok(());
    }
    if !values.iter().any(|v| v.is_finite()) {
        return Err(Error::InvalidParams(
            "all values non-finite, cannot sanitize".into(),
        ));
    }
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut filled: Vec<bool> = values.iter().map(|v| v.is_finite()).collect();
    for (i, &f) in filled.iter().enumerate() {
        if f {
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let (x, y) = (i % width, i / width);
        let v = values[i];
        let mut visit = |j: usize| {
            if !filled[j] {
                filled[j] = true;
                values[j] = v;
                queue.push_back(j);
            }
        };
        if x > 0 {
            visit(i - 1);
        }
        if x + 1 < width {
            visit(i + 1);
        }
        if y > 0 {
            visit(i - width);
        }
        if y + 1 < height {
            visit(i + width);
        }
    }
    Ok(())
}
