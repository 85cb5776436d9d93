//! Disparity derivative fields and occlusion-candidate selection.
//!
//! Occlusions are caused by jumps in the disparity map, so only edge pixels
//! are worth scanning. The gradient filter is the forward difference
//! (-1, 1): it assigns an edge to the left/top pixel of the discontinuity.
//! Scan lines are centered on the edge, so either assignment is covered.

use crate::direction::DirectionSpec;
use crate::disparity::DisparityMap;
use crate::error::{Error, Result};
use crate::parallel;

/// Per-pixel derivative fields of a disparity map.
#[derive(Debug, Clone)]
pub struct EdgeField {
    width: usize,
    height: usize,
    ex: Vec<f32>,
    ey: Vec<f32>,
    magnitude: Vec<f32>,
    angle: Vec<f32>,
}

impl EdgeField {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Horizontal forward difference; the last column is 0.
    pub fn ex(&self) -> &[f32] {
        &self.ex
    }

    /// Vertical forward difference; the last row is 0.
    pub fn ey(&self) -> &[f32] {
        &self.ey
    }

    /// Gradient magnitude `sqrt(ex^2 + ey^2)`.
    pub fn magnitude(&self) -> &[f32] {
        &self.magnitude
    }

    /// Gradient angle in (-pi, pi], from the two-argument arctangent so all
    /// four quadrants are distinguished. Zero gradient maps to angle 0,
    /// which never passes the magnitude threshold.
    pub fn angle(&self) -> &[f32] {
        &self.angle
    }
}

/// Pixel positions whose edges can cause occlusion in one direction,
/// in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateList {
    pub coords: Vec<(u32, u32)>,
}

impl CandidateList {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Computes forward-difference edge maps plus magnitude and angle.
pub fn compute_edge_fields(d: &DisparityMap) -> Result<EdgeField> {
    let (w, h) = (d.width(), d.height());
    if w < 2 || h < 2 {
        return Err(Error::MapTooSmall(w, h));
    }
    let values = d.values();
    let mut ex = vec![0.0f32; w * h];
    parallel::for_each_row(&mut ex, w, |y, row| {
        let src = &values[y * w..(y + 1) * w];
        for x in 0..w - 1 {
            row[x] = src[x + 1] - src[x];
        }
    });
    let mut ey = vec![0.0f32; w * h];
    parallel::for_each_row(&mut ey, w, |y, row| {
        if y + 1 < h {
            let cur = &values[y * w..(y + 1) * w];
            let below = &values[(y + 1) * w..(y + 2) * w];
            for x in 0..w {
                row[x] = below[x] - cur[x];
            }
        }
    });
    let magnitude: Vec<f32> =
        parallel::map_indices(w * h, |i| (ex[i] * ex[i] + ey[i] * ey[i]).sqrt());
    let angle: Vec<f32> = parallel::map_indices(w * h, |i| {
        if magnitude[i] > 0.0 {
            ey[i].atan2(ex[i])
        } else {
            0.0
        }
    });
    Ok(EdgeField {
        width: w,
        height: h,
        ex,
        ey,
        magnitude,
        angle,
    })
}

/// Selects the pixels with gradient magnitude above `t_edge` whose gradient
/// direction lies within pi/2 of the baseline angle.
///
/// The half-plane test is evaluated as `dot(gradient, baseline_unit) > 0`
/// rather than as a circular distance between arctangent angles. The two are
/// equivalent, but the dot form has no seam at +-pi and stays exact where a
/// gradient is perpendicular to the baseline, so candidate sets rotate
/// consistently with `DirectionSpec::rot90`.
pub fn select_candidates(e: &EdgeField, dir: &DirectionSpec, t_edge: f32) -> CandidateList {
    let (w, h) = (e.width, e.height);
    let (bx, by) = dir.baseline_unit();
    let row_candidates: Vec<Vec<(u32, u32)>> = parallel::map_indices(h, |y| {
        let mut row = Vec::new();
        for x in 0..w {
            let i = y * w + x;
            if e.magnitude[i] > t_edge && e.ex[i] as f64 * bx + e.ey[i] as f64 * by > 0.0 {
                row.push((x as u32, y as u32));
            }
        }
        row
    });
    CandidateList {
        coords: row_candidates.concat(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::step_fixture;
    use std::f64::consts::PI;

    #[test]
    fn constant_map_has_zero_fields() {
        let d = DisparityMap::constant(8, 8, 5.0).unwrap();
        let e = compute_edge_fields(&d).unwrap();
        assert!(e.ex().iter().all(|&v| v == 0.0));
        assert!(e.ey().iter().all(|&v| v == 0.0));
        assert!(e.magnitude().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn ramp_has_unit_horizontal_gradient() {
        let values: Vec<f32> = (0..6 * 4).map(|i| (i % 6) as f32).collect();
        let d = DisparityMap::new(6, 4, values).unwrap();
        let e = compute_edge_fields(&d).unwrap();
        for y in 0..4 {
            for x in 0..5 {
                let i = y * 6 + x;
                assert_eq!(e.ex()[i], 1.0);
                assert_eq!(e.magnitude()[i], 1.0);
                assert_eq!(e.angle()[i], 0.0);
            }
            assert_eq!(e.ex()[y * 6 + 5], 0.0, "last column replicates");
        }
        assert!(e.ey()[..6 * 3].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn forward_difference_lands_on_left_pixel() {
        let d = DisparityMap::new(4, 2, vec![2.0, 2.0, 10.0, 10.0, 2.0, 2.0, 10.0, 10.0]).unwrap();
        let e = compute_edge_fields(&d).unwrap();
        assert_eq!(e.ex()[1], 8.0);
        assert_eq!(e.magnitude()[1], 8.0);
        assert_eq!(e.ex()[0], 0.0);
        assert_eq!(e.ex()[2], 0.0);
    }

    #[test]
    fn too_small_map_rejected() {
        let d = DisparityMap::constant(1, 4, 0.0).unwrap();
        assert!(matches!(
            compute_edge_fields(&d),
            Err(Error::MapTooSmall(1, 4))
        ));
    }

    #[test]
    fn below_threshold_yields_no_candidates() {
        let values: Vec<f32> = (0..64).map(|i| (i % 8) as f32 * 0.1).collect();
        let d = DisparityMap::new(8, 8, values).unwrap();
        let e = compute_edge_fields(&d).unwrap();
        let c = select_candidates(&e, &DirectionSpec::from_baseline(0.0), 1.0);
        assert!(c.is_empty());
    }

    /// On the step scene the edge gradient points along -x (angle pi), so
    /// baseline 0 excludes it and baseline pi selects exactly the column
    /// left of the jump, every row.
    #[test]
    fn step_candidates_follow_gradient_half_plane() {
        let d = step_fixture();
        let e = compute_edge_fields(&d).unwrap();

        let toward_zero = select_candidates(&e, &DirectionSpec::from_baseline(0.0), 1.0);
        assert!(toward_zero.is_empty());

        let toward_pi = select_candidates(&e, &DirectionSpec::from_baseline(PI), 1.0);
        let expected: Vec<(u32, u32)> = (0..128).map(|y| (63, y)).collect();
        assert_eq!(toward_pi.coords, expected);
    }

    #[test]
    fn diagonal_gradient_within_quarter_turn_included() {
        // ey = ex = 1 -> angle pi/4; baseline 0 is pi/4 away, inside the half-plane.
        let values: Vec<f32> = (0..25).map(|i| (i % 5 + i / 5) as f32 * 2.0).collect();
        let d = DisparityMap::new(5, 5, values).unwrap();
        let e = compute_edge_fields(&d).unwrap();
        let c = select_candidates(&e, &DirectionSpec::from_baseline(0.0), 1.0);
        assert!(c.coords.contains(&(1, 1)));
    }
}
