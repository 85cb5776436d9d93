//! Binary occlusion masks in center-view coordinates.

use crate::error::{Error, Result};

/// A binary grid matching its source disparity map: 1 marks a pixel of the
/// center view that is not visible in the queried peripheral view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OcclusionMask {
    width: usize,
    height: usize,
    bits: Vec<u8>,
}

impl OcclusionMask {
    pub fn zeros(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![0; width * height],
        }
    }

    /// Builds a mask from 0/1 bytes.
    pub fn from_bits(width: usize, height: usize, bits: Vec<u8>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::InvalidParams(format!(
                "expected {} bits for {}x{}, got {}",
                width * height,
                width,
                height,
                bits.len()
            )));
        }
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::NonBinaryMask(b));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x] != 0
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize) {
        self.bits[y * self.width + x] = 1;
    }

    pub fn count_occluded(&self) -> usize {
        self.bits.iter().filter(|&&b| b != 0).count()
    }

    /// Set-union with another mask of the same size.
    pub fn union_with(&mut self, other: &OcclusionMask) {
        debug_assert_eq!((self.width, self.height), (other.width, other.height));
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    /// Rotates by 90 degrees with the same pixel mapping as
    /// [`crate::DisparityMap::rot90`].
    pub fn rot90(&self) -> OcclusionMask {
        let (w, h) = (self.width, self.height);
        let mut out = vec![0u8; w * h];
        for y in 0..h {
            for x in 0..w {
                out[x * h + (h - 1 - y)] = self.bits[y * w + x];
            }
        }
        OcclusionMask {
            width: h,
            height: w,
            bits: out,
        }
    }

    /// Chebyshev dilation by `radius` pixels (used by band-tolerant scoring).
    pub fn dilate(&self, radius: usize) -> OcclusionMask {
        self.morph(radius, true)
    }

    /// Chebyshev erosion by `radius` pixels.
    pub fn erode(&self, radius: usize) -> OcclusionMask {
        self.morph(radius, false)
    }

    fn morph(&self, radius: usize, dilate: bool) -> OcclusionMask {
        let (w, h) = (self.width, self.height);
        let r = radius as i64;
        let mut out = vec![0u8; w * h];
        crate::parallel::for_each_row(&mut out, w, |y, row| {
            for (x, cell) in row.iter_mut().enumerate() {
                let mut acc = !dilate;
                'win: for dy in -r..=r {
                    for dx in -r..=r {
                        let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                        let v = if nx >= 0 && ny >= 0 && (nx as usize) < w && (ny as usize) < h {
                            self.bits[ny as usize * w + nx as usize] != 0
                        } else {
                            // Outside the grid counts as background.
                            false
                        };
                        if dilate && v {
                            acc = true;
                            break 'win;
                        }
                        if !dilate && !v {
                            acc = false;
                            break 'win;
                        }
                    }
                }
                *cell = acc as u8;
            }
        });
        OcclusionMask {
            width: w,
            height: h,
            bits: out,
        }
    }
}
