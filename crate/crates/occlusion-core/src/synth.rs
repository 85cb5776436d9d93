//! Deterministic synthetic disparity scenes for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::disparity::DisparityMap;
use crate::error::{Error, Result};

/// Scene description for [`synth_scene`].
#[derive(Debug, Clone, PartialEq)]
pub enum SceneSpec {
    /// Vertical disparity step: `fg` for x < col, `bg` for x >= col.
    Step {
        width: usize,
        height: usize,
        bg: f32,
        fg: f32,
        col: usize,
    },
    /// Foreground rectangle (x, y, w, h) on a constant background.
    Square {
        width: usize,
        height: usize,
        bg: f32,
        fg: f32,
        rect: (usize, usize, usize, usize),
    },
    /// Non-overlapping integer-valued rectangles on a zero background.
    ///
    /// Rectangle disparities are drawn uniformly from
    /// `[jump_min, jump_max]` (integers), so every disparity jump in the
    /// scene is at least `jump_min`. Placement keeps at least `min_spacing`
    /// pixels (Chebyshev) between rectangles and half that to the border;
    /// candidates that do not fit after a bounded number of draws are
    /// skipped, so the scene may contain fewer than `n_rects` rectangles.
    RandomRects {
        width: usize,
        height: usize,
        n_rects: usize,
        jump_min: u32,
        jump_max: u32,
        min_spacing: usize,
        size_range: (usize, usize),
    },
}

/// Generates a scene; identical `spec` and `seed` give identical maps.
pub fn synth_scene(spec: &SceneSpec, seed: u64) -> Result<DisparityMap> {
    match *spec {
        SceneSpec::Step {
            width,
            height,
            bg,
            fg,
            col,
        } => {
            if col == 0 || col >= width {
                return Err(Error::InvalidParams(format!(
                    "step column {col} outside 1..{width}"
                )));
            }
            let mut values = vec![bg; width * height];
            for row in values.chunks_mut(width) {
                row[..col].fill(fg);
            }
            DisparityMap::new(width, height, values)
        }
        SceneSpec::Square {
            width,
            height,
            bg,
            fg,
            rect: (rx, ry, rw, rh),
        } => {
            if rw == 0 || rh == 0 || rx + rw > width || ry + rh > height {
                return Err(Error::InvalidParams(format!(
                    "rectangle ({rx},{ry},{rw},{rh}) outside {width}x{height}"
                )));
            }
            let mut values = vec![bg; width * height];
            for y in ry..ry + rh {
                values[y * width + rx..y * width + rx + rw].fill(fg);
            }
            DisparityMap::new(width, height, values)
        }
        SceneSpec::RandomRects {
            width,
            height,
            n_rects,
            jump_min,
            jump_max,
            min_spacing,
            size_range: (size_lo, size_hi),
        } => {
            if jump_min == 0 || jump_max < jump_min {
                return Err(Error::InvalidParams(format!(
                    "invalid jump range [{jump_min}, {jump_max}]"
                )));
            }
            if size_lo == 0 || size_hi < size_lo {
                return Err(Error::InvalidParams(format!(
                    "invalid size range [{size_lo}, {size_hi}]"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut values = vec![0.0f32; width * height];
            let margin = min_spacing / 2;
            let mut placed: Vec<(usize, usize, usize, usize)> = Vec::new();
            let mut attempts = 0usize;
            while placed.len() < n_rects && attempts < n_rects * 64 {
                attempts += 1;
                let rw = rng.gen_range(size_lo..=size_hi);
                let rh = rng.gen_range(size_lo..=size_hi);
                if margin + rw + margin > width || margin + rh + margin > height {
                    continue;
                }
                let rx = rng.gen_range(margin..=width - rw - margin);
                let ry = rng.gen_range(margin..=height - rh - margin);
                let value = rng.gen_range(jump_min..=jump_max) as f32;
                let clear = placed.iter().all(|&(px, py, pw, ph)| {
                    let dx = gap(rx, rw, px, pw);
                    let dy = gap(ry, rh, py, ph);
                    dx.max(dy) >= min_spacing
                });
                if !clear {
                    continue;
                }
                for y in ry..ry + rh {
                    values[y * width + rx..y * width + rx + rw].fill(value);
                }
                placed.push((rx, ry, rw, rh));
            }
            DisparityMap::new(width, height, values)
        }
    }
}

/// Chebyshev gap along one axis between intervals [a, a+alen) and [b, b+blen).
fn gap(a: usize, alen: usize, b: usize, blen: usize) -> usize {
    b.saturating_sub(a + alen).max(a.saturating_sub(b + blen))
}

/// The 128x128 step fixture (fg 8, bg 0, edge at column 64).
pub fn step_fixture() -> DisparityMap {
    synth_scene(
        &SceneSpec::Step {
            width: 128,
            height: 128,
            bg: 0.0,
            fg: 8.0,
            col: 64,
        },
        0,
    )
    .expect("valid fixture")
}

/// The 128x128 centered-square fixture (fg 6 on bg 0).
pub fn square_fixture() -> DisparityMap {
    synth_scene(
        &SceneSpec::Square {
            width: 128,
            height: 128,
            bg: 0.0,
            fg: 6.0,
            rect: (32, 32, 64, 64),
        },
        0,
    )
    .expect("valid fixture")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_rows_identical_with_fg_left() {
        let d = step_fixture();
        for y in 0..128 {
            for x in 0..128 {
                let want = if x < 64 { 8.0 } else { 0.0 };
                assert_eq!(d.get(x, y), want, "at ({x},{y})");
            }
        }
    }

    #[test]
    fn square_constant_inside_rect() {
        let d = square_fixture();
        for y in 0..128 {
            for x in 0..128 {
                let inside = (32..96).contains(&x) && (32..96).contains(&y);
                assert_eq!(d.get(x, y), if inside { 6.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn random_rects_deterministic_for_seed() {
        let spec = SceneSpec::RandomRects {
            width: 128,
            height: 128,
            n_rects: 4,
            jump_min: 2,
            jump_max: 24,
            min_spacing: 16,
            size_range: (10, 30),
        };
        let a = synth_scene(&spec, 7).unwrap();
        let b = synth_scene(&spec, 7).unwrap();
        assert_eq!(a, b);
        let c = synth_scene(&spec, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn random_rects_jumps_at_least_min() {
        let spec = SceneSpec::RandomRects {
            width: 96,
            height: 96,
            n_rects: 3,
            jump_min: 5,
            jump_max: 12,
            min_spacing: 12,
            size_range: (8, 20),
        };
        let d = synth_scene(&spec, 3).unwrap();
        let (_, max) = d.stats();
        assert!(max >= 5.0, "expected at least one rectangle");
        for &v in d.values() {
            assert!(v == 0.0 || (5.0..=12.0).contains(&v));
            assert_eq!(v.fract(), 0.0);
        }
    }

    #[test]
    fn invalid_params_rejected() {
        let bad = SceneSpec::Step {
            width: 10,
            height: 10,
            bg: 0.0,
            fg: 1.0,
            col: 10,
        };
        assert!(synth_scene(&bad, 0).is_err());
    }
}
