//! Brute-force occlusion reference.
//!
//! For every pixel the oracle traces the full line through it along the
//! displacement direction and checks whether any traced pixel warps onto it
//! from a closer surface. It is quadratic-ish and slow by design — no edge
//! shortcut, no scan-length bound — which makes it an independent check for
//! the scanline detector and the runtime baseline for benchmarks.

use crate::direction::DirectionSpec;
use crate::disparity::DisparityMap;
use crate::mask::OcclusionMask;
use crate::parallel::for_each_row;

/// Oracle thresholds.
///
/// `overlap_radius` is the warped-space distance under which two samples
/// are considered to land on the same peripheral pixel (half a pixel
/// footprint by default). `t_disp` carries the same meaning as in
/// [`crate::detector::DetectorConfig`], so detector/oracle disagreements
/// isolate the scan-line approximation rather than the occlusion
/// definition.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub overlap_radius: f32,
    pub t_disp: f32,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            overlap_radius: 0.5,
            t_disp: 0.5,
        }
    }
}

/// Index range of `steps` whose offsets (read through `get`) keep
/// `pos + offset` inside `[0, len)`. Offsets are monotone along the table,
/// so the valid indices form one contiguous run found by binary search.
fn clip_axis(
    steps: &[(i64, i64, f64)],
    get: impl Fn(&(i64, i64, f64)) -> i64,
    ascending: bool,
    pos: i64,
    len: i64,
) -> (usize, usize) {
    let (min_off, max_off) = (-pos, len - 1 - pos);
    if ascending {
        (
            steps.partition_point(|s| get(s) < min_off),
            steps.partition_point(|s| get(s) <= max_off),
        )
    } else {
        (
            steps.partition_point(|s| get(s) > max_off),
            steps.partition_point(|s| get(s) >= min_off),
        )
    }
}

/// Marks every pixel hidden in the peripheral view at `dir`.
///
/// A pixel `p` is occluded iff some pixel `q` on the line through `p`
/// along the displacement direction satisfies both
/// `|w(q) - w(p)| <= overlap_radius` and `d(q) - d(p) > t_disp`, where
/// `w(.) = signed arc position + disparity` matches the detector's warp
/// convention exactly.
///
/// `overlap_radius` must be positive and `t_disp` non-negative.
pub fn oracle_detect(d: &DisparityMap, dir: &DirectionSpec, cfg: &OracleConfig) -> OcclusionMask {
    debug_assert!(cfg.overlap_radius > 0.0 && cfg.t_disp >= 0.0);
    let (w, h) = (d.width(), d.height());
    let (ux, uy) = dir.displacement_unit();

    // Arc offsets covering every pixel reachable from any start: beyond the
    // image diagonal the rounded sample is out of bounds for sure. Offsets
    // are relative, so one table serves all pixels (start coordinates are
    // integers, which commute with rounding here). Each pixel then walks
    // only the in-bounds segment of its line — samples off the image never
    // participate, so the clipping changes speed, not results.
    let reach = ((w - 1) as f64).hypot((h - 1) as f64).ceil() as i64 + 1;
    let steps: Vec<(i64, i64, f64)> = (-reach..=reach)
        .map(|t| {
            let tf = t as f64;
            ((tf * ux).round() as i64, (tf * uy).round() as i64, tf)
        })
        .collect();

    let values = d.values();
    let radius = cfg.overlap_radius as f64;
    let margin = cfg.t_disp as f64;
    let mut bits = vec![0u8; w * h];
    for_each_row(&mut bits, w, |y, row| {
        for (x, out) in row.iter_mut().enumerate() {
            let d_p = values[y * w + x] as f64;
            let (x_lo, x_hi) = clip_axis(&steps, |s| s.0, ux >= 0.0, x as i64, w as i64);
            let (y_lo, y_hi) = clip_axis(&steps, |s| s.1, uy >= 0.0, y as i64, h as i64);
            let (lo, hi) = (x_lo.max(y_lo), x_hi.min(y_hi).max(x_lo.max(y_lo)));
            for &(dx, dy, t) in &steps[lo..hi] {
                let q = (y as i64 + dy) as usize * w + (x as i64 + dx) as usize;
                let delta = values[q] as f64 - d_p;
                if delta > margin && (t + delta).abs() <= radius {
                    *out = 1;
                    break;
                }
            }
        }
    });
    OcclusionMask::from_bits(w, h, bits).expect("bits are 0/1 by construction")
}

/// Per-direction [`oracle_detect`].
pub fn oracle_array(
    d: &DisparityMap,
    dirs: &[DirectionSpec],
    cfg: &OracleConfig,
) -> Vec<OcclusionMask> {
    dirs.iter().map(|dir| oracle_detect(d, dir, cfg)).collect()
}
