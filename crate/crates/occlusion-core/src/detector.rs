//! Fast edge-aware occlusion detection.
//!
//! Uniform regions of a disparity map cannot cause occlusion, so the
//! detector only scans 1D lines through edge candidates:
//!
//! 1. select candidates whose gradient points within a quarter turn of the
//!    baseline direction ([`crate::edge::select_candidates`]),
//! 2. sample a scan line through each candidate along the displacement
//!    direction and warp it by the sampled disparities (`w = g + v`),
//! 3. sort the warped positions and compare each entry against its nearest
//!    sorted neighbors: an entry is occluded when a neighbor lands within
//!    `t_dist` of it in warped space with disparity larger by more than
//!    `t_disp` (the closer surface wins),
//! 4. set the occluded entries' source pixels in the mask.
//!
//! Writes into the mask are set-only, so overlapping scan lines and any
//! parallel schedule produce the same mask.

use crate::direction::DirectionSpec;
use crate::disparity::{disparity_stats, DisparityMap};
use crate::edge::{compute_edge_fields, select_candidates, CandidateList, EdgeField};
use crate::error::{Error, Result};
use crate::mask::OcclusionMask;

/// Detector thresholds.
///
/// `t_edge` is the minimum gradient magnitude for a candidate, `t_dist` the
/// warped-space distance under which two samples are considered to land on
/// each other, `t_disp` the disparity margin a neighbor needs to occlude,
/// `neighbors` the sorted-window size N (N/2 on each side), and
/// `max_scan_length` a cap keeping outlier disparities from exploding the
/// scan length.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorConfig {
    pub t_edge: f32,
    pub t_dist: f32,
    pub t_disp: f32,
    pub neighbors: usize,
    pub max_scan_length: usize,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            t_edge: 1.0,
            t_dist: 2.0,
            t_disp: 0.5,
            neighbors: 8,
            max_scan_length: 4096,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.t_edge.is_nan() || self.t_edge <= 0.0 {
            return Err(Error::InvalidParams("t_edge must be > 0".into()));
        }
        if self.t_dist.is_nan() || self.t_dist <= 0.0 {
            return Err(Error::InvalidParams("t_dist must be > 0".into()));
        }
        if self.t_disp.is_nan() || self.t_disp < 0.0 {
            return Err(Error::InvalidParams("t_disp must be >= 0".into()));
        }
        if self.neighbors < 2 || !self.neighbors.is_multiple_of(2) {
            return Err(Error::InvalidParams(
                "neighbors must be an even integer >= 2".into(),
            ));
        }
        if self.max_scan_length == 0 {
            return Err(Error::InvalidParams("max_scan_length must be >= 1".into()));
        }
        Ok(())
    }
}

/// One candidate's scan line through the disparity map.
///
/// All per-sample vectors share their length; `sort_idx` and `occl_count`
/// are filled by [`warp_and_sort`] and [`count_occlusions`]. Entry `i` of
/// `occl_count` refers to the sample at sorted position `i`, i.e. original
/// index `sort_idx[i]`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScanLine {
    pub candidate: (u32, u32),
    /// Signed arc offsets -floor(L/2)..=floor(L/2), minus dropped samples.
    pub g: Vec<i32>,
    /// Rounded sample x positions (in bounds).
    pub sx: Vec<u32>,
    /// Rounded sample y positions (in bounds).
    pub sy: Vec<u32>,
    /// Disparity sampled at (sx, sy), nearest neighbor.
    pub v: Vec<f32>,
    /// Warped scalar positions `w = g + v`.
    pub w: Vec<f32>,
    /// Permutation making `w[sort_idx]` non-decreasing.
    pub sort_idx: Vec<u32>,
    /// Occluding-neighbor counts, indexed by sorted position.
    pub occl_count: Vec<u32>,
}

impl ScanLine {
    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    fn clear(&mut self) {
        self.g.clear();
        self.sx.clear();
        self.sy.clear();
        self.v.clear();
        self.w.clear();
        self.sort_idx.clear();
        self.occl_count.clear();
    }
}

/// Scan length from the global disparity range: `ceil((d_max - d_min) * 2)`,
/// clipped to `cap`. The factor 2 covers both sides of a line centered on
/// an edge. A constant map yields 0: nothing can occlude.
pub fn scan_length(d_min: f32, d_max: f32, cap: usize) -> usize {
    debug_assert!(d_max >= d_min);
    let len = ((d_max as f64 - d_min as f64) * 2.0).ceil();
    if len <= 0.0 {
        return 0;
    }
    (len as usize).min(cap)
}

/// Builds the scan line of length `len` through `candidate` along the
/// displacement direction, sampling disparities at rounded positions.
///
/// Samples falling outside the image are dropped (clamping would duplicate
/// border disparities and fabricate warped collisions). `len == 0` is an
/// error; callers skip constant maps instead.
pub fn build_scanline(
    candidate: (u32, u32),
    dir: &DirectionSpec,
    len: usize,
    d: &DisparityMap,
) -> Result<ScanLine> {
    let mut line = ScanLine::default();
    build_scanline_into(&mut line, candidate, dir, len, d)?;
    Ok(line)
}

/// In-place variant of [`build_scanline`] reusing the line's buffers.
pub fn build_scanline_into(
    line: &mut ScanLine,
    candidate: (u32, u32),
    dir: &DirectionSpec,
    len: usize,
    d: &DisparityMap,
) -> Result<()> {
    if len == 0 {
        return Err(Error::NoScanNeeded);
    }
    if !d.in_bounds(candidate.0 as i64, candidate.1 as i64) {
        return Err(Error::InvalidParams(format!(
            "candidate ({}, {}) out of bounds",
            candidate.0, candidate.1
        )));
    }
    line.clear();
    line.candidate = candidate;
    let (ux, uy) = dir.displacement_unit();
    let (cx, cy) = (candidate.0 as f64, candidate.1 as f64);
    let half = (len / 2) as i64;
    for g in -half..=half {
        // Round half away from zero, matching f64::round.
        let x = (cx + g as f64 * ux).round() as i64;
        let y = (cy + g as f64 * uy).round() as i64;
        if !d.in_bounds(x, y) {
            continue;
        }
        let v = d.get(x as usize, y as usize);
        line.g.push(g as i32);
        line.sx.push(x as u32);
        line.sy.push(y as u32);
        line.v.push(v);
        line.w.push(g as f32 + v);
    }
    Ok(())
}

/// Fills `sort_idx` so that `w[sort_idx]` is non-decreasing, ties broken by
/// ascending original index.
pub fn warp_and_sort(line: &mut ScanLine) {
    line.sort_idx.clear();
    line.sort_idx.extend(0..line.w.len() as u32);
    let w = &line.w;
    line.sort_idx.sort_unstable_by(|&a, &b| {
        w[a as usize]
            .partial_cmp(&w[b as usize])
            .expect("finite warped positions")
            .then(a.cmp(&b))
    });
}

/// Counts, for each sorted entry, the nearby warped neighbors that occlude
/// it: within `t_dist` in warped space and closer to the camera by more
/// than `t_disp` in disparity.
pub fn count_occlusions(line: &mut ScanLine, cfg: &DetectorConfig) {
    let n = line.sort_idx.len();
    line.occl_count.clear();
    line.occl_count.resize(n, 0);
    let half = (cfg.neighbors / 2) as i64;
    for i in 0..n {
        let self_idx = line.sort_idx[i] as usize;
        let (w_i, v_i) = (line.w[self_idx], line.v[self_idx]);
        let mut count = 0u32;
        for off in -half..=half {
            if off == 0 {
                continue;
            }
            let j = i as i64 + off;
            if j < 0 || j >= n as i64 {
                continue;
            }
            let other_idx = line.sort_idx[j as usize] as usize;
            let (w_j, v_j) = (line.w[other_idx], line.v[other_idx]);
            if (w_i - w_j).abs() < cfg.t_dist && v_j - v_i > cfg.t_disp {
                count += 1;
            }
        }
        line.occl_count[i] = count;
    }
}

/// Sets the mask at the source position of every occluded entry. Set-only:
/// bits are never cleared, so rasterizing is idempotent and order-free.
pub fn rasterize(line: &ScanLine, mask: &mut OcclusionMask) {
    for (i, &count) in line.occl_count.iter().enumerate() {
        if count > 0 {
            let orig = line.sort_idx[i] as usize;
            mask.set(line.sx[orig] as usize, line.sy[orig] as usize);
        }
    }
}

/// Runs the full pipeline for one direction.
///
/// Constant disparity maps return an all-zero mask without scanning.
pub fn detect(
    d: &DisparityMap,
    dir: &DirectionSpec,
    cfg: &DetectorConfig,
) -> Result<OcclusionMask> {
    cfg.validate()?;
    let (d_min, d_max) = disparity_stats(d)?;
    let len = scan_length(d_min, d_max, cfg.max_scan_length);
    if len == 0 {
        return Ok(OcclusionMask::zeros(d.width(), d.height()));
    }
    let edges = compute_edge_fields(d)?;
    Ok(detect_prepared(d, &edges, len, dir, cfg))
}

/// One mask per direction, with edge fields and scan length computed once
/// and reused across directions.
pub fn detect_array(
    d: &DisparityMap,
    dirs: &[DirectionSpec],
    cfg: &DetectorConfig,
) -> Result<Vec<OcclusionMask>> {
    cfg.validate()?;
    if dirs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (d_min, d_max) = disparity_stats(d)?;
    let len = scan_length(d_min, d_max, cfg.max_scan_length);
    if len == 0 {
        return Ok(dirs
            .iter()
            .map(|_| OcclusionMask::zeros(d.width(), d.height()))
            .collect());
    }
    let edges = compute_edge_fields(d)?;
    Ok(dirs
        .iter()
        .map(|dir| detect_prepared(d, &edges, len, dir, cfg))
        .collect())
}

/// Scans all candidates of one direction against precomputed edge fields.
fn detect_prepared(
    d: &DisparityMap,
    edges: &EdgeField,
    len: usize,
    dir: &DirectionSpec,
    cfg: &DetectorConfig,
) -> OcclusionMask {
    let candidates = select_candidates(edges, dir, cfg.t_edge);
    scan_candidates(d, &candidates, len, dir, cfg)
}

fn scan_one(
    d: &DisparityMap,
    candidate: (u32, u32),
    dir: &DirectionSpec,
    len: usize,
    cfg: &DetectorConfig,
    line: &mut ScanLine,
    mask: &mut OcclusionMask,
) {
    build_scanline_into(line, candidate, dir, len, d).expect("len > 0 and candidate in bounds");
    warp_and_sort(line);
    count_occlusions(line, cfg);
    rasterize(line, mask);
}

#[cfg(feature = "rayon")]
fn scan_candidates(
    d: &DisparityMap,
    candidates: &CandidateList,
    len: usize,
    dir: &DirectionSpec,
    cfg: &DetectorConfig,
) -> OcclusionMask {
    use rayon::prelude::*;

    let zeros = || OcclusionMask::zeros(d.width(), d.height());
    candidates
        .coords
        .par_iter()
        .fold(
            || (zeros(), ScanLine::default()),
            |(mut mask, mut line), &c| {
                scan_one(d, c, dir, len, cfg, &mut line, &mut mask);
                (mask, line)
            },
        )
        .map(|(mask, _)| mask)
        .reduce(zeros, |mut a, b| {
            // Bitwise union is commutative, so any reduction order yields
            // the same mask.
            a.union_with(&b);
            a
        })
}

#[cfg(not(feature = "rayon"))]
fn scan_candidates(
    d: &DisparityMap,
    candidates: &CandidateList,
    len: usize,
    dir: &DirectionSpec,
    cfg: &DetectorConfig,
) -> OcclusionMask {
    let mut mask = OcclusionMask::zeros(d.width(), d.height());
    let mut line = ScanLine::default();
    for &c in &candidates.coords {
        scan_one(d, c, dir, len, cfg, &mut line, &mut mask);
    }
    mask
}
