//! Confusion statistics, metric formulas, and confusion visualizations.

use crate::error::{Error, Result};
use crate::mask::OcclusionMask;
use std::fmt::Write as _;

/// Pixel counts of a binary comparison, occluded being the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionStats {
    pub true_pos: u64,
    pub false_pos: u64,
    pub false_neg: u64,
    pub true_neg: u64,
}

impl ConfusionStats {
    pub fn total(&self) -> u64 {
        self.true_pos + self.false_pos + self.false_neg + self.true_neg
    }

    /// Accumulates another comparison's counts (micro-averaging).
    pub fn accumulate(&mut self, other: &ConfusionStats) {
        self.true_pos += other.true_pos;
        self.false_pos += other.false_pos;
        self.false_neg += other.false_neg;
        self.true_neg += other.true_neg;
    }
}

/// Per-pixel class of a prediction against ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfusionClass {
    TruePositive,
    FalsePositive,
    FalseNegative,
    TrueNegative,
}

impl ConfusionClass {
    fn of(pred: bool, gt: bool) -> Self {
        match (pred, gt) {
            (true, true) => Self::TruePositive,
            (true, false) => Self::FalsePositive,
            (false, true) => Self::FalseNegative,
            (false, false) => Self::TrueNegative,
        }
    }

    /// Display color: TP red, FN yellow, FP purple, TN black.
    pub fn rgb(&self) -> [u8; 3] {
        match self {
            Self::TruePositive => [255, 0, 0],
            Self::FalseNegative => [255, 255, 0],
            Self::FalsePositive => [128, 0, 128],
            Self::TrueNegative => [0, 0, 0],
        }
    }
}

/// Per-pixel confusion classes in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionImage {
    width: usize,
    height: usize,
    classes: Vec<ConfusionClass>,
}

impl ConfusionImage {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> ConfusionClass {
        assert!(x < self.width && y < self.height);
        self.classes[y * self.width + x]
    }

    /// Packed RGB triples, row-major from the top-left.
    pub fn to_rgb_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.classes.len() * 3);
        for class in &self.classes {
            out.extend_from_slice(&class.rgb());
        }
        out
    }
}

fn check_dims(pred: &OcclusionMask, gt: &OcclusionMask) -> Result<()> {
    if pred.width() != gt.width() || pred.height() != gt.height() {
        return Err(Error::DimensionMismatch(
            pred.width(),
            pred.height(),
            gt.width(),
            gt.height(),
        ));
    }
    Ok(())
}

/// Counts per-pixel agreement of `pred` against `gt`.
pub fn confusion(pred: &OcclusionMask, gt: &OcclusionMask) -> Result<ConfusionStats> {
    check_dims(pred, gt)?;
    let mut s = ConfusionStats::default();
    for y in 0..gt.height() {
        for x in 0..gt.width() {
            match ConfusionClass::of(pred.get(x, y), gt.get(x, y)) {
                ConfusionClass::TruePositive => s.true_pos += 1,
                ConfusionClass::FalsePositive => s.false_pos += 1,
                ConfusionClass::FalseNegative => s.false_neg += 1,
                ConfusionClass::TrueNegative => s.true_neg += 1,
            }
        }
    }
    Ok(s)
}

/// Boundary-forgiving variant of [`confusion`]: predictions within
/// `radius` (Chebyshev) of the reference band count as hits, and misses
/// are only charged inside the reference band eroded by `radius`.
pub fn band_tolerant_confusion(
    pred: &OcclusionMask,
    gt: &OcclusionMask,
    radius: usize,
) -> Result<ConfusionStats> {
    check_dims(pred, gt)?;
    let dilated = gt.dilate(radius);
    let eroded = gt.erode(radius);
    let mut s = ConfusionStats::default();
    for y in 0..gt.height() {
        for x in 0..gt.width() {
            if pred.get(x, y) {
                if dilated.get(x, y) {
                    s.true_pos += 1;
                } else {
                    s.false_pos += 1;
                }
            } else if eroded.get(x, y) {
                s.false_neg += 1;
            } else {
                s.true_neg += 1;
            }
        }
    }
    Ok(s)
}

/// Precision, recall and F1 from raw counts.
///
/// precision = tp/(tp+fp), recall = tp/(tp+fn), f1 = 2tp/(2tp+fp+fn).
/// Any 0/0 quotient is defined as 1.0 so an all-negative prediction of an
/// all-negative reference scores perfect rather than poisoning averages.
pub fn metrics(s: &ConfusionStats) -> (f64, f64, f64) {
    let ratio = |num: u64, den: u64| {
        if den == 0 {
            1.0
        } else {
            num as f64 / den as f64
        }
    };
    let precision = ratio(s.true_pos, s.true_pos + s.false_pos);
    let recall = ratio(s.true_pos, s.true_pos + s.false_neg);
    let f1 = ratio(2 * s.true_pos, 2 * s.true_pos + s.false_pos + s.false_neg);
    (precision, recall, f1)
}

/// Classifies every pixel of `pred` against `gt` for rendering.
pub fn render_confusion(pred: &OcclusionMask, gt: &OcclusionMask) -> Result<ConfusionImage> {
    check_dims(pred, gt)?;
    let mut classes = Vec::with_capacity(gt.width() * gt.height());
    for y in 0..gt.height() {
        for x in 0..gt.width() {
            classes.push(ConfusionClass::of(pred.get(x, y), gt.get(x, y)));
        }
    }
    Ok(ConfusionImage {
        width: gt.width(),
        height: gt.height(),
        classes,
    })
}

/// Metric CSV column header.
pub const CSV_HEADER: &str = "name,tp,fp,fn,tn,precision,recall,f1";

/// One metric CSV row (no trailing newline).
pub fn csv_row(name: &str, s: &ConfusionStats) -> String {
    let (precision, recall, f1) = metrics(s);
    let mut row = String::new();
    write!(
        row,
        "{},{},{},{},{},{},{},{}",
        name, s.true_pos, s.false_pos, s.false_neg, s.true_neg, precision, recall, f1
    )
    .expect("writing to a String cannot fail");
    row
}
