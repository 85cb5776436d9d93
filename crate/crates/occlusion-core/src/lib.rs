//! Fast edge-aware occlusion detection on disparity maps for center +
//! peripheral camera arrays.
//!
//! Warping the center view into a peripheral view hides every pixel whose
//! warped position is covered by a closer surface. Finding those pixels
//! densely (forward-warp everything, keep a z-buffer) is expensive;
//! occlusion can only happen at disparity discontinuities, so this crate
//! detects it by scanning short 1D lines through edge pixels instead:
//!
//! 1. [`edge`] — forward-difference gradients select edge candidates whose
//!    orientation faces the queried baseline direction,
//! 2. [`detector`] — a scan line through each candidate is warped
//!    (`w = g + v`), sorted, and neighbors that land on each other with a
//!    disparity gap mark occluded pixels in an [`mask::OcclusionMask`],
//! 3. [`oracle`] — a brute-force dense reference validates the detector and
//!    anchors benchmarks,
//! 4. [`eval`] — confusion counts, precision/recall/F1 and confusion-image
//!    rendering,
//! 5. [`io`] — PFM disparity maps, PGM masks, PPM confusion images.
//!
//! Synthetic scenes for tests and benchmarks live in [`synth`]; disparity
//! containers and median fusion in [`disparity`].
//!
//! # Conventions
//!
//! Image origin is the top-left corner, x grows rightward, y grows
//! downward, and angles are measured from +x toward +y. A
//! [`direction::DirectionSpec`] holds the baseline angle (center camera →
//! peripheral camera) and the displacement angle (baseline + pi) along
//! which content shifts when warped into that peripheral view.
//!
//! # Parallelism
//!
//! With the default `rayon` feature, detection and the oracle parallelize
//! over candidates/rows on the current rayon thread pool; without it the
//! same code paths run sequentially. Results are bit-identical either way:
//! the only merged state is the occlusion mask, combined with commutative,
//! idempotent bit-or operations.
//!
//! # Example
//!
//! ```
//! use occlusion_core::detector::{detect, DetectorConfig};
//! use occlusion_core::direction::DirectionSpec;
//! use occlusion_core::synth::step_fixture;
//! use std::f64::consts::PI;
//!
//! let disparity = step_fixture();
//! let dir = DirectionSpec::from_baseline(PI);
//! let mask = detect(&disparity, &dir, &DetectorConfig::default()).unwrap();
//! assert!(mask.count_occluded() > 0);
//! ```

pub mod detector;
pub mod direction;
pub mod disparity;
pub mod edge;
pub mod error;
pub mod eval;
pub mod io;
pub mod mask;
pub mod oracle;
mod parallel;
pub mod synth;

pub use detector::{detect, detect_array, DetectorConfig};
pub use direction::{eight_directions, DirectionSpec};
pub use disparity::{fuse_median, DisparityMap, NonFinitePolicy};
pub use error::{Error, Result};
pub use eval::{confusion, metrics, render_confusion, ConfusionStats};
pub use mask::OcclusionMask;
pub use oracle::{oracle_array, oracle_detect, OracleConfig};
