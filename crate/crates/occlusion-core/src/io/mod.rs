//! Bit-exact file codecs: PFM disparity maps, PGM masks, PPM confusion
//! images and CSV metric tables.
//!
//! All codecs work on byte buffers; the thin `*_file` helpers wrap them
//! with std I/O. In-memory grids are always top-left origin — the PFM
//! row flip happens at this boundary.

mod pfm;
mod pnm;

pub use pfm::{read_pfm, read_pfm_file, read_pfm_with_policy, write_pfm, write_pfm_file};
pub use pnm::{
    read_mask, read_mask_file, read_mask_with_threshold, write_confusion, write_confusion_file,
    write_mask, write_mask_file,
};
