//! PGM/PPM raster codecs for masks and confusion images.
//!
//! Masks are binary PGM (`P5`, maxval 255): occluded = 255, visible = 0.
//! The reader is strict about binary content unless a threshold is given.
//! Confusion images are PPM (`P6`) with the class colors from
//! [`crate::eval::ConfusionClass::rgb`].

use std::path::Path;

use crate::error::{Error, Result};
use crate::eval::ConfusionImage;
use crate::mask::OcclusionMask;

/// Returns the next header token, skipping whitespace and `#` comments.
fn next_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Option<&'a [u8]> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    (*pos > start).then(|| &bytes[start..*pos])
}

fn parse_dim(bytes: &[u8], pos: &mut usize, what: &str) -> Result<usize> {
    let token =
        next_token(bytes, pos).ok_or_else(|| Error::MalformedHeader(format!("missing {what}")))?;
    let value: usize = std::str::from_utf8(token)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| {
            Error::MalformedHeader(format!(
                "unparsable {what}: {:?}",
                String::from_utf8_lossy(token)
            ))
        })?;
    if value == 0 {
        return Err(Error::MalformedHeader(format!("{what} must be positive")));
    }
    Ok(value)
}

/// Parses a `P5` header and returns (width, height, payload).
fn read_pgm_payload(bytes: &[u8]) -> Result<(usize, usize, &[u8])> {
    let mut pos = 0;
    let magic =
        next_token(bytes, &mut pos).ok_or_else(|| Error::MalformedHeader("empty file".into()))?;
    if magic != b"P5" {
        return Err(Error::BadMagic(String::from_utf8_lossy(magic).into_owned()));
    }
    let width = parse_dim(bytes, &mut pos, "width")?;
    let height = parse_dim(bytes, &mut pos, "height")?;
    let maxval = parse_dim(bytes, &mut pos, "maxval")?;
    if maxval != 255 {
        return Err(Error::MalformedHeader(format!(
            "expected 8-bit maxval 255, found {maxval}"
        )));
    }
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(Error::MalformedHeader(
            "missing whitespace before payload".into(),
        ));
    }
    pos += 1;
    let expected = width * height;
    let payload = &bytes[pos..];
    if payload.len() < expected {
        return Err(Error::Truncated {
            expected,
            found: payload.len(),
        });
    }
    Ok((width, height, &payload[..expected]))
}

/// Decodes a strictly binary (0/255) PGM mask.
pub fn read_mask(bytes: &[u8]) -> Result<OcclusionMask> {
    let (width, height, payload) = read_pgm_payload(bytes)?;
    let mut bits = Vec::with_capacity(payload.len());
    for &b in payload {
        match b {
            0 => bits.push(0),
            255 => bits.push(1),
            other => return Err(Error::NonBinaryMask(other)),
        }
    }
    OcclusionMask::from_bits(width, height, bits)
}

/// Decodes a PGM mask, binarizing at `threshold` (value >= threshold is
/// occluded) instead of insisting on 0/255 content.
pub fn read_mask_with_threshold(bytes: &[u8], threshold: u8) -> Result<OcclusionMask> {
    let (width, height, payload) = read_pgm_payload(bytes)?;
    let bits = payload.iter().map(|&b| u8::from(b >= threshold)).collect();
    OcclusionMask::from_bits(width, height, bits)
}

/// Encodes a mask as binary PGM, occluded = 255.
pub fn write_mask(mask: &OcclusionMask) -> Vec<u8> {
    let (w, h) = (mask.width(), mask.height());
    let header = format!("P5\n{w} {h}\n255\n");
    let mut out = Vec::with_capacity(header.len() + w * h);
    out.extend_from_slice(header.as_bytes());
    out.extend(mask.bits().iter().map(|&b| if b != 0 { 255 } else { 0 }));
    out
}

/// Encodes a confusion image as binary PPM.
pub fn write_confusion(img: &ConfusionImage) -> Vec<u8> {
    let (w, h) = (img.width(), img.height());
    let header = format!("P6\n{w} {h}\n255\n");
    let mut out = Vec::with_capacity(header.len() + w * h * 3);
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&img.to_rgb_bytes());
    out
}

/// Reads a strict binary mask file from disk.
pub fn read_mask_file(path: impl AsRef<Path>) -> Result<OcclusionMask> {
    read_mask(&std::fs::read(path)?)
}

/// Writes a mask to a PGM file.
pub fn write_mask_file(path: impl AsRef<Path>, mask: &OcclusionMask) -> Result<()> {
    Ok(std::fs::write(path, write_mask(mask))?)
}

/// Writes a confusion image to a PPM file.
pub fn write_confusion_file(path: impl AsRef<Path>, img: &ConfusionImage) -> Result<()> {
    Ok(std::fs::write(path, write_confusion(img))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::render_confusion;

    fn checker(width: usize, height: usize) -> OcclusionMask {
        let mut m = OcclusionMask::zeros(width, height);
        for y in 0..height {
            for x in 0..width {
                if (x + y) % 2 == 0 {
                    m.set(x, y);
                }
            }
        }
        m
    }

    #[test]
    fn mask_round_trips() {
        let m = checker(5, 4);
        assert_eq!(read_mask(&write_mask(&m)).unwrap(), m);
    }

    #[test]
    fn all_zero_mask_writes_zero_payload() {
        let bytes = write_mask(&OcclusionMask::zeros(3, 3));
        assert!(bytes.starts_with(b"P5\n3 3\n255\n"));
        assert!(bytes[b"P5\n3 3\n255\n".len()..].iter().all(|&b| b == 0));
    }

    #[test]
    fn non_binary_value_is_rejected_without_threshold() {
        let mut bytes = b"P5\n2 1\n255\n".to_vec();
        bytes.extend_from_slice(&[7, 255]);
        assert!(matches!(read_mask(&bytes), Err(Error::NonBinaryMask(7))));
    }

    #[test]
    fn threshold_binarizes_gray_values() {
        let mut bytes = b"P5\n3 1\n255\n".to_vec();
        bytes.extend_from_slice(&[7, 128, 200]);
        let m = read_mask_with_threshold(&bytes, 128).unwrap();
        assert_eq!((m.get(0, 0), m.get(1, 0), m.get(2, 0)), (false, true, true));
    }

    #[test]
    fn comments_in_header_are_skipped() {
        let mut bytes = b"P5\n# synthetic fixture\n2 1\n255\n".to_vec();
        bytes.extend_from_slice(&[255, 0]);
        let m = read_mask(&bytes).unwrap();
        assert!(m.get(0, 0) && !m.get(1, 0));
    }

    #[test]
    fn wrong_magic_is_rejected() {
        assert!(matches!(
            read_mask(b"P2\n1 1\n255\n0"),
            Err(Error::BadMagic(_))
        ));
    }

    #[test]
    fn short_payload_is_truncated() {
        let bytes = b"P5\n4 4\n255\n\x00\x00\x00";
        assert!(matches!(
            read_mask(bytes),
            Err(Error::Truncated {
                expected: 16,
                found: 3
            })
        ));
    }

    #[test]
    fn confusion_ppm_has_expected_pixels() {
        let mut gt = OcclusionMask::zeros(2, 1);
        gt.set(0, 0);
        let mut pred = OcclusionMask::zeros(2, 1);
        pred.set(0, 0);
        pred.set(1, 0);
        let img = render_confusion(&pred, &gt).unwrap();
        let bytes = write_confusion(&img);
        assert!(bytes.starts_with(b"P6\n2 1\n255\n"));
        assert_eq!(&bytes[b"P6\n2 1\n255\n".len()..], &[255, 0, 0, 128, 0, 128]);
    }

    #[test]
    fn mask_file_round_trip() {
        let dir = std::env::temp_dir().join("pnm_roundtrip_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("mask.pgm");
        let m = checker(8, 8);
        write_mask_file(&path, &m).unwrap();
        let again = read_mask_file(&path).unwrap();
        std::fs::remove_dir_all(&dir).ok();
        assert_eq!(again, m);
    }
}
