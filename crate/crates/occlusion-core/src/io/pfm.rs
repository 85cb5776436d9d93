//! Portable float map (PFM) reader/writer for disparity maps.
//!
//! Layout: header `Pf\n<width> <height>\n<scale>\n` followed by raw 32-bit
//! floats, rows stored bottom-up. The sign of `scale` encodes byte order
//! (negative = little-endian); its magnitude is ignored. Only the
//! single-channel `Pf` variant is supported — disparities are scalar.

use std::path::Path;

use crate::disparity::{DisparityMap, NonFinitePolicy};
use crate::error::{Error, Result};

/// Returns the next whitespace-delimited token and advances `pos`.
fn next_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Option<&'a [u8]> {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    (*pos > start).then(|| &bytes[start..*pos])
}

fn parse_token<T: std::str::FromStr>(bytes: &[u8], pos: &mut usize, what: &str) -> Result<T> {
    let token =
        next_token(bytes, pos).ok_or_else(|| Error::MalformedHeader(format!("missing {what}")))?;
    std::str::from_utf8(token)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| {
            Error::MalformedHeader(format!(
                "unparsable {what}: {:?}",
                String::from_utf8_lossy(token)
            ))
        })
}

/// Decodes a PFM byte buffer, rejecting non-finite values.
pub fn read_pfm(bytes: &[u8]) -> Result<DisparityMap> {
    read_pfm_with_policy(bytes, NonFinitePolicy::Reject)
}

/// Decodes a PFM byte buffer under the given non-finite policy.
pub fn read_pfm_with_policy(bytes: &[u8], policy: NonFinitePolicy) -> Result<DisparityMap> {
    let mut pos = 0;
    let magic =
        next_token(bytes, &mut pos).ok_or_else(|| Error::MalformedHeader("empty file".into()))?;
    match magic {
        b"Pf" => {}
        b"PF" => return Err(Error::ExpectedSingleChannel),
        other => return Err(Error::BadMagic(String::from_utf8_lossy(other).into_owned())),
    }
    let width: usize = parse_token(bytes, &mut pos, "width")?;
    let height: usize = parse_token(bytes, &mut pos, "height")?;
    let scale: f32 = parse_token(bytes, &mut pos, "scale")?;
    if width == 0 || height == 0 {
        return Err(Error::MalformedHeader(format!(
            "degenerate dimensions {width}x{height}"
        )));
    }
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::MalformedHeader(format!("scale {scale} invalid")));
    }
    // Exactly one whitespace byte separates the scale token from the data.
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(Error::MalformedHeader(
            "missing whitespace before payload".into(),
        ));
    }
    pos += 1;

    let expected = width * height * 4;
    let payload = &bytes[pos..];
    if payload.len() < expected {
        return Err(Error::Truncated {
            expected,
            found: payload.len(),
        });
    }
    let little_endian = scale < 0.0;
    let mut values = vec![0.0f32; width * height];
    for file_row in 0..height {
        // PFM rows run bottom-up; flip to the top-left origin.
        let y = height - 1 - file_row;
        for x in 0..width {
            let o = (file_row * width + x) * 4;
            let word: [u8; 4] = payload[o..o + 4].try_into().expect("length checked");
            values[y * width + x] = if little_endian {
                f32::from_le_bytes(word)
            } else {
                f32::from_be_bytes(word)
            };
        }
    }
    DisparityMap::with_policy(width, height, values, policy)
}

/// Encodes a disparity map as little-endian PFM (scale -1.0).
pub fn write_pfm(d: &DisparityMap) -> Vec<u8> {
    let (w, h) = (d.width(), d.height());
    let header = format!("Pf\n{w} {h}\n-1.0\n");
    let mut out = Vec::with_capacity(header.len() + w * h * 4);
    out.extend_from_slice(header.as_bytes());
    for file_row in 0..h {
        let y = h - 1 - file_row;
        for x in 0..w {
            out.extend_from_slice(&d.get(x, y).to_le_bytes());
        }
    }
    out
}

/// Reads a PFM file from disk.
pub fn read_pfm_file(path: impl AsRef<Path>, policy: NonFinitePolicy) -> Result<DisparityMap> {
    read_pfm_with_policy(&std::fs::read(path)?, policy)
}

/// Writes a disparity map to a PFM file.
pub fn write_pfm_file(path: impl AsRef<Path>, d: &DisparityMap) -> Result<()> {
    Ok(std::fs::write(path, write_pfm(d))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_bit_exactly() {
        let d = DisparityMap::new(3, 2, vec![0.0, 1.5, -2.25, 3.125, 1e-7, 4096.0]).unwrap();
        let again = read_pfm(&write_pfm(&d)).unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn header_layout_is_canonical() {
        let d = DisparityMap::constant(2, 2, 1.0).unwrap();
        let bytes = write_pfm(&d);
        assert!(bytes.starts_with(b"Pf\n2 2\n-1.0\n"));
        assert_eq!(bytes.len(), "Pf\n2 2\n-1.0\n".len() + 16);
    }

    #[test]
    fn constant_map_payload_repeats_one_word() {
        let d = DisparityMap::constant(4, 3, 7.5).unwrap();
        let bytes = write_pfm(&d);
        let payload = &bytes[bytes.len() - 48..];
        let word = 7.5f32.to_le_bytes();
        assert!(payload.chunks(4).all(|c| c == word));
    }

    #[test]
    fn little_endian_payload_reads_in_document_order() {
        // 2x2, scale -1.0: file rows bottom-up, so the first stored row is
        // the bottom image row.
        let mut bytes = b"Pf\n2 2\n-1.0\n".to_vec();
        for v in [30.0f32, 40.0, 10.0, 20.0] {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        let d = read_pfm(&bytes).unwrap();
        assert_eq!(d.values(), &[10.0, 20.0, 30.0, 40.0]);
    }

    #[test]
    fn big_endian_scale_switches_byte_order() {
        let mut bytes = b"Pf\n1 1\n1.0\n".to_vec();
        bytes.extend_from_slice(&5.0f32.to_be_bytes());
        assert_eq!(read_pfm(&bytes).unwrap().get(0, 0), 5.0);
    }

    #[test]
    fn color_pfm_is_rejected() {
        let bytes = b"PF\n1 1\n-1.0\n\x00\x00\x00\x00\x00\x00\x00\x00\x00\x00\x00\x00";
        assert!(matches!(read_pfm(bytes), Err(Error::ExpectedSingleChannel)));
    }

    #[test]
    fn wrong_magic_is_rejected() {
        assert!(matches!(
            read_pfm(b"P5\n1 1\n255\n\x00"),
            Err(Error::BadMagic(_))
        ));
    }

    #[test]
    fn truncated_payload_is_reported() {
        let d = DisparityMap::constant(4, 4, 1.0).unwrap();
        let bytes = write_pfm(&d);
        let cut = &bytes[..bytes.len() - 6];
        match read_pfm(cut) {
            Err(Error::Truncated { expected, found }) => {
                assert_eq!(expected, 64);
                assert_eq!(found, 58);
            }
            other => panic!("unexpected result {other:?}"),
        }
    }

    #[test]
    fn zero_scale_is_malformed() {
        let mut bytes = b"Pf\n1 1\n0.0\n".to_vec();
        bytes.extend_from_slice(&1.0f32.to_le_bytes());
        assert!(matches!(read_pfm(&bytes), Err(Error::MalformedHeader(_))));
    }

    #[test]
    fn non_finite_values_follow_policy() {
        let mut bytes = b"Pf\n2 1\n-1.0\n".to_vec();
        bytes.extend_from_slice(&f32::NAN.to_le_bytes());
        bytes.extend_from_slice(&2.0f32.to_le_bytes());
        assert!(matches!(read_pfm(&bytes), Err(Error::NonFinite { .. })));
        let fixed = read_pfm_with_policy(&bytes, NonFinitePolicy::Sanitize).unwrap();
        assert_eq!(fixed.values(), &[2.0, 2.0]);
    }

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join("pfm_roundtrip_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("map.pfm");
        let d = DisparityMap::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        write_pfm_file(&path, &d).unwrap();
        let again = read_pfm_file(&path, NonFinitePolicy::Reject).unwrap();
        std::fs::remove_dir_all(&dir).ok();
        assert_eq!(again, d);
    }
}
