//! Binary PNM codec: P5 (PGM, grayscale) and P6 (PPM, RGB), maxval 255 only.
//!
//! Readers tolerate `#` comments and arbitrary whitespace between header
//! tokens; exactly one whitespace byte separates the maxval from the pixel
//! data. Interleaved P6 bytes are converted to the planar layout used by
//! [`Raster`](crate::raster::Raster) and back on write.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::raster::Raster;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PnmError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("bad magic {found:?}: expected \"P5\" or \"P6\"")]
    BadMagic { found: String },

    #[error("malformed header: {reason}")]
    MalformedHeader { reason: String },

    #[error("unsupported maxval {maxval}: only 255 is supported")]
    UnsupportedMaxval { maxval: u64 },

    #[error("truncated pixel data: expected {expected} bytes, found {found}")]
    TruncatedData { expected: usize, found: usize },
}

fn malformed(reason: impl Into<String>) -> PnmError {
    PnmError::MalformedHeader {
        reason: reason.into(),
    }
}

/// Reads the next header token, skipping whitespace and `#` comments.
/// Consumes the single whitespace byte that terminates the token.
fn next_token<R: Read>(r: &mut R) -> Result<String, PnmError> {
    let mut token = Vec::new();
    let mut in_comment = false;
    loop {
        let mut byte = [0u8; 1];
        if r.read(&mut byte)? == 0 {
            if token.is_empty() {
                return Err(malformed("unexpected end of header"));
            }
            break;
        }
        let b = byte[0];
        if in_comment {
            if b == b'\n' {
                in_comment = false;
            }
            continue;
        }
        if b == b'#' && token.is_empty() {
            in_comment = true;
            continue;
        }
        if b.is_ascii_whitespace() {
            if token.is_empty() {
                continue;
            }
            break;
        }
        token.push(b);
    }
    String::from_utf8(token).map_err(|_| malformed("non-ASCII bytes in header token"))
}

fn next_u64<R: Read>(r: &mut R, what: &str) -> Result<u64, PnmError> {
    let tok = next_token(r)?;
    tok.parse::<u64>()
        .map_err(|_| malformed(format!("expected {what}, found {tok:?}")))
}

/// Decodes a binary PGM/PPM stream.
pub fn read_pnm<R: Read>(mut r: R) -> Result<Raster, PnmError> {
    let magic = next_token(&mut r)?;
    let channels = match magic.as_str() {
        "P5" => 1,
        "P6" => 3,
        _ => return Err(PnmError::BadMagic { found: magic }),
    };
    let width = next_u64(&mut r, "width")? as usize;
    let height = next_u64(&mut r, "height")? as usize;
    if width == 0 || height == 0 {
        return Err(malformed(format!("degenerate dimensions {width}x{height}")));
    }
    let maxval = next_u64(&mut r, "maxval")?;
    if maxval != 255 {
        return Err(PnmError::UnsupportedMaxval { maxval });
    }
    let expected = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or_else(|| malformed("dimensions overflow"))?;
    let mut data = Vec::with_capacity(expected);
    r.take(expected as u64).read_to_end(&mut data)?;
    if data.len() < expected {
        return Err(PnmError::TruncatedData {
            expected,
            found: data.len(),
        });
    }

    // Interleaved bytes to planar f64 in [0, 1].
    let plane = width * height;
    let mut samples = vec![0.0f64; expected];
    for i in 0..plane {
        for c in 0..channels {
            samples[c * plane + i] = data[i * channels + c] as f64 / 255.0;
        }
    }
    Raster::from_samples(width, height, channels, samples)
        .map_err(|e| malformed(format!("invalid raster: {e}")))
}

/// Encodes a raster as binary PGM (1 channel) or PPM (3 channels).
pub fn write_pnm<W: Write>(mut w: W, raster: &Raster) -> Result<(), PnmError> {
    let magic = match raster.channels() {
        1 => "P5",
        3 => "P6",
        n => {
            return Err(malformed(format!("cannot encode {n}-channel raster")));
        }
    };
    write!(w, "{magic}\n{} {}\n255\n", raster.width(), raster.height())?;
    let plane = raster.width() * raster.height();
    let channels = raster.channels();
    let samples = raster.samples();
    let mut data = vec![0u8; plane * channels];
    for i in 0..plane {
        for c in 0..channels {
            data[i * channels + c] = quantize(samples[c * plane + i]);
        }
    }
    w.write_all(&data)?;
    Ok(())
}

/// Maps `[0, 1]` to `0..=255` by rounding; out-of-range values clamp.
pub fn quantize(sample: f64) -> u8 {
    (sample.clamp(0.0, 1.0) * 255.0).round() as u8
}

pub fn load_pnm(path: impl AsRef<Path>) -> Result<Raster, PnmError> {
    read_pnm(BufReader::new(File::open(path)?))
}

pub fn save_pnm(path: impl AsRef<Path>, raster: &Raster) -> Result<(), PnmError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_pnm(&mut w, raster)?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::Position;

    #[test]
    fn decode_p6_to_planar() {
        // 2x1 PPM, left pixel red, right pixel green.
        let bytes = b"P6\n2 1\n255\n\xff\x00\x00\x00\xff\x00";
        let r = read_pnm(&bytes[..]).unwrap();
        assert_eq!((r.width(), r.height(), r.channels()), (2, 1, 3));
        assert_eq!(r.plane(0), &[1.0, 0.0]);
        assert_eq!(r.plane(1), &[0.0, 1.0]);
        assert_eq!(r.plane(2), &[0.0, 0.0]);
    }

    #[test]
    fn header_comments_and_whitespace() {
        let bytes = b"P5 # magic\n# a full comment line\n 2\t1 #dims\n255\n\x00\x80";
        let r = read_pnm(&bytes[..]).unwrap();
        assert_eq!((r.width(), r.height()), (2, 1));
        assert_eq!(r.get(0, Position::new(0, 1)), 128.0 / 255.0);
    }

    #[test]
    fn encode_header_is_canonical() {
        let r = Raster::from_samples(2, 1, 1, vec![0.0, 1.0]).unwrap();
        let mut out = Vec::new();
        write_pnm(&mut out, &r).unwrap();
        assert_eq!(out, b"P5\n2 1\n255\n\x00\xff");
    }

    #[test]
    fn roundtrip_is_exact_for_quantized_values() {
        let samples: Vec<f64> = (0..=255).map(|v| v as f64 / 255.0).collect();
        let r = Raster::from_samples(16, 16, 1, samples).unwrap();
        let mut buf = Vec::new();
        write_pnm(&mut buf, &r).unwrap();
        let back = read_pnm(&buf[..]).unwrap();
        assert_eq!(back.samples(), r.samples());
    }

    #[test]
    fn quantize_rounds_half_up() {
        assert_eq!(quantize(0.5), 128); // 127.5 rounds away from zero
        assert_eq!(quantize(-0.2), 0);
        assert_eq!(quantize(1.7), 255);
    }

    #[test]
    fn rejects_bad_magic() {
        let bytes = b"P4\n2 1\n255\n\x00\x00";
        assert!(matches!(
            read_pnm(&bytes[..]),
            Err(PnmError::BadMagic { .. })
        ));
    }

    #[test]
    fn rejects_wide_maxval() {
        let bytes = b"P5\n2 1\n65535\n\x00\x00\x00\x00";
        assert!(matches!(
            read_pnm(&bytes[..]),
            Err(PnmError::UnsupportedMaxval { maxval: 65535 })
        ));
    }

    #[test]
    fn rejects_truncated_data() {
        let bytes = b"P6\n2 2\n255\n\xff\x00";
        assert!(matches!(
            read_pnm(&bytes[..]),
            Err(PnmError::TruncatedData {
                expected: 12,
                found: 2
            })
        ));
    }

    #[test]
    fn rejects_malformed_dimension() {
        let bytes = b"P5\ntwo 1\n255\n\x00";
        assert!(matches!(
            read_pnm(&bytes[..]),
            Err(PnmError::MalformedHeader { .. })
        ));
    }
}
