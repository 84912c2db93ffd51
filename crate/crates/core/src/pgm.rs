//! Binary PGM (P5) reading and writing, maxval 255 only.
//!
//! Header comments (`#` to end of line) are skipped on load and never
//! written. Saving always produces `P5\n<w> <h>\n255\n<raw bytes>`.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::image::{GrayImage, ImageError};

#[derive(Debug, Error)]
pub enum PgmError {
    #[error("not a binary PGM file (expected magic \"P5\")")]
    BadMagic,
    #[error("malformed PGM header: {0}")]
    MalformedHeader(&'static str),
    #[error("unsupported PGM maxval {0} (only 255 is supported)")]
    UnsupportedMaxval(u32),
    #[error("truncated PGM payload: expected {expected} bytes, found {actual}")]
    Truncated { expected: usize, actual: usize },
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

struct HeaderReader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl HeaderReader<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&c) = self.data.get(self.pos) {
            if c == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &'static str) -> Result<u32, PgmError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(PgmError::MalformedHeader(what));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(PgmError::MalformedHeader(what))
    }
}

/// Parses a P5 stream.
pub fn load_pgm(data: &[u8]) -> Result<GrayImage, PgmError> {
    if data.len() < 2 || &data[..2] != b"P5" {
        return Err(PgmError::BadMagic);
    }
    let mut r = HeaderReader { data, pos: 2 };
    let width = r.number("missing or invalid width")?;
    let height = r.number("missing or invalid height")?;
    let maxval = r.number("missing or invalid maxval")?;
    if width == 0 || height == 0 {
        return Err(PgmError::MalformedHeader("zero image dimension"));
    }
    if maxval != 255 {
        return Err(PgmError::UnsupportedMaxval(maxval));
    }
    // Exactly one whitespace byte separates maxval from the raster.
    match data.get(r.pos) {
        Some(c) if c.is_ascii_whitespace() => r.pos += 1,
        Some(_) => return Err(PgmError::MalformedHeader("no whitespace after maxval")),
        None => {}
    }
    let expected = (width as usize)
        .checked_mul(height as usize)
        .ok_or(PgmError::MalformedHeader("image dimensions overflow"))?;
    let payload = &data[r.pos.min(data.len())..];
    if payload.len() < expected {
        return Err(PgmError::Truncated {
            expected,
            actual: payload.len(),
        });
    }
    Ok(GrayImage::new(
        width as usize,
        height as usize,
        payload[..expected].to_vec(),
    )?)
}

/// Serializes to canonical P5.
pub fn save_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

pub fn read_pgm_file(path: impl AsRef<Path>) -> Result<GrayImage, PgmError> {
    load_pgm(&fs::read(path)?)
}

pub fn write_pgm_file(path: impl AsRef<Path>, img: &GrayImage) -> io::Result<()> {
    fs::write(path, save_pgm(img))
}
