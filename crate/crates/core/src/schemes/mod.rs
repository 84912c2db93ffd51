//! Embedding schemes: random-position LSB replacement, 2LSB replacement,
//! and the bitplane-index (BPI) scheme.
//!
//! Each scheme has a positional form (`*_embed_at` / `*_extract_at`) that
//! works on an explicit position list, and the keyed [`embed`] / [`extract`]
//! pair that derives positions from a seed via [`crate::selection`].

mod bpi;
mod lsb;
mod twolsb;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bits::BitMessage;
use crate::image::GrayImage;
use crate::selection::{select_positions, SelectionKey};

pub use bpi::{
    bpi_embed_at, bpi_extract_at, preprocess_2lsbs, CompressedIndex, IndexVector, ParseIndexError,
};
pub use lsb::{lsb_embed_at, lsb_extract_at};
pub use twolsb::{twolsb_embed_at, twolsb_extract_at};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StegoError {
    #[error("payload {requested} bits exceeds capacity {available}")]
    Capacity { requested: usize, available: usize },
    #[error("expected {expected} positions, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("position {position} out of range for {len} pixels")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("position {0} selected more than once")]
    DuplicatePosition(usize),
    #[error("key declares {bits} bits but a {width}x{height} image holds at most {capacity} with scheme {scheme}")]
    KeyInconsistent {
        bits: usize,
        capacity: usize,
        width: usize,
        height: usize,
        scheme: SchemeId,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    /// One bit per randomly selected pixel, written into plane 0.
    Lsb,
    /// Two bits per selected pixel, replacing planes 0 and 1.
    TwoLsb,
    /// Bitplane-index scheme.
    Bpi,
}

impl SchemeId {
    pub const ALL: [SchemeId; 3] = [SchemeId::Lsb, SchemeId::TwoLsb, SchemeId::Bpi];

    pub fn token(self) -> &'static str {
        match self {
            SchemeId::Lsb => "lsb",
            SchemeId::TwoLsb => "2lsb",
            SchemeId::Bpi => "bpi",
        }
    }

    /// Pixels occupied by a payload of `bits` bits.
    pub fn pixels_needed(self, bits: usize) -> usize {
        match self {
            SchemeId::Lsb | SchemeId::Bpi => bits,
            SchemeId::TwoLsb => bits.div_ceil(2),
        }
    }

    /// Maximum payload in bits for an image of `pixels` pixels.
    pub fn capacity_bits(self, pixels: usize) -> usize {
        match self {
            SchemeId::Lsb | SchemeId::Bpi => pixels,
            SchemeId::TwoLsb => pixels.saturating_mul(2),
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KeyParseError {
    #[error("unknown scheme token {0:?}")]
    UnknownScheme(String),
    #[error("missing key field {0:?}")]
    MissingField(&'static str),
    #[error("invalid value for key field {field:?}: {value:?}")]
    InvalidValue { field: &'static str, value: String },
    #[error("unexpected key field {0:?}")]
    UnexpectedField(String),
}

impl FromStr for SchemeId {
    type Err = KeyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lsb" => Ok(SchemeId::Lsb),
            "2lsb" => Ok(SchemeId::TwoLsb),
            "bpi" => Ok(SchemeId::Bpi),
            other => Err(KeyParseError::UnknownScheme(other.to_string())),
        }
    }
}

/// Everything the receiver needs besides the stego image.
///
/// Text form: `scheme=<lsb|2lsb|bpi>;seed=<u64>;bits=<n>[;first=<0|1>]`,
/// where `first` appears only for BPI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StegoKey {
    pub scheme: SchemeId,
    pub seed: u64,
    pub bit_length: usize,
    /// First entry of the index vector; only meaningful for BPI.
    pub first_index: u8,
}

impl StegoKey {
    pub fn index_vector(&self) -> IndexVector {
        IndexVector::new(self.first_index, self.bit_length)
    }
}

impl fmt::Display for StegoKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "scheme={};seed={};bits={}",
            self.scheme, self.seed, self.bit_length
        )?;
        if self.scheme == SchemeId::Bpi {
            write!(f, ";first={}", self.first_index)?;
        }
        Ok(())
    }
}

impl FromStr for StegoKey {
    type Err = KeyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut scheme = None;
        let mut seed = None;
        let mut bits = None;
        let mut first = None;
        for field in s.trim().split(';').filter(|f| !f.trim().is_empty()) {
            let (name, value) = field
                .split_once('=')
                .ok_or_else(|| KeyParseError::UnexpectedField(field.to_string()))?;
            let value = value.trim();
            match name.trim() {
                "scheme" => scheme = Some(value.parse::<SchemeId>()?),
                "seed" => {
                    seed = Some(
                        value
                            .parse::<u64>()
                            .map_err(|_| KeyParseError::InvalidValue {
                                field: "seed",
                                value: value.to_string(),
                            })?,
                    )
                }
                "bits" => {
                    bits =
                        Some(
                            value
                                .parse::<usize>()
                                .map_err(|_| KeyParseError::InvalidValue {
                                    field: "bits",
                                    value: value.to_string(),
                                })?,
                        )
                }
                "first" => {
                    first = Some(match value {
                        "0" => 0,
                        "1" => 1,
                        _ => {
                            return Err(KeyParseError::InvalidValue {
                                field: "first",
                                value: value.to_string(),
                            })
                        }
                    })
                }
                other => return Err(KeyParseError::UnexpectedField(other.to_string())),
            }
        }
        let scheme = scheme.ok_or(KeyParseError::MissingField("scheme"))?;
        let first_index = match (scheme, first) {
            (SchemeId::Bpi, Some(f)) => f,
            (SchemeId::Bpi, None) => return Err(KeyParseError::MissingField("first")),
            (_, Some(_)) => return Err(KeyParseError::UnexpectedField("first".into())),
            (_, None) => 0,
        };
        Ok(StegoKey {
            scheme,
            seed: seed.ok_or(KeyParseError::MissingField("seed"))?,
            bit_length: bits.ok_or(KeyParseError::MissingField("bits"))?,
            first_index,
        })
    }
}

/// Range and uniqueness check shared by all positional operations.
pub(crate) fn validate_positions(positions: &[usize], len: usize) -> Result<(), StegoError> {
    let mut seen = vec![false; len];
    for &p in positions {
        if p >= len {
            return Err(StegoError::PositionOutOfRange { position: p, len });
        }
        if std::mem::replace(&mut seen[p], true) {
            return Err(StegoError::DuplicatePosition(p));
        }
    }
    Ok(())
}

fn keyed_positions(
    scheme: SchemeId,
    seed: u64,
    bits: usize,
    n: usize,
) -> Result<Vec<usize>, StegoError> {
    select_positions(SelectionKey::new(seed), n, scheme.pixels_needed(bits)).map_err(|_| {
        StegoError::Capacity {
            requested: bits,
            available: scheme.capacity_bits(n),
        }
    })
}

/// Embeds `message` at positions keyed by `seed`.
pub fn embed(
    cover: &GrayImage,
    message: &BitMessage,
    scheme: SchemeId,
    seed: u64,
) -> Result<(GrayImage, StegoKey), StegoError> {
    let n = cover.len();
    let available = scheme.capacity_bits(n);
    if message.len() > available {
        return Err(StegoError::Capacity {
            requested: message.len(),
            available,
        });
    }
    let positions = keyed_positions(scheme, seed, message.len(), n)?;
    let mut key = StegoKey {
        scheme,
        seed,
        bit_length: message.len(),
        first_index: 0,
    };
    let stego = match scheme {
        SchemeId::Lsb => lsb_embed_at(cover, message, &positions)?,
        SchemeId::TwoLsb => twolsb_embed_at(cover, message, &positions)?,
        SchemeId::Bpi => {
            let (stego, iv) = bpi_embed_at(cover, message, &positions)?;
            key.first_index = iv.first_index();
            stego
        }
    };
    Ok((stego, key))
}

/// Recovers the message described by `key`.
pub fn extract(stego: &GrayImage, key: &StegoKey) -> Result<BitMessage, StegoError> {
    let capacity = key.scheme.capacity_bits(stego.len());
    if key.bit_length > capacity {
        return Err(StegoError::KeyInconsistent {
            bits: key.bit_length,
            capacity,
            width: stego.width(),
            height: stego.height(),
            scheme: key.scheme,
        });
    }
    let positions = keyed_positions(key.scheme, key.seed, key.bit_length, stego.len())?;
    match key.scheme {
        SchemeId::Lsb => lsb_extract_at(stego, key.bit_length, &positions),
        SchemeId::TwoLsb => twolsb_extract_at(stego, key.bit_length, &positions),
        SchemeId::Bpi => bpi_extract_at(stego, &key.index_vector(), &positions),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selection::XorShift64Star;

    fn random_image(seed: u64, w: usize, h: usize) -> GrayImage {
        let mut rng = XorShift64Star::new(seed);
        GrayImage::new(
            w,
            h,
            (0..w * h).map(|_| (rng.next_u64() >> 56) as u8).collect(),
        )
        .unwrap()
    }

    fn random_message(seed: u64, len: usize) -> BitMessage {
        let mut rng = XorShift64Star::new(seed);
        BitMessage::from_bits((0..len).map(|_| (rng.next_u64() & 1) as u8))
    }

    #[test]
    fn key_text_form() {
        let key = StegoKey {
            scheme: SchemeId::Bpi,
            seed: 18_446_744_073_709_551_615,
            bit_length: 1000,
            first_index: 1,
        };
        let text = key.to_string();
        assert_eq!(
            text,
            "scheme=bpi;seed=18446744073709551615;bits=1000;first=1"
        );
        assert_eq!(text.parse::<StegoKey>().unwrap(), key);

        let lsb = "scheme=2lsb;seed=7;bits=3".parse::<StegoKey>().unwrap();
        assert_eq!(lsb.scheme, SchemeId::TwoLsb);
        assert_eq!(lsb.to_string(), "scheme=2lsb;seed=7;bits=3");
    }

    #[test]
    fn key_parse_errors() {
        assert_eq!(
            "scheme=3lsb;seed=1;bits=2".parse::<StegoKey>(),
            Err(KeyParseError::UnknownScheme("3lsb".into()))
        );
        assert_eq!(
            "scheme=bpi;seed=1;bits=2".parse::<StegoKey>(),
            Err(KeyParseError::MissingField("first"))
        );
        assert!(matches!(
            "scheme=lsb;seed=-1;bits=2".parse::<StegoKey>(),
            Err(KeyParseError::InvalidValue { field: "seed", .. })
        ));
        assert!(matches!(
            "scheme=lsb;seed=1;bits=2;first=0".parse::<StegoKey>(),
            Err(KeyParseError::UnexpectedField(_))
        ));
        assert_eq!(
            "scheme=lsb;bits=2".parse::<StegoKey>(),
            Err(KeyParseError::MissingField("seed"))
        );
    }

    #[test]
    fn keyed_round_trip_all_schemes() {
        let cover = random_image(3, 17, 13);
        for scheme in SchemeId::ALL {
            for len in [0, 1, 2, 57, 221] {
                let msg = random_message(len as u64 + 11, len);
                let (stego, key) = embed(&cover, &msg, scheme, 99).unwrap();
                assert_eq!(key.bit_length, len);
                assert_eq!(extract(&stego, &key).unwrap(), msg, "{scheme} len {len}");
            }
        }
    }

    #[test]
    fn capacity_errors() {
        let cover = random_image(4, 4, 4);
        let err = embed(&cover, &random_message(1, 17), SchemeId::Lsb, 1).unwrap_err();
        assert_eq!(
            err,
            StegoError::Capacity {
                requested: 17,
                available: 16
            }
        );
        assert_eq!(err.to_string(), "payload 17 bits exceeds capacity 16");
        assert!(embed(&cover, &random_message(1, 17), SchemeId::Bpi, 1).is_err());
        assert!(embed(&cover, &random_message(1, 32), SchemeId::TwoLsb, 1).is_ok());
        assert!(embed(&cover, &random_message(1, 33), SchemeId::TwoLsb, 1).is_err());
    }

    #[test]
    fn empty_message_leaves_cover_untouched() {
        let cover = random_image(5, 8, 8);
        for scheme in SchemeId::ALL {
            let (stego, key) = embed(&cover, &BitMessage::new(), scheme, 5).unwrap();
            assert_eq!(stego, cover);
            assert_eq!(key.bit_length, 0);
        }
    }

    #[test]
    fn tampered_key_is_inconsistent() {
        let cover = random_image(6, 4, 4);
        let key = StegoKey {
            scheme: SchemeId::Lsb,
            seed: 1,
            bit_length: 17,
            first_index: 0,
        };
        assert!(matches!(
            extract(&cover, &key),
            Err(StegoError::KeyInconsistent { capacity: 16, .. })
        ));
    }

    #[test]
    fn position_validation() {
        assert_eq!(
            validate_positions(&[0, 4], 4),
            Err(StegoError::PositionOutOfRange {
                position: 4,
                len: 4
            })
        );
        assert_eq!(
            validate_positions(&[1, 2, 1], 4),
            Err(StegoError::DuplicatePosition(1))
        );
        assert!(validate_positions(&[3, 0, 2], 4).is_ok());
    }
}
