//! Bitplane-index embedding.
//!
//! Selected pixels first have their two low bits forced into {01, 10}. Each
//! secret bit then sits in whichever of planes 0 and 1 already holds it, and
//! the plane used ("index") must alternate from one bit to the next. When the
//! natural plane repeats the previous index, the two low bits are swapped
//! (01 <-> 10), which moves the bit into the other plane. The receiver only
//! needs the first index and the bit count to rebuild the index sequence.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{validate_positions, StegoError};
use crate::bits::BitMessage;
use crate::image::GrayImage;

/// Maps low bits 11 -> 01 and 00 -> 10; 01 and 10 are kept.
pub fn preprocess_2lsbs(pixel: u8) -> u8 {
    match pixel & 3 {
        0b11 => pixel - 2,
        0b00 => pixel + 2,
        _ => pixel,
    }
}

/// Alternating sequence of plane indices: `first, 1-first, first, ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexVector {
    first_index: u8,
    length: usize,
}

impl IndexVector {
    /// `first_index` is reduced to its low bit.
    pub fn new(first_index: u8, length: usize) -> Self {
        Self {
            first_index: first_index & 1,
            length,
        }
    }

    pub fn first_index(&self) -> u8 {
        self.first_index
    }

    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    /// Plane index for bit `i`.
    pub fn index(&self, i: usize) -> u8 {
        self.first_index ^ (i & 1) as u8
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.length).map(|i| self.index(i))
    }

    pub fn expand(&self) -> Vec<u8> {
        self.iter().collect()
    }

    /// Rebuilds the vector from an explicit index sequence, which must
    /// strictly alternate.
    pub fn from_indices(indices: &[u8]) -> Option<Self> {
        let first = *indices.first().unwrap_or(&0);
        let iv = Self::new(first, indices.len());
        (indices.iter().copied().eq(iv.iter())).then_some(iv)
    }

    pub fn compressed(&self) -> CompressedIndex {
        CompressedIndex {
            pairs: self.length.div_ceil(2),
            first_index: self.first_index,
            trailing_half: self.length % 2 == 1,
        }
    }
}

/// The `n(10)` / `n(01)` rendering of an index vector.
///
/// `pairs` counts repeats of the two-index pattern. An odd-length vector
/// sets `trailing_half`, meaning the last pair contributes only its first
/// index; it is rendered with a trailing `~`, e.g. `3(10)~` for `1 0 1 0 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompressedIndex {
    pub pairs: usize,
    pub first_index: u8,
    pub trailing_half: bool,
}

impl CompressedIndex {
    pub fn expand(&self) -> IndexVector {
        let length = if self.trailing_half {
            self.pairs * 2 - 1
        } else {
            self.pairs * 2
        };
        IndexVector::new(self.first_index, length)
    }
}

impl fmt::Display for CompressedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pattern = if self.first_index == 1 { "10" } else { "01" };
        write!(f, "{}({})", self.pairs, pattern)?;
        if self.trailing_half {
            f.write_str("~")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid compressed index vector {0:?}")]
pub struct ParseIndexError(pub String);

impl FromStr for CompressedIndex {
    type Err = ParseIndexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseIndexError(s.to_string());
        let (body, trailing_half) = match s.strip_suffix('~') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let (count, pattern) = body.split_once('(').ok_or_else(err)?;
        let first_index = match pattern {
            "10)" => 1,
            "01)" => 0,
            _ => return Err(err()),
        };
        let pairs: usize = count.parse().map_err(|_| err())?;
        if trailing_half && pairs == 0 {
            return Err(err());
        }
        Ok(Self {
            pairs,
            first_index,
            trailing_half,
        })
    }
}

/// Embeds `bits[i]` at `positions[i]`, returning the stego image and the
/// alternating index vector the receiver needs.
pub fn bpi_embed_at(
    cover: &GrayImage,
    bits: &BitMessage,
    positions: &[usize],
) -> Result<(GrayImage, IndexVector), StegoError> {
    if positions.len() != bits.len() {
        return Err(StegoError::LengthMismatch {
            expected: bits.len(),
            actual: positions.len(),
        });
    }
    validate_positions(positions, cover.len())?;
    let mut stego = cover.clone();
    let px = stego.pixels_mut();
    let mut first_index = 0;
    let mut previous: Option<u8> = None;
    for (&pos, &bit) in positions.iter().zip(bits.bits()) {
        let mut value = preprocess_2lsbs(px[pos]);
        // Low bits are now 01 or 10, so exactly one plane holds `bit`.
        let natural = u8::from(value & 1 != bit);
        let index = match previous {
            None => {
                first_index = natural;
                natural
            }
            Some(prev) if natural == prev => {
                value ^= 0b11;
                1 - prev
            }
            Some(_) => natural,
        };
        px[pos] = value;
        previous = Some(index);
    }
    Ok((stego, IndexVector::new(first_index, bits.len())))
}

/// Reads bit `i` from plane `index_vector.index(i)` of `positions[i]`.
pub fn bpi_extract_at(
    stego: &GrayImage,
    index_vector: &IndexVector,
    positions: &[usize],
) -> Result<BitMessage, StegoError> {
    if positions.len() != index_vector.len() {
        return Err(StegoError::LengthMismatch {
            expected: index_vector.len(),
            actual: positions.len(),
        });
    }
    validate_positions(positions, stego.len())?;
    let px = stego.pixels();
    Ok(BitMessage::from_bits(
        positions
            .iter()
            .zip(index_vector.iter())
            .map(|(&p, plane)| (px[p] >> plane) & 1),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preprocessing_examples() {
        assert_eq!(preprocess_2lsbs(7), 5);
        assert_eq!(preprocess_2lsbs(4), 6);
        assert_eq!(preprocess_2lsbs(5), 5);
        assert_eq!(preprocess_2lsbs(6), 6);
        assert_eq!(preprocess_2lsbs(255), 253);
        assert_eq!(preprocess_2lsbs(0), 2);
    }

    #[test]
    fn preprocessing_exhaustive() {
        for p in 0..=255u8 {
            let q = preprocess_2lsbs(p);
            assert!(matches!(q & 3, 1 | 2), "{p} -> {q}");
            assert!(matches!((q as i16 - p as i16).abs(), 0 | 2));
            assert_eq!(q >> 2, p >> 2);
        }
    }

    #[test]
    fn worked_example() {
        let cover = GrayImage::new(4, 1, vec![1, 1, 2, 2]).unwrap();
        let bits = BitMessage::from_bits([0, 0, 1, 0]);
        let (stego, iv) = bpi_embed_at(&cover, &bits, &[0, 1, 2, 3]).unwrap();
        assert_eq!(stego.pixels(), &[1, 2, 2, 2]);
        assert_eq!(iv.first_index(), 1);
        assert_eq!(iv.expand(), vec![1, 0, 1, 0]);
        assert_eq!(iv.compressed().to_string(), "2(10)");
        let back = bpi_extract_at(&stego, &iv, &[0, 1, 2, 3]).unwrap();
        assert_eq!(back, bits);
    }

    #[test]
    fn single_matching_bit_is_untouched() {
        let cover = GrayImage::new(1, 1, vec![1]).unwrap();
        let (stego, iv) = bpi_embed_at(&cover, &BitMessage::from_bits([1]), &[0]).unwrap();
        assert_eq!(stego.pixels(), &[1]);
        assert_eq!(iv.first_index(), 0);
    }

    #[test]
    fn empty_extract() {
        let img = GrayImage::new(1, 1, vec![9]).unwrap();
        let iv = IndexVector::new(0, 0);
        assert!(bpi_extract_at(&img, &iv, &[]).unwrap().is_empty());
    }

    #[test]
    fn compressed_forms() {
        let iv = IndexVector::new(0, 5);
        assert_eq!(iv.expand(), vec![0, 1, 0, 1, 0]);
        let c = iv.compressed();
        assert_eq!(c.to_string(), "3(01)~");
        assert_eq!("3(01)~".parse::<CompressedIndex>().unwrap().expand(), iv);
        assert_eq!(
            "500(10)".parse::<CompressedIndex>().unwrap().expand().len(),
            1000
        );
        assert!("0(10)~".parse::<CompressedIndex>().is_err());
        assert!("2(11)".parse::<CompressedIndex>().is_err());
        assert!("x(10)".parse::<CompressedIndex>().is_err());
    }

    #[test]
    fn from_indices_requires_alternation() {
        assert_eq!(
            IndexVector::from_indices(&[1, 0, 1]),
            Some(IndexVector::new(1, 3))
        );
        assert_eq!(IndexVector::from_indices(&[1, 1]), None);
        assert_eq!(IndexVector::from_indices(&[]), Some(IndexVector::new(0, 0)));
    }

    #[test]
    fn change_distribution_enumeration() {
        // Enumerate every (original low bits, bit, previous index) case: the
        // pixel change is one of 0, +-1, +-2 and its mean square is 1.5.
        let mut sum_sq = 0i32;
        let mut cases = 0;
        for low in 0..4u8 {
            for bit in 0..2u8 {
                for prev in 0..2u8 {
                    let cover = GrayImage::new(2, 1, vec![1 + (prev ^ 1), 8 + low]).unwrap();
                    // The first pixel (value 1 or 2) fixes the previous index.
                    let first_bit = if prev == 0 {
                        (cover.pixels()[0]) & 1
                    } else {
                        1 - (cover.pixels()[0] & 1)
                    };
                    let msg = BitMessage::from_bits([first_bit, bit]);
                    let (stego, iv) = bpi_embed_at(&cover, &msg, &[0, 1]).unwrap();
                    assert_eq!(iv.first_index(), prev);
                    let d = stego.pixels()[1] as i32 - cover.pixels()[1] as i32;
                    assert!(d.abs() <= 2);
                    sum_sq += d * d;
                    cases += 1;
                }
            }
        }
        assert_eq!(cases, 16);
        assert_eq!(sum_sq as f64 / cases as f64, 1.5);
    }
}
