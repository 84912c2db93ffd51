use super::{validate_positions, StegoError};
use crate::bits::BitMessage;
use crate::image::GrayImage;

/// Writes bit `i` into plane 0 of `positions[i]`.
pub fn lsb_embed_at(
    cover: &GrayImage,
    bits: &BitMessage,
    positions: &[usize],
) -> Result<GrayImage, StegoError> {
    if positions.len() != bits.len() {
        return Err(StegoError::LengthMismatch {
            expected: bits.len(),
            actual: positions.len(),
        });
    }
    validate_positions(positions, cover.len())?;
    let mut stego = cover.clone();
    let px = stego.pixels_mut();
    for (&pos, &bit) in positions.iter().zip(bits.bits()) {
        px[pos] = (px[pos] & !1) | bit;
    }
    Ok(stego)
}

pub fn lsb_extract_at(
    stego: &GrayImage,
    length: usize,
    positions: &[usize],
) -> Result<BitMessage, StegoError> {
    if positions.len() != length {
        return Err(StegoError::LengthMismatch {
            expected: length,
            actual: positions.len(),
        });
    }
    validate_positions(positions, stego.len())?;
    let px = stego.pixels();
    Ok(BitMessage::from_bits(positions.iter().map(|&p| px[p] & 1)))
}
