use super::{validate_positions, StegoError};
use crate::bits::BitMessage;
use crate::image::GrayImage;

/// Writes consecutive bit pairs into planes 0 and 1 of each position.
/// An odd trailing bit goes to plane 0 only.
pub fn twolsb_embed_at(
    cover: &GrayImage,
    bits: &BitMessage,
    positions: &[usize],
) -> Result<GrayImage, StegoError> {
    let expected = bits.len().div_ceil(2);
    if positions.len() != expected {
        return Err(StegoError::LengthMismatch {
            expected,
            actual: positions.len(),
        });
    }
    validate_positions(positions, cover.len())?;
    let mut stego = cover.clone();
    let px = stego.pixels_mut();
    for (&pos, pair) in positions.iter().zip(bits.bits().chunks(2)) {
        px[pos] = match *pair {
            [b0, b1] => (px[pos] & !3) | b0 | (b1 << 1),
            [b0] => (px[pos] & !1) | b0,
            _ => unreachable!("chunks(2) yields one or two bits"),
        };
    }
    Ok(stego)
}

pub fn twolsb_extract_at(
    stego: &GrayImage,
    bit_length: usize,
    positions: &[usize],
) -> Result<BitMessage, StegoError> {
    let expected = bit_length.div_ceil(2);
    if positions.len() != expected {
        return Err(StegoError::LengthMismatch {
            expected,
            actual: positions.len(),
        });
    }
    validate_positions(positions, stego.len())?;
    let px = stego.pixels();
    let mut msg = BitMessage::new();
    for &p in positions {
        msg.push(px[p] & 1);
        msg.push((px[p] >> 1) & 1);
    }
    msg.truncate(bit_length);
    Ok(msg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_planes_set() {
        let cover = GrayImage::new(2, 1, vec![4, 7]).unwrap();
        let stego = twolsb_embed_at(&cover, &BitMessage::from_bits([1, 1, 1, 1]), &[0, 1]).unwrap();
        assert_eq!(stego.pixels(), &[7, 7]);
    }

    #[test]
    fn pair_order_is_plane0_then_plane1() {
        let cover = GrayImage::new(1, 1, vec![0]).unwrap();
        let stego = twolsb_embed_at(&cover, &BitMessage::from_bits([0, 1]), &[0]).unwrap();
        assert_eq!(stego.pixels(), &[2]);
    }

    #[test]
    fn odd_bit_only_touches_plane0() {
        let cover = GrayImage::new(2, 1, vec![0, 2]).unwrap();
        let msg = BitMessage::from_bits([1, 0, 1]);
        let stego = twolsb_embed_at(&cover, &msg, &[1, 0]).unwrap();
        assert_eq!(stego.pixels(), &[1, 1]);
        assert_eq!(twolsb_extract_at(&stego, 3, &[1, 0]).unwrap(), msg);
    }

    #[test]
    fn length_mismatch() {
        let cover = GrayImage::new(2, 1, vec![0, 2]).unwrap();
        assert!(matches!(
            twolsb_embed_at(&cover, &BitMessage::from_bits([1, 0, 1]), &[0]),
            Err(StegoError::LengthMismatch {
                expected: 2,
                actual: 1
            })
        ));
    }
}
