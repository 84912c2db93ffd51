//! Secret message bit streams.
//!
//! Bytes expand most-significant bit first. Unpacking zero-pads the final
//! partial byte; the exact bit length travels separately.

/// Ordered sequence of secret bits, each stored as 0 or 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BitMessage {
    bits: Vec<u8>,
}

impl BitMessage {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a message from bit values; any nonzero value counts as 1.
    pub fn from_bits<I: IntoIterator<Item = u8>>(bits: I) -> Self {
        Self {
            bits: bits.into_iter().map(|b| u8::from(b != 0)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> Option<u8> {
        self.bits.get(i).copied()
    }

    pub fn push(&mut self, bit: u8) {
        self.bits.push(u8::from(bit != 0));
    }

    pub fn truncate(&mut self, len: usize) {
        self.bits.truncate(len);
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }
}

/// Expands bytes to bits, MSB first.
pub fn pack_bits(bytes: &[u8]) -> BitMessage {
    let mut bits = Vec::with_capacity(bytes.len() * 8);
    for &byte in bytes {
        for shift in (0..8).rev() {
            bits.push((byte >> shift) & 1);
        }
    }
    BitMessage { bits }
}

/// Packs bits back into bytes, MSB first, zero-padding the last byte.
/// Returns the bytes together with the exact bit length.
pub fn unpack_bits(msg: &BitMessage) -> (Vec<u8>, usize) {
    let bytes = msg
        .bits
        .chunks(8)
        .map(|chunk| {
            chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &b)| acc | (b << (7 - i)))
        })
        .collect();
    (bytes, msg.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn msb_first_expansion() {
        assert_eq!(pack_bits(&[0xB4]).bits(), &[1, 0, 1, 1, 0, 1, 0, 0]);
    }

    #[test]
    fn empty_input() {
        assert!(pack_bits(&[]).is_empty());
        assert_eq!(unpack_bits(&BitMessage::new()), (vec![], 0));
    }

    #[test]
    fn partial_byte_is_zero_padded() {
        let msg = BitMessage::from_bits([1, 0, 1]);
        assert_eq!(unpack_bits(&msg), (vec![0b1010_0000], 3));
    }

    #[test]
    fn round_trip_whole_bytes() {
        let data = b"bitplane index".to_vec();
        let (bytes, len) = unpack_bits(&pack_bits(&data));
        assert_eq!(bytes, data);
        assert_eq!(len, data.len() * 8);
    }
}
