//! 8-bit grayscale raster and bitplane access.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ImageError {
    #[error("image dimensions must be positive, got {width}x{height}")]
    ZeroDimension { width: usize, height: usize },
    #[error("pixel buffer holds {actual} values but {width}x{height} needs {expected}")]
    BufferSize {
        width: usize,
        height: usize,
        expected: usize,
        actual: usize,
    },
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum BitError {
    #[error("bitplane {0} out of range (expected 0 or 1)")]
    PlaneOutOfRange(u8),
    #[error("bit value {0} out of range (expected 0 or 1)")]
    BitOutOfRange(u8),
}

/// Row-major 8-bit grayscale image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::ZeroDimension { width, height });
        }
        let expected = width
            .checked_mul(height)
            .ok_or(ImageError::ZeroDimension { width, height })?;
        if pixels.len() != expected {
            return Err(ImageError::BufferSize {
                width,
                height,
                expected,
                actual: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self, ImageError> {
        Self::new(width, height, vec![value; width.saturating_mul(height)])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of pixels, `width * height`.
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn same_dimensions(&self, other: &GrayImage) -> bool {
        self.width == other.width && self.height == other.height
    }
}

/// Reads bit `plane` of `pixel`. Plane 0 is the least significant bit.
pub fn get_bit(pixel: u8, plane: u8) -> Result<u8, BitError> {
    if plane > 1 {
        return Err(BitError::PlaneOutOfRange(plane));
    }
    Ok((pixel >> plane) & 1)
}

/// Writes `bit` into bit `plane` of `pixel`, leaving every other bit alone.
pub fn set_bit(pixel: u8, plane: u8, bit: u8) -> Result<u8, BitError> {
    if plane > 1 {
        return Err(BitError::PlaneOutOfRange(plane));
    }
    if bit > 1 {
        return Err(BitError::BitOutOfRange(bit));
    }
    Ok((pixel & !(1 << plane)) | (bit << plane))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn get_bit_examples() {
        assert_eq!(get_bit(5, 0), Ok(1));
        assert_eq!(get_bit(5, 1), Ok(0));
        assert_eq!(get_bit(2, 1), Ok(1));
        assert_eq!(get_bit(2, 2), Err(BitError::PlaneOutOfRange(2)));
    }

    #[test]
    fn set_bit_examples() {
        assert_eq!(set_bit(4, 0, 1), Ok(5));
        assert_eq!(set_bit(5, 0, 1), Ok(5));
        assert_eq!(set_bit(4, 1, 1), Ok(6));
        assert_eq!(set_bit(4, 3, 1), Err(BitError::PlaneOutOfRange(3)));
        assert_eq!(set_bit(4, 0, 2), Err(BitError::BitOutOfRange(2)));
    }

    #[test]
    fn set_then_get_exhaustive() {
        for p in 0..=255u8 {
            for plane in 0..2u8 {
                for bit in 0..2u8 {
                    let q = set_bit(p, plane, bit).unwrap();
                    assert_eq!(get_bit(q, plane).unwrap(), bit);
                    assert_eq!(q & !(1 << plane), p & !(1 << plane));
                }
            }
        }
    }

    #[test]
    fn constructor_rejects_bad_buffers() {
        assert!(GrayImage::new(0, 3, vec![]).is_err());
        assert_eq!(
            GrayImage::new(2, 2, vec![0; 3]),
            Err(ImageError::BufferSize {
                width: 2,
                height: 2,
                expected: 4,
                actual: 3
            })
        );
        let img = GrayImage::new(3, 2, (0..6).collect()).unwrap();
        assert_eq!(img.get(2, 1), 5);
        assert_eq!(img.len(), 6);
    }
}
