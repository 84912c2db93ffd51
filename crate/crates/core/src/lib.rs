//! Bitplane-index steganography for 8-bit grayscale images, together with
//! the LSB and 2LSB replacement baselines, the PoV / WS / MLSB-WS
//! steganalysers used to attack them, PSNR measurement, and a benchmark
//! harness that sweeps schemes and embedding rates.

pub mod bench;
pub mod bits;
pub mod cli;
pub mod image;
pub mod metrics;
pub mod pgm;
pub mod schemes;
pub mod selection;
pub mod steganalysis;

pub use bits::{pack_bits, unpack_bits, BitMessage};
pub use image::{get_bit, set_bit, GrayImage};
pub use schemes::{embed, extract, IndexVector, SchemeId, StegoKey};
