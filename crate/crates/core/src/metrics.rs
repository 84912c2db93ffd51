//! Cover/stego distortion.

use std::fmt;

use thiserror::Error;

use crate::image::GrayImage;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("image dimensions differ: {0}x{1} vs {2}x{3}")]
pub struct DimensionMismatch(pub usize, pub usize, pub usize, pub usize);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityReport {
    pub mse: f64,
    /// `f64::INFINITY` when the images are identical.
    pub psnr_db: f64,
}

impl QualityReport {
    pub fn is_lossless(&self) -> bool {
        self.mse == 0.0
    }
}

impl fmt::Display for QualityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mse={:.6} psnr={}", self.mse, format_psnr(self.psnr_db))
    }
}

/// Renders PSNR in dB with 4 decimals, or `inf`.
pub fn format_psnr(psnr_db: f64) -> String {
    if psnr_db.is_infinite() {
        "inf".to_string()
    } else {
        format!("{psnr_db:.4}")
    }
}

/// Sum of squared pixel differences, exact.
pub fn squared_error(a: &GrayImage, b: &GrayImage) -> Result<u64, DimensionMismatch> {
    if !a.same_dimensions(b) {
        return Err(DimensionMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    Ok(a.pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| {
            let d = x.abs_diff(y) as u64;
            d * d
        })
        .sum())
}

pub fn psnr(cover: &GrayImage, stego: &GrayImage) -> Result<QualityReport, DimensionMismatch> {
    let sse = squared_error(cover, stego)?;
    let mse = sse as f64 / cover.len() as f64;
    let psnr_db = if sse == 0 {
        f64::INFINITY
    } else {
        10.0 * (255.0f64 * 255.0 / mse).log10()
    };
    Ok(QualityReport { mse, psnr_db })
}
