//! Weighted-stego payload estimators.
//!
//! The cover is predicted by the mean `F` of the four orthogonal neighbours.
//! For plane ℓ, each stego value `s` is compared with the centre `g` of its
//! value group (the `2^(ℓ+1)` values sharing all bits above ℓ); replacement
//! embedding pulls the cover towards that centre, so the least-squares
//! weight
//!
//! ```text
//!     p = Σ (s - g)(s - F) / Σ (s - g)²
//! ```
//!
//! estimates the fraction of pixels whose low ℓ+1 bits were replaced. For
//! ℓ = 0 the group is the pair {2k, 2k+1}, `s - g = (s - s̄)/2` with `s̄` the
//! LSB-flipped value, and the expression is exactly the classic
//! `(2/N) Σ (s - s̄)(s - F)`.
//!
//! Only interior pixels are used. Sums are accumulated in integers (scaled
//! by 2 and 4 respectively), so the result is one final division.

use super::AnalysisError;
use crate::image::GrayImage;

/// Raw change-rate estimate for one bitplane. May be negative or above 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneEstimate {
    /// 0 is the least significant plane.
    pub plane: u8,
    pub estimate: f64,
}

impl PlaneEstimate {
    /// Reading convention for reports: negatives mean no payload, values
    /// above 1 mean a full payload.
    pub fn clamped(&self) -> f64 {
        clamp_estimate(self.estimate)
    }
}

pub fn clamp_estimate(value: f64) -> f64 {
    value.clamp(0.0, 1.0)
}

fn weighted_stego(img: &GrayImage, plane: u8) -> Result<PlaneEstimate, AnalysisError> {
    if plane > 1 {
        return Err(AnalysisError::InvalidPlane(plane));
    }
    let (w, h) = (img.width(), img.height());
    if w < 3 || h < 3 {
        return Err(AnalysisError::ImageTooSmall {
            width: w,
            height: h,
        });
    }
    let px = img.pixels();
    let group = 2i64 << plane;
    let mut num: i64 = 0;
    let mut den: i64 = 0;
    for y in 1..h - 1 {
        let row = y * w;
        for x in 1..w - 1 {
            let i = row + x;
            let s = px[i] as i64;
            let neighbours =
                px[i - 1] as i64 + px[i + 1] as i64 + px[i - w] as i64 + px[i + w] as i64;
            // 2 (s - g) and 4 (s - F)
            let d = 2 * s - (2 * (s & !(group - 1)) + group - 1);
            let r = 4 * s - neighbours;
            num += d * r;
            den += d * d;
        }
    }
    Ok(PlaneEstimate {
        plane,
        estimate: num as f64 / (2.0 * den as f64),
    })
}

/// LSB change-rate estimate (plane 0).
pub fn ws_estimate(img: &GrayImage) -> Result<PlaneEstimate, AnalysisError> {
    weighted_stego(img, 0)
}

/// Per-plane estimate; plane 0 is identical to [`ws_estimate`].
pub fn mlsb_ws_estimate(img: &GrayImage, plane: u8) -> Result<PlaneEstimate, AnalysisError> {
    weighted_stego(img, plane)
}
