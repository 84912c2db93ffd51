//! Statistical attacks: the pairs-of-values chi-square test and the
//! weighted-stego change-rate estimators (single and per-plane).

mod chi2;
mod pov;
mod ws;

use thiserror::Error;

pub use chi2::{chi2_cdf_complement, gamma_q, ln_gamma};
pub use pov::{pov_curve, pov_statistic, PovCurve, DEFAULT_POV_STEPS, MIN_PAIR_COUNT};
pub use ws::{clamp_estimate, mlsb_ws_estimate, ws_estimate, PlaneEstimate};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("chi-square degrees of freedom must be positive, got {0}")]
    InvalidDegreesOfFreedom(usize),
    #[error("chi-square statistic must be non-negative, got {0}")]
    InvalidStatistic(f64),
    #[error("histogram has only {retained} usable value pairs (need at least 2)")]
    DegenerateHistogram { retained: usize },
    #[error("PoV curve needs at least one step")]
    InvalidSteps,
    #[error("image {width}x{height} is too small (need at least 3x3)")]
    ImageTooSmall { width: usize, height: usize },
    #[error("bitplane {0} out of range (expected 0 or 1)")]
    InvalidPlane(u8),
}
