use std::fmt;
use std::str::FromStr;

use crate::image::GrayImage;
use crate::selection::XorShift64Star;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoverKind {
    /// Gradient with small noise and a contrast stretch; behaves like a
    /// natural photograph under the local predictor and the PoV test.
    Smooth,
    /// Independent uniform bytes.
    Uniform,
}

impl CoverKind {
    pub fn token(self) -> &'static str {
        match self {
            CoverKind::Smooth => "smooth",
            CoverKind::Uniform => "uniform",
        }
    }
}

impl fmt::Display for CoverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for CoverKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "smooth" => Ok(CoverKind::Smooth),
            "uniform" => Ok(CoverKind::Uniform),
            other => Err(format!("unknown synthetic cover kind {other:?}")),
        }
    }
}

/// Noise half-width before the contrast stretch.
const SMOOTH_NOISE: u64 = 3;

/// Deterministic synthetic cover.
///
/// `Smooth`: `floor(1.5 * (round(16 + 100 x/W + 50 y/H) + e))` with `e`
/// uniform in `[-3, 3]`. The 3:2 stretch leaves every third grey level
/// empty, like a contrast-adjusted photo, so the raw cover does not look
/// pair-equalized to the PoV test. Deviation from the stretched gradient
/// stays below 6 grey levels.
pub fn synth_cover(kind: CoverKind, width: usize, height: usize, seed: u64) -> GrayImage {
    let mut rng = XorShift64Star::new(seed);
    let pixels = match kind {
        CoverKind::Uniform => (0..width * height)
            .map(|_| (rng.next_u64() >> 56) as u8)
            .collect(),
        CoverKind::Smooth => {
            let mut px = Vec::with_capacity(width * height);
            for y in 0..height {
                for x in 0..width {
                    let ramp =
                        16.0 + 100.0 * x as f64 / width as f64 + 50.0 * y as f64 / height as f64;
                    let noise =
                        (rng.next_u64() % (2 * SMOOTH_NOISE + 1)) as i64 - SMOOTH_NOISE as i64;
                    let base = ramp.round() as i64 + noise;
                    px.push((3 * base).div_euclid(2).clamp(0, 255) as u8);
                }
            }
            px
        }
    };
    GrayImage::new(width, height, pixels).expect("dimensions match buffer")
}
