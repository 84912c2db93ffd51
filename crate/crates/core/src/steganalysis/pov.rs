//! Pairs-of-values chi-square attack.
//!
//! LSB replacement equalizes the histogram counts of each value pair
//! (2k, 2k+1). The test compares the even-value count with the pair mean;
//! a small statistic means "pairs look equalized", i.e. a high probability
//! of embedding.

use super::chi2::chi2_cdf_complement;
use super::AnalysisError;
use crate::image::GrayImage;

/// Pairs whose combined count is below this are left out.
pub const MIN_PAIR_COUNT: u64 = 4;

pub const DEFAULT_POV_STEPS: usize = 100;

/// Embedding probability sampled over growing row-major prefixes.
#[derive(Debug, Clone, PartialEq)]
pub struct PovCurve {
    pub fractions: Vec<f64>,
    pub p_values: Vec<f64>,
}

impl PovCurve {
    pub fn len(&self) -> usize {
        self.p_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_values.is_empty()
    }

    pub fn mean_p_value(&self) -> f64 {
        if self.p_values.is_empty() {
            return 0.0;
        }
        self.p_values.iter().sum::<f64>() / self.p_values.len() as f64
    }

    /// `fraction,p_value` CSV with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("fraction,p_value\n");
        for (f, p) in self.fractions.iter().zip(&self.p_values) {
            out.push_str(&format!("{f:.4},{p:.6}\n"));
        }
        out
    }
}

/// Chi-square statistic and degrees of freedom for a 256-bin histogram.
pub fn pov_statistic(histogram: &[u64; 256]) -> Result<(f64, usize), AnalysisError> {
    let mut statistic = 0.0;
    let mut retained = 0usize;
    for pair in histogram.chunks_exact(2) {
        let total = pair[0] + pair[1];
        if total < MIN_PAIR_COUNT {
            continue;
        }
        let expected = total as f64 / 2.0;
        let diff = pair[0] as f64 - expected;
        statistic += diff * diff / expected;
        retained += 1;
    }
    if retained < 2 {
        return Err(AnalysisError::DegenerateHistogram { retained });
    }
    Ok((statistic, retained - 1))
}

/// Embedding probability for one histogram; degenerate histograms give 0.
fn embedding_probability(histogram: &[u64; 256]) -> f64 {
    match pov_statistic(histogram) {
        Ok((stat, df)) => chi2_cdf_complement(stat, df).unwrap_or(0.0),
        Err(_) => 0.0,
    }
}

/// For `t = 1..=steps`, the embedding probability of the first
/// `ceil(t / steps * n)` pixels in row-major order.
pub fn pov_curve(img: &GrayImage, steps: usize) -> Result<PovCurve, AnalysisError> {
    if steps == 0 {
        return Err(AnalysisError::InvalidSteps);
    }
    let px = img.pixels();
    let n = px.len();
    let mut histogram = [0u64; 256];
    let mut consumed = 0;
    let mut fractions = Vec::with_capacity(steps);
    let mut p_values = Vec::with_capacity(steps);
    for t in 1..=steps {
        let end = (t * n).div_ceil(steps);
        for &v in &px[consumed..end] {
            histogram[v as usize] += 1;
        }
        consumed = end;
        fractions.push(t as f64 / steps as f64);
        p_values.push(embedding_probability(&histogram));
    }
    Ok(PovCurve {
        fractions,
        p_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equalized_pairs_score_one() {
        let mut h = [0u64; 256];
        for (i, c) in h.iter_mut().enumerate() {
            *c = 100 + (i as u64 / 2) * 3;
        }
        let (stat, df) = pov_statistic(&h).unwrap();
        assert_eq!(stat, 0.0);
        assert_eq!(df, 127);
        assert_eq!(chi2_cdf_complement(stat, df).unwrap(), 1.0);
    }

    #[test]
    fn maximally_unequal_pairs_score_zero() {
        let mut h = [0u64; 256];
        for k in 0..128 {
            h[2 * k] = 1000;
        }
        let (stat, df) = pov_statistic(&h).unwrap();
        assert_eq!(stat, 128.0 * 500.0);
        assert!(chi2_cdf_complement(stat, df).unwrap() < 1e-12);
    }

    #[test]
    fn two_pair_hand_computation() {
        // Pairs (10, 6) and (8, 12): 2^2/8 + 2^2/10 = 0.9 with df 1.
        let mut h = [0u64; 256];
        h[..4].copy_from_slice(&[10, 6, 8, 12]);
        let (stat, df) = pov_statistic(&h).unwrap();
        assert!((stat - 0.9).abs() < 1e-12);
        assert_eq!(df, 1);
        let p = chi2_cdf_complement(stat, df).unwrap();
        assert!((p - 0.342_781_711_147_911_4).abs() < 1e-9);
    }

    #[test]
    fn low_count_pairs_dropped() {
        let mut h = [0u64; 256];
        h[..6].copy_from_slice(&[10, 6, 8, 12, 3, 0]);
        assert_eq!(pov_statistic(&h).unwrap().1, 1);
        let mut h = [0u64; 256];
        h[0] = 50;
        assert!(matches!(
            pov_statistic(&h),
            Err(AnalysisError::DegenerateHistogram { retained: 1 })
        ));
    }

    #[test]
    fn single_step_covers_whole_image() {
        let img = GrayImage::new(4, 4, (0..16).collect()).unwrap();
        let curve = pov_curve(&img, 1).unwrap();
        assert_eq!(curve.fractions, vec![1.0]);
        // 16 distinct values: every pair total is 2, below the threshold.
        assert_eq!(curve.p_values, vec![0.0]);
    }

    #[test]
    fn fractions_strictly_increase() {
        let img = GrayImage::new(7, 3, (0..21).map(|v| v as u8 * 3).collect()).unwrap();
        let curve = pov_curve(&img, 10).unwrap();
        assert_eq!(curve.len(), 10);
        assert!(curve.fractions.windows(2).all(|w| w[0] < w[1]));
        assert!(curve.p_values.iter().all(|p| (0.0..=1.0).contains(p)));
        assert!(pov_curve(&img, 0).is_err());
    }

    #[test]
    fn csv_rendering() {
        let curve = PovCurve {
            fractions: vec![0.5, 1.0],
            p_values: vec![0.25, 1.0],
        };
        assert_eq!(
            curve.to_csv(),
            "fraction,p_value\n0.5000,0.250000\n1.0000,1.000000\n"
        );
    }
}
