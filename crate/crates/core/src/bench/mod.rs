//! Experiment grid: every cover x scheme x embedding rate x seed is embedded,
//! checked for exact extraction, then measured with PoV, WS, MLSB-WS and PSNR.
//!
//! A rate `p` means `round(p * n)` message bits for an `n`-pixel cover, for
//! every scheme; 2LSB therefore touches only half as many pixels. Rate 0
//! rows describe the untouched cover and are the same for every scheme.

mod synth;

use std::collections::BTreeMap;
use std::path::PathBuf;

use rayon::prelude::*;
use thiserror::Error;

use crate::bits::BitMessage;
use crate::image::GrayImage;
use crate::metrics::{format_psnr, psnr};
use crate::pgm::{read_pgm_file, PgmError};
use crate::schemes::{embed, extract, SchemeId, StegoError};
use crate::selection::XorShift64Star;
use crate::steganalysis::{
    clamp_estimate, mlsb_ws_estimate, pov_curve, AnalysisError, DEFAULT_POV_STEPS,
};

pub use synth::{synth_cover, CoverKind};

pub const DEFAULT_RATES: [f64; 6] = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
pub const DEFAULT_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];
pub const DEFAULT_SYNTHETIC_COUNT: usize = 10;
pub const DEFAULT_SYNTHETIC_SIZE: usize = 256;

/// Offset separating the position key from the message key of a seed.
const POSITION_SEED_OFFSET: u64 = 0xD1B5_4A32_D192_ED03;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("cannot load cover {path}: {source}")]
    Cover { path: PathBuf, source: PgmError },
    #[error("no cover images given")]
    NoCovers,
    #[error("no embedding rates given")]
    NoRates,
    #[error("embedding rate {0} outside [0, 1]")]
    InvalidRate(f64),
    #[error("embedding failed on {cover} ({scheme}, rate {rate}): {source}")]
    Embed {
        cover: String,
        scheme: SchemeId,
        rate: f64,
        source: StegoError,
    },
    #[error("extracted message differs from embedded message on {cover} ({scheme}, rate {rate}, seed {seed})")]
    RoundTrip {
        cover: String,
        scheme: SchemeId,
        rate: f64,
        seed: u64,
    },
    #[error("analysis failed on {cover}: {source}")]
    Analysis {
        cover: String,
        source: AnalysisError,
    },
}

/// Where a cover comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum CoverSpec {
    Path(PathBuf),
    Synthetic {
        kind: CoverKind,
        width: usize,
        height: usize,
        seed: u64,
    },
}

impl CoverSpec {
    pub fn id(&self) -> String {
        match self {
            CoverSpec::Path(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
            CoverSpec::Synthetic { kind, seed, .. } => format!("{kind}-{seed}"),
        }
    }

    pub fn load(&self) -> Result<GrayImage, BenchError> {
        match self {
            CoverSpec::Path(p) => read_pgm_file(p).map_err(|source| BenchError::Cover {
                path: p.clone(),
                source,
            }),
            CoverSpec::Synthetic {
                kind,
                width,
                height,
                seed,
            } => Ok(synth_cover(*kind, *width, *height, *seed)),
        }
    }

    /// `count` synthetic covers seeded `1..=count`.
    pub fn synthetic_set(kind: CoverKind, count: usize, size: usize) -> Vec<CoverSpec> {
        (1..=count as u64)
            .map(|seed| CoverSpec::Synthetic {
                kind,
                width: size,
                height: size,
                seed,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub covers: Vec<CoverSpec>,
    /// Embedding rates in `[0, 1]`; 0 analyses the raw cover.
    pub rates: Vec<f64>,
    pub schemes: Vec<SchemeId>,
    /// Each seed keys both the message bits and the pixel positions.
    pub seeds: Vec<u64>,
    /// PoV curve resolution.
    pub steps: usize,
}

impl ExperimentConfig {
    pub fn synthetic(kind: CoverKind) -> Self {
        Self {
            covers: CoverSpec::synthetic_set(kind, DEFAULT_SYNTHETIC_COUNT, DEFAULT_SYNTHETIC_SIZE),
            rates: DEFAULT_RATES.to_vec(),
            schemes: SchemeId::ALL.to_vec(),
            seeds: DEFAULT_SEEDS.to_vec(),
            steps: DEFAULT_POV_STEPS,
        }
    }

    fn validate(&self) -> Result<(), BenchError> {
        if self.covers.is_empty() {
            return Err(BenchError::NoCovers);
        }
        if self.rates.is_empty() {
            return Err(BenchError::NoRates);
        }
        if let Some(&r) = self.rates.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return Err(BenchError::InvalidRate(r));
        }
        Ok(())
    }
}

/// One analysed stego (or cover, at rate 0).
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub cover: String,
    pub scheme: SchemeId,
    pub rate: f64,
    /// `None` marks a row averaged over seeds.
    pub seed: Option<u64>,
    pub ws_plane1: f64,
    pub ws_plane2: f64,
    pub pov_mean_pvalue: f64,
    pub psnr_db: f64,
}

/// Message bits drawn from the keyed generator, one bit (the low bit) per
/// draw.
pub fn generate_message(seed: u64, bit_count: usize) -> BitMessage {
    let mut rng = XorShift64Star::new(seed);
    BitMessage::from_bits((0..bit_count).map(|_| (rng.next_u64() & 1) as u8))
}

pub fn position_seed(seed: u64) -> u64 {
    seed.wrapping_add(POSITION_SEED_OFFSET)
}

/// Bits embedded at rate `rate` in an `n`-pixel cover.
pub fn message_bits(rate: f64, n: usize) -> usize {
    (rate * n as f64).round() as usize
}

#[derive(Debug, Clone, Copy)]
struct Measurement {
    ws_plane1: f64,
    ws_plane2: f64,
    pov_mean_pvalue: f64,
}

fn measure(img: &GrayImage, steps: usize, cover_id: &str) -> Result<Measurement, BenchError> {
    let wrap = |source| BenchError::Analysis {
        cover: cover_id.to_string(),
        source,
    };
    Ok(Measurement {
        ws_plane1: mlsb_ws_estimate(img, 0).map_err(wrap)?.estimate,
        ws_plane2: mlsb_ws_estimate(img, 1).map_err(wrap)?.estimate,
        pov_mean_pvalue: pov_curve(img, steps).map_err(wrap)?.mean_p_value(),
    })
}

struct Cell {
    cover: usize,
    scheme: SchemeId,
    rate: f64,
    seed: u64,
}

/// Runs every cell of the grid. Output order is (cover, scheme, rate, seed)
/// following the config, independent of scheduling.
pub fn run_grid(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>, BenchError> {
    cfg.validate()?;
    let covers: Vec<(String, GrayImage)> = cfg
        .covers
        .iter()
        .map(|spec| Ok((spec.id(), spec.load()?)))
        .collect::<Result<_, BenchError>>()?;

    let baselines: Vec<Measurement> = covers
        .par_iter()
        .map(|(id, img)| measure(img, cfg.steps, id))
        .collect::<Result<_, _>>()?;

    let mut schemes = cfg.schemes.clone();
    schemes.sort();
    schemes.dedup();
    let mut rates = cfg.rates.clone();
    rates.sort_by(f64::total_cmp);
    rates.dedup();

    let mut cells = Vec::new();
    for cover in 0..covers.len() {
        for &scheme in &schemes {
            for &rate in &rates {
                for &seed in &cfg.seeds {
                    cells.push(Cell {
                        cover,
                        scheme,
                        rate,
                        seed,
                    });
                }
            }
        }
    }

    cells
        .par_iter()
        .map(|cell| {
            let (id, cover) = &covers[cell.cover];
            let row = |m: Measurement, psnr_db| ResultRow {
                cover: id.clone(),
                scheme: cell.scheme,
                rate: cell.rate,
                seed: Some(cell.seed),
                ws_plane1: m.ws_plane1,
                ws_plane2: m.ws_plane2,
                pov_mean_pvalue: m.pov_mean_pvalue,
                psnr_db,
            };
            if cell.rate == 0.0 {
                return Ok(row(baselines[cell.cover], f64::INFINITY));
            }
            let message = generate_message(cell.seed, message_bits(cell.rate, cover.len()));
            let (stego, key) = embed(cover, &message, cell.scheme, position_seed(cell.seed))
                .map_err(|source| BenchError::Embed {
                    cover: id.clone(),
                    scheme: cell.scheme,
                    rate: cell.rate,
                    source,
                })?;
            if extract(&stego, &key).ok().as_ref() != Some(&message) {
                return Err(BenchError::RoundTrip {
                    cover: id.clone(),
                    scheme: cell.scheme,
                    rate: cell.rate,
                    seed: cell.seed,
                });
            }
            let quality = psnr(cover, &stego).expect("stego keeps cover dimensions");
            Ok(row(measure(&stego, cfg.steps, id)?, quality.psnr_db))
        })
        .collect()
}

/// Averages rows over seeds, one output row per (cover, scheme, rate), in
/// first-appearance order.
pub fn average_over_seeds(rows: &[ResultRow]) -> Vec<ResultRow> {
    let mut order: Vec<(String, SchemeId, u64)> = Vec::new();
    let mut groups: BTreeMap<(String, SchemeId, u64), Vec<&ResultRow>> = BTreeMap::new();
    for row in rows {
        let key = (row.cover.clone(), row.scheme, row.rate.to_bits());
        let entry = groups.entry(key.clone()).or_default();
        if entry.is_empty() {
            order.push(key);
        }
        entry.push(row);
    }
    order
        .into_iter()
        .map(|key| {
            let group = &groups[&key];
            let mean = |f: fn(&ResultRow) -> f64| {
                group.iter().map(|r| f(r)).sum::<f64>() / group.len() as f64
            };
            ResultRow {
                cover: key.0.clone(),
                scheme: key.1,
                rate: f64::from_bits(key.2),
                seed: None,
                ws_plane1: mean(|r| r.ws_plane1),
                ws_plane2: mean(|r| r.ws_plane2),
                pov_mean_pvalue: mean(|r| r.pov_mean_pvalue),
                psnr_db: mean(|r| r.psnr_db),
            }
        })
        .collect()
}

/// Stable sort by (cover in first-appearance order, scheme, rate, seed),
/// with averaged rows after the per-seed rows of their group.
pub fn order_rows(mut rows: Vec<ResultRow>) -> Vec<ResultRow> {
    let mut covers: Vec<String> = Vec::new();
    for r in &rows {
        if !covers.contains(&r.cover) {
            covers.push(r.cover.clone());
        }
    }
    let seed_order: Vec<u64> = {
        let mut seen = Vec::new();
        for s in rows.iter().filter_map(|r| r.seed) {
            if !seen.contains(&s) {
                seen.push(s);
            }
        }
        seen
    };
    rows.sort_by(|a, b| {
        let pos = |c: &String| covers.iter().position(|x| x == c);
        let seed_pos = |s: Option<u64>| {
            s.map_or(usize::MAX, |s| {
                seed_order.iter().position(|&x| x == s).unwrap_or(0)
            })
        };
        pos(&a.cover)
            .cmp(&pos(&b.cover))
            .then(a.scheme.cmp(&b.scheme))
            .then(a.rate.total_cmp(&b.rate))
            .then(seed_pos(a.seed).cmp(&seed_pos(b.seed)))
    });
    rows
}

pub const CSV_HEADER: &str =
    "cover,scheme,rate,ws_L1,ws_L2,pov_mean_p,psnr_db,ws_L1_clamped,ws_L2_clamped,seed";

/// Renders rows as CSV. Averaged rows carry `mean` in the seed column.
pub fn emit_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let seed = r
            .seed
            .map(|s| s.to_string())
            .unwrap_or_else(|| "mean".to_string());
        out.push_str(&format!(
            "{},{},{:.4},{:.4},{:.4},{:.4},{},{:.4},{:.4},{}\n",
            r.cover,
            r.scheme,
            r.rate,
            r.ws_plane1,
            r.ws_plane2,
            r.pov_mean_pvalue,
            format_psnr(r.psnr_db),
            clamp_estimate(r.ws_plane1),
            clamp_estimate(r.ws_plane2),
            seed,
        ));
    }
    out
}

/// Outcome of one trend check over a result grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn mean_of(
    rows: &[ResultRow],
    scheme: SchemeId,
    rate: f64,
    f: fn(&ResultRow) -> f64,
) -> Option<f64> {
    let vals: Vec<f64> = rows
        .iter()
        .filter(|r| r.seed.is_some() && r.scheme == scheme && (r.rate - rate).abs() < 1e-9)
        .map(f)
        .collect();
    (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
}

/// Compares grid means against the expected detector behaviour on smooth
/// covers. Checks whose inputs are missing from the grid are skipped.
pub fn trend_checks(rows: &[ResultRow]) -> Vec<TrendCheck> {
    let mut rates: Vec<f64> = rows.iter().map(|r| r.rate).filter(|&r| r > 0.0).collect();
    rates.sort_by(f64::total_cmp);
    rates.dedup();
    let mut checks = Vec::new();
    let mut push = |name, results: Vec<(bool, String)>| {
        if !results.is_empty() {
            checks.push(TrendCheck {
                name,
                passed: results.iter().all(|(ok, _)| *ok),
                detail: results
                    .into_iter()
                    .map(|(_, d)| d)
                    .collect::<Vec<_>>()
                    .join("; "),
            });
        }
    };

    let ws1 = |r: &ResultRow| r.ws_plane1;
    let ws2 = |r: &ResultRow| r.ws_plane2;
    let pov = |r: &ResultRow| r.pov_mean_pvalue;
    let db = |r: &ResultRow| r.psnr_db;

    let mut res = Vec::new();
    if let Some(m) = mean_of(rows, SchemeId::Lsb, 0.0, ws1) {
        res.push((m.abs() < 0.05, format!("cover {m:.4}")));
    }
    for &p in &rates {
        if let Some(m) = mean_of(rows, SchemeId::Lsb, p, ws1) {
            res.push(((m - p).abs() <= 0.1, format!("p={p}: {m:.4}")));
        }
    }
    push("WS estimate tracks LSB rate", res);

    let mut res = Vec::new();
    for &p in &rates {
        if let Some(m) = mean_of(rows, SchemeId::Bpi, p, ws1) {
            res.push((
                (m + p).abs() <= 0.15 && clamp_estimate(m) == 0.0,
                format!("p={p}: {m:.4}"),
            ));
        }
    }
    push("WS sees no payload in BPI", res);

    let mut res = Vec::new();
    for &p in &rates {
        if let (Some(a), Some(b)) = (
            mean_of(rows, SchemeId::TwoLsb, p, ws1),
            mean_of(rows, SchemeId::TwoLsb, p, ws2),
        ) {
            let ok = (a - p / 2.0).abs() <= 0.1 && (b - p / 2.0).abs() <= 0.1;
            res.push((ok, format!("p={p}: {a:.4}/{b:.4}")));
        }
    }
    push("MLSB-WS on 2LSB near p/2 on both planes", res);

    let mut res = Vec::new();
    for &p in &rates {
        if let Some(m) = mean_of(rows, SchemeId::Bpi, p, ws2) {
            if (p - 1.0).abs() < 1e-9 {
                res.push(((0.8..=1.2).contains(&m), format!("p={p}: {m:.4}")));
            } else if p <= 0.6 + 1e-9 {
                res.push((m < 0.3, format!("p={p}: {m:.4}")));
            }
        }
    }
    push("MLSB-WS plane 2 flags BPI only at full rate", res);

    let mut res = Vec::new();
    if let Some(m) = mean_of(rows, SchemeId::Lsb, 1.0, pov) {
        res.push((m > 0.9, format!("LSB@1 {m:.4}")));
    }
    if let Some(m) = rows
        .iter()
        .find(|r| r.rate == 0.0)
        .and_then(|r| mean_of(rows, r.scheme, 0.0, pov))
    {
        res.push((m < 0.1, format!("cover {m:.4}")));
    }
    if let Some(m) = mean_of(rows, SchemeId::Bpi, 1.0, pov) {
        res.push((m < 0.1, format!("BPI@1 {m:.4}")));
    }
    push("PoV flags LSB but not cover or BPI", res);

    if let Some(&top) = rates.last() {
        if let (Some(l), Some(t), Some(b)) = (
            mean_of(rows, SchemeId::Lsb, top, db),
            mean_of(rows, SchemeId::TwoLsb, top, db),
            mean_of(rows, SchemeId::Bpi, top, db),
        ) {
            push(
                "PSNR ordering LSB > 2LSB > BPI within 1 dB",
                vec![(
                    l > t && t > b && (t - b) < 1.0,
                    format!("p={top}: {l:.2}/{t:.2}/{b:.2} dB"),
                )],
            );
        }
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> ExperimentConfig {
        ExperimentConfig {
            covers: CoverSpec::synthetic_set(CoverKind::Smooth, 2, 24),
            rates: vec![0.0, 0.5, 1.0],
            schemes: SchemeId::ALL.to_vec(),
            seeds: vec![7, 8],
            steps: 10,
        }
    }

    #[test]
    fn message_generation() {
        assert!(generate_message(3, 0).is_empty());
        assert_eq!(generate_message(3, 100), generate_message(3, 100));
        let m = generate_message(11, 100_000);
        let ones = m.count_ones() as f64 / m.len() as f64;
        assert!((ones - 0.5).abs() < 0.01, "{ones}");
    }

    #[test]
    fn grid_shape_and_order() {
        let rows = run_grid(&tiny_config()).unwrap();
        assert_eq!(rows.len(), 2 * 3 * 3 * 2);
        assert_eq!(rows[0].cover, "smooth-1");
        assert_eq!(rows[0].scheme, SchemeId::Lsb);
        assert_eq!(rows[0].seed, Some(7));
        assert_eq!(rows[1].seed, Some(8));
        assert_eq!(rows[2].rate, 0.5);
        assert_eq!(rows.last().unwrap().scheme, SchemeId::Bpi);
    }

    #[test]
    fn rate_zero_rows_are_scheme_independent() {
        let rows = run_grid(&tiny_config()).unwrap();
        let zero: Vec<_> = rows.iter().filter(|r| r.rate == 0.0).collect();
        assert_eq!(zero.len(), 2 * 3 * 2);
        for r in &zero {
            assert!(r.psnr_db.is_infinite());
            let reference = zero.iter().find(|z| z.cover == r.cover).unwrap();
            assert_eq!(r.ws_plane1, reference.ws_plane1);
            assert_eq!(r.ws_plane2, reference.ws_plane2);
            assert_eq!(r.pov_mean_pvalue, reference.pov_mean_pvalue);
        }
    }

    #[test]
    fn deterministic_csv() {
        let a = emit_csv(&run_grid(&tiny_config()).unwrap());
        let b = emit_csv(&run_grid(&tiny_config()).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn csv_format() {
        assert_eq!(emit_csv(&[]), format!("{CSV_HEADER}\n"));
        let row = ResultRow {
            cover: "a".into(),
            scheme: SchemeId::Bpi,
            rate: 1.0,
            seed: Some(3),
            ws_plane1: -0.975,
            ws_plane2: 1.25,
            pov_mean_pvalue: 0.0,
            psnr_db: 46.37,
        };
        let csv = emit_csv(std::slice::from_ref(&row));
        assert_eq!(csv.lines().count(), 2);
        assert_eq!(
            csv.lines().nth(1).unwrap(),
            "a,bpi,1.0000,-0.9750,1.2500,0.0000,46.3700,0.0000,1.0000,3"
        );
        let mean = average_over_seeds(&[
            row.clone(),
            ResultRow {
                seed: Some(4),
                ws_plane1: -0.925,
                ..row
            },
        ]);
        assert_eq!(mean.len(), 1);
        assert!(emit_csv(&mean)
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("a,bpi,1.0000,-0.9500,"));
        assert!(emit_csv(&mean).ends_with(",mean\n"));
    }

    #[test]
    fn config_validation() {
        let mut cfg = tiny_config();
        cfg.rates = vec![1.5];
        assert!(matches!(run_grid(&cfg), Err(BenchError::InvalidRate(_))));
        cfg.rates.clear();
        assert!(matches!(run_grid(&cfg), Err(BenchError::NoRates)));
        cfg.covers.clear();
        assert!(matches!(run_grid(&cfg), Err(BenchError::NoCovers)));
        let missing = ExperimentConfig {
            covers: vec![CoverSpec::Path("/nonexistent/x.pgm".into())],
            ..tiny_config()
        };
        assert!(matches!(run_grid(&missing), Err(BenchError::Cover { .. })));
    }

    #[test]
    fn rate_zero_only_grid() {
        let cfg = ExperimentConfig {
            rates: vec![0.0],
            ..tiny_config()
        };
        let rows = run_grid(&cfg).unwrap();
        assert!(rows.iter().all(|r| r.psnr_db.is_infinite()));
    }
}
