//! Command-line front end: `embed`, `extract`, `analyze`, `psnr`, `bench`.
//!
//! Data goes to files (or the output writer when no file is given);
//! diagnostics are returned as [`CliError`] for the binary to print.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::bench::{
    self, average_over_seeds, emit_csv, trend_checks, CoverKind, CoverSpec, ExperimentConfig,
};
use crate::bits::{pack_bits, unpack_bits};
use crate::metrics::{format_psnr, psnr};
use crate::pgm::{read_pgm_file, write_pgm_file, PgmError};
use crate::schemes::{embed, extract, KeyParseError, SchemeId, StegoError, StegoKey};
use crate::steganalysis::{
    clamp_estimate, mlsb_ws_estimate, pov_curve, ws_estimate, AnalysisError, DEFAULT_POV_STEPS,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Image { path: PathBuf, source: PgmError },
    #[error("{path}: malformed key: {source}")]
    Key {
        path: PathBuf,
        source: KeyParseError,
    },
    #[error("{0}")]
    Stego(#[from] StegoError),
    #[error("{0}")]
    Analysis(#[from] AnalysisError),
    #[error("{0}")]
    Bench(#[from] bench::BenchError),
    #[error("{0}")]
    Metrics(#[from] crate::metrics::DimensionMismatch),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Image { .. } => 3,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "bpistego",
    version,
    about = "Bitplane-index steganography and steganalysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hide a message file in a PGM cover.
    Embed(EmbedArgs),
    /// Recover a message using a stego key file.
    Extract(ExtractArgs),
    /// Run one steganalyser on an image.
    Analyze(AnalyzeArgs),
    /// PSNR between two images.
    Psnr(PsnrArgs),
    /// Sweep covers, schemes and embedding rates; write a CSV report.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Lsb,
    #[value(name = "2lsb")]
    TwoLsb,
    Bpi,
}

impl From<SchemeArg> for SchemeId {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Lsb => SchemeId::Lsb,
            SchemeArg::TwoLsb => SchemeId::TwoLsb,
            SchemeArg::Bpi => SchemeId::Bpi,
        }
    }
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[arg(long)]
    pub cover: PathBuf,
    /// Raw message bytes.
    #[arg(long)]
    pub message: PathBuf,
    #[arg(long, value_enum)]
    pub scheme: SchemeArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long = "key-out")]
    pub key_out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long)]
    pub stego: PathBuf,
    #[arg(long)]
    pub key: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Pov,
    Ws,
    Mlsbws,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub image: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    /// Bitplane, 1 = least significant. Only for ws (1) and mlsbws (1 or 2).
    #[arg(long)]
    pub plane: Option<u8>,
    /// PoV curve resolution.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Output file; the output stream when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PsnrArgs {
    #[arg(long)]
    pub cover: PathBuf,
    #[arg(long)]
    pub stego: PathBuf,
}

#[derive(Debug, Args, Default)]
pub struct BenchArgs {
    /// Directory of PGM covers.
    #[arg(long, conflicts_with = "synthetic")]
    pub covers: Option<PathBuf>,
    /// Use generated covers instead of files (smooth or uniform).
    #[arg(long)]
    pub synthetic: Option<String>,
    /// Number of synthetic covers.
    #[arg(long)]
    pub count: Option<usize>,
    /// Side length of synthetic covers.
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub rates: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub schemes: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// key=value file using the flag names above; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// CSV output; the output stream when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, data: &[u8]) -> Result<(), CliError> {
    fs::write(path, data).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_image(path: &Path) -> Result<crate::image::GrayImage, CliError> {
    read_pgm_file(path).map_err(|source| match source {
        PgmError::Io(source) => CliError::Io {
            path: path.to_path_buf(),
            source,
        },
        source => CliError::Image {
            path: path.to_path_buf(),
            source,
        },
    })
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => write(path, text.as_bytes()),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn say(stdout: &mut dyn Write, line: &str) -> Result<(), CliError> {
    writeln!(stdout, "{line}").map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

/// Executes a parsed command, writing human-readable output to `stdout`.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Embed(a) => cmd_embed(&a, stdout),
        Command::Extract(a) => cmd_extract(&a, stdout),
        Command::Analyze(a) => cmd_analyze(&a, stdout),
        Command::Psnr(a) => cmd_psnr(&a, stdout),
        Command::Bench(a) => cmd_bench(a, stdout),
    }
}

pub fn cmd_embed(a: &EmbedArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cover = load_image(&a.cover)?;
    let message = pack_bits(&read(&a.message)?);
    let (stego, key) = embed(&cover, &message, a.scheme.into(), a.seed)?;
    write_pgm_file(&a.out, &stego).map_err(|source| CliError::Io {
        path: a.out.clone(),
        source,
    })?;
    write(&a.key_out, format!("{key}\n").as_bytes())?;
    let quality = psnr(&cover, &stego)?;
    say(stdout, &format!("payload {} bits", key.bit_length))?;
    say(stdout, &format!("psnr {} dB", format_psnr(quality.psnr_db)))
}

pub fn cmd_extract(a: &ExtractArgs, _stdout: &mut dyn Write) -> Result<(), CliError> {
    let text = String::from_utf8_lossy(&read(&a.key)?).into_owned();
    let key: StegoKey = text.parse().map_err(|source| CliError::Key {
        path: a.key.clone(),
        source,
    })?;
    let stego = load_image(&a.stego)?;
    let message = extract(&stego, &key)?;
    let (bytes, _) = unpack_bits(&message);
    write(&a.out, &bytes)
}

pub fn cmd_analyze(a: &AnalyzeArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let plane = match (a.method, a.plane) {
        (Method::Pov, Some(_)) => {
            return Err(CliError::Usage("--plane does not apply to pov".into()))
        }
        (Method::Pov, None) => 0,
        (Method::Ws, None | Some(1)) => 0,
        (Method::Ws, Some(p)) => {
            return Err(CliError::Usage(format!(
                "ws only analyses plane 1, got --plane {p}"
            )))
        }
        (Method::Mlsbws, None) => 0,
        (Method::Mlsbws, Some(p @ (1 | 2))) => p - 1,
        (Method::Mlsbws, Some(p)) => {
            return Err(CliError::Usage(format!("--plane must be 1 or 2, got {p}")))
        }
    };
    if a.steps.is_some() && a.method != Method::Pov {
        return Err(CliError::Usage("--steps only applies to pov".into()));
    }
    let img = load_image(&a.image)?;
    let text = match a.method {
        Method::Pov => pov_curve(&img, a.steps.unwrap_or(DEFAULT_POV_STEPS))?.to_csv(),
        Method::Ws | Method::Mlsbws => {
            let est = if a.method == Method::Ws {
                ws_estimate(&img)?
            } else {
                mlsb_ws_estimate(&img, plane)?
            };
            format!(
                "estimate={:.4},clamped={:.4}\n",
                est.estimate,
                clamp_estimate(est.estimate)
            )
        }
    };
    emit(a.out.as_deref(), &text, stdout)
}

pub fn cmd_psnr(a: &PsnrArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let q = psnr(&load_image(&a.cover)?, &load_image(&a.stego)?)?;
    say(
        stdout,
        &format!("mse={:.6},psnr={}", q.mse, format_psnr(q.psnr_db)),
    )
}

/// Fills unset bench flags from a `key=value` config file.
fn merge_config(mut a: BenchArgs) -> Result<BenchArgs, CliError> {
    let Some(path) = a.config.clone() else {
        return Ok(a);
    };
    let text = String::from_utf8_lossy(&read(&path)?).into_owned();
    let bad = |line: &str| CliError::Usage(format!("{}: bad config line {line:?}", path.display()));
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| bad(line))?;
        let (k, v) = (k.trim().trim_start_matches("--"), v.trim());
        let list = || v.split(',').map(str::trim).filter(|s| !s.is_empty());
        match k {
            "covers" => {
                a.covers.get_or_insert_with(|| PathBuf::from(v));
            }
            "synthetic" => {
                a.synthetic.get_or_insert_with(|| v.to_string());
            }
            "count" => {
                if a.count.is_none() {
                    a.count = Some(v.parse().map_err(|_| bad(line))?);
                }
            }
            "size" => {
                if a.size.is_none() {
                    a.size = Some(v.parse().map_err(|_| bad(line))?);
                }
            }
            "steps" => {
                if a.steps.is_none() {
                    a.steps = Some(v.parse().map_err(|_| bad(line))?);
                }
            }
            "rates" => {
                if a.rates.is_none() {
                    a.rates = Some(
                        list()
                            .map(str::parse)
                            .collect::<Result<_, _>>()
                            .map_err(|_| bad(line))?,
                    );
                }
            }
            "seeds" => {
                if a.seeds.is_none() {
                    a.seeds = Some(
                        list()
                            .map(str::parse)
                            .collect::<Result<_, _>>()
                            .map_err(|_| bad(line))?,
                    );
                }
            }
            "schemes" => {
                a.schemes
                    .get_or_insert_with(|| list().map(String::from).collect());
            }
            "out" => {
                a.out.get_or_insert_with(|| PathBuf::from(v));
            }
            _ => return Err(bad(line)),
        }
    }
    if a.covers.is_some() && a.synthetic.is_some() {
        return Err(CliError::Usage(
            "--covers and --synthetic are mutually exclusive".into(),
        ));
    }
    Ok(a)
}

/// Builds the grid configuration from bench flags.
pub fn bench_config(a: &BenchArgs) -> Result<ExperimentConfig, CliError> {
    let covers = match (&a.covers, &a.synthetic) {
        (Some(dir), _) => {
            let entries = fs::read_dir(dir).map_err(|source| CliError::Io {
                path: dir.clone(),
                source,
            })?;
            let mut paths: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm")))
                .collect();
            paths.sort();
            paths.into_iter().map(CoverSpec::Path).collect()
        }
        (None, kind) => {
            let kind: CoverKind = kind
                .as_deref()
                .unwrap_or("smooth")
                .parse()
                .map_err(CliError::Usage)?;
            CoverSpec::synthetic_set(
                kind,
                a.count.unwrap_or(bench::DEFAULT_SYNTHETIC_COUNT),
                a.size.unwrap_or(bench::DEFAULT_SYNTHETIC_SIZE),
            )
        }
    };
    if covers.is_empty() {
        return Err(CliError::Usage("empty cover set".into()));
    }
    let schemes = match &a.schemes {
        None => SchemeId::ALL.to_vec(),
        Some(tokens) => tokens
            .iter()
            .map(|t| t.parse::<SchemeId>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Usage(e.to_string()))?,
    };
    let rates = a
        .rates
        .clone()
        .unwrap_or_else(|| bench::DEFAULT_RATES.to_vec());
    if let Some(r) = rates.iter().find(|r| !(0.0..=1.0).contains(*r)) {
        return Err(CliError::Usage(format!("rate {r} outside [0, 1]")));
    }
    let steps = a.steps.unwrap_or(DEFAULT_POV_STEPS);
    if steps == 0 {
        return Err(CliError::Usage("--steps must be positive".into()));
    }
    Ok(ExperimentConfig {
        covers,
        rates,
        schemes,
        seeds: a
            .seeds
            .clone()
            .unwrap_or_else(|| bench::DEFAULT_SEEDS.to_vec()),
        steps,
    })
}

pub fn cmd_bench(a: BenchArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let a = merge_config(a)?;
    let cfg = bench_config(&a)?;
    let rows = bench::run_grid(&cfg)?;
    let means = average_over_seeds(&rows);
    let mut report = rows.clone();
    report.extend(means);
    let csv = emit_csv(&bench::order_rows(report));
    emit(a.out.as_deref(), &csv, stdout)?;
    if a.out.is_some() {
        for check in trend_checks(&rows) {
            say(
                stdout,
                &format!(
                    "[{}] {}: {}",
                    if check.passed { "PASS" } else { "FAIL" },
                    check.name,
                    check.detail
                ),
            )?;
        }
    }
    Ok(())
}
