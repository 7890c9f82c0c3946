//! `edisco`: simulate, build, calibrate, compare and render discovery
//! matrices.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage, 3 invalid input,
//! 4 problem too large for the requested engine.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use edisco::baseline::{ct_discovery_pmatrix, PValueVec};
use edisco::discovery::{build_dm_fast, build_dm_reference, sort_evalues};
use edisco::io::{matrix_to_csv, parse_matrix_csv, parse_study_csv, study_to_csv, StudyRecord};
use edisco::render::{compare_report, matrix_to_svg, ColorScale, MatrixKind, RenderSpec, Tagged};
use edisco::sim::{gen_study, SimConfig, DEFAULT_SEED};
use edisco::{EValueVec, TriMatrix, UStatOrder};

/// Largest K the from-scratch reference engine will attempt.
const REFERENCE_MAX_K: usize = 60;

#[derive(Debug, Parser)]
#[command(name = "edisco", version, about = "Discovery matrices from independent e-values")]
struct Cli {
    /// Worker threads for matrix construction (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate the Gaussian shift study as CSV.
    Simulate {
        #[arg(long = "K", default_value_t = 200)]
        k: usize,
        /// Number of false nulls, placed first.
        #[arg(long = "false", default_value_t = 100)]
        n_false: usize,
        #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
        alt_mean: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a discovery matrix from the `e` column of a study CSV.
    Dm {
        #[arg(long)]
        input: PathBuf,
        /// u1, u2, or uN:<n> (also u<n>).
        #[arg(long, default_value = "u2")]
        stat: Stat,
        #[arg(long, value_enum, default_value_t = Engine::Fast)]
        engine: Engine,
        #[arg(long)]
        out: PathBuf,
    },
    /// Turn an e-value matrix into a p-value matrix via min(1, 1/e).
    Calibrate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Closed-testing Simes p-matrix from the `p` column (K <= 20).
    Baseline {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a matrix CSV as an SVG heatmap.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        scale: Scale,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 4)]
        cell_size: u32,
        #[arg(long, default_value_t = 10)]
        margin: u32,
        /// Add axis and legend labels as text.
        #[arg(long)]
        labels: bool,
        #[arg(long)]
        no_legend: bool,
    },
    /// Compare two matrices band by band.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, value_enum)]
        scale: Scale,
        /// Report path; stdout if omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy)]
struct Stat(UStatOrder);

impl FromStr for Stat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let digits = s
            .strip_prefix("uN:")
            .or_else(|| s.strip_prefix('u'))
            .ok_or_else(|| format!("expected u1, u2 or uN:<n>, got {s:?}"))?;
        let n: usize = digits
            .parse()
            .map_err(|_| format!("expected u1, u2 or uN:<n>, got {s:?}"))?;
        UStatOrder::new(n).map(Stat).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Fast,
    Reference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scale {
    Jeffreys,
    Fisher,
}

impl Scale {
    fn color_scale(self) -> ColorScale {
        match self {
            Scale::Jeffreys => ColorScale::jeffreys(),
            Scale::Fisher => ColorScale::fisher(),
        }
    }

    fn matrix_kind(self) -> MatrixKind {
        self.color_scale().kind().matrix_kind()
    }
}

#[derive(Debug)]
enum CliError {
    Io(PathBuf, std::io::Error),
    Invalid(String),
    TooLarge(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(..) => 1,
            CliError::Invalid(_) => 3,
            CliError::TooLarge(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Invalid(msg) | CliError::TooLarge(msg) => f.write_str(msg),
        }
    }
}

impl From<edisco::Error> for CliError {
    fn from(e: edisco::Error) -> Self {
        if e.is_size_guard() {
            CliError::TooLarge(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_owned(), e))
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(path.to_owned(), e))
}

fn with_context(path: &Path) -> impl Fn(edisco::Error) -> CliError + '_ {
    move |e| match CliError::from(e) {
        CliError::Invalid(msg) => CliError::Invalid(format!("{}: {msg}", path.display())),
        other => other,
    }
}

fn read_study(path: &Path) -> Result<Vec<StudyRecord>, CliError> {
    parse_study_csv(&read(path)?).map_err(with_context(path))
}

fn read_matrix(path: &Path) -> Result<TriMatrix, CliError> {
    parse_matrix_csv(&read(path)?).map_err(with_context(path))
}

fn tagged(path: &Path, scale: Scale) -> Result<Tagged, CliError> {
    let entries = read_matrix(path)?;
    let kind = scale.matrix_kind();
    if kind == MatrixKind::PValues {
        if let Some(v) = entries.values().iter().find(|v| **v > 1.0) {
            return Err(CliError::Invalid(format!(
                "{}: value {v} is not a p-value; the fisher scale needs a p-value matrix",
                path.display()
            )));
        }
    }
    Ok(Tagged { kind, entries })
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate {
            k,
            n_false,
            alt_mean,
            seed,
            out,
        } => {
            let cfg = SimConfig::new(k, n_false, alt_mean, seed)?;
            write(&out, &study_to_csv(&gen_study(&cfg)))
        }
        Command::Dm {
            input,
            stat,
            engine,
            out,
        } => {
            let records = read_study(&input)?;
            let e = EValueVec::new(records.iter().map(|r| r.e).collect())?;
            let sorted = sort_evalues(&e);
            let dm = match engine {
                Engine::Fast => build_dm_fast(&sorted, stat.0),
                Engine::Reference => {
                    if e.len() > REFERENCE_MAX_K {
                        return Err(CliError::TooLarge(format!(
                            "the reference engine is limited to K <= {REFERENCE_MAX_K}, got K = {}",
                            e.len()
                        )));
                    }
                    build_dm_reference(&sorted, stat.0)
                }
            };
            write(&out, &matrix_to_csv(&dm))
        }
        Command::Calibrate { input, out } => {
            let entries = read_matrix(&input)?;
            let p = entries.map(edisco::e_to_p);
            write(&out, &matrix_to_csv(&p))
        }
        Command::Baseline { input, out } => {
            let records = read_study(&input)?;
            let p = PValueVec::new(records.iter().map(|r| r.p).collect())?;
            let pm = ct_discovery_pmatrix(&p)?;
            write(&out, &matrix_to_csv(&pm))
        }
        Command::Render {
            input,
            scale,
            out,
            cell_size,
            margin,
            labels,
            no_legend,
        } => {
            let m = tagged(&input, scale)?;
            let spec = RenderSpec {
                cell_size,
                margin,
                axis_labels: labels,
                legend: !no_legend,
            };
            let svg = matrix_to_svg(&m, &scale.color_scale(), &spec)?;
            write(&out, &svg)
        }
        Command::Compare {
            a,
            b,
            scale,
            report,
        } => {
            let (ma, mb) = (tagged(&a, scale)?, tagged(&b, scale)?);
            let text = compare_report(&ma, &mb, &scale.color_scale())?.to_string();
            match report {
                Some(path) => write(&path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("edisco: cannot start thread pool: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("edisco: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
