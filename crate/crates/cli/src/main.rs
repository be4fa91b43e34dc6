//! `plshadow`: shadowing verdicts, demos and certificate replay from the command line.
//!
//! Reports go to stdout as `key: value` lines. Timing goes to stderr.
//! Exit codes: 0 verdict produced, 1 inconclusive or failed check, 2 input error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use report::{Failure, Report};

pub const PRECISION_ENV: &str = "PLSHADOW_PRECISION";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Only maps with exact rational or quadratic data.
    Exact,
    /// Also maps evaluated with outward-rounded enclosures.
    Enclosure,
}

#[derive(Debug, Parser)]
#[command(name = "plshadow", version, about = "Shadowing analysis for piecewise-linear maps and shift spaces")]
pub struct Cli {
    /// Working precision in bits for enclosures (default from PLSHADOW_PRECISION, else 128).
    #[arg(long, global = true)]
    prec: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Enclosure)]
    mode: Mode,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide the linking property of the critical set.
    Linking {
        #[arg(long)]
        map: String,
        /// Comma-separated ε values tried when no exact certificate exists.
        #[arg(long, default_value = "1/10,1/100,1/1000")]
        ladder: String,
        #[arg(long, default_value_t = 30)]
        m_max: usize,
    },
    /// Exact set of points that ε-shadow a pseudo-orbit.
    ShadowSet {
        #[arg(long)]
        map: Option<String>,
        #[arg(long)]
        po: PathBuf,
        #[arg(long)]
        eps: String,
    },
    /// Dyadic estimate of a shadowing modulus δ(ε).
    Modulus {
        #[arg(long)]
        map: String,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 12)]
        len: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 16)]
        max_exponent: u32,
        #[arg(long)]
        seed: u64,
    },
    /// Trace an asymptotic pseudo-orbit and emit a certificate.
    SlimitTrace {
        #[arg(long)]
        map: String,
        #[arg(long, default_value = "1/10")]
        eps: String,
        /// Pseudo-orbit file; without it one is generated from `--x0` and `--seed`.
        #[arg(long)]
        po: Option<PathBuf>,
        #[arg(long, default_value = "1/3")]
        x0: String,
        #[arg(long, default_value_t = 60)]
        len: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a δ-chain between two points.
    Chain {
        #[arg(long)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        resolution: Option<String>,
        /// Work with the n-th iterate of the map.
        #[arg(long, default_value_t = 1)]
        power: usize,
        /// For `two-sided` maps, pick the smallest depth whose copies reach within δ/2 of 0.
        #[arg(long)]
        auto_depth: bool,
        /// Also follow this many random true orbits and count sign changes.
        #[arg(long, default_value_t = 0)]
        side_orbits: usize,
        #[arg(long, default_value_t = 1000)]
        side_steps: usize,
        #[arg(long, default_value_t = 8192)]
        max_prec: u32,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Diagonal shadowing in a subshift of finite type.
    SftShadow {
        /// SFT file with `alphabet:` and `forbidden:` lines.
        #[arg(long, conflicts_with = "ladder_k")]
        sft: Option<PathBuf>,
        /// Use `X_k` (no `1 0^l 1` for `l <= k`).
        #[arg(long)]
        ladder_k: Option<usize>,
        /// One sequence per line, e.g. `001(10)`.
        #[arg(long)]
        po: Option<PathBuf>,
        #[arg(long)]
        delta: Option<String>,
        /// Used to derive δ when `--delta` is absent.
        #[arg(long, default_value = "1/4")]
        eps: String,
        #[arg(long, default_value_t = 20)]
        len: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random shadowing runs, chain checks and ω-limits on the ladder system.
    LadderDemo {
        #[arg(long, default_value = "1/2,1/4,1/8")]
        eps: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 100)]
        len: usize,
        #[arg(long, default_value_t = 12)]
        chain_prefix: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Asymptotic pseudo-orbit of the oscillating circle map that no orbit traces.
    CircleDemo {
        #[arg(long, default_value = "1/10")]
        delta: String,
        #[arg(long, default_value_t = 200)]
        horizon: usize,
        #[arg(long, default_value_t = 200)]
        grid: usize,
    },
    /// ω-limit set of a ladder point such as `inf:0001(0)` or `1:(100)`.
    Omega {
        #[arg(long, required = true)]
        point: Vec<String>,
    },
    /// Re-check a certificate or pseudo-orbit file.
    Verify {
        file: PathBuf,
        /// Map used when the file names none.
        #[arg(long)]
        map: Option<String>,
    },
    /// Sampled graphs of the example maps as two-column text.
    FigureData {
        /// 1: golden tent, 2: nucleus and the glued map, 3: the three circle maps.
        #[arg(long, conflicts_with = "map")]
        figure: Option<u8>,
        #[arg(long)]
        map: Option<String>,
        #[arg(long, default_value_t = 400)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let prec = cli
        .prec
        .or_else(|| std::env::var(PRECISION_ENV).ok().and_then(|v| v.parse().ok()))
        .unwrap_or(128);
    plshadow::scalar::set_default_precision(prec);
    let name = format!("{:?}", cli.command).split([' ', '{']).next().unwrap_or("").to_lowercase();
    let start = Instant::now();
    let result = commands::run(&cli.command, cli.mode, prec);
    eprintln!("time_ms: {} ({name})", start.elapsed().as_millis());
    match result {
        Ok(report) => {
            print!("{}", report.render());
            ExitCode::from(report.exit_code())
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Inconclusive(msg)) => {
            print!("{}", Report::new().kv("verdict", "inconclusive").kv("reason", &msg).render());
            ExitCode::from(1)
        }
    }
}
