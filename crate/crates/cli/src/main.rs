//! `modulikit`: JSON in, deterministic JSON report out.
//!
//! Exit status is 0 on success, 1 on a definite negative answer (covariance
//! violated, not pure, not hermitian, distinct orbits, failed selftest) and
//! 2 on bad input or usage.

mod commands;
mod report;
mod schema;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use modulikit_core::quiver::MomentConvention;
use modulikit_core::DEFAULT_TOL;

#[derive(Debug, Parser)]
#[command(name = "modulikit", version, about = "Invariant connections, chain quivers and Jordan triples")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Relative tolerance for numerical comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL, value_parser = positive_float)]
    pub tol: f64,

    /// Longest cycle considered; defaults to min(N², 12) for total dimension N.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_len: Option<u64>,

    /// Arrow range of the moment map.
    #[arg(long, global = true, value_enum, default_value_t = Convention::Paper)]
    pub convention: Convention,

    #[arg(long, global = true, env = "MODULIKIT_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Input JSON file (`-` for stdin); repeat for commands taking two.
    #[arg(long, global = true)]
    pub input: Vec<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weight blocks, chains and centralizer dimension of a weight vector.
    Decompose,
    /// Covariance of a connection, or of a frame tuple with weights/witnesses.
    Validate {
        /// Torus points sampled on top of the exact pattern check.
        #[arg(long, default_value_t = 32)]
        samples: usize,
    },
    /// Commutator test on a frame tuple.
    Pure,
    /// Apply (A, B) ↦ (−B†, −A†).
    Involute,
    /// Is B = −A†?
    Hermitian,
    /// Conjugate a connection by a centralizer element: --input conn --input h.
    Gauge,
    /// Traces of all cycles up to --max-len.
    Invariants,
    /// Compare two representations by their traces: --input r1 --input r2.
    Equiv,
    /// Moment map of a doubled-quiver representation.
    Moment,
    /// Singular values and frame of a p×q matrix.
    JordanSpectral,
    /// Run the randomized property suite.
    Selftest {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        max_dim: u64,
        /// Plant a known defect to check that the suite notices.
        #[arg(long, value_enum)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Convention {
    Paper,
    Standard,
}

impl From<Convention> for MomentConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Paper => MomentConvention::Paper,
            Convention::Standard => MomentConvention::Standard,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FaultArg {
    InvolutionSign,
}

fn positive_float(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("must be a positive finite number, got {s}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(&outcome.report.to_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(2);
            }
            eprintln!("{}", outcome.summary);
            ExitCode::from(if outcome.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
