//! Command-line front end for `geninv`: reads JSON matrix files, computes and
//! verifies generalized inverses, dumps decompositions and traces numeric
//! limits.
//!
//! Every command produces one JSON document. Exit codes: 0 when all checks
//! pass, 2 when verification fails or a numeric limit does not converge, 1 on
//! any other error (reported as `{"error": {"code", "message"}}` on stderr).

pub mod commands;
pub mod error;
pub mod matrix_file;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use geninv::inverses::{InverseKind, MethodKind};
use geninv::limits::{LambdaSchedule, Side, Theorem};

pub use error::{CliError, CliResult};
pub use matrix_file::MatrixFile;

/// Environment variable overriding the float verification tolerance base.
pub const TOL_ENV: &str = "GENINV_DEFAULT_TOL";

#[derive(Debug, Parser)]
#[command(
    name = "geninv",
    version,
    about = "Generalized inverses in exact and float arithmetic"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute an inverse and verify it against its defining equations.
    Compute(ComputeArgs),
    /// Dump the index, a full-rank pair, the full-rank chain or the core-EP decomposition.
    Decompose(DecomposeArgs),
    /// Print the index and rank of a square matrix.
    Index(IoArgs),
    /// Check a candidate matrix against the definition of an inverse.
    Verify(VerifyArgs),
    /// Trace a numeric limit along the λ schedule.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct IoArgs {
    /// Matrix file (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Report destination; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ScheduleArgs {
    #[arg(long, default_value_t = LambdaSchedule::default().lambda0)]
    pub lambda0: f64,
    #[arg(long, default_value_t = LambdaSchedule::default().ratio)]
    pub ratio: f64,
    #[arg(long, default_value_t = LambdaSchedule::default().max_steps)]
    pub steps: usize,
    #[arg(long, default_value_t = LambdaSchedule::default().tol)]
    pub tol: f64,
}

impl ScheduleArgs {
    pub fn schedule(&self) -> LambdaSchedule {
        LambdaSchedule {
            lambda0: self.lambda0,
            ratio: self.ratio,
            max_steps: self.steps,
            tol: self.tol,
        }
    }
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub io: IoArgs,
    /// mp, group, drazin, core, dual-core, core-ep or dual-core-ep.
    #[arg(long)]
    pub inverse: InverseKind,
    /// chain, power, drazin-projector, limit-numeric or limit-exact.
    #[arg(long)]
    pub method: MethodKind,
    /// Limit formula for limit methods: t31, t41 or t43.
    #[arg(long)]
    pub formula: Option<Theorem>,
    /// Side of the shifted factor for limit methods: left or right.
    #[arg(long)]
    pub side: Option<Side>,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    /// Power m for the drazin-projector method.
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecomposeKind {
    Index,
    FullRank,
    Chain,
    CoreEpDecomp,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[arg(long, value_enum)]
    pub kind: DecomposeKind,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub io: IoArgs,
    /// Candidate inverse (JSON matrix file).
    #[arg(long)]
    pub candidate: PathBuf,
    #[arg(long)]
    pub inverse: InverseKind,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub io: IoArgs,
    /// t31, t41, t43 or mp.
    #[arg(long)]
    pub formula: Theorem,
    #[arg(long)]
    pub side: Option<Side>,
    /// Target inverse for t31/t41/t43 (default core-ep).
    #[arg(long)]
    pub inverse: Option<InverseKind>,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
}
