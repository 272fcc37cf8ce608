//! Command-line front end: `functional`, `sample`, `verify` and `spectrum`.
//!
//! Exit status is 0 on success, 1 when a computation or verification fails,
//! and 2 for usage or configuration errors.

pub mod commands;
pub mod model;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use eigenmoduli_core::Tolerances;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input files.
    #[error("{0}")]
    Usage(String),
    /// A check or computation ran and failed.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Usage(format!("csv error: {e}"))
    }
}

impl From<eigenmoduli_core::CoreError> for CliError {
    fn from(e: eigenmoduli_core::CoreError) -> Self {
        CliError::Failed(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "eigenmoduli", version, about = "Exact eigenstate relations and their numerical checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eliminate the wavefunction and write the relation f(ρ) = 0.
    Functional(FunctionalArgs),
    /// Sample the moduli cloud, eigen-branch points and (for dimers) boundary traces.
    Sample(SampleArgs),
    /// Run the numerical checks and write a verification report.
    Verify(VerifyArgs),
    /// Print the spectrum of Ĥ(λ).
    Spectrum(SpectrumArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Model file (JSON or TOML).
    #[arg(long)]
    pub model: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FunctionalArgs {
    #[command(flatten)]
    pub common: Common,
    /// Bound on elementary reduction steps in the Gröbner computation.
    #[arg(long, default_value_t = eigenmoduli_poly::DEFAULT_STEP_BUDGET)]
    pub budget: u64,
    /// Keep √-amplitudes as radical symbols instead of rescaling bosonic models.
    #[arg(long)]
    pub radical_symbols: bool,
}

/// `COUNT:RANGE` — `COUNT` parameter vectors `(1, u₂, …, u_M)` with `u_i`
/// uniform in `[−RANGE, RANGE]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaGrid {
    pub count: usize,
    pub range: f64,
}

impl std::str::FromStr for LambdaGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (c, r) = s
            .split_once(':')
            .ok_or_else(|| format!("expected COUNT:RANGE, got {s:?}"))?;
        let count: usize = c.trim().parse().map_err(|e| format!("grid count: {e}"))?;
        let range: f64 = r.trim().parse().map_err(|e| format!("grid range: {e}"))?;
        if count == 0 {
            return Err("grid count must be positive".into());
        }
        if !range.is_finite() || range < 0.0 {
            return Err("grid range must be finite and non-negative".into());
        }
        Ok(LambdaGrid { count, range })
    }
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    /// Seed for random states and parameter draws.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random states.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Parameter grid as COUNT:RANGE.
    #[arg(long, default_value = "100:5")]
    pub lambda_grid: LambdaGrid,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Points per branch in the boundary sweep (two-site lattice models only).
    #[arg(long, default_value_t = 2000)]
    pub trace_points: usize,
}

#[derive(Debug, Args)]
pub struct ToleranceArgs {
    #[arg(long)]
    pub tol_variety: Option<f64>,
    #[arg(long)]
    pub tol_separation: Option<f64>,
    #[arg(long)]
    pub tol_separation_fraction: Option<f64>,
    #[arg(long)]
    pub tol_normal_vector: Option<f64>,
    #[arg(long)]
    pub tol_singular_gradient: Option<f64>,
    #[arg(long)]
    pub tol_variational_bound: Option<f64>,
    #[arg(long)]
    pub tol_uncertainty_eigen: Option<f64>,
    #[arg(long)]
    pub tol_uncertainty_bound: Option<f64>,
    #[arg(long)]
    pub tol_uncertainty_saturation: Option<f64>,
    #[arg(long)]
    pub tol_cokernel: Option<f64>,
}

impl ToleranceArgs {
    pub fn resolve(&self) -> Result<Tolerances, CliError> {
        let mut t = Tolerances::default();
        let slots: [(&str, Option<f64>, &mut f64); 10] = [
            ("variety", self.tol_variety, &mut t.variety),
            ("separation", self.tol_separation, &mut t.separation),
            ("separation-fraction", self.tol_separation_fraction, &mut t.separation_fraction),
            ("normal-vector", self.tol_normal_vector, &mut t.normal_vector),
            ("singular-gradient", self.tol_singular_gradient, &mut t.singular_gradient),
            ("variational-bound", self.tol_variational_bound, &mut t.variational_bound),
            ("uncertainty-eigen", self.tol_uncertainty_eigen, &mut t.uncertainty_eigen),
            ("uncertainty-bound", self.tol_uncertainty_bound, &mut t.uncertainty_bound),
            ("uncertainty-saturation", self.tol_uncertainty_saturation, &mut t.uncertainty_saturation),
            ("cokernel", self.tol_cokernel, &mut t.cokernel),
        ];
        for (name, value, slot) in slots {
            if let Some(v) = value {
                if !v.is_finite() || v < 0.0 {
                    return Err(CliError::Usage(format!("--tol-{name} must be finite and non-negative")));
                }
                *slot = v;
            }
        }
        Ok(t)
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Functional document; defaults to OUT/functional.json.
    #[arg(long)]
    pub functional: Option<PathBuf>,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Model file (JSON or TOML).
    #[arg(long)]
    pub model: PathBuf,
    /// Comma-separated parameters, each a decimal or p/q.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    /// Also write spectrum.json into this directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses arguments, runs the command and returns the process exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match commands::run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
