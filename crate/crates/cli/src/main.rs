mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use ncg_core::geometry::AlgebraTag;
use ncg_core::numerics::Tolerance;

use crate::error::CliError;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Draw a random geometry and write it as a geometry file.
    Sample,
    /// Check the spectral-triple axioms of a geometry file.
    Verify,
    /// Fluctuate the product Dirac operator by a one-form.
    Fluctuate,
    /// Sorted eigenvalues of the (fluctuated) product Dirac operator.
    Spectrum,
    /// Pfaffian fermion integral of the (fluctuated) product Dirac operator.
    Integrate,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algebra {
    #[value(name = "R", alias = "r")]
    R,
    #[value(name = "H", alias = "h")]
    H,
    #[value(name = "C", alias = "c")]
    C,
}

impl From<Algebra> for AlgebraTag {
    fn from(a: Algebra) -> Self {
        match a {
            Algebra::R => AlgebraTag::RealMat,
            Algebra::H => AlgebraTag::QuatMat,
            Algebra::C => AlgebraTag::ComplexMat,
        }
    }
}

/// Finite spectral triples: sampling, axiom checks, gauge fluctuations and
/// fermion integrals.
#[derive(Debug, Parser)]
#[command(name = "ncg", version)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Input geometry file; repeat for a batch run.
    #[arg(long = "geometry")]
    pub geometry: Vec<PathBuf>,
    /// One-form file with generator pairs.
    #[arg(long = "one-form")]
    pub one_form: Option<PathBuf>,
    /// Output file, or output directory for a batch run. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "R")]
    pub algebra: Algebra,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long = "tol-abs", default_value_t = Tolerance::DEFAULT_ABS)]
    pub tol_abs: f64,
    #[arg(long = "tol-rel", default_value_t = Tolerance::DEFAULT_REL)]
    pub tol_rel: f64,
    /// Worker threads for batch runs.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Overrides the symmetrization flag of the one-form file.
    #[arg(long, action = clap::ArgAction::Set)]
    pub symmetrize: Option<bool>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("NCG_LOG", "error")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("ncg: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl Cli {
    pub fn tolerance(&self) -> Result<Tolerance, CliError> {
        Tolerance::new(self.tol_abs, self.tol_rel).map_err(|e| CliError::Usage(e.to_string()))
    }
}
