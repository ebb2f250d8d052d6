use std::path::PathBuf;

use ncg_core::fermion::FermionError;
use ncg_core::fluctuations::FluctuationError;
use ncg_core::geometry::GeometryError;
use ncg_core::io::FormatError;
use ncg_core::numerics::NumericsError;
use ncg_core::product::ProductError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Fluctuation(#[from] FluctuationError),
    #[error(transparent)]
    Fermion(#[from] FermionError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) | Self::Format { .. } | Self::Io { .. } | Self::Geometry(_) => 2,
            Self::Product(e) | Self::Fluctuation(FluctuationError::Product(e)) => product_code(e),
            Self::Fluctuation(FluctuationError::EmptyGenerators | FluctuationError::NonHermitianOneForm { .. }) => 2,
            Self::Fluctuation(_) | Self::Fermion(_) | Self::Numerics(_) => 3,
        }
    }
}

/// Errors that reflect bad input rather than a numerical breakdown.
fn product_code(e: &ProductError) -> u8 {
    match e {
        ProductError::UnsupportedAlgebra(_) | ProductError::DimensionMismatch { .. } | ProductError::Geometry(_) => 2,
        ProductError::NotUnitary { .. } | ProductError::NotLieAlgebraElement(_) => 3,
    }
}
