//! Exact classification engine for pointed fusion categories `Vect(H, η)`
//! with `|H| = 8`: group cohomology, tensor-equivalence orbits, weak Morita
//! equivalence via abelian extensions, and twisted Drinfeld doubles.

// Index loops mirror the formulas over group elements and tuples.
#![allow(clippy::needless_range_loop, clippy::should_implement_trait)]

pub mod groups;
pub mod linalg;
pub mod module;
pub mod cohomology;
pub mod extension;
pub mod orbits;
pub mod morita;
pub mod doubles;
pub mod report;

use thiserror::Error;

/// Top-level error of the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] groups::GroupError),
    #[error(transparent)]
    Cohomology(#[from] cohomology::CohomologyError),
    #[error(transparent)]
    Extension(#[from] extension::ExtensionError),
    #[error(transparent)]
    Morita(#[from] morita::MoritaError),
    #[error(transparent)]
    Double(#[from] doubles::DoubleError),
    #[error("inconsistent report: {0}")]
    Report(String),
}

impl Error {
    /// Stable machine-readable kind, used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Group(_) => "group",
            Error::Cohomology(_) => "cohomology",
            Error::Extension(_) => "extension",
            Error::Morita(_) => "morita",
            Error::Double(_) => "double",
            Error::Report(_) => "report",
        }
    }
}
