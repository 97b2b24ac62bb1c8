//! Exact-arithmetic divisor-cone geometry for declared surface models and
//! abstract model graphs: Zariski decompositions, minimal model runs with
//! scaling, and chamber decompositions of boundary-divisor polytopes.
//!
//! All core computation is exact rational; floating point only appears when
//! rendering SVG pictures.

pub mod chambers;
pub mod document;
pub mod gallery;
pub mod lp;
pub mod mmp;
pub mod polyhedra;
pub mod ratlin;
pub mod surface;
pub mod svg;

use thiserror::Error as ThisError;

/// Crate-wide error type. `exit_code` groups errors the way the CLI reports
/// them: validation problems (2) versus mathematical refusals (3).
#[derive(Debug, ThisError)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not symmetric")]
    AsymmetricMatrix,
    #[error("not pseudo-effective")]
    NotPseudoEffective,
    #[error("inconsistent surface data: {0}")]
    InconsistentSurfaceData(String),
    #[error("incomplete curve data: nef check requires a complete curve list")]
    IncompleteCurveData,
    #[error("not contractible (fiber-type ray): {0}")]
    NotContractible(String),
    #[error("curve {0} has no divisor class")]
    MissingDivisorClass(String),
    #[error("class is not ample: {0}")]
    NotAmple(String),
    #[error("observation point inside cone")]
    ObservationPointInsideCone,
    #[error("degenerate apex placement")]
    DegenerateApex,
    #[error("region meets accumulation locus; enumeration infinite")]
    AccumulationLocus,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no path in declared model graph: {0}")]
    NoPath(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("validation failed:\n{}", format_issues(.0))]
    Validation(Vec<Issue>),
}

/// One validation problem with the document path it was found at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub path: String,
    pub message: String,
}

fn format_issues(issues: &[Issue]) -> String {
    issues
        .iter()
        .map(|i| format!("  {}: {}", i.path, i.message))
        .collect::<Vec<_>>()
        .join("\n")
}

impl Error {
    pub fn dimension(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    /// CLI exit code contract: 2 = validation error, 3 = mathematical refusal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Dimension(_) | Error::AsymmetricMatrix => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
