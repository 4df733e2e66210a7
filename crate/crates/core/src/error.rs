use thiserror::Error;

use crate::evolve::Picture;
use crate::states::Realization;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("structural mismatch: {0}")]
    Structural(String),

    #[error("expected a field in the {expected:?} realization, got {found:?}")]
    Realization {
        expected: Realization,
        found: Realization,
    },

    #[error("field is in the {found:?} picture but the operation needs {expected:?}")]
    Picture { expected: Picture, found: Picture },

    #[error("field is not normalized (squared norm {0:.3e}); pass an explicit override")]
    NotNormalized(f64),

    #[error("frequency split is ill-conditioned: |sin(omega*dt)| = {sin:.3e} at a populated mode")]
    IllConditionedSplit { sin: f64 },

    #[error("operator composition is not representable as a matrix with a conjugation mask")]
    NonRepresentable,

    #[error("packet violates the {rule} rule: tail fraction {fraction:.3e} exceeds {limit:.0e}")]
    TailRule {
        rule: &'static str,
        fraction: f64,
        limit: f64,
    },

    #[error("invalid config field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("at least {needed} {what} required, got {got}")]
    TooFew {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
