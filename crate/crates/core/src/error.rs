use thiserror::Error;

/// Everything that can go wrong in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid basis index {0}: indices start at 1")]
    InvalidIndex(i64),

    #[error("invalid truncation {0}: basis size must be even and at least 2")]
    InvalidTruncation(usize),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("invalid order {0}")]
    InvalidOrder(usize),

    #[error("insufficient basis for order {order}: need N >= {needed}, got {got}")]
    InsufficientBasis {
        order: usize,
        needed: usize,
        got: usize,
    },

    #[error("trial state is not normalized (mu_0 != 1)")]
    UnnormalizedTrialState,

    #[error("not enough moments: need {needed}, have {have}")]
    NotEnoughMoments { needed: usize, have: usize },

    #[error("degenerate correlation space at order {order}: Hankel matrix has rank {rank}")]
    DegenerateCorrelationSpace { order: usize, rank: usize },

    #[error("nested denominator vanishes at level {level}")]
    NestedDenominatorZero { level: usize },

    #[error("Krylov vectors linearly dependent at order {order} (rank {rank}, {digits} digits)")]
    KrylovDegeneracy {
        order: usize,
        rank: usize,
        digits: u32,
    },

    #[error("precision ceiling of {digits} digits exhausted at order {order}")]
    PrecisionExhausted { order: usize, digits: u32 },

    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag, used for CSV status columns and CLI error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidIndex(_) => "invalid-index",
            Error::InvalidTruncation(_) => "invalid-truncation",
            Error::InvalidParams(_) => "invalid-params",
            Error::InvalidOrder(_) => "invalid-order",
            Error::InsufficientBasis { .. } => "insufficient-basis",
            Error::UnnormalizedTrialState => "unnormalized-trial-state",
            Error::NotEnoughMoments { .. } => "not-enough-moments",
            Error::DegenerateCorrelationSpace { .. } => "degenerate-correlation-space",
            Error::NestedDenominatorZero { .. } => "nested-denominator-zero",
            Error::KrylovDegeneracy { .. } => "krylov-degeneracy",
            Error::PrecisionExhausted { .. } => "precision-exhausted",
            Error::NoConvergence { .. } => "no-convergence",
            Error::Parse(_) => "parse",
        }
    }

    /// True for failures of the numerics, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DegenerateCorrelationSpace { .. }
                | Error::NestedDenominatorZero { .. }
                | Error::KrylovDegeneracy { .. }
                | Error::PrecisionExhausted { .. }
                | Error::NoConvergence { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
