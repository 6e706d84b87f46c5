use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} lies outside [0, 1]")]
    Domain { what: &'static str, value: f64 },

    #[error("{matrix}[{row}][{col}] = {value} lies outside [0, 1]")]
    InvalidEntry { matrix: &'static str, row: usize, col: usize, value: f64 },

    #[error("invalid parameter for {kind}: {reason}")]
    InvalidParameter { kind: String, reason: String },

    #[error("unknown t-norm `{0}`")]
    UnknownTNorm(String),

    #[error("unknown objective `{0}`")]
    UnknownObjective(String),

    #[error("a system needs at least one row and one column")]
    EmptySystem,

    #[error("the feasible region is empty")]
    Infeasible,

    #[error("operation requires a non-empty set")]
    EmptySet,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} exceeded the configured limit of {limit}")]
    ResourceLimit { what: &'static str, limit: u64 },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_unit(what: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain { what, value })
    }
}
