use thiserror::Error;

use crate::opalgebra::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A forward difference of order `needed - 1` was requested from a table
    /// holding only `available` samples.
    #[error("function table too short: need {needed} samples, have {available}")]
    TableTooShort { needed: usize, available: usize },

    #[error("function table must hold at least one sample")]
    EmptyTable,

    #[error(transparent)]
    Parse(#[from] ParseError),

    /// The state's support shifted by the largest raising power leaves the
    /// truncated Fock basis.
    #[error(
        "truncation violation: state support {support} + shift {shift} does not fit dimension {dim}"
    )]
    TruncationViolation {
        support: usize,
        shift: usize,
        dim: usize,
    },

    #[error("Fock state |{n}> does not exist in a space of dimension {dim}")]
    FockIndexOutOfRange { n: usize, dim: usize },

    #[error("Fock space dimension must be positive")]
    ZeroDimension,
}
