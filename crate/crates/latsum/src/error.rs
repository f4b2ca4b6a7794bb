//! Error type shared by every module of the crate.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid lattice shape tau = {0}: Im(tau) must be strictly positive")]
    InvalidTau(Complex64),
    #[error("invalid lattice scale a = {0}: must be strictly positive and finite")]
    InvalidScale(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("divergent sum: {0}")]
    Divergent(String),
    #[error("no tabulated value: {0}")]
    NotTabulated(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A point set without inversion symmetry about the origin was asked for
    /// a closed-form evaluation.
    #[error("not origin-centred: {0}")]
    NotOriginCentred(String),
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("tau reduction did not terminate within {0} moves")]
    ReductionLimit(usize),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("series did not converge: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
