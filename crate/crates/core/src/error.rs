use thiserror::Error;

use crate::measure::FirstOutcome;
use crate::states::Basis;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (max |A - A^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("Hermitian eigendecomposition did not converge (off-diagonal norm {residual:e})")]
    NoConvergence { residual: f64 },

    #[error("operator is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("unsupported number of qubits: {0} (only 2 and 3 are supported)")]
    UnsupportedQubits(usize),

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("invalid hypothesis label {0:?}")]
    InvalidLabel(String),

    #[error("invalid density operator: {0}")]
    InvalidState(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("basis mismatch: expected {expected:?}, found {found:?}")]
    BasisMismatch { expected: Basis, found: Basis },

    #[error("invalid weak-measurement parameters (alpha={alpha}, beta={beta}): {bound}")]
    InvalidWeakParams { alpha: f64, beta: f64, bound: &'static str },

    #[error("first outcome {outcome:?} has zero probability at alpha={alpha}, beta={beta}")]
    ImpossibleOutcome { outcome: FirstOutcome, alpha: f64, beta: f64 },

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("{name} = {value} is outside {range}")]
    OutOfRange { name: &'static str, value: f64, range: &'static str },

    #[error("POVM has {povm} elements but the ensemble has {ensemble} states")]
    LengthMismatch { povm: usize, ensemble: usize },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
