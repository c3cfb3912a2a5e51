//! Sequential unsupervised classification of qubits.
//!
//! Three-qubit strings built from two unknown pure states are classified
//! twice: first a tunable two-qubit measurement on the first pair, then a
//! three-qubit measurement on the disturbed state. The crate provides the
//! Haar-averaged states in the Schur basis, the measurement families, the
//! Lüders disturbance, closed-form and brute-force success rates, and a
//! Monte Carlo trajectory simulator that checks all of them independently.
//!
//! Numeric code is generic over [`Scalar`] (`f64` or `f32`). The aliases at
//! the crate root fix the reference precision.

pub mod error;
pub mod export;
pub mod linalg;
pub mod measure;
pub mod scalar;
pub mod schur;
pub mod simulate;
pub mod states;
pub mod tradeoff;

pub use error::{Error, Result};
pub use linalg::{hermitian_eigendecomposition, psd_sqrt, tensor, trace, ComplexMatrix, Eigh, HermitianOperator};
pub use measure::{
    disturbed_ensemble, grid_search_a, luders_update, mirror_geometry, optimal_three_qubit_povm,
    optimal_two_qubit_povm, second_povm, success_probability, validate_povm, weak_two_qubit_povm, DisturbedEnsemble,
    FirstOutcome, MirrorGeometry, Povm, PovmReport, UpdatedState, WeakParams,
};
pub use scalar::{Scalar, C};
pub use schur::{permutation_operator, schur_transform, Permutation, SchurLabel, SchurTransform};
pub use simulate::{estimate_curve, run_trajectories, RunSummary, Trajectory};
pub use states::{analytic_state, monte_carlo_state, Basis, DensityOperator, Hypothesis, PureQubit};
pub use tradeoff::{
    optimize_beta, p_first, p_second_closed, p_second_general, path_components, sweep, tradeoff_curve, CaseRegion,
    TradeoffPoint,
};

/// Reference precision.
pub type Real = f64;
pub type Complex64 = C<f64>;
pub type Matrix = ComplexMatrix<f64>;
pub type Hermitian = HermitianOperator<f64>;
pub type Density = DensityOperator<f64>;
pub type Measurement = Povm<f64>;
pub type Weak = WeakParams<f64>;

/// Single precision, for smoke tests and low-cost sweeps.
pub type Matrix32 = ComplexMatrix<f32>;
pub type Hermitian32 = HermitianOperator<f32>;
pub type Density32 = DensityOperator<f32>;
pub type Measurement32 = Povm<f32>;
pub type Weak32 = WeakParams<f32>;
