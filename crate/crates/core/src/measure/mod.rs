//! POVMs, the Lüders update and success probabilities, plus the measurement
//! families of the two-stage classification protocol.

mod disturb;
mod mirror;
mod povms;

pub use disturb::{
    disturbed_ensemble, disturbed_ensemble_closed_form, disturbed_ensemble_luders, lift_first_two, DisturbedEnsemble,
    DisturbedEntry,
};
pub use mirror::{grid_search_a, mirror_geometry, mirror_povm, second_povm, AGridSearch, MirrorGeometry};
pub use povms::{
    antisymmetric_projector, optimal_three_qubit_povm, optimal_two_qubit_povm, symmetric_projector, weak_two_qubit_povm,
};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator};
use crate::scalar::Scalar;
use crate::states::{Basis, DensityOperator};

#[derive(Clone, Debug, PartialEq)]
pub struct PovmElement<T: Scalar> {
    pub label: String,
    pub op: HermitianOperator<T>,
}

/// Labelled positive operators summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm<T: Scalar> {
    basis: Basis,
    elements: Vec<PovmElement<T>>,
}

impl<T: Scalar> Povm<T> {
    /// Validated constructor: every element PSD and the sum equal to the
    /// identity, both within [`Scalar::STRUCTURAL_TOL`].
    pub fn new(basis: Basis, elements: Vec<PovmElement<T>>) -> Result<Self> {
        let povm = Self::unchecked(basis, elements)?;
        let report = validate_povm(&povm)?;
        if !report.passed {
            return Err(Error::InvalidPovm(format!(
                "min eigenvalues {:?}, completeness residual {:e}",
                report.min_eigenvalues, report.completeness_residual
            )));
        }
        Ok(povm)
    }

    /// Skips positivity and completeness checks; dimensions must still agree.
    pub fn unchecked(basis: Basis, elements: Vec<PovmElement<T>>) -> Result<Self> {
        let dim = elements.first().map(|e| e.op.dim()).ok_or_else(|| Error::InvalidPovm("no elements".into()))?;
        if elements.iter().any(|e| e.op.dim() != dim) {
            return Err(Error::Dimension("POVM elements of different sizes".into()));
        }
        Ok(Self { basis, elements })
    }

    pub fn from_matrices(basis: Basis, items: Vec<(&str, ComplexMatrix<T>)>) -> Result<Self> {
        let elements = items
            .into_iter()
            .map(|(label, m)| Ok(PovmElement { label: label.to_string(), op: HermitianOperator::new(m)? }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(basis, elements)
    }

    pub fn dim(&self) -> usize {
        self.elements[0].op.dim()
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn elements(&self) -> &[PovmElement<T>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, label: &str) -> Option<&HermitianOperator<T>> {
        self.elements.iter().find(|e| e.label == label).map(|e| &e.op)
    }

    pub fn to_basis(&self, target: Basis) -> Result<Self> {
        if target == self.basis {
            return Ok(self.clone());
        }
        let n = self.dim().trailing_zeros() as usize;
        let t = crate::schur::schur_transform::<T>(n)?;
        let elements = self
            .elements
            .iter()
            .map(|e| {
                let m = match target {
                    Basis::Schur => t.to_schur(e.op.matrix()),
                    Basis::Computational => t.to_computational(e.op.matrix()),
                };
                PovmElement { label: e.label.clone(), op: HermitianOperator::from_matrix_symmetrized(m) }
            })
            .collect();
        Ok(Self { basis: target, elements })
    }
}

/// Outcome of [`validate_povm`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PovmReport {
    pub min_eigenvalues: Vec<f64>,
    pub completeness_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Positivity of every element and `‖Σπᵢ − I‖_max`.
pub fn validate_povm<T: Scalar>(povm: &Povm<T>) -> Result<PovmReport> {
    let dim = povm.dim();
    let mut sum = ComplexMatrix::zeros(dim, dim);
    let mut min_eigenvalues = Vec::with_capacity(povm.len());
    for e in &povm.elements {
        min_eigenvalues.push(e.op.min_eigenvalue()?.as_f64());
        sum = &sum + e.op.matrix();
    }
    let completeness_residual = sum.max_abs_diff(&ComplexMatrix::identity(dim)).as_f64();
    let tolerance = T::STRUCTURAL_TOL;
    let passed = completeness_residual <= tolerance && min_eigenvalues.iter().all(|&l| l >= -tolerance);
    Ok(PovmReport { min_eigenvalues, completeness_residual, tolerance, passed })
}

/// Result of a Lüders update. A branch with vanishing probability leaves
/// nothing to normalise and is represented explicitly.
#[derive(Clone, Debug, PartialEq)]
pub enum UpdatedState<T: Scalar> {
    State(DensityOperator<T>),
    Annihilated { dim: usize, basis: Basis },
}

impl<T: Scalar> UpdatedState<T> {
    pub fn state(&self) -> Option<&DensityOperator<T>> {
        match self {
            UpdatedState::State(s) => Some(s),
            UpdatedState::Annihilated { .. } => None,
        }
    }

    pub fn is_annihilated(&self) -> bool {
        matches!(self, UpdatedState::Annihilated { .. })
    }

    /// The normalised matrix, or the zero operator.
    pub fn matrix_or_zero(&self) -> ComplexMatrix<T> {
        match self {
            UpdatedState::State(s) => s.matrix().clone(),
            UpdatedState::Annihilated { dim, .. } => ComplexMatrix::zeros(*dim, *dim),
        }
    }
}

/// `ρ → √π ρ √π / Tr(πρ)` together with `Tr(πρ)`.
///
/// The element and the state must be expressed in the same basis.
pub fn luders_update<T: Scalar>(
    rho: &DensityOperator<T>,
    element: &HermitianOperator<T>,
) -> Result<(UpdatedState<T>, T)> {
    if element.dim() != rho.dim() {
        return Err(Error::Dimension(format!("element {} vs state {}", element.dim(), rho.dim())));
    }
    let root = element.sqrt_psd(T::structural_tol())?;
    kraus_update(rho, root.matrix())
}

/// `ρ → KρK† / Tr(KρK†)` together with `Tr(KρK†)`.
pub fn kraus_update<T: Scalar>(rho: &DensityOperator<T>, kraus: &ComplexMatrix<T>) -> Result<(UpdatedState<T>, T)> {
    if kraus.cols() != rho.dim() || kraus.rows() != rho.dim() {
        return Err(Error::Dimension(format!("operator {}x{} vs state {}", kraus.rows(), kraus.cols(), rho.dim())));
    }
    let updated = &(kraus * rho.matrix()) * &kraus.adjoint();
    let probability = updated.trace()?.re.max(T::zero());
    if probability <= T::lit(T::ZERO_PROBABILITY) {
        return Ok((UpdatedState::Annihilated { dim: rho.dim(), basis: rho.basis() }, T::zero()));
    }
    let normalised = HermitianOperator::from_matrix_symmetrized(updated.scale(T::one() / probability));
    Ok((UpdatedState::State(DensityOperator::new(normalised, rho.basis())?), probability))
}

/// `Σᵢ pᵢ Tr(πᵢ ρᵢ)` with the i-th element paired with the i-th state.
pub fn success_probability<T: Scalar>(povm: &Povm<T>, ensemble: &[(DensityOperator<T>, T)]) -> Result<T> {
    if povm.len() != ensemble.len() {
        return Err(Error::LengthMismatch { povm: povm.len(), ensemble: ensemble.len() });
    }
    let mut total = T::zero();
    for (e, (rho, prior)) in povm.elements.iter().zip(ensemble) {
        rho.require_basis(povm.basis)?;
        total = total + *prior * e.op.matrix().trace_product(rho.matrix()).re;
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FirstOutcome {
    Plus,
    Minus,
}

impl FirstOutcome {
    pub const BOTH: [FirstOutcome; 2] = [FirstOutcome::Plus, FirstOutcome::Minus];

    pub fn as_str(self) -> &'static str {
        match self {
            FirstOutcome::Plus => "plus",
            FirstOutcome::Minus => "minus",
        }
    }
}

impl fmt::Display for FirstOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FirstOutcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plus" | "+" => Ok(FirstOutcome::Plus),
            "minus" | "-" => Ok(FirstOutcome::Minus),
            _ => Err(Error::InvalidLabel(s.to_string())),
        }
    }
}

/// Strength of the intermediate two-qubit measurement.
///
/// `β ∈ [0, 1]` and `α ∈ [0, 1 − β]`, with bounds enforced up to
/// [`Scalar::STRUCTURAL_TOL`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeakParams<T> {
    pub alpha: T,
    pub beta: T,
}

impl<T: Scalar> WeakParams<T> {
    pub fn new(alpha: T, beta: T) -> Result<Self> {
        let tol = T::structural_tol();
        let err = |bound| Error::InvalidWeakParams { alpha: alpha.as_f64(), beta: beta.as_f64(), bound };
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(err("parameters must be finite"));
        }
        if beta < -tol || beta > T::one() + tol {
            return Err(err("beta must lie in [0, 1]"));
        }
        if alpha < -tol {
            return Err(err("alpha must be non-negative"));
        }
        if alpha > T::one() - beta + tol {
            return Err(err("alpha must not exceed 1 - beta"));
        }
        Ok(Self { alpha, beta })
    }

    /// Coefficients `(x, y)` with the outcome's element equal to `x·P₋ + y·I`.
    /// Minus is `(α, β)`; Plus follows from the swap `α → −α`, `β → 1 − β`.
    pub fn branch(&self, outcome: FirstOutcome) -> BranchForm<T> {
        match outcome {
            FirstOutcome::Minus => BranchForm { projector: self.alpha, identity: self.beta },
            FirstOutcome::Plus => BranchForm { projector: -self.alpha, identity: T::one() - self.beta },
        }
    }
}

/// A two-qubit element written as `projector·P₋ + identity·I`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchForm<T> {
    pub projector: T,
    pub identity: T,
}

impl<T: Scalar> BranchForm<T> {
    /// The element in the two-qubit Schur basis.
    pub fn element(&self) -> ComplexMatrix<T> {
        let y = self.identity;
        ComplexMatrix::diagonal(&[y, y, y, self.projector + y])
    }

    /// Probability of this outcome with uniform hypotheses: `(x + 8y)/8`.
    pub fn outcome_probability(&self) -> T {
        (self.projector + T::lit(8.0) * self.identity) / T::lit(8.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{analytic_state, Hypothesis};

    fn pm_povm() -> Povm<f64> {
        optimal_two_qubit_povm()
    }

    #[test]
    fn projective_pair_passes() {
        let r = validate_povm(&pm_povm()).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.completeness_residual <= 1e-12);
    }

    #[test]
    fn weak_family_midpoint_passes() {
        let p = weak_two_qubit_povm(WeakParams::new(0.5, 0.25).unwrap()).unwrap();
        let r = validate_povm(&p).unwrap();
        assert!(r.passed);
        // π₊ = ½P₊ + ¼I has spectrum {3/4, 1/4}; π₋ = ½P₋ + ¼I has {1/4, 3/4}
        assert!((r.min_eigenvalues[0] - 0.25).abs() < 1e-14);
        assert!((r.min_eigenvalues[1] - 0.25).abs() < 1e-14);
    }

    #[test]
    fn doubled_identity_fails() {
        let i = HermitianOperator::<f64>::identity(4);
        let p = Povm::unchecked(
            Basis::Schur,
            vec![PovmElement { label: "a".into(), op: i.clone() }, PovmElement { label: "b".into(), op: i }],
        )
        .unwrap();
        let r = validate_povm(&p).unwrap();
        assert!(!r.passed);
        assert_eq!(r.completeness_residual, 1.0);
        assert!(Povm::new(p.basis(), p.elements().to_vec()).is_err());
    }

    #[test]
    fn luders_on_supported_state_is_identity() {
        let rho = analytic_state::<f64>(Hypothesis::H00);
        let (upd, prob) = luders_update(&rho, pm_povm().element("plus").unwrap()).unwrap();
        assert!((prob - 1.0).abs() < 1e-14);
        assert!(upd.state().unwrap().matrix().approx_eq(rho.matrix(), 1e-14));
    }

    #[test]
    fn luders_annihilates_symmetric_state() {
        let rho = analytic_state::<f64>(Hypothesis::H000);
        let minus = lift_first_two(&antisymmetric_projector::<f64>()).unwrap();
        let (upd, prob) = luders_update(&rho, &HermitianOperator::new(minus).unwrap()).unwrap();
        assert_eq!(prob, 0.0);
        assert!(upd.is_annihilated());
        assert_eq!(upd.matrix_or_zero().max_abs(), 0.0);
    }

    #[test]
    fn luders_identity_measurement() {
        for &h in &Hypothesis::THREE_QUBIT {
            let rho = analytic_state::<f64>(h);
            let (upd, prob) = luders_update(&rho, &HermitianOperator::identity(8)).unwrap();
            assert!((prob - 1.0).abs() < 1e-14);
            assert!(upd.state().unwrap().matrix().approx_eq(rho.matrix(), 1e-14));
        }
    }

    #[test]
    fn luders_rejects_non_psd_element() {
        let rho = analytic_state::<f64>(Hypothesis::H01);
        let bad = HermitianOperator::new(ComplexMatrix::diagonal(&[1.0, 1.0, 1.0, -0.5])).unwrap();
        assert!(matches!(luders_update(&rho, &bad), Err(Error::NotPositiveSemidefinite { .. })));
    }

    #[test]
    fn two_qubit_optimum_is_five_eighths() {
        let ens = [(analytic_state::<f64>(Hypothesis::H00), 0.5), (analytic_state(Hypothesis::H01), 0.5)];
        let p = success_probability(&pm_povm(), &ens).unwrap();
        assert!((p - 5.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn three_qubit_optimum_is_five_twelfths() {
        let ens: Vec<_> = Hypothesis::THREE_QUBIT.iter().map(|&h| (analytic_state::<f64>(h), 0.25)).collect();
        let p = success_probability(&optimal_three_qubit_povm(), &ens).unwrap();
        assert!((p - 5.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_guess_gives_one_over_k() {
        let k = 4;
        let el = HermitianOperator::<f64>::identity(8).scale(1.0 / k as f64);
        let povm =
            Povm::new(Basis::Schur, (0..k).map(|i| PovmElement { label: i.to_string(), op: el.clone() }).collect())
                .unwrap();
        let ens: Vec<_> = Hypothesis::THREE_QUBIT.iter().map(|&h| (analytic_state::<f64>(h), 0.25)).collect();
        assert!((success_probability(&povm, &ens).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn success_probability_checks_lengths_and_basis() {
        let ens = [(analytic_state::<f64>(Hypothesis::H00), 1.0)];
        assert_eq!(success_probability(&pm_povm(), &ens).unwrap_err(), Error::LengthMismatch { povm: 2, ensemble: 1 });
        let comp = analytic_state::<f64>(Hypothesis::H00).to_basis(Basis::Computational).unwrap();
        let ens = [(comp.clone(), 0.5), (comp, 0.5)];
        assert!(matches!(success_probability(&pm_povm(), &ens), Err(Error::BasisMismatch { .. })));
    }

    #[test]
    fn weak_params_bounds() {
        assert!(WeakParams::new(0.5, 0.5).is_ok());
        assert!(WeakParams::new(0.6, 0.5).is_err());
        assert!(WeakParams::new(-0.1, 0.5).is_err());
        assert!(WeakParams::new(0.0, 1.1).is_err());
        assert!(WeakParams::new(f64::NAN, 0.1).is_err());
    }

    #[test]
    fn branch_form_matches_weak_elements() {
        let params = WeakParams::new(0.3, 0.2).unwrap();
        let povm = weak_two_qubit_povm(params).unwrap();
        for (outcome, label) in [(FirstOutcome::Plus, "plus"), (FirstOutcome::Minus, "minus")] {
            let direct = povm.element(label).unwrap().matrix();
            assert!(params.branch(outcome).element().approx_eq(direct, 1e-15));
        }
    }
}
