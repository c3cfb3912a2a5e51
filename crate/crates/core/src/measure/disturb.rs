use crate::error::{Error, Result};
use crate::linalg::{tensor, ComplexMatrix, HermitianOperator};
use crate::scalar::Scalar;
use crate::schur::{schur_transform, spin_half_projector, three_halves_identity};
use crate::states::{analytic_state, Basis, DensityOperator, Hypothesis};

use super::{kraus_update, BranchForm, FirstOutcome, Povm, UpdatedState, WeakParams};

/// `A ⊗ 𝟙` for a two-qubit Schur-basis operator `A`, returned in
/// three-qubit Schur coordinates.
pub fn lift_first_two<T: Scalar>(op: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if op.rows() != 4 || op.cols() != 4 {
        return Err(Error::Dimension(format!("expected 4x4, got {}x{}", op.rows(), op.cols())));
    }
    let t2 = schur_transform::<T>(2)?;
    let t3 = schur_transform::<T>(3)?;
    let comp = tensor(&t2.to_computational(op), &ComplexMatrix::identity(2));
    Ok(t3.to_schur(&comp))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DisturbedEntry<T: Scalar> {
    pub hypothesis: Hypothesis,
    pub state: UpdatedState<T>,
    pub prior: T,
}

/// Post-measurement three-qubit states with their updated priors, in the
/// order `000, 001, 010, 011`.
#[derive(Clone, Debug, PartialEq)]
pub struct DisturbedEnsemble<T: Scalar> {
    pub outcome: FirstOutcome,
    pub params: WeakParams<T>,
    /// Probability of `outcome` under uniform hypotheses.
    pub outcome_probability: T,
    pub entries: Vec<DisturbedEntry<T>>,
}

impl<T: Scalar> DisturbedEnsemble<T> {
    pub fn priors(&self) -> Vec<T> {
        self.entries.iter().map(|e| e.prior).collect()
    }

    /// `Σᵢ pᵢ Tr(πᵢ ρᵢ)`; annihilated states contribute nothing.
    pub fn success(&self, povm: &Povm<T>) -> Result<T> {
        if povm.len() != self.entries.len() {
            return Err(Error::LengthMismatch { povm: povm.len(), ensemble: self.entries.len() });
        }
        let mut total = T::zero();
        for (el, entry) in povm.elements().iter().zip(&self.entries) {
            if let UpdatedState::State(rho) = &entry.state {
                rho.require_basis(povm.basis())?;
                total = total + entry.prior * el.op.matrix().trace_product(rho.matrix()).re;
            }
        }
        Ok(total)
    }

    /// Largest entrywise difference between the states of two ensembles, and
    /// between their priors.
    pub fn max_deviation(&self, other: &Self) -> (T, T) {
        let mut states = T::zero();
        let mut priors = T::zero();
        for (a, b) in self.entries.iter().zip(&other.entries) {
            states = states.max(a.state.matrix_or_zero().max_abs_diff(&b.state.matrix_or_zero()));
            if a.state.is_annihilated() != b.state.is_annihilated() {
                states = states.max(T::one());
            }
            priors = priors.max((a.prior - b.prior).abs());
        }
        (states, priors)
    }
}

fn check_possible<T: Scalar>(params: WeakParams<T>, outcome: FirstOutcome) -> Result<BranchForm<T>> {
    let form = params.branch(outcome);
    if form.outcome_probability() <= T::lit(T::ZERO_PROBABILITY) {
        return Err(Error::ImpossibleOutcome { outcome, alpha: params.alpha.as_f64(), beta: params.beta.as_f64() });
    }
    Ok(form)
}

/// Generic route: Lüders updates of the averaged states with `√π ⊗ 𝟙`, priors
/// by Bayes' rule. The root is taken on the two-qubit element before lifting,
/// which keeps a vanishing eigenvalue exact.
pub fn disturbed_ensemble_luders<T: Scalar>(
    params: WeakParams<T>,
    outcome: FirstOutcome,
) -> Result<DisturbedEnsemble<T>> {
    let form = check_possible(params, outcome)?;
    let root = HermitianOperator::new(form.element())?.sqrt_psd(T::structural_tol())?;
    let kraus = lift_first_two(root.matrix())?;
    let prior = T::lit(0.25);
    let mut updates = Vec::with_capacity(4);
    let mut total = T::zero();
    for &h in &Hypothesis::THREE_QUBIT {
        let (state, probability) = kraus_update(&analytic_state::<T>(h), &kraus)?;
        total = total + prior * probability;
        updates.push((h, state, prior * probability));
    }
    let entries = updates
        .into_iter()
        .map(|(hypothesis, state, joint)| DisturbedEntry { hypothesis, state, prior: joint / total })
        .collect();
    Ok(DisturbedEnsemble { outcome, params, outcome_probability: total, entries })
}

/// Closed-form route. For the branch `xP₋ + yI`:
///
/// ```text
/// ρ₀₀₀ = I_{3/2}/4
/// ρ₀₀₁ = I_{3/2}/6 + I_{1/2}⊗|1⟩⟨1|/6
/// ρ₀₁ₖ = 4y/(6(x+4y)) I_{3/2} + 1/(6(x+4y)) I_{1/2}⊗|v⟩⟨v|,  v = √y|1⟩ ∓ √(3(x+y))|0⟩
/// p₀₀₀ = p₀₀₁ = 2y/(x+8y),  p₀₁ₖ = (x+4y)/(2(x+8y))
/// ```
///
/// with `−` for `010`. The first two are annihilated when `y = 0`.
pub fn disturbed_ensemble_closed_form<T: Scalar>(
    params: WeakParams<T>,
    outcome: FirstOutcome,
) -> Result<DisturbedEnsemble<T>> {
    let BranchForm { projector: x, identity: y } = check_possible(params, outcome)?;
    let four = T::lit(4.0);
    let six = T::lit(6.0);
    let denom = x + T::lit(8.0) * y;
    let p_sym = T::lit(2.0) * y / denom;
    let p_tilt = (x + four * y) / (T::lit(2.0) * denom);

    let annihilated = y <= T::lit(T::ZERO_PROBABILITY);
    let state = |m: ComplexMatrix<T>| -> Result<UpdatedState<T>> {
        Ok(UpdatedState::State(DensityOperator::new(HermitianOperator::from_matrix_symmetrized(m), Basis::Schur)?))
    };
    let sym = |m: ComplexMatrix<T>| -> Result<UpdatedState<T>> {
        if annihilated {
            Ok(UpdatedState::Annihilated { dim: 8, basis: Basis::Schur })
        } else {
            state(m)
        }
    };
    let tilted = |sign: T| {
        let v = [sign * (T::lit(3.0) * (x + y)).sqrt_clamped(), y.sqrt_clamped()];
        let norm = six * (x + four * y);
        &three_halves_identity().scale(four * y / norm) + &spin_half_projector(v).scale(T::one() / norm)
    };
    let entries = vec![
        DisturbedEntry {
            hypothesis: Hypothesis::H000,
            state: sym(three_halves_identity().scale(T::lit(0.25)))?,
            prior: p_sym,
        },
        DisturbedEntry {
            hypothesis: Hypothesis::H001,
            state: sym(&three_halves_identity().scale(T::one() / six)
                + &spin_half_projector([T::zero(), T::one()]).scale(T::one() / six))?,
            prior: p_sym,
        },
        DisturbedEntry { hypothesis: Hypothesis::H010, state: state(tilted(-T::one()))?, prior: p_tilt },
        DisturbedEntry { hypothesis: Hypothesis::H011, state: state(tilted(T::one()))?, prior: p_tilt },
    ];
    Ok(DisturbedEnsemble { outcome, params, outcome_probability: denom / T::lit(8.0), entries })
}

/// Post-measurement ensemble, computed by both routes and cross-checked.
///
/// Returns the closed-form ensemble. A disagreement beyond
/// [`Scalar::SPECTRAL_TOL`] is reported as [`Error::Internal`].
pub fn disturbed_ensemble<T: Scalar>(params: WeakParams<T>, outcome: FirstOutcome) -> Result<DisturbedEnsemble<T>> {
    let closed = disturbed_ensemble_closed_form(params, outcome)?;
    let generic = disturbed_ensemble_luders(params, outcome)?;
    let (states, priors) = closed.max_deviation(&generic);
    let tol = T::spectral_tol();
    if states > tol || priors > tol {
        return Err(Error::Internal(format!(
            "disturbed ensemble routes disagree at (alpha, beta) = ({}, {}), {outcome}: states {:e}, priors {:e}",
            params.alpha,
            params.beta,
            states.as_f64(),
            priors.as_f64()
        )));
    }
    Ok(closed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schur::spin_half_block;
    use num_complex::Complex;

    fn params(a: f64, b: f64) -> WeakParams<f64> {
        WeakParams::new(a, b).unwrap()
    }

    #[test]
    fn lifted_antisymmetric_projector_is_path_zero() {
        let lifted = lift_first_two(&super::super::antisymmetric_projector::<f64>()).unwrap();
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        assert!(lifted.approx_eq(&spin_half_block([[one, zero], [zero, zero]]), 1e-15));
    }

    #[test]
    fn lifted_square_root_closed_form() {
        let (alpha, beta) = (0.3, 0.2);
        let form = params(alpha, beta).branch(FirstOutcome::Minus);
        let lifted = HermitianOperator::from_matrix_symmetrized(lift_first_two(&form.element()).unwrap());
        let root = lifted.sqrt_psd(1e-12).unwrap();
        let expect =
            &three_halves_identity().scale(beta.sqrt()) + &spin_half_projector([(alpha + beta).sqrt().sqrt(), 0.0]);
        let expect = &expect + &spin_half_projector([0.0, beta.sqrt().sqrt()]);
        assert!(root.matrix().approx_eq(&expect, 1e-13));
    }

    #[test]
    fn strong_minus_annihilates_symmetric_hypotheses() {
        let e = disturbed_ensemble(params(1.0, 0.0), FirstOutcome::Minus).unwrap();
        assert!(e.entries[0].state.is_annihilated() && e.entries[1].state.is_annihilated());
        let half = spin_half_projector([1.0, 0.0]).scale(0.5);
        for entry in &e.entries[2..] {
            assert!(entry.state.state().unwrap().matrix().approx_eq(&half, 1e-14));
        }
        let p = e.priors();
        for (got, want) in p.iter().zip([0.0, 0.0, 0.5, 0.5]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_like_minus_leaves_states_untouched() {
        let e = disturbed_ensemble(params(0.0, 0.5), FirstOutcome::Minus).unwrap();
        for entry in &e.entries {
            let rho = analytic_state::<f64>(entry.hypothesis);
            assert!(entry.state.state().unwrap().matrix().approx_eq(rho.matrix(), 1e-14));
            assert!((entry.prior - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn boundary_priors_by_bayes() {
        let (alpha, beta) = (2.0 / 3.0, 1.0 / 3.0);
        let e = disturbed_ensemble(params(alpha, beta), FirstOutcome::Minus).unwrap();
        // Tr(π₋ρ) for each hypothesis, straight from the averaged states
        let element = lift_first_two(&params(alpha, beta).branch(FirstOutcome::Minus).element()).unwrap();
        let weights: Vec<f64> = Hypothesis::THREE_QUBIT
            .iter()
            .map(|&h| element.trace_product(analytic_state::<f64>(h).matrix()).re)
            .collect();
        let total: f64 = weights.iter().sum();
        for (entry, w) in e.entries.iter().zip(&weights) {
            assert!((entry.prior - w / total).abs() < 1e-14);
        }
        assert!((e.entries[0].prior - 0.2).abs() < 1e-14);
        assert!((e.entries[2].prior - 0.3).abs() < 1e-14);
    }

    #[test]
    fn routes_agree_for_both_outcomes() {
        for (a, b) in [(0.1, 0.1), (0.5, 0.5), (0.9, 0.05), (0.0, 1.0), (1.0, 0.0), (0.25, 0.75)] {
            for outcome in FirstOutcome::BOTH {
                let p = params(a, b);
                if p.branch(outcome).outcome_probability() == 0.0 {
                    continue;
                }
                let closed = disturbed_ensemble_closed_form(p, outcome).unwrap();
                let generic = disturbed_ensemble_luders(p, outcome).unwrap();
                let (s, q) = closed.max_deviation(&generic);
                assert!(s <= 1e-12 && q <= 1e-12, "({a}, {b}) {outcome}: {s:e} {q:e}");
                assert!((closed.outcome_probability - generic.outcome_probability).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn impossible_outcomes_are_errors() {
        assert!(matches!(
            disturbed_ensemble(params(0.0, 0.0), FirstOutcome::Minus),
            Err(Error::ImpossibleOutcome { outcome: FirstOutcome::Minus, .. })
        ));
        assert!(matches!(
            disturbed_ensemble(params(0.0, 1.0), FirstOutcome::Plus),
            Err(Error::ImpossibleOutcome { outcome: FirstOutcome::Plus, .. })
        ));
    }

    #[test]
    fn priors_are_symmetric_and_normalised() {
        let e = disturbed_ensemble(params(0.4, 0.3), FirstOutcome::Plus).unwrap();
        let p = e.priors();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert_eq!(p[0], p[1]);
        assert_eq!(p[2], p[3]);
    }
}
