use crate::error::Result;
use crate::linalg::ComplexMatrix;
use crate::scalar::Scalar;
use crate::schur::{spin_half_projector, three_halves_identity};
use crate::states::Basis;

use super::{Povm, WeakParams};

/// `P₊`, the projector onto the two-qubit triplet, in Schur coordinates.
pub fn symmetric_projector<T: Scalar>() -> ComplexMatrix<T> {
    let (o, z) = (T::one(), T::zero());
    ComplexMatrix::diagonal(&[o, o, o, z])
}

/// `P₋ = |0,0⟩⟨0,0|` in Schur coordinates.
pub fn antisymmetric_projector<T: Scalar>() -> ComplexMatrix<T> {
    let (o, z) = (T::one(), T::zero());
    ComplexMatrix::diagonal(&[z, z, z, o])
}

/// `{P₊, P₋}` labelled `plus`, `minus`.
pub fn optimal_two_qubit_povm<T: Scalar>() -> Povm<T> {
    Povm::from_matrices(Basis::Schur, vec![("plus", symmetric_projector()), ("minus", antisymmetric_projector())])
        .expect("projective pair is a valid POVM")
}

/// `π₋ = αP₋ + βI`, `π₊ = αP₊ + (1 − α − β)I`.
pub fn weak_two_qubit_povm<T: Scalar>(params: WeakParams<T>) -> Result<Povm<T>> {
    let WeakParams { alpha, beta } = params;
    let id = ComplexMatrix::identity(4);
    let plus = &symmetric_projector().scale(alpha) + &id.scale(T::one() - alpha - beta);
    let minus = &antisymmetric_projector().scale(alpha) + &id.scale(beta);
    Povm::from_matrices(Basis::Schur, vec![("plus", plus), ("minus", minus)])
}

/// Four-outcome measurement for the three-qubit hypotheses, in the order
/// `000, 001, 010, 011`.
pub fn optimal_three_qubit_povm<T: Scalar>() -> Povm<T> {
    let root3 = T::lit(3.0).sqrt();
    let sixth = T::one() / T::lit(6.0);
    let items = vec![
        ("000", three_halves_identity()),
        ("001", spin_half_projector([T::zero(), T::one()]).scale(T::lit(2.0) / T::lit(3.0))),
        ("010", spin_half_projector([-root3, T::one()]).scale(sixth)),
        ("011", spin_half_projector([root3, T::one()]).scale(sixth)),
    ];
    Povm::from_matrices(Basis::Schur, items).expect("three-qubit optimum is a valid POVM")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::HermitianOperator;
    use crate::schur::{permutation_operator, schur_transform, Permutation};

    #[test]
    fn two_qubit_ranks_and_overlap() {
        let p = optimal_two_qubit_povm::<f64>();
        let rank = |label| p.element(label).unwrap().eigh().unwrap().values.iter().filter(|&&l| l > 0.5).count();
        assert_eq!((rank("plus"), rank("minus")), (3, 1));
        let rho01 = crate::states::analytic_state::<f64>(crate::states::Hypothesis::H01);
        let t = p.element("minus").unwrap().matrix().trace_product(rho01.matrix());
        assert!((t.re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn weak_corner_is_projective() {
        let w = weak_two_qubit_povm(WeakParams::new(1.0, 0.0).unwrap()).unwrap();
        assert_eq!(w, optimal_two_qubit_povm());
    }

    #[test]
    fn weak_without_alpha_is_identity_split() {
        let beta = 0.3;
        let w = weak_two_qubit_povm(WeakParams::new(0.0, beta).unwrap()).unwrap();
        assert!(w.element("plus").unwrap().matrix().approx_eq(&ComplexMatrix::identity(4).scale(1.0 - beta), 1e-15));
        assert!(w.element("minus").unwrap().matrix().approx_eq(&ComplexMatrix::identity(4).scale(beta), 1e-15));
    }

    #[test]
    fn swaps_exchange_the_elements() {
        // formal substitution α → −α, β → 1 − β (outside the valid region,
        // so the matrices are formed directly)
        let (alpha, beta) = (0.35, 0.4);
        let id = ComplexMatrix::<f64>::identity(4);
        let formal = |a: f64, b: f64| {
            (
                &symmetric_projector().scale(a) + &id.scale(1.0 - a - b),
                &antisymmetric_projector().scale(a) + &id.scale(b),
            )
        };
        let w = weak_two_qubit_povm(WeakParams::new(alpha, beta).unwrap()).unwrap();
        let (plus_s, minus_s) = formal(-alpha, 1.0 - beta);
        assert!(plus_s.approx_eq(w.element("minus").unwrap().matrix(), 1e-15));
        assert!(minus_s.approx_eq(w.element("plus").unwrap().matrix(), 1e-15));
    }

    #[test]
    fn three_qubit_completeness() {
        let r = super::super::validate_povm(&optimal_three_qubit_povm::<f64>()).unwrap();
        assert!(r.passed && r.completeness_residual <= 1e-12);
    }

    /// The relabelling that sends `|i₁i₂i₃⟩` to `|i₂i₃i₁⟩` maps the `001`
    /// element onto `010` and `010` onto `011`.
    #[test]
    fn cyclic_relabelling_of_elements() {
        let t = schur_transform::<f64>(3).unwrap();
        let p = permutation_operator::<f64>(&Permutation::cycle_132());
        let povm = optimal_three_qubit_povm::<f64>();
        let comp = |l: &str| t.to_computational(povm.element(l).unwrap().matrix());
        let moved = comp("001").conjugate_by(&p);
        assert!(moved.approx_eq(&comp("010"), 1e-12));
        let moved = comp("010").conjugate_by(&p);
        assert!(moved.approx_eq(&comp("011"), 1e-12));
    }

    #[test]
    fn f32_three_qubit_povm_is_valid() {
        let povm = optimal_three_qubit_povm::<f32>();
        let sum = povm.elements().iter().fold(HermitianOperator::zeros(8), |acc, e| acc.add(&e.op));
        assert!(sum.matrix().approx_eq(&ComplexMatrix::identity(8), 1e-6));
    }
}
