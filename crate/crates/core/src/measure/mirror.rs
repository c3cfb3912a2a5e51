use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Scalar;
use crate::schur::{spin_half_projector, three_halves_identity};
use crate::states::Basis;

use super::{disturbed_ensemble, BranchForm, FirstOutcome, Povm, WeakParams};

/// The spin-½ part of a disturbed ensemble as a mirror-symmetric
/// three-state problem on the path plane: `|1⟩` with prior `1 − 2p`, and
/// `cosθ|1⟩ ∓ sinθ|0⟩` with prior `p` each.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MirrorGeometry<T> {
    pub p: T,
    pub cos_theta: T,
    pub sin_theta: T,
    pub a: T,
}

impl<T: Scalar> MirrorGeometry<T> {
    /// Optimal `a` from the geometry alone: maximises
    /// `(1 − 2p)(1 − a²) + p(s + a·c)²` over `a ∈ [0, 1]`.
    pub fn optimal_a(p: T, cos_theta: T, sin_theta: T) -> T {
        let (c, s) = (cos_theta, sin_theta);
        let curvature = T::one() - p * (T::lit(2.0) + c * c);
        if p * (T::lit(2.0) + c * (c + s)) >= T::one() || curvature <= T::zero() {
            T::one()
        } else {
            (p * c * s / curvature).min(T::one()).max(T::zero())
        }
    }

    /// Conditional success on the path plane for a given `a`.
    pub fn success_at(&self, a: T) -> T {
        let tilt = self.sin_theta + a * self.cos_theta;
        (T::one() - T::lit(2.0) * self.p) * (T::one() - a * a) + self.p * tilt * tilt
    }
}

fn branch_a<T: Scalar>(form: BranchForm<T>) -> T {
    let BranchForm { projector: x, identity: y } = form;
    if x >= T::lit(2.0) * y {
        T::one()
    } else {
        ((x + y) / (T::lit(3.0) * y)).sqrt_clamped().min(T::one())
    }
}

/// Geometry of the spin-½ sector after outcome `outcome`.
///
/// For Minus, `cosθ = √(β/(4β+3α))`, `sinθ = √(3(α+β)/(4β+3α))`,
/// `p = (3α+4β)/(6(α+2β))`, and `a = 1` when `α ≥ 2β`, otherwise
/// `√((α+β)/(3β))`. Plus is the same with `α → −α`, `β → 1 − β`, which gives
/// `a₊ = √((1−α−β)/(3(1−β)))`.
pub fn mirror_geometry<T: Scalar>(params: WeakParams<T>, outcome: FirstOutcome) -> Result<MirrorGeometry<T>> {
    let form = params.branch(outcome);
    let BranchForm { projector: x, identity: y } = form;
    if form.outcome_probability() <= T::lit(T::ZERO_PROBABILITY) {
        return Err(Error::ImpossibleOutcome { outcome, alpha: params.alpha.as_f64(), beta: params.beta.as_f64() });
    }
    let tilt_norm = T::lit(3.0) * x + T::lit(4.0) * y;
    let half_weight = x + T::lit(2.0) * y;
    if tilt_norm <= T::lit(T::ZERO_PROBABILITY) || half_weight <= T::lit(T::ZERO_PROBABILITY) {
        return Err(Error::Degenerate(format!(
            "spin-1/2 sector carries no weight after {outcome} at (alpha, beta) = ({}, {})",
            params.alpha, params.beta
        )));
    }
    let cos_theta = (y / tilt_norm).sqrt_clamped();
    let sin_theta = (T::lit(3.0) * (x + y) / tilt_norm).sqrt_clamped();
    let p = tilt_norm / (T::lit(6.0) * half_weight);
    Ok(MirrorGeometry { p, cos_theta, sin_theta, a: branch_a(form) })
}

/// Four-outcome measurement parameterised by `a ∈ [0, 1]`:
/// `π₀₀₀ = I_{3/2}`, `π₀₀₁ = (1−a²) I_{1/2}⊗|1⟩⟨1|`,
/// `π₀₁ₖ = ½ I_{1/2}⊗(a|1⟩ ∓ |0⟩)(a⟨1| ∓ ⟨0|)`.
pub fn mirror_povm<T: Scalar>(a: T) -> Result<Povm<T>> {
    if !(a >= T::zero() && a <= T::one()) {
        return Err(Error::OutOfRange { name: "a", value: a.as_f64(), range: "[0, 1]" });
    }
    let half = T::lit(0.5);
    let items: Vec<(&str, ComplexMatrix<T>)> = vec![
        ("000", three_halves_identity()),
        ("001", spin_half_projector([T::zero(), T::one()]).scale(T::one() - a * a)),
        ("010", spin_half_projector([-T::one(), a]).scale(half)),
        ("011", spin_half_projector([T::one(), a]).scale(half)),
    ];
    Povm::from_matrices(Basis::Schur, items)
}

/// Second measurement after `outcome`: [`mirror_povm`] at the geometry's `a`.
pub fn second_povm<T: Scalar>(params: WeakParams<T>, outcome: FirstOutcome) -> Result<Povm<T>> {
    let geometry = mirror_geometry(params, outcome)?;
    mirror_povm(geometry.a).map_err(|e| Error::Internal(format!("second measurement at a = {}: {e}", geometry.a)))
}

/// Result of [`grid_search_a`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AGridSearch {
    pub grid_n: usize,
    /// Smallest grid point attaining the maximum.
    pub argmax: f64,
    pub value: f64,
    /// Closed intervals of grid points within [`AGridSearch::TIE_TOL`] of the
    /// maximum. A single short interval means the optimum is unique.
    pub near_optimal: Vec<(f64, f64)>,
}

impl AGridSearch {
    pub const TIE_TOL: f64 = 1e-12;

    pub fn is_near_optimal(&self, a: f64, slack: f64) -> bool {
        self.near_optimal.iter().any(|&(lo, hi)| a >= lo - slack && a <= hi + slack)
    }
}

/// Brute-force search for the best `a` of [`mirror_povm`] on the disturbed
/// ensemble, over the uniform grid `k/grid_n`, `k = 0..=grid_n`.
///
/// The success probability is quadratic in `a`, so it is fitted exactly from
/// three full evaluations at `a = 0, ½, 1` and then scanned.
pub fn grid_search_a<T: Scalar>(params: WeakParams<T>, outcome: FirstOutcome, grid_n: usize) -> Result<AGridSearch> {
    if grid_n < 1000 {
        return Err(Error::OutOfRange { name: "grid_n", value: grid_n as f64, range: "[1000, ∞)" });
    }
    let ensemble = disturbed_ensemble(params, outcome)?;
    let eval = |a: f64| -> Result<f64> { Ok(ensemble.success(&mirror_povm(T::lit(a))?)?.as_f64()) };
    let (f0, fh, f1) = (eval(0.0)?, eval(0.5)?, eval(1.0)?);
    let c2 = 2.0 * (f1 - 2.0 * fh + f0);
    let c1 = f1 - f0 - c2;
    let f = |a: f64| f0 + a * (c1 + a * c2);

    let n = grid_n as f64;
    let values: Vec<f64> = (0..=grid_n).map(|k| f(k as f64 / n)).collect();
    // strict comparison keeps the smallest a among exact ties
    let (best_k, max) = values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bk, bv), (k, &v)| if v > bv { (k, v) } else { (bk, bv) });

    let mut near_optimal = Vec::new();
    let mut start: Option<usize> = None;
    for (k, &v) in values.iter().enumerate() {
        let near = v >= max - AGridSearch::TIE_TOL;
        match (near, start) {
            (true, None) => start = Some(k),
            (false, Some(s)) => {
                near_optimal.push((s as f64 / n, (k - 1) as f64 / n));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        near_optimal.push((s as f64 / n, 1.0));
    }
    Ok(AGridSearch { grid_n, argmax: best_k as f64 / n, value: max, near_optimal })
}
