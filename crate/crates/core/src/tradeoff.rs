//! Success rates of the two classifications and the tradeoff between them.
//!
//! `p_first(α) = (1 + α/4)/2` depends only on the measurement strength. The
//! second rate is `5/12` throughout the region `α ≤ min{1−β, 2β}` (Case 1)
//! and `5/12 − β/12 − α/48 + √(3β(α+β))/24` beyond it (Case 2). Maximising
//! over `β` for fixed `α` and eliminating `α` gives the tradeoff curve
//!
//! ```text
//! p₂(p₁) = 5/12                          for p₁ ≤ 7/12
//!        = 1/12 + p₁/2 + √(3(5 − 8p₁))/24  for 7/12 < p₁ ≤ 5/8
//! ```
//!
//! Only `p₁ ∈ [1/2, 5/8]` is reachable by the measurement family; smaller
//! arguments are accepted and sit on the flat branch.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{disturbed_ensemble, mirror_geometry, second_povm, FirstOutcome, WeakParams};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CaseRegion {
    /// `α ≤ 2β`: the second classification is undisturbed on average.
    Case1,
    /// `α > 2β`, which forces `β < 1/3`.
    Case2,
}

impl CaseRegion {
    pub fn of<T: Scalar>(params: WeakParams<T>) -> Self {
        if params.alpha <= T::lit(2.0) * params.beta {
            CaseRegion::Case1
        } else {
            CaseRegion::Case2
        }
    }
}

/// One point of a tradeoff sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TradeoffPoint<T> {
    pub p_first: T,
    /// Closed form.
    pub p_second: T,
    /// Direct sum over outcomes and hypotheses.
    pub p_second_general: T,
    pub alpha: T,
    pub beta: T,
    pub region: CaseRegion,
}

fn five_twelfths<T: Scalar>() -> T {
    T::lit(5.0) / T::lit(12.0)
}

fn check_alpha<T: Scalar>(alpha: T) -> Result<()> {
    let tol = T::structural_tol();
    if !(alpha >= -tol && alpha <= T::one() + tol) {
        return Err(Error::OutOfRange { name: "alpha", value: alpha.as_f64(), range: "[0, 1]" });
    }
    Ok(())
}

/// `(1 + α/4)/2`.
pub fn p_first<T: Scalar>(alpha: T) -> Result<T> {
    check_alpha(alpha)?;
    Ok((T::one() + alpha / T::lit(4.0)) / T::lit(2.0))
}

/// Second success rate as the explicit sum over first outcomes `k` and
/// hypotheses `h`:
/// `¼ Σₖ Σₕ Tr(π^k_h (√π_k⊗𝟙) ρ_h (√π_k⊗𝟙))`.
///
/// Outcomes that cannot occur contribute nothing.
pub fn p_second_general<T: Scalar>(params: WeakParams<T>) -> Result<T> {
    let mut total = T::zero();
    for outcome in FirstOutcome::BOTH {
        let weight = params.branch(outcome).outcome_probability();
        if weight <= T::lit(T::ZERO_PROBABILITY) {
            continue;
        }
        let ensemble = disturbed_ensemble(params, outcome)?;
        let povm = second_povm(params, outcome)?;
        total = total + ensemble.outcome_probability * ensemble.success(&povm)?;
    }
    Ok(total)
}

/// Closed-form second success rate.
pub fn p_second_closed<T: Scalar>(params: WeakParams<T>) -> T {
    let WeakParams { alpha, beta } = params;
    match CaseRegion::of(params) {
        CaseRegion::Case1 => five_twelfths(),
        CaseRegion::Case2 => {
            five_twelfths::<T>() - beta / T::lit(12.0) - alpha / T::lit(48.0)
                + (T::lit(3.0) * beta * (alpha + beta)).sqrt_clamped() / T::lit(24.0)
        }
    }
}

/// Best `β` for a given `α` and the resulting second success rate.
///
/// For `α ≤ 2/3` every `β` with `α ≤ min{1−β, 2β}` reaches `5/12`; the
/// representative returned is `max(α/2, min(1−α, 1/3))`. Above `2/3` the
/// optimum sits on the boundary `β = 1 − α`.
pub fn optimize_beta<T: Scalar>(alpha: T) -> Result<(T, T)> {
    check_alpha(alpha)?;
    let alpha = alpha.max(T::zero()).min(T::one());
    let two_thirds = T::lit(2.0) / T::lit(3.0);
    if alpha <= two_thirds {
        let third = T::one() / T::lit(3.0);
        let beta = (alpha / T::lit(2.0)).max((T::one() - alpha).min(third));
        Ok((beta, five_twelfths()))
    } else {
        let beta = T::one() - alpha;
        Ok((beta, p_second_closed(WeakParams { alpha, beta })))
    }
}

/// Best achievable second success rate at a given first success rate.
pub fn tradeoff_curve<T: Scalar>(p_first: T) -> Result<T> {
    let tol = T::structural_tol();
    let top = T::lit(5.0) / T::lit(8.0);
    if !(p_first >= T::zero() && p_first <= top + tol) {
        return Err(Error::OutOfRange { name: "p_first", value: p_first.as_f64(), range: "[0, 5/8]" });
    }
    if p_first <= T::lit(7.0) / T::lit(12.0) {
        return Ok(five_twelfths());
    }
    let root = (T::lit(3.0) * (T::lit(5.0) - T::lit(8.0) * p_first)).sqrt_clamped();
    Ok(T::one() / T::lit(12.0) + p_first / T::lit(2.0) + root / T::lit(24.0))
}

/// `grid_n` points with `p_first` uniform on `[1/2, 5/8]`, each at the
/// optimal `β` for `α = 8·p_first − 4`.
pub fn sweep<T: Scalar>(grid_n: usize) -> Result<Vec<TradeoffPoint<T>>> {
    if grid_n < 2 {
        return Err(Error::OutOfRange { name: "grid_n", value: grid_n as f64, range: "[2, ∞)" });
    }
    let lo = T::lit(0.5);
    let step = T::lit(0.125) / T::lit((grid_n - 1) as f64);
    (0..grid_n)
        .into_par_iter()
        .map(|k| {
            let p1 = if k == grid_n - 1 { T::lit(0.625) } else { lo + step * T::lit(k as f64) };
            let alpha = (T::lit(8.0) * p1 - T::lit(4.0)).max(T::zero()).min(T::one());
            let (beta, p_second) = optimize_beta(alpha)?;
            let params = WeakParams::new(alpha, beta)?;
            Ok(TradeoffPoint {
                p_first: p1,
                p_second,
                p_second_general: p_second_general(params)?,
                alpha,
                beta,
                region: CaseRegion::of(params),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    State,
    Measurement,
}

/// A direction in the path plane, coordinates `(⟨0|·, ⟨1|·)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathComponent<T> {
    pub label: String,
    pub kind: ComponentKind,
    /// Unit vector, or zero when `omitted`.
    pub vector: [T; 2],
    /// Prior share for states; trace of the path-plane operator for
    /// measurements.
    pub weight: T,
    /// Set when the state is annihilated or the element vanishes.
    pub omitted: bool,
}

/// Directions of the three spin-½ states and of the matching measurement
/// elements after outcome `outcome`.
///
/// States are `|1⟩` for `001` and `cosθ|1⟩ ∓ sinθ|0⟩` for `010`/`011`;
/// elements point along `|1⟩` and `(a|1⟩ ∓ |0⟩)/√(1+a²)`.
pub fn path_components<T: Scalar>(params: WeakParams<T>, outcome: FirstOutcome) -> Result<Vec<PathComponent<T>>> {
    let g = mirror_geometry(params, outcome)?;
    let eps = T::lit(T::ZERO_PROBABILITY);
    let z = T::zero();
    let one = T::one();
    let entry = |label: &str, kind, vector: [T; 2], weight: T| {
        let omitted = weight <= eps;
        PathComponent { label: label.to_string(), kind, vector: if omitted { [z, z] } else { vector }, weight, omitted }
    };
    let state_001 = one - T::lit(2.0) * g.p;
    let norm = (one + g.a * g.a).sqrt();
    let tilted_weight = (one + g.a * g.a) / T::lit(2.0);
    Ok(vec![
        entry("psi_001", ComponentKind::State, [z, one], state_001),
        entry("psi_010", ComponentKind::State, [-g.sin_theta, g.cos_theta], g.p),
        entry("psi_011", ComponentKind::State, [g.sin_theta, g.cos_theta], g.p),
        entry("pi_001", ComponentKind::Measurement, [z, one], one - g.a * g.a),
        entry("pi_010", ComponentKind::Measurement, [-one / norm, g.a / norm], tilted_weight),
        entry("pi_011", ComponentKind::Measurement, [one / norm, g.a / norm], tilted_weight),
    ])
}
