//! Haar-averaged classification states for two and three qubits.
//!
//! A hypothesis names which unknown state sits in each position, e.g. `010`
//! means `|φ₀⟩|φ₁⟩|φ₀⟩`. The first symbol is always 0: after averaging over
//! the Bloch sphere only the relative pattern matters.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{tensor_vec, ComplexMatrix, HermitianOperator};
use crate::scalar::{Scalar, C};
use crate::schur::{schur_transform, spin_half_projector, three_halves_identity};

/// Samples per independent RNG stream in the seeded Monte Carlo estimators.
pub const CHUNK: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Basis {
    Computational,
    Schur,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Computational => "computational",
            Basis::Schur => "schur",
        })
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "computational" | "comp" => Ok(Basis::Computational),
            "schur" => Ok(Basis::Schur),
            _ => Err(Error::InvalidLabel(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Hypothesis {
    #[serde(rename = "00")]
    H00,
    #[serde(rename = "01")]
    H01,
    #[serde(rename = "000")]
    H000,
    #[serde(rename = "001")]
    H001,
    #[serde(rename = "010")]
    H010,
    #[serde(rename = "011")]
    H011,
}

impl Hypothesis {
    pub const TWO_QUBIT: [Hypothesis; 2] = [Hypothesis::H00, Hypothesis::H01];
    pub const THREE_QUBIT: [Hypothesis; 4] = [Hypothesis::H000, Hypothesis::H001, Hypothesis::H010, Hypothesis::H011];

    /// Index of the unknown state occupying each qubit position.
    pub fn pattern(self) -> &'static [usize] {
        match self {
            Hypothesis::H00 => &[0, 0],
            Hypothesis::H01 => &[0, 1],
            Hypothesis::H000 => &[0, 0, 0],
            Hypothesis::H001 => &[0, 0, 1],
            Hypothesis::H010 => &[0, 1, 0],
            Hypothesis::H011 => &[0, 1, 1],
        }
    }

    pub fn n_qubits(self) -> usize {
        self.pattern().len()
    }

    pub fn all(n_qubits: usize) -> Result<&'static [Hypothesis]> {
        match n_qubits {
            2 => Ok(&Self::TWO_QUBIT),
            3 => Ok(&Self::THREE_QUBIT),
            n => Err(Error::UnsupportedQubits(n)),
        }
    }

    /// Index within [`Hypothesis::THREE_QUBIT`] or [`Hypothesis::TWO_QUBIT`].
    pub fn index(self) -> usize {
        match self {
            Hypothesis::H00 | Hypothesis::H000 => 0,
            Hypothesis::H01 | Hypothesis::H001 => 1,
            Hypothesis::H010 => 2,
            Hypothesis::H011 => 3,
        }
    }

    /// Two-qubit hypothesis for the first two positions of a three-qubit one.
    pub fn prefix(self) -> Hypothesis {
        match self {
            Hypothesis::H000 | Hypothesis::H001 | Hypothesis::H00 => Hypothesis::H00,
            Hypothesis::H010 | Hypothesis::H011 | Hypothesis::H01 => Hypothesis::H01,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Hypothesis::H00 => "00",
            Hypothesis::H01 => "01",
            Hypothesis::H000 => "000",
            Hypothesis::H001 => "001",
            Hypothesis::H010 => "010",
            Hypothesis::H011 => "011",
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Hypothesis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Hypothesis::H00, Hypothesis::H01, Hypothesis::H000, Hypothesis::H001, Hypothesis::H010, Hypothesis::H011]
            .into_iter()
            .find(|h| h.as_str() == s)
            .ok_or_else(|| Error::InvalidLabel(s.to_string()))
    }
}

/// Prior of each hypothesis in the scenario: uniform over the patterns.
pub fn scenario_prior<T: Scalar>(n_qubits: usize) -> Result<T> {
    Ok(T::one() / T::lit(Hypothesis::all(n_qubits)?.len() as f64))
}

/// Unit-trace positive semidefinite operator tagged with the basis its
/// entries are expressed in.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator<T: Scalar> {
    op: HermitianOperator<T>,
    basis: Basis,
}

impl<T: Scalar> DensityOperator<T> {
    pub fn new(op: HermitianOperator<T>, basis: Basis) -> Result<Self> {
        let tol = T::structural_tol();
        let tr = op.trace();
        if (tr - T::one()).abs() > tol {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = op.min_eigenvalue()?;
        if min < -tol {
            return Err(Error::InvalidState(format!("negative eigenvalue {min}")));
        }
        if op.dim() != 4 && op.dim() != 8 {
            return Err(Error::InvalidState(format!("dimension {} is not 4 or 8", op.dim())));
        }
        Ok(Self { op, basis })
    }

    pub fn from_matrix(m: ComplexMatrix<T>, basis: Basis) -> Result<Self> {
        Self::new(HermitianOperator::new(m)?, basis)
    }

    pub fn op(&self) -> &HermitianOperator<T> {
        &self.op
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        self.op.matrix()
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn to_basis(&self, target: Basis) -> Result<Self> {
        if target == self.basis {
            return Ok(self.clone());
        }
        let t = schur_transform::<T>(self.n_qubits())?;
        let m = match target {
            Basis::Schur => t.to_schur(self.op.matrix()),
            Basis::Computational => t.to_computational(self.op.matrix()),
        };
        Ok(Self { op: HermitianOperator::from_matrix_symmetrized(m), basis: target })
    }

    pub fn require_basis(&self, basis: Basis) -> Result<()> {
        if self.basis == basis {
            Ok(())
        } else {
            Err(Error::BasisMismatch { expected: basis, found: self.basis })
        }
    }

    pub fn rank(&self, tol: T) -> Result<usize> {
        Ok(self.op.eigh()?.values.iter().filter(|&&l| l > tol).count())
    }
}

/// Haar-averaged state for a hypothesis, in the Schur basis.
pub fn analytic_state<T: Scalar>(label: Hypothesis) -> DensityOperator<T> {
    let third = T::one() / T::lit(3.0);
    let quarter = T::lit(0.25);
    let sixth = T::one() / T::lit(6.0);
    let root3 = T::lit(3.0).sqrt();
    let m = match label {
        Hypothesis::H00 => ComplexMatrix::diagonal(&[third, third, third, T::zero()]),
        Hypothesis::H01 => ComplexMatrix::diagonal(&[quarter; 4]),
        Hypothesis::H000 => three_halves_identity().scale(quarter),
        Hypothesis::H001 => {
            &three_halves_identity().scale(sixth) + &spin_half_projector([T::zero(), T::one()]).scale(sixth)
        }
        Hypothesis::H010 | Hypothesis::H011 => {
            let sign = if label == Hypothesis::H010 { -T::one() } else { T::one() };
            &three_halves_identity().scale(sixth)
                + &spin_half_projector([sign * root3, T::one()]).scale(T::one() / T::lit(24.0))
        }
    };
    DensityOperator { op: HermitianOperator::from_matrix_symmetrized(m), basis: Basis::Schur }
}

/// Pure qubit `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PureQubit<T> {
    pub theta: T,
    pub phi: T,
}

impl<T: Scalar> PureQubit<T> {
    pub fn amplitudes(&self) -> [C<T>; 2] {
        let half = self.theta / T::lit(2.0);
        [Complex::new(half.cos(), T::zero()), Complex::from_polar(half.sin(), self.phi)]
    }
}

/// Uniform point on the Bloch sphere by inverse CDF: `cos θ` uniform on
/// `[−1, 1]`, `φ` uniform on `[0, 2π)`.
pub fn haar_sample_qubit<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> PureQubit<T> {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    let cos_theta = (2.0 * u - 1.0).clamp(-1.0, 1.0);
    PureQubit { theta: T::lit(cos_theta.acos()), phi: T::lit(std::f64::consts::TAU * v) }
}

/// Product state `|φ_{k₁}⟩|φ_{k₂}⟩⋯` for a hypothesis pattern.
pub fn product_state<T: Scalar>(label: Hypothesis, qubits: &[PureQubit<T>; 2]) -> Vec<C<T>> {
    let amps = [qubits[0].amplitudes(), qubits[1].amplitudes()];
    let pattern = label.pattern();
    let mut ket = amps[pattern[0]].to_vec();
    for &k in &pattern[1..] {
        ket = tensor_vec(&ket, &amps[k]);
    }
    ket
}

fn accumulate<T: Scalar, R: Rng + ?Sized>(label: Hypothesis, n: usize, rng: &mut R, acc: &mut ComplexMatrix<T>) {
    let dim = acc.rows();
    for _ in 0..n {
        let qubits = [haar_sample_qubit::<T, R>(rng), haar_sample_qubit::<T, R>(rng)];
        let ket = product_state(label, &qubits);
        for i in 0..dim {
            for j in 0..dim {
                acc[(i, j)] = acc[(i, j)] + ket[i] * ket[j].conj();
            }
        }
    }
}

/// Empirical average of `n_samples` Haar-random product states, in the
/// computational basis.
pub fn monte_carlo_state<T: Scalar, R: Rng + ?Sized>(
    label: Hypothesis,
    n_samples: usize,
    rng: &mut R,
) -> Result<DensityOperator<T>> {
    if n_samples == 0 {
        return Err(Error::OutOfRange { name: "n_samples", value: 0.0, range: "[1, ∞)" });
    }
    let dim = 1 << label.n_qubits();
    let mut acc = ComplexMatrix::zeros(dim, dim);
    accumulate(label, n_samples, rng, &mut acc);
    let avg = acc.scale(T::one() / T::lit(n_samples as f64));
    DensityOperator::new(HermitianOperator::from_matrix_symmetrized(avg), Basis::Computational)
}

/// Seeded, parallel variant of [`monte_carlo_state`]. Samples are split into
/// chunks of [`CHUNK`]; chunk `c` draws from ChaCha stream `c` of `seed`, so
/// the result does not depend on the thread count.
pub fn monte_carlo_state_seeded<T: Scalar>(
    label: Hypothesis,
    n_samples: usize,
    seed: u64,
) -> Result<DensityOperator<T>> {
    if n_samples == 0 {
        return Err(Error::OutOfRange { name: "n_samples", value: 0.0, range: "[1, ∞)" });
    }
    let dim = 1 << label.n_qubits();
    let n_chunks = n_samples.div_ceil(CHUNK);
    let sum = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = CHUNK.min(n_samples - c * CHUNK);
            let mut acc = ComplexMatrix::zeros(dim, dim);
            accumulate(label, count, &mut rng, &mut acc);
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(ComplexMatrix::zeros(dim, dim), |a, b| &a + &b);
    let avg = sum.scale(T::one() / T::lit(n_samples as f64));
    DensityOperator::new(HermitianOperator::from_matrix_symmetrized(avg), Basis::Computational)
}
