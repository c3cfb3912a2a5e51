//! Schur bases for two and three qubits, the Clebsch-Gordan step that builds
//! one from the other, and the qubit-permutation representation.
//!
//! Computational index convention: qubit 1 is the most significant bit, so
//! `|i₁i₂i₃⟩` sits at index `4·i₁ + 2·i₂ + i₃`.
//!
//! Row order of the transforms:
//!
//! | n | rows |
//! |---|------|
//! | 2 | `(1,1) (1,0) (1,-1) (0,0)` |
//! | 3 | `(3/2,3/2) (3/2,1/2) (3/2,-1/2) (3/2,-3/2) (1/2,1/2)p1 (1/2,-1/2)p1 (1/2,1/2)p0 (1/2,-1/2)p0` |
//!
//! Path `p = 1` is the spin-½ block that is symmetric under swapping qubits 1
//! and 2, `p = 0` the antisymmetric one.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::{re, Scalar, C};

/// A half-integer stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);
    pub const THREE_HALVES: HalfInt = HalfInt(3);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn neg(self) -> Self {
        HalfInt(-self.0)
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// `|s, m_s⟩|p_s⟩`. The path is 0 whenever the multiplicity space is
/// one-dimensional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SchurLabel {
    pub spin: HalfInt,
    pub spin_z: HalfInt,
    pub path: u8,
}

impl SchurLabel {
    pub const fn new(spin: HalfInt, spin_z: HalfInt, path: u8) -> Self {
        Self { spin, spin_z, path }
    }

    /// `m_s ∈ {−s, −s+1, …, s}`.
    pub fn is_consistent(&self) -> bool {
        let (s, m) = (self.spin.twice(), self.spin_z.twice());
        s >= 0 && m.abs() <= s && (s - m) % 2 == 0
    }
}

impl fmt::Display for SchurLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{}⟩|{}⟩", self.spin, self.spin_z, self.path)
    }
}

/// Unitary taking computational coordinates to Schur coordinates.
#[derive(Clone, Debug)]
pub struct SchurTransform<T: Scalar> {
    pub n_qubits: usize,
    pub unitary: ComplexMatrix<T>,
    pub labels: Vec<SchurLabel>,
}

impl<T: Scalar> SchurTransform<T> {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Computational-basis operator → Schur-basis operator.
    pub fn to_schur(&self, op: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        op.conjugate_by(&self.unitary)
    }

    /// Schur-basis operator → computational-basis operator.
    pub fn to_computational(&self, op: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        op.conjugate_by(&self.unitary.adjoint())
    }

    pub fn index_of(&self, label: SchurLabel) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }
}

const H: HalfInt = HalfInt::HALF;
const S32: HalfInt = HalfInt::THREE_HALVES;

pub fn two_qubit_labels() -> [SchurLabel; 4] {
    [
        SchurLabel::new(HalfInt::ONE, HalfInt::ONE, 0),
        SchurLabel::new(HalfInt::ONE, HalfInt::ZERO, 0),
        SchurLabel::new(HalfInt::ONE, HalfInt::ONE.neg(), 0),
        SchurLabel::new(HalfInt::ZERO, HalfInt::ZERO, 0),
    ]
}

pub fn three_qubit_labels() -> [SchurLabel; 8] {
    [
        SchurLabel::new(S32, S32, 0),
        SchurLabel::new(S32, H, 0),
        SchurLabel::new(S32, H.neg(), 0),
        SchurLabel::new(S32, S32.neg(), 0),
        SchurLabel::new(H, H, 1),
        SchurLabel::new(H, H.neg(), 1),
        SchurLabel::new(H, H, 0),
        SchurLabel::new(H, H.neg(), 0),
    ]
}

/// Schur transform for `n ∈ {2, 3}` qubits.
///
/// The `|3/2, −1/2⟩` row is the symmetric combination of `|011⟩`, `|101⟩`
/// and `|110⟩`.
pub fn schur_transform<T: Scalar>(n: usize) -> Result<SchurTransform<T>> {
    let r2 = T::one() / T::lit(2.0).sqrt();
    let r3 = T::one() / T::lit(3.0).sqrt();
    let r6 = T::one() / T::lit(6.0).sqrt();
    let z = T::zero();
    let o = T::one();
    let two = T::lit(2.0);
    match n {
        2 => {
            let rows: [[T; 4]; 4] = [[o, z, z, z], [z, r2, r2, z], [z, z, z, o], [z, r2, -r2, z]];
            let unitary = ComplexMatrix::from_fn(4, 4, |i, j| re(rows[i][j]));
            Ok(SchurTransform { n_qubits: 2, unitary, labels: two_qubit_labels().to_vec() })
        }
        3 => {
            // columns: |000⟩ |001⟩ |010⟩ |011⟩ |100⟩ |101⟩ |110⟩ |111⟩
            let rows: [[T; 8]; 8] = [
                [o, z, z, z, z, z, z, z],
                [z, r3, r3, z, r3, z, z, z],
                [z, z, z, r3, z, r3, r3, z],
                [z, z, z, z, z, z, z, o],
                [z, -two * r6, r6, z, r6, z, z, z],
                [z, z, z, -r6, z, -r6, two * r6, z],
                [z, z, -r2, z, r2, z, z, z],
                [z, z, z, -r2, z, r2, z, z],
            ];
            let unitary = ComplexMatrix::from_fn(8, 8, |i, j| re(rows[i][j]));
            Ok(SchurTransform { n_qubits: 3, unitary, labels: three_qubit_labels().to_vec() })
        }
        other => Err(Error::UnsupportedQubits(other)),
    }
}

/// `I_{3/2}`: projector onto the totally symmetric block of three qubits,
/// in Schur coordinates.
pub fn three_halves_identity<T: Scalar>() -> ComplexMatrix<T> {
    let one = T::one();
    let z = T::zero();
    ComplexMatrix::diagonal(&[one, one, one, one, z, z, z, z])
}

/// `I_{1/2} ⊗ X` in three-qubit Schur coordinates, where `X` acts on the path
/// space with coordinates ordered `(|0⟩, |1⟩)`.
pub fn spin_half_block<T: Scalar>(path_op: [[C<T>; 2]; 2]) -> ComplexMatrix<T> {
    // Schur index of (m = +1/2, -1/2) for each path value.
    const SLOT: [[usize; 2]; 2] = [[6, 7], [4, 5]];
    let mut m = ComplexMatrix::zeros(8, 8);
    for (p, row) in path_op.iter().enumerate() {
        for (q, &x) in row.iter().enumerate() {
            for spin in 0..2 {
                m[(SLOT[p][spin], SLOT[q][spin])] = x;
            }
        }
    }
    m
}

/// `I_{1/2} ⊗ |v⟩⟨v|` for a path vector `v = (v₀, v₁)`.
pub fn spin_half_projector<T: Scalar>(v: [T; 2]) -> ComplexMatrix<T> {
    let e = |i: usize, j: usize| re(v[i] * v[j]);
    spin_half_block([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
}

/// Restriction of a three-qubit Schur-basis operator to the path space of
/// the `m = +1/2` spin-½ sector, coordinates `(|0⟩, |1⟩)`.
pub fn path_block<T: Scalar>(op: &ComplexMatrix<T>) -> [[C<T>; 2]; 2] {
    const SLOT: [usize; 2] = [6, 4];
    [[op[(SLOT[0], SLOT[0])], op[(SLOT[0], SLOT[1])]], [op[(SLOT[1], SLOT[0])], op[(SLOT[1], SLOT[1])]]]
}

/// One branch of a Clebsch-Gordan lift.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LiftTerm<T> {
    pub label: SchurLabel,
    pub coefficient: T,
}

/// Couples a two-qubit Schur state `|s, m⟩` to a third spin-½ with
/// `m₃ = ±½`:
///
/// ```text
/// |s,m⟩ ⊗ |½,±½⟩ → √((s±m+1)/(2s+1)) |s+½, m±½⟩|p,0⟩ ∓ √((s∓m)/(2s+1)) |s−½, m±½⟩|p,1⟩
/// ```
///
/// The returned labels use the three-qubit path convention of this module:
/// the `s = 1/2` block reached from `s = 1` is path 1, from `s = 0` path 0;
/// `s = 3/2` carries path 0. A branch with an out-of-range `m` (or negative
/// spin) is returned with zero weight.
///
/// The `s = ½` rows of [`schur_transform`] differ from these coefficients by
/// an overall sign of −1 on the whole spin-½ block; operators of the form
/// `I_{½} ⊗ X` on the path space are unaffected.
pub fn clebsch_lift<T: Scalar>(label: SchurLabel, added_spin_z: HalfInt) -> Result<[LiftTerm<T>; 2]> {
    let s2 = label.spin.twice();
    let m2 = label.spin_z.twice();
    if !label.is_consistent() || s2 > 2 || s2 % 2 != 0 {
        return Err(Error::InvalidLabel(format!("{label} is not a two-qubit Schur label")));
    }
    let up = match added_spin_z.twice() {
        1 => true,
        -1 => false,
        _ => return Err(Error::InvalidLabel(format!("added spin_z {added_spin_z} is not ±1/2"))),
    };
    let sign = if up { 1 } else { -1 };
    // In twice-units s ± m + 1 = (s2 ± m2 + 2)/2 and 2s + 1 = s2 + 1.
    let denom = T::lit(f64::from(2 * (s2 + 1)));
    let new_m = HalfInt::from_twice(m2 + sign);

    let w_up = T::lit(f64::from(s2 + sign * m2 + 2)) / denom;
    let w_down = T::lit(f64::from(s2 - sign * m2)) / denom;

    let upper = SchurLabel::new(HalfInt::from_twice(s2 + 1), new_m, 0);
    let up_coeff = if upper.is_consistent() { w_up.sqrt_clamped() } else { T::zero() };

    let lower = SchurLabel::new(HalfInt::from_twice(s2 - 1), new_m, 1);
    let down_coeff =
        if s2 >= 1 && lower.is_consistent() { -T::lit(f64::from(sign)) * w_down.sqrt_clamped() } else { T::zero() };

    Ok([LiftTerm { label: upper, coefficient: up_coeff }, LiftTerm { label: lower, coefficient: down_coeff }])
}

/// A permutation `σ` of `{0, …, n−1}` stored as its image list, `σ(i) = map[i]`.
///
/// The cycle `(123)` in one-based notation is `[1, 2, 0]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &k in &map {
            if k >= map.len() || seen[k] {
                return Err(Error::InvalidPermutation(map));
            }
            seen[k] = true;
        }
        Ok(Self(map))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// `(123)`: 1→2, 2→3, 3→1.
    pub fn cycle_123() -> Self {
        Self(vec![1, 2, 0])
    }

    /// `(132)`, the inverse of `(123)`.
    pub fn cycle_132() -> Self {
        Self(vec![2, 0, 1])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &k) in self.0.iter().enumerate() {
            inv[k] = i;
        }
        Self(inv)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self(other.0.iter().map(|&k| self.0[k]).collect())
    }
}

/// `P(σ)|i₁ ⋯ iₙ⟩ = |i_{σ⁻¹(1)} ⋯ i_{σ⁻¹(n)}⟩`, so `P((123))|i₁i₂i₃⟩ = |i₃i₁i₂⟩`.
///
/// This is a left action: `P(σ)·P(τ) = P(σ∘τ)`.
pub fn permutation_operator<T: Scalar>(sigma: &Permutation) -> ComplexMatrix<T> {
    let n = sigma.len();
    let dim = 1usize << n;
    let inv = sigma.inverse();
    let bit = |index: usize, pos: usize| (index >> (n - 1 - pos)) & 1;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for src in 0..dim {
        let dst = (0..n).fold(0usize, |acc, pos| (acc << 1) | bit(src, inv.apply(pos)));
        m[(dst, src)] = re(T::one());
    }
    m
}
