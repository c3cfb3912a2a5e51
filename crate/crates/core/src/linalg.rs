//! Dense complex matrices for the small operators used throughout the crate.
//!
//! All operators live on at most three qubits, so every matrix here is at most
//! 8×8. Storage is row-major and there is no sparse path.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{re, Scalar, C};

/// Maximum number of cyclic Jacobi sweeps before giving up.
const MAX_SWEEPS: usize = 64;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Scalar> ComplexMatrix<T> {
    /// Builds a matrix from row-major entries, rejecting a wrong length or
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<C<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty {rows}x{cols} matrix")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { row: k / cols, col: k % cols });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C::zero(); rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = C::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Real matrix from nested rows. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[T]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| re(rows[i][j]))
    }

    pub fn diagonal(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = re(v);
        }
        m
    }

    /// `|v⟩⟨w|`.
    pub fn outer(v: &[C<T>], w: &[C<T>]) -> Self {
        Self::from_fn(v.len(), w.len(), |i, j| v[i] * w[j].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_complex(&self, s: C<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    /// Max-norm distance to another matrix of the same shape.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data.iter().zip(&other.data).fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm()))
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols) && self.max_abs_diff(other) <= tol
    }

    pub fn hermiticity_defect(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn trace(&self) -> Result<C<T>> {
        trace(self)
    }

    pub fn mat_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).fold(C::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// `⟨v|A|v⟩`.
    pub fn expectation(&self, v: &[C<T>]) -> C<T> {
        let av = self.mat_vec(v);
        v.iter().zip(&av).fold(C::zero(), |acc, (a, b)| acc + a.conj() * b)
    }

    /// `U · A · U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    /// `Tr(A·B)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C<T> {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = C::zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc = acc + self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub fn map_scalar<U: Scalar>(&self) -> ComplexMatrix<U> {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64()))).collect(),
        }
    }
}

impl<T: Scalar> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = C<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl<T: Scalar> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Scalar> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Scalar> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// A square matrix equal to its conjugate transpose within
/// [`Scalar::STRUCTURAL_TOL`].
#[derive(Clone, PartialEq, Debug)]
pub struct HermitianOperator<T: Scalar> {
    matrix: ComplexMatrix<T>,
}

impl<T: Scalar> HermitianOperator<T> {
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!(
                "Hermitian operator must be square, got {}x{}",
                matrix.rows, matrix.cols
            )));
        }
        let deviation = matrix.hermiticity_defect();
        if deviation > T::structural_tol() {
            return Err(Error::NotHermitian { deviation: deviation.as_f64() });
        }
        Ok(Self { matrix })
    }

    /// Symmetrises `(A + A†)/2`. Only for matrices that are Hermitian by
    /// construction up to rounding.
    pub fn from_matrix_symmetrized(matrix: ComplexMatrix<T>) -> Self {
        let half = T::lit(0.5);
        let sym = (&matrix + &matrix.adjoint()).scale(half);
        Self { matrix: sym }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim) }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::zeros(dim, dim) }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn scale(&self, s: T) -> Self {
        Self { matrix: self.matrix.scale(s) }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix + &other.matrix }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix - &other.matrix }
    }

    /// `U · A · U†` stays Hermitian; rounding is symmetrised away.
    pub fn conjugate_by(&self, u: &ComplexMatrix<T>) -> Self {
        Self::from_matrix_symmetrized(self.matrix.conjugate_by(u))
    }

    /// Real trace.
    pub fn trace(&self) -> T {
        (0..self.dim()).fold(T::zero(), |acc, i| acc + self.matrix[(i, i)].re)
    }

    pub fn eigh(&self) -> Result<Eigh<T>> {
        hermitian_eigendecomposition(self)
    }

    pub fn min_eigenvalue(&self) -> Result<T> {
        Ok(self.eigh()?.values[0])
    }

    pub fn sqrt_psd(&self, tol: T) -> Result<Self> {
        psd_sqrt(self, tol)
    }
}

/// Eigenpairs of a Hermitian operator, eigenvalues ascending. Column `k` of
/// `vectors` is the eigenvector for `values[k]`.
#[derive(Clone, Debug)]
pub struct Eigh<T: Scalar> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Scalar> Eigh<T> {
    /// `V · diag(f(λ)) · V†`.
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.values.len();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).fold(C::zero(), |acc, k| acc + v[(i, k)] * v[(j, k)].conj() * f(self.values[k]))
        })
    }
}

/// Kronecker product. Row index of the result is `i_a · rows_b + i_b`.
pub fn tensor<T: Scalar>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (rb, cb) = (b.rows, b.cols);
    ComplexMatrix::from_fn(a.rows * rb, a.cols * cb, |i, j| a[(i / rb, j / cb)] * b[(i % rb, j % cb)])
}

/// Kronecker product of vectors.
pub fn tensor_vec<T: Scalar>(a: &[C<T>], b: &[C<T>]) -> Vec<C<T>> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

pub fn trace<T: Scalar>(m: &ComplexMatrix<T>) -> Result<C<T>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("trace of non-square {}x{} matrix", m.rows, m.cols)));
    }
    Ok((0..m.rows).fold(C::zero(), |acc, i| acc + m[(i, i)]))
}

/// Cyclic complex Jacobi diagonalisation.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary and then applies the real symmetric Jacobi rotation, so the
/// combined transform is unitary and annihilates `a_pq` exactly.
pub fn hermitian_eigendecomposition<T: Scalar>(h: &HermitianOperator<T>) -> Result<Eigh<T>> {
    let n = h.dim();
    let mut a = h.matrix.clone();
    let mut v = ComplexMatrix::<T>::identity(n);
    let scale = a.max_abs().max(T::min_positive_value());
    let target = T::epsilon() * scale;

    let off_norm = |a: &ComplexMatrix<T>| {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s = s + a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = n == 1;
    for _ in 0..MAX_SWEEPS {
        if off_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= T::min_positive_value() {
                    continue;
                }
                let phase = apq / r; // e^{iφ}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (r + r);
                let t = if theta.is_infinite() {
                    T::zero()
                } else {
                    let sign = if theta >= T::zero() { T::one() } else { -T::one() };
                    sign / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                // G = diag(1, e^{-iφ}) · [[c, s], [-s, c]] restricted to (p, q).
                let g_pp = re(c);
                let g_pq = re(s);
                let g_qp = -phase.conj() * s;
                let g_qq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[(p, q)] = C::zero();
                a[(q, p)] = C::zero();
                a[(p, p)] = re(a[(p, p)].re);
                a[(q, q)] = re(a[(q, q)].re);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
            }
        }
    }
    if !converged {
        let residual = off_norm(&a);
        if residual > T::spectral_tol() * scale {
            return Err(Error::NoConvergence { residual: residual.as_f64() });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(Eigh { values, vectors })
}

/// Principal square root of a positive semidefinite operator.
///
/// Eigenvalues in `[-tol, 0)` are clamped to zero so rank-deficient
/// measurement elements pass; anything below `-tol` is rejected.
pub fn psd_sqrt<T: Scalar>(h: &HermitianOperator<T>, tol: T) -> Result<HermitianOperator<T>> {
    let eig = h.eigh()?;
    if let Some(&bad) = eig.values.iter().find(|&&l| l < -tol) {
        return Err(Error::NotPositiveSemidefinite { eigenvalue: bad.as_f64() });
    }
    let root = eig.reconstruct_with(|l| l.max(T::zero()).sqrt());
    Ok(HermitianOperator::from_matrix_symmetrized(root))
}
