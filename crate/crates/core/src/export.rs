//! Serializable records for matrices.
//!
//! Every matrix is written as `{label, basis, dim, entries}` with `entries`
//! the row-major list of `[re, im]` pairs.

use serde::Serialize;

use crate::error::Result;
use crate::linalg::ComplexMatrix;
use crate::measure::Povm;
use crate::scalar::Scalar;
use crate::schur::{schur_transform, SchurLabel};
use crate::states::DensityOperator;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixRecord {
    pub label: String,
    pub basis: String,
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixRecord {
    pub fn new<T: Scalar>(label: impl Into<String>, basis: impl Into<String>, m: &ComplexMatrix<T>) -> Self {
        Self {
            label: label.into(),
            basis: basis.into(),
            dim: m.rows(),
            entries: m.entries().iter().map(|z| [z.re.as_f64(), z.im.as_f64()]).collect(),
        }
    }

    /// Entry `(i, j)` as `[re, im]`.
    pub fn get(&self, i: usize, j: usize) -> [f64; 2] {
        self.entries[i * self.dim + j]
    }
}

pub fn state_record<T: Scalar>(label: &str, rho: &DensityOperator<T>) -> MatrixRecord {
    MatrixRecord::new(label, rho.basis().to_string(), rho.matrix())
}

pub fn povm_records<T: Scalar>(povm: &Povm<T>) -> Vec<MatrixRecord> {
    povm.elements()
        .iter()
        .map(|e| MatrixRecord::new(e.label.clone(), povm.basis().to_string(), e.op.matrix()))
        .collect()
}

/// The Schur transform for `n` qubits with its row labels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchurRecord {
    pub n_qubits: usize,
    pub rows: Vec<String>,
    pub unitary: MatrixRecord,
}

pub fn schur_record(n_qubits: usize) -> Result<SchurRecord> {
    let t = schur_transform::<f64>(n_qubits)?;
    Ok(SchurRecord {
        n_qubits,
        rows: t.labels.iter().map(SchurLabel::to_string).collect(),
        unitary: MatrixRecord::new(format!("schur_{n_qubits}"), "computational->schur", &t.unitary),
    })
}
