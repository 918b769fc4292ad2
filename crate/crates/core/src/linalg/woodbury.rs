//! Column-replacement updates of a known inverse.
//!
//! With `M₁ = M₀ + D E_Jᵀ`, where `D` holds the column differences and `E_J`
//! selects the replaced columns, and `T = M₀⁻¹`:
//!
//! ```text
//! M₁⁻¹ = T − (T D) (I + E_Jᵀ T D)⁻¹ E_Jᵀ T
//! ```
//!
//! The differences are stored sparsely, so forming `T D` costs one column
//! of `T` per nonzero.

use super::{DenseMatrix, ScaledLu};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};

/// Pivot ratio of the `q × q` middle system below which the update is
/// reported as singular, after equilibration.
const MIDDLE_PIVOT_TOLERANCE: f64 = 1e-12;

/// A set of replaced columns, stored as sparse differences `new − old`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LowRankDelta {
    dim: usize,
    cols: Vec<usize>,
    diffs: Vec<Vec<(usize, f64)>>,
}

impl LowRankDelta {
    pub fn empty(dim: usize) -> Self {
        Self { dim, cols: Vec::new(), diffs: Vec::new() }
    }

    /// Build from `(column, [(row, new − old)])` pairs. Columns must be
    /// strictly increasing; exact zeros are dropped.
    pub fn from_differences(dim: usize, columns: Vec<(usize, Vec<(usize, f64)>)>) -> Result<Self> {
        let mut cols = Vec::with_capacity(columns.len());
        let mut diffs = Vec::with_capacity(columns.len());
        for (j, entries) in columns {
            if j >= dim {
                return Err(Error::Dimension(format!("column {j} out of range for dimension {dim}")));
            }
            if cols.last().is_some_and(|&prev| prev >= j) {
                return Err(Error::InvalidInput("column indices must be strictly increasing".into()));
            }
            if let Some(&(i, _)) = entries.iter().find(|(i, _)| *i >= dim) {
                return Err(Error::Dimension(format!("row {i} out of range for dimension {dim}")));
            }
            if entries.iter().any(|(_, v)| !v.is_finite()) {
                return Err(Error::InvalidInput("non-finite column difference".into()));
            }
            cols.push(j);
            diffs.push(entries.into_iter().filter(|&(_, v)| v != 0.0).collect());
        }
        Ok(Self { dim, cols, diffs })
    }

    /// Replace columns `cols` of `m0` with `new_columns`.
    pub fn replace_columns(m0: &DenseMatrix, cols: &[usize], new_columns: &[Vec<f64>]) -> Result<Self> {
        if !m0.is_square() {
            return Err(Error::Dimension("base matrix is not square".into()));
        }
        if cols.len() != new_columns.len() {
            return Err(Error::Dimension(format!(
                "{} column indices but {} replacement columns",
                cols.len(),
                new_columns.len()
            )));
        }
        let n = m0.rows();
        let mut columns = Vec::with_capacity(cols.len());
        for (&j, col) in cols.iter().zip(new_columns) {
            if col.len() != n || j >= n {
                return Err(Error::Dimension(format!("replacement column {j} does not fit a {n}x{n} matrix")));
            }
            let diff = col.iter().enumerate().map(|(i, &v)| (i, v - m0.get(i, j))).collect();
            columns.push((j, diff));
        }
        Self::from_differences(n, columns)
    }

    /// Difference of two equally sized square matrices, column by column.
    pub fn between(m0: &DenseMatrix, m1: &DenseMatrix) -> Result<Self> {
        if !m0.is_square() || (m0.rows(), m0.cols()) != (m1.rows(), m1.cols()) {
            return Err(Error::Dimension("matrices must be square and equally sized".into()));
        }
        let n = m0.rows();
        let columns = (0..n)
            .filter_map(|j| {
                let diff: Vec<(usize, f64)> = (0..n)
                    .map(|i| (i, m1.get(i, j) - m0.get(i, j)))
                    .filter(|&(_, v)| v != 0.0)
                    .collect();
                (!diff.is_empty()).then_some((j, diff))
            })
            .collect();
        Self::from_differences(n, columns)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of replaced columns `q`.
    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.cols
    }

    pub fn nnz(&self) -> usize {
        self.diffs.iter().map(Vec::len).sum()
    }

    /// `m0 + D E_Jᵀ`, formed densely.
    pub fn applied_to(&self, m0: &DenseMatrix) -> DenseMatrix {
        assert_eq!(m0.rows(), self.dim, "delta dimension mismatch");
        let mut m = m0.clone();
        for (&j, diff) in self.cols.iter().zip(&self.diffs) {
            for &(i, v) in diff {
                m.set(i, j, m.get(i, j) + v);
            }
        }
        m
    }
}

/// `T D` and the factored middle matrix `I + E_Jᵀ T D` for one delta.
#[derive(Clone, Debug)]
pub struct WoodburyFactors {
    cols: Vec<usize>,
    /// `N × q`, row-major.
    td: DenseMatrix,
    middle: Option<ScaledLu>,
}

impl WoodburyFactors {
    pub fn new(t: &DenseMatrix, delta: &LowRankDelta) -> Result<Self> {
        if !t.is_square() || t.rows() != delta.dim {
            return Err(Error::Dimension(format!(
                "inverse is {}x{}, delta has dimension {}",
                t.rows(),
                t.cols(),
                delta.dim
            )));
        }
        let n = t.rows();
        let q = delta.rank();
        let mut td = DenseMatrix::zeros(n, q);
        for (c, diff) in delta.diffs.iter().enumerate() {
            for &(r, v) in diff {
                for i in 0..n {
                    td.set(i, c, td.get(i, c) + v * t.get(i, r));
                }
            }
        }
        if q == 0 {
            return Ok(Self { cols: Vec::new(), td, middle: None });
        }
        let k = DenseMatrix::from_fn(q, q, |a, b| {
            let id = if a == b { 1.0 } else { 0.0 };
            id + td.get(delta.cols[a], b)
        });
        let middle = ScaledLu::factor_with_tolerance(&k, MIDDLE_PIVOT_TOLERANCE).map_err(|e| match e {
            Error::Singular { .. } => Error::SingularUpdate,
            other => other,
        })?;
        Ok(Self { cols: delta.cols.clone(), td, middle: Some(middle) })
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    /// `M₁⁻¹ b` given `u = M₀⁻¹ b`.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        assert_eq!(u.len(), self.td.rows(), "woodbury rhs length mismatch");
        let Some(middle) = &self.middle else {
            return u.to_vec();
        };
        let uj: Vec<f64> = self.cols.iter().map(|&j| u[j]).collect();
        let w = middle.solve(&uj);
        let correction = self.td.mul_vec(&w);
        u.iter().zip(&correction).map(|(a, b)| a - b).collect()
    }

    /// The full updated inverse `M₁⁻¹`.
    pub fn update(&self, t: &DenseMatrix, exec: Exec) -> DenseMatrix {
        let mut out = t.clone();
        self.update_in_place(&mut out, exec);
        out
    }

    /// Overwrite `T` with `M₁⁻¹`.
    pub fn update_in_place(&self, t: &mut DenseMatrix, exec: Exec) {
        let Some(middle) = &self.middle else {
            return;
        };
        let n = t.rows();
        // Z = K⁻¹ T[J,:]; q is small, so K⁻¹ is formed once.
        let t_j = DenseMatrix::from_fn(self.rank(), n, |a, c| t.get(self.cols[a], c));
        let z = middle.inverse(Exec::Sequential).matmul_with(&t_j, exec);
        exec::for_each_row(t.as_mut_slice(), n, exec, n * n * self.rank(), |i, row| {
            for (a, &coef) in self.td.row(i).iter().enumerate() {
                if coef != 0.0 {
                    super::axpy(-coef, z.row(a), row);
                }
            }
        });
    }
}

/// Inverse of `M₀ + D E_Jᵀ` from `T = M₀⁻¹` in `O(N² q)`.
pub fn woodbury_update(t: &DenseMatrix, delta: &LowRankDelta) -> Result<DenseMatrix> {
    Ok(WoodburyFactors::new(t, delta)?.update(t, Exec::default()))
}

/// `M₁⁻¹ b` from `T = M₀⁻¹` and `u = M₀⁻¹ b`, without forming `M₁⁻¹`.
pub fn woodbury_apply(t: &DenseMatrix, u: &[f64], delta: &LowRankDelta) -> Result<Vec<f64>> {
    if u.len() != t.rows() {
        return Err(Error::Dimension(format!("u has length {}, inverse is {}x{}", u.len(), t.rows(), t.cols())));
    }
    Ok(WoodburyFactors::new(t, delta)?.apply(u))
}

/// Last column of the inverse of `[[M, v], [0, −1]]`, which is `(M⁻¹v, −1)`.
pub fn block_inverse_extend(minv: &DenseMatrix, v: &[f64]) -> Result<Vec<f64>> {
    if !minv.is_square() || v.len() != minv.cols() {
        return Err(Error::Dimension(format!(
            "vector of length {} against a {}x{} inverse",
            v.len(),
            minv.rows(),
            minv.cols()
        )));
    }
    let mut out = minv.mul_vec(v);
    out.push(-1.0);
    Ok(out)
}
