use super::DenseMatrix;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};

/// Pivots at or below this fraction of the largest entry make the matrix
/// numerically singular.
const PIVOT_TOLERANCE: f64 = 1e-13;

/// Partial-pivoting LU factorization `P M = L U`, stored packed.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    min_pivot_ratio: f64,
}

impl Lu {
    pub fn factor(m: &DenseMatrix) -> Result<Self> {
        Self::factor_with_tolerance(m, PIVOT_TOLERANCE)
    }

    /// Factor, failing when a pivot falls below `tol * max|m|`.
    pub fn factor_with_tolerance(m: &DenseMatrix, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("{}x{} matrix is not square", m.rows(), m.cols())));
        }
        let n = m.rows();
        let scale = m.max_abs();
        let mut lu = m.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut min_ratio = f64::INFINITY;
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, lu[i * n + k].abs()))
                .fold((k, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
            let ratio = if scale > 0.0 { best / scale } else { 0.0 };
            min_ratio = min_ratio.min(ratio);
            if !(ratio > tol) {
                return Err(Error::Singular { index: k, pivot: lu[p * n + k] });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[k * n + k];
            let (head, tail) = lu.split_at_mut((k + 1) * n);
            let row_k = &head[k * n..];
            for row_i in tail.chunks_mut(n) {
                let f = row_i[k] / pivot;
                row_i[k] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        row_i[j] -= f * row_k[j];
                    }
                }
            }
        }
        Ok(Self { n, lu, perm, min_pivot_ratio: if n == 0 { 1.0 } else { min_ratio } })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Smallest `|pivot| / max|m|` seen during elimination.
    pub fn min_pivot_ratio(&self) -> f64 {
        self.min_pivot_ratio
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        assert_eq!(rhs.len(), self.n, "lu rhs length mismatch");
        let mut z: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        self.substitute(&mut z);
        z
    }

    /// Forward and back substitution on an already permuted right-hand side.
    fn substitute(&self, z: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            z[i] -= super::dot(row, &z[..i]);
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n..(i + 1) * n];
            let acc = z[i] - super::dot(&row[i + 1..], &z[i + 1..]);
            z[i] = acc / row[i];
        }
    }

    /// Dense inverse, solved column by column.
    pub fn inverse(&self, exec: Exec) -> DenseMatrix {
        let n = self.n;
        // Row j of `cols` holds column j of the inverse.
        let mut cols = DenseMatrix::zeros(n, n);
        exec::for_each_row(cols.as_mut_slice(), n, exec, n * n * n, |j, z| {
            for (zi, &p) in z.iter_mut().zip(&self.perm) {
                *zi = if p == j { 1.0 } else { 0.0 };
            }
            self.substitute(z);
        });
        cols.transpose()
    }
}

/// Power-of-two row and column scales `(r, c)` that bring every row and
/// column of `diag(r) M diag(c)` to a largest magnitude near one.
pub fn equilibrate(m: &DenseMatrix) -> (Vec<f64>, Vec<f64>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = vec![1.0; rows];
    let mut c = vec![1.0; cols];
    let pow2 = |v: f64| {
        if v.is_normal() {
            // 2^-round(log₂v / 2), read off the exponent bits.
            let e = ((v.to_bits() >> 52) & 0x7ff) as i32 - 1023;
            f64::from_bits(((1023 - (e + e.signum()) / 2) as u64) << 52)
        } else {
            1.0
        }
    };
    for _ in 0..8 {
        let mut changed = false;
        for (i, ri) in r.iter_mut().enumerate() {
            let big = c.iter().enumerate().fold(0.0f64, |acc, (j, cj)| acc.max((*ri * m.get(i, j) * cj).abs()));
            let f = pow2(big);
            changed |= f != 1.0;
            *ri *= f;
        }
        for (j, cj) in c.iter_mut().enumerate() {
            let big = r.iter().enumerate().fold(0.0f64, |acc, (i, ri)| acc.max((ri * m.get(i, j) * *cj).abs()));
            let f = pow2(big);
            changed |= f != 1.0;
            *cj *= f;
        }
        if !changed {
            break;
        }
    }
    (r, c)
}

/// LU factorization of the equilibrated matrix `diag(r) M diag(c)`, so
/// the pivot test does not depend on how rows and columns are scaled.
#[derive(Clone, Debug)]
pub struct ScaledLu {
    r: Vec<f64>,
    c: Vec<f64>,
    lu: Lu,
}

impl ScaledLu {
    pub fn factor(m: &DenseMatrix) -> Result<Self> {
        Self::factor_with_tolerance(m, PIVOT_TOLERANCE)
    }

    pub fn factor_with_tolerance(m: &DenseMatrix, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("{}x{} matrix is not square", m.rows(), m.cols())));
        }
        let (r, c) = equilibrate(m);
        let scaled = DenseMatrix::from_fn(m.rows(), m.cols(), |i, j| r[i] * m.get(i, j) * c[j]);
        Ok(Self { lu: Lu::factor_with_tolerance(&scaled, tol)?, r, c })
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let rhs: Vec<f64> = rhs.iter().zip(&self.r).map(|(b, r)| b * r).collect();
        let z = self.lu.solve(&rhs);
        z.iter().zip(&self.c).map(|(z, c)| z * c).collect()
    }

    pub fn inverse(&self, exec: Exec) -> DenseMatrix {
        let inv = self.lu.inverse(exec);
        DenseMatrix::from_fn(inv.rows(), inv.cols(), |i, j| self.c[i] * inv.get(i, j) * self.r[j])
    }
}

/// `M⁻¹` through [`ScaledLu`].
pub fn equilibrated_inverse(m: &DenseMatrix, exec: Exec) -> Result<DenseMatrix> {
    Ok(ScaledLu::factor(m)?.inverse(exec))
}

/// Solve `M z = rhs` through [`ScaledLu`].
pub fn equilibrated_solve(m: &DenseMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    if rhs.len() != m.rows() {
        return Err(Error::Dimension(format!("rhs of length {} for a {}x{} system", rhs.len(), m.rows(), m.cols())));
    }
    Ok(ScaledLu::factor(m)?.solve(rhs))
}

/// Solve the general square system `M z = rhs`.
pub fn solve(m: &DenseMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    if rhs.len() != m.rows() {
        return Err(Error::Dimension(format!(
            "rhs of length {} for a {}x{} system",
            rhs.len(),
            m.rows(),
            m.cols()
        )));
    }
    Ok(Lu::factor(m)?.solve(rhs))
}
