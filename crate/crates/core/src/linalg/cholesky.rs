use super::{dot, DenseMatrix};
use crate::error::{Error, Result};

/// Pivots at or below this fraction of the largest diagonal entry are
/// treated as a loss of positive definiteness.
pub const SPD_PIVOT_TOLERANCE: f64 = 1e-12;

const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Lower-triangular factor `L` with `M = L Lᵀ`.
#[derive(Clone, Debug)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    pub fn factor(m: &DenseMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("{}x{} matrix is not square", m.rows(), m.cols())));
        }
        if m.asymmetry() > SYMMETRY_TOLERANCE {
            return Err(Error::InvalidInput("matrix is not symmetric".into()));
        }
        let n = m.rows();
        let max_diag = (0..n).fold(0.0f64, |acc, i| acc.max(m.get(i, i)));
        let floor = SPD_PIVOT_TOLERANCE * max_diag;
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let (head, tail) = l.split_at_mut((j + 1) * n);
            let row_j = &mut head[j * n..];
            let pivot = m.get(j, j) - dot(&row_j[..j], &row_j[..j]);
            if !(pivot > floor) {
                return Err(Error::NotPositiveDefinite { index: j, pivot });
            }
            let ljj = pivot.sqrt();
            row_j[j] = ljj;
            let row_j = &head[j * n..j * n + j];
            for (k, row_i) in tail.chunks_mut(n).enumerate() {
                let i = j + 1 + k;
                row_i[j] = (m.get(i, j) - dot(&row_i[..j], row_j)) / ljj;
            }
        }
        Ok(Self { n, l })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut z = rhs.to_vec();
        self.solve_in_place(&mut z);
        z
    }

    pub fn solve_in_place(&self, z: &mut [f64]) {
        let n = self.n;
        assert_eq!(z.len(), n, "cholesky rhs length mismatch");
        // L w = rhs
        for i in 0..n {
            let row = &self.l[i * n..i * n + i];
            z[i] = (z[i] - dot(row, &z[..i])) / self.l[i * n + i];
        }
        // Lᵀ z = w
        for i in (0..n).rev() {
            let below = (i + 1..n).zip(&z[i + 1..]).fold(0.0, |acc, (k, zk)| acc + self.l[k * n + i] * zk);
            z[i] = (z[i] - below) / self.l[i * n + i];
        }
    }
}

/// Solve `M z = rhs` for symmetric positive definite `M`.
pub fn spd_solve(m: &DenseMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    if rhs.len() != m.rows() {
        return Err(Error::Dimension(format!(
            "rhs of length {} for a {}x{} system",
            rhs.len(),
            m.rows(),
            m.cols()
        )));
    }
    Ok(Cholesky::factor(m)?.solve(rhs))
}

/// Minimum-norm solution `Aᵀ(AAᵀ)⁻¹b` of `Ax = b`.
pub fn min_norm_point(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!("b has length {}, A has {} rows", b.len(), a.rows())));
    }
    let gram = a.scaled_gram(&vec![1.0; a.cols()]);
    let z = spd_solve(&gram, b)?;
    Ok(a.mul_t_vec(&z))
}
