use super::{dot, Cholesky, DenseMatrix, SPD_PIVOT_TOLERANCE};
use crate::error::{Error, Result};

/// Solve `H z = v` for the normal matrix of the embedded program,
/// `H = Ā diag(w1, w2, α) Āᵀ` with `Ā = [[A, −A, 0], [1ᵀ, 0, 1]]`.
///
/// `H` has the block form `[[G, g], [gᵀ, γ]]` with `G = A(W₁+W₂)Aᵀ`,
/// `g = A w₁` and `γ = Σw₁ + α`, so one factorization of `G` plus a scalar
/// Schur complement suffices.
pub fn modified_normal_solve(a: &DenseMatrix, w1: &[f64], w2: &[f64], alpha: f64, v: &[f64]) -> Result<Vec<f64>> {
    let (d, n) = (a.rows(), a.cols());
    if w1.len() != n || w2.len() != n || v.len() != d + 1 {
        return Err(Error::Dimension(format!(
            "A is {d}x{n}; got weights of length {} and {}, rhs of length {}",
            w1.len(),
            w2.len(),
            v.len()
        )));
    }
    if w1.iter().chain(w2).any(|w| !(*w > 0.0)) || !(alpha > 0.0) {
        return Err(Error::InvalidInput("weights must be strictly positive".into()));
    }
    let wsum: Vec<f64> = w1.iter().zip(w2).map(|(a, b)| a + b).collect();
    let chol = Cholesky::factor(&a.scaled_gram(&wsum))?;
    let g = a.mul_vec(w1);
    let gamma = w1.iter().sum::<f64>() + alpha;

    let ginv_v = chol.solve(&v[..d]);
    let ginv_g = chol.solve(&g);
    let schur = gamma - dot(&g, &ginv_g);
    if !(schur > SPD_PIVOT_TOLERANCE * gamma) {
        return Err(Error::NotPositiveDefinite { index: d, pivot: schur });
    }
    let z_last = (v[d] - dot(&g, &ginv_v)) / schur;
    let mut z: Vec<f64> = ginv_v.iter().zip(&ginv_g).map(|(p, q)| p - z_last * q).collect();
    z.push(z_last);
    Ok(z)
}
