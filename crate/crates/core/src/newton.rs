//! The per-iteration linear system
//!
//! ```text
//! S̄ δx + X̄ δs = δμ,   A δx = 0,   Aᵀ δy + δs = 0
//! ```
//!
//! solved through one normal-matrix solve for `δy`.

use crate::error::Result;
use crate::linalg::{self, DenseMatrix};
use crate::lp::Constraints;

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonDirection {
    pub dx: Vec<f64>,
    pub ds: Vec<f64>,
    pub dy: Vec<f64>,
}

/// Relative residuals of the three equations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonResiduals {
    /// `‖A δx‖ / (‖A‖_F (‖δx‖ + ‖S̄⁻¹δμ‖))`. The second term keeps the
    /// ratio meaningful when the exact `δx` is zero (square `A`).
    pub primal: f64,
    /// `‖Aᵀδy + δs‖ / (‖δs‖ + ‖δy‖)`
    pub dual: f64,
    /// `‖S̄δx + X̄δs − δμ‖ / ‖δμ‖`
    pub centering: f64,
}

impl NewtonResiduals {
    pub fn max(&self) -> f64 {
        self.primal.max(self.dual).max(self.centering)
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else {
        num / den
    }
}

impl NewtonDirection {
    pub fn zero(n: usize, d: usize) -> Self {
        Self { dx: vec![0.0; n], ds: vec![0.0; n], dy: vec![0.0; d] }
    }

    pub fn residuals(&self, a: &DenseMatrix, xbar: &[f64], sbar: &[f64], delta_mu: &[f64]) -> NewtonResiduals {
        let a_norm = a.as_slice().iter().map(|v| v * v).sum::<f64>().sqrt();
        let scaled: Vec<f64> = delta_mu.iter().zip(sbar).map(|(m, s)| m / s).collect();
        let dx_scale = linalg::norm2(&self.dx) + linalg::norm2(&scaled);
        let primal = ratio(linalg::norm2(&a.mul_vec(&self.dx)), a_norm * dx_scale);
        let mut dual = a.mul_t_vec(&self.dy);
        linalg::axpy(1.0, &self.ds, &mut dual);
        let dual = ratio(linalg::norm2(&dual), linalg::norm2(&self.ds) + linalg::norm2(&self.dy));
        let centering: Vec<f64> = (0..self.dx.len())
            .map(|i| sbar[i] * self.dx[i] + xbar[i] * self.ds[i] - delta_mu[i])
            .collect();
        let centering = ratio(linalg::norm2(&centering), linalg::norm2(delta_mu));
        NewtonResiduals { primal, dual, centering }
    }
}

/// Solve the Newton system at `(x̄, s̄)` with right-hand side `δμ`.
pub fn solve_newton<C: Constraints + ?Sized>(
    a: &C,
    xbar: &[f64],
    sbar: &[f64],
    delta_mu: &[f64],
) -> Result<NewtonDirection> {
    let (d, n) = a.dims();
    assert!(xbar.len() == n && sbar.len() == n && delta_mu.len() == n, "newton dimension mismatch");
    if delta_mu.iter().all(|v| *v == 0.0) {
        return Ok(NewtonDirection::zero(n, d));
    }
    let w: Vec<f64> = xbar.iter().zip(sbar).map(|(x, s)| x / s).collect();
    let scaled: Vec<f64> = delta_mu.iter().zip(sbar).map(|(m, s)| m / s).collect();
    let rhs = a.apply(&scaled);
    let mut dy = a.normal_solve(&w, &rhs)?;
    dy.iter_mut().for_each(|v| *v = -*v);
    let ds: Vec<f64> = a.apply_t(&dy).into_iter().map(|v| -v).collect();
    let dx = (0..n).map(|i| (delta_mu[i] - xbar[i] * ds[i]) / sbar[i]).collect();
    Ok(NewtonDirection { dx, ds, dy })
}

/// `P v` with `P = S̄⁻¹Aᵀ(A S̄⁻¹X̄ Aᵀ)⁻¹A X̄`.
pub fn apply_projection<C: Constraints + ?Sized>(a: &C, xbar: &[f64], sbar: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    let (_, n) = a.dims();
    assert!(xbar.len() == n && sbar.len() == n && v.len() == n, "projection dimension mismatch");
    let w: Vec<f64> = xbar.iter().zip(sbar).map(|(x, s)| x / s).collect();
    let xv: Vec<f64> = xbar.iter().zip(v).map(|(x, v)| x * v).collect();
    let z = a.normal_solve(&w, &a.apply(&xv))?;
    Ok(a.apply_t(&z).iter().zip(sbar).map(|(u, s)| u / s).collect())
}

/// `‖u‖_μ = sqrt(Σ μᵢ uᵢ²)`.
pub fn mu_norm(u: &[f64], mu: &[f64]) -> f64 {
    linalg::weighted_norm(u, mu)
}
