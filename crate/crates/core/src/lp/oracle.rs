//! Ground-truth central path points for small programs.
//!
//! Minimizes `cᵀx − Σ μᵢ ln xᵢ` over `Ax = b` with an infeasible-start
//! damped Newton method on the KKT system, independent of the steppers.

use super::{LpInstance, PrimalDualPoint};
use crate::error::{Error, Result};
use crate::linalg::{self, DenseMatrix};

pub const ORACLE_MAX_ITERATIONS: usize = 500;
const MAX_DIM: usize = 16;
const STOP_TOLERANCE: f64 = 1e-14;
const ACCEPT_TOLERANCE: f64 = 1e-11;

/// The point `(x_μ, s_μ)` with `x_μ s_μ = μ`, started from `x = 1`.
pub fn central_path_oracle(lp: &LpInstance, mu: &[f64]) -> Result<PrimalDualPoint> {
    central_path_oracle_from(lp, mu, &vec![1.0; lp.cols()])
}

/// As [`central_path_oracle`], from a caller-chosen positive start.
pub fn central_path_oracle_from(lp: &LpInstance, mu: &[f64], x0: &[f64]) -> Result<PrimalDualPoint> {
    let (d, n) = (lp.rows(), lp.cols());
    if n > MAX_DIM {
        return Err(Error::PreconditionViolation(format!("oracle is limited to n <= {MAX_DIM}, got {n}")));
    }
    if mu.len() != n || x0.len() != n {
        return Err(Error::Dimension(format!("mu and x0 must have length {n}")));
    }
    if mu.iter().chain(x0).any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidInput("mu and x0 must be strictly positive".into()));
    }
    let a = lp.a();
    let mut x = x0.to_vec();
    let mut nu = vec![0.0; d];

    let residual = |x: &[f64], nu: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let atnu = a.mul_t_vec(nu);
        let dual = (0..n).map(|i| lp.c()[i] - mu[i] / x[i] + atnu[i]).collect();
        (dual, linalg::sub(&a.mul_vec(x), lp.b()))
    };
    let scale = |x: &[f64]| -> f64 {
        let s_inf = (0..n).fold(0.0f64, |m, i| m.max(mu[i] / x[i]));
        s_inf.max(linalg::norm_inf(lp.c())).max(linalg::norm_inf(lp.b()))
    };
    let norm = |(p, q): &(Vec<f64>, Vec<f64>)| (linalg::dot(p, p) + linalg::dot(q, q)).sqrt();

    for _ in 0..ORACLE_MAX_ITERATIONS {
        let r = residual(&x, &nu);
        let rnorm = norm(&r);
        if rnorm <= STOP_TOLERANCE * scale(&x) {
            return finish(lp, mu, x, nu);
        }
        let kkt = DenseMatrix::from_fn(n + d, n + d, |i, j| match (i < n, j < n) {
            (true, true) => {
                if i == j {
                    mu[i] / (x[i] * x[i])
                } else {
                    0.0
                }
            }
            (true, false) => a.get(j - n, i),
            (false, true) => a.get(i - n, j),
            (false, false) => 0.0,
        });
        let rhs: Vec<f64> = r.0.iter().chain(&r.1).map(|v| -v).collect();
        let step = linalg::lu_solve(&kkt, &rhs)?;
        let (dx, dnu) = step.split_at(n);

        let mut alpha = 1.0;
        while x.iter().zip(dx).any(|(x, dx)| x + alpha * dx <= 0.0) {
            alpha *= 0.5;
        }
        loop {
            let xt: Vec<f64> = x.iter().zip(dx).map(|(x, dx)| x + alpha * dx).collect();
            let nt: Vec<f64> = nu.iter().zip(dnu).map(|(v, dv)| v + alpha * dv).collect();
            if norm(&residual(&xt, &nt)) <= (1.0 - 0.01 * alpha) * rnorm {
                x = xt;
                nu = nt;
                break;
            }
            alpha *= 0.5;
            if alpha < 1e-12 {
                // Rounding floor: accept if already tight.
                if rnorm <= ACCEPT_TOLERANCE * scale(&x) {
                    return finish(lp, mu, x, nu);
                }
                return Err(Error::NoConvergence(ORACLE_MAX_ITERATIONS));
            }
        }
    }
    Err(Error::NoConvergence(ORACLE_MAX_ITERATIONS))
}

fn finish(lp: &LpInstance, mu: &[f64], x: Vec<f64>, nu: Vec<f64>) -> Result<PrimalDualPoint> {
    let s: Vec<f64> = mu.iter().zip(&x).map(|(m, x)| m / x).collect();
    let y: Vec<f64> = nu.iter().map(|v| -v).collect();
    let mu_inf = linalg::norm_inf(mu);
    let worst = x.iter().zip(&s).zip(mu).fold(0.0f64, |w, ((x, s), m)| w.max((x * s - m).abs()));
    if worst > 1e-10 * mu_inf {
        return Err(Error::NoConvergence(ORACLE_MAX_ITERATIONS));
    }
    PrimalDualPoint::new(lp, x, s, y)
}
