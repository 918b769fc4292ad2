//! Dense kernels: SPD and general solves, minimum-norm points, Woodbury
//! low-rank inverse updates and the structured normal-matrix solve of the
//! embedded program.

mod cholesky;
mod lu;
mod matrix;
mod structured;
mod woodbury;

pub use cholesky::{min_norm_point, spd_solve, Cholesky, SPD_PIVOT_TOLERANCE};
pub use lu::{equilibrate, equilibrated_inverse, equilibrated_solve, solve as lu_solve, Lu, ScaledLu};
pub use matrix::DenseMatrix;
pub use structured::modified_normal_solve;
pub use woodbury::{block_inverse_extend, woodbury_apply, woodbury_update, LowRankDelta, WoodburyFactors};

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `y += alpha * x`
#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[inline]
pub fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

#[inline]
pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Weighted norm `sqrt(Σ w_i u_i²)`.
pub fn weighted_norm(u: &[f64], w: &[f64]) -> f64 {
    u.iter().zip(w).map(|(u, w)| w * u * u).sum::<f64>().sqrt()
}
