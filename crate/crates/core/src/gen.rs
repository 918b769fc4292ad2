//! Seeded random instances with known interior points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::DenseMatrix;
use crate::lp::{LpInstance, LpParameters, PathState, PrimalDualPoint};

fn gaussian_matrix(rng: &mut ChaCha8Rng, d: usize, n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(d, n, |_, _| rng.sample(StandardNormal))
}

/// A bounded program whose first constraint is `Σ xᵢ = Σ x⁰ᵢ`, with the
/// interior point `x⁰ ∈ [0.5, 1.5]ⁿ`. The returned radii are
/// `r = min x⁰` and `R = Σ x⁰`.
pub fn bounded_instance(seed: u64, n: usize, d: usize) -> (LpInstance, LpParameters) {
    assert!(d >= 1 && d <= n, "need 1 <= d <= n");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut a = gaussian_matrix(&mut rng, d, n);
        a.row_mut(0).fill(1.0);
        let x0: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..1.5)).collect();
        let c: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let b = a.mul_vec(&x0);
        if let Ok(lp) = LpInstance::new(a, b, c) {
            let r = x0.iter().cloned().fold(f64::INFINITY, f64::min);
            let big_r: f64 = x0.iter().sum();
            return (lp, LpParameters::new(r, big_r));
        }
    }
}

/// A program together with an exactly centered point at `t`:
/// `x⁰ ∈ [0.5, 1.5]ⁿ`, `s⁰ = t/x⁰`, `b = Ax⁰`, `c = Aᵀy⁰ + s⁰`.
pub fn centered_instance(seed: u64, n: usize, d: usize, t: f64) -> (LpInstance, PathState) {
    assert!(d >= 1 && d <= n, "need 1 <= d <= n");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let a = gaussian_matrix(&mut rng, d, n);
        let x0: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..1.5)).collect();
        let y0: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let s0: Vec<f64> = x0.iter().map(|x| t / x).collect();
        let b = a.mul_vec(&x0);
        let c: Vec<f64> = a.mul_t_vec(&y0).iter().zip(&s0).map(|(a, s)| a + s).collect();
        let Ok(lp) = LpInstance::new(a, b, c) else { continue };
        let Ok(point) = PrimalDualPoint::new(&lp, x0, s0, y0) else { continue };
        let state = PathState::new(point, t).expect("t is positive");
        return (lp, state);
    }
}
