//! The soft-max centrality potential `Φ(r) = Σ cosh(λ rᵢ)`.

use crate::error::{Error, Result};

/// Largest `λ|rᵢ|` accepted before `exp` would overflow.
pub const OVERFLOW_GUARD: f64 = 700.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialConfig {
    pub lambda: f64,
    pub phi_cap: f64,
    pub h: f64,
    /// Check each approximate triple against the true iterate.
    pub check_oracle: bool,
}

impl PotentialConfig {
    /// `λ = 16 ln(40n)`, `Φ ≤ 16n`, `h = 1/(128 λ √n)`.
    pub fn for_dimension(n: usize) -> Self {
        let n_f = n as f64;
        let lambda = 16.0 * (40.0 * n_f).ln();
        Self { lambda, phi_cap: 16.0 * n_f, h: 1.0 / (128.0 * lambda * n_f.sqrt()), check_oracle: cfg!(debug_assertions) }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let n_f = n as f64;
        let lambda_min = 16.0 * (40.0 * n_f).ln();
        if !(self.lambda >= lambda_min * (1.0 - 1e-12)) {
            return Err(Error::InvalidInput(format!("lambda {} is below 16 ln(40n) = {lambda_min}", self.lambda)));
        }
        let h_max = 1.0 / (128.0 * self.lambda * n_f.sqrt());
        if !(self.h > 0.0 && self.h <= h_max * (1.0 + 1e-12)) {
            return Err(Error::InvalidInput(format!("step h = {} must lie in (0, {h_max}]", self.h)));
        }
        if !(self.phi_cap > 0.0) {
            return Err(Error::InvalidInput("potential cap must be positive".into()));
        }
        Ok(())
    }
}

fn guard(r: &[f64], lambda: f64) -> Result<()> {
    let worst = r.iter().fold(0.0f64, |m, v| m.max((lambda * v).abs()));
    if !(worst <= OVERFLOW_GUARD) {
        return Err(Error::Overflow(worst));
    }
    Ok(())
}

/// `Σ cosh(λ rᵢ)`.
pub fn potential(r: &[f64], cfg: &PotentialConfig) -> Result<f64> {
    guard(r, cfg.lambda)?;
    Ok(r.iter()
        .map(|v| {
            let z = (cfg.lambda * v).abs();
            0.5 * (z.exp() + (-z).exp())
        })
        .sum())
}

/// `λ sinh(λ rᵢ)` componentwise.
pub fn potential_gradient(r: &[f64], cfg: &PotentialConfig) -> Result<Vec<f64>> {
    guard(r, cfg.lambda)?;
    Ok(r.iter()
        .map(|v| {
            let z = cfg.lambda * v;
            let a = z.abs();
            cfg.lambda * z.signum() * 0.5 * (a.exp() - (-a).exp())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::norm2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn with_lambda(lambda: f64) -> PotentialConfig {
        PotentialConfig { lambda, ..PotentialConfig::for_dimension(1) }
    }

    #[test]
    fn closed_forms() {
        let cfg = PotentialConfig::for_dimension(5);
        assert_eq!(potential(&[0.0; 5], &cfg).unwrap(), 5.0);
        assert_eq!(potential_gradient(&[0.0; 5], &cfg).unwrap(), vec![0.0; 5]);
        assert!((potential(&[2f64.ln()], &with_lambda(1.0)).unwrap() - 1.25).abs() < 1e-15);
    }

    #[test]
    fn overflow_guard() {
        let cfg = with_lambda(100.0);
        assert!(matches!(potential(&[7.5], &cfg), Err(Error::Overflow(_))));
        assert!(matches!(potential_gradient(&[-7.5], &cfg), Err(Error::Overflow(_))));
    }

    #[test]
    fn gradient_matches_central_differences() {
        let cfg = with_lambda(3.0);
        let r = [0.1, -0.2, 0.05];
        let g = potential_gradient(&r, &cfg).unwrap();
        let eps = 1e-6;
        for i in 0..3 {
            let mut up = r;
            let mut dn = r;
            up[i] += eps;
            dn[i] -= eps;
            let fd = (potential(&up, &cfg).unwrap() - potential(&dn, &cfg).unwrap()) / (2.0 * eps);
            assert!((fd - g[i]).abs() <= 1e-5 * g[i].abs());
        }
    }

    #[test]
    fn bounds_on_random_r() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let n = rng.random_range(1..40);
            let cfg = PotentialConfig::for_dimension(n);
            let r: Vec<f64> = (0..n).map(|_| rng.random_range(-0.1..0.1)).collect();
            let phi = potential(&r, &cfg).unwrap();
            let r_inf = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(r_inf <= (2.0 * phi).ln() / cfg.lambda + 1e-12);
            let g = potential_gradient(&r, &cfg).unwrap();
            assert!(norm2(&g) >= cfg.lambda / (n as f64).sqrt() * (phi - n as f64) - 1e-8);
        }
    }

    #[test]
    fn default_config_is_valid() {
        for n in [1, 7, 100] {
            PotentialConfig::for_dimension(n).validate(n).unwrap();
        }
        let mut cfg = PotentialConfig::for_dimension(4);
        cfg.lambda *= 0.5;
        assert!(cfg.validate(4).is_err());
    }
}
