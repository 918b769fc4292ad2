//! Potential-reduction path following with approximate iterates.

use crate::error::{Error, Result};
use crate::lazy::ShadowVector;
use crate::linalg;
use crate::lp::{l2_centrality, LpInstance, PathState};
use crate::newton::solve_newton;
use crate::potential::{potential, potential_gradient, PotentialConfig};
use crate::schedule::Schedule;
use crate::trace::{StepObserver, StepOutcome, StepRecord};

/// Approximations `(x̄, s̄, r̄)` of the current `(x, s, r)`.
#[derive(Clone, Copy, Debug)]
pub struct ApproxTriple<'a> {
    pub xbar: &'a [f64],
    pub sbar: &'a [f64],
    pub rbar: &'a [f64],
}

impl ApproxTriple<'_> {
    /// `‖ln x̄ − ln x‖∞ ≤ 1/48`, `‖ln s̄ − ln s‖∞ ≤ 1/48`,
    /// `‖r̄ − r‖∞ ≤ 1/(48λ)`.
    pub fn check(&self, x: &[f64], s: &[f64], r: &[f64], lambda: f64) -> Result<()> {
        let log_gap = |a: &[f64], b: &[f64]| a.iter().zip(b).fold(0.0f64, |m, (a, b)| m.max((a.ln() - b.ln()).abs()));
        let gx = log_gap(self.xbar, x);
        if !(gx <= 1.0 / 48.0) {
            return Err(Error::OracleContractViolation(format!("‖ln x̄ − ln x‖∞ = {gx:e}")));
        }
        let gs = log_gap(self.sbar, s);
        if !(gs <= 1.0 / 48.0) {
            return Err(Error::OracleContractViolation(format!("‖ln s̄ − ln s‖∞ = {gs:e}")));
        }
        let gr = self.rbar.iter().zip(r).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if !(gr <= 1.0 / (48.0 * lambda)) {
            return Err(Error::OracleContractViolation(format!("‖r̄ − r‖∞ = {gr:e}")));
        }
        Ok(())
    }
}

/// Supplies the approximate triple each iteration.
pub trait ApproxOracle {
    /// Reset to the starting iterate.
    fn start(&mut self, x: &[f64], s: &[f64], r: &[f64]);
    /// Observe the next iterate; returns the number of rewritten coordinates.
    fn advance(&mut self, x: &[f64], s: &[f64], r: &[f64]) -> usize;
    fn triple(&self) -> ApproxTriple<'_>;
}

/// Uses the true iterate.
#[derive(Clone, Debug, Default)]
pub struct ExactOracle {
    x: Vec<f64>,
    s: Vec<f64>,
    r: Vec<f64>,
}

impl ApproxOracle for ExactOracle {
    fn start(&mut self, x: &[f64], s: &[f64], r: &[f64]) {
        self.x = x.to_vec();
        self.s = s.to_vec();
        self.r = r.to_vec();
    }

    fn advance(&mut self, x: &[f64], s: &[f64], r: &[f64]) -> usize {
        self.start(x, s, r);
        3 * x.len()
    }

    fn triple(&self) -> ApproxTriple<'_> {
        ApproxTriple { xbar: &self.x, sbar: &self.s, rbar: &self.r }
    }
}

/// Lazily maintained triple: `ln x` and `ln s` within `1/48`, `r` within
/// `1/(48λ)`. Rewritten coordinates of `x̄` and `s̄` copy the raw iterate.
#[derive(Clone, Debug)]
pub struct SelectVectorOracle {
    lambda: f64,
    xbar: Vec<f64>,
    sbar: Vec<f64>,
    shadows: Option<[ShadowVector; 3]>,
    last: [Vec<usize>; 3],
}

impl SelectVectorOracle {
    pub fn new(lambda: f64) -> Self {
        Self { lambda, xbar: Vec::new(), sbar: Vec::new(), shadows: None, last: Default::default() }
    }

    /// Coordinates rewritten in `x̄`, `s̄` and `r̄` by the latest advance.
    pub fn last_updates(&self) -> [&[usize]; 3] {
        [&self.last[0], &self.last[1], &self.last[2]]
    }

    pub fn shadows(&self) -> Option<&[ShadowVector; 3]> {
        self.shadows.as_ref()
    }
}

fn logs(v: &[f64]) -> Vec<f64> {
    v.iter().map(|v| v.ln()).collect()
}

impl ApproxOracle for SelectVectorOracle {
    fn start(&mut self, x: &[f64], s: &[f64], r: &[f64]) {
        self.xbar = x.to_vec();
        self.sbar = s.to_vec();
        self.shadows = Some([
            ShadowVector::new(&logs(x), 1.0 / 48.0),
            ShadowVector::new(&logs(s), 1.0 / 48.0),
            ShadowVector::new(r, 1.0 / (48.0 * self.lambda)),
        ]);
        self.last = Default::default();
    }

    fn advance(&mut self, x: &[f64], s: &[f64], r: &[f64]) -> usize {
        let [sx, ss, sr] = self.shadows.as_mut().expect("oracle advanced before start");
        let ix = sx.advance(&logs(x));
        let is = ss.advance(&logs(s));
        let ir = sr.advance(r);
        for &i in &ix {
            self.xbar[i] = x[i];
        }
        for &i in &is {
            self.sbar[i] = s[i];
        }
        let count = ix.len() + is.len() + ir.len();
        self.last = [ix, is, ir];
        count
    }

    fn triple(&self) -> ApproxTriple<'_> {
        let rbar = self.shadows.as_ref().map_or(&[][..], |[_, _, sr]| sr.vbar());
        ApproxTriple { xbar: &self.xbar, sbar: &self.sbar, rbar }
    }
}

/// `δ̄μ = −(t'/32λ) ḡ/‖ḡ‖₂`, or zero when `ḡ` vanishes.
pub(crate) fn gradient_target(g: &[f64], t_next: f64, lambda: f64) -> Vec<f64> {
    let norm = linalg::norm2(g);
    if norm <= 1e-300 {
        return vec![0.0; g.len()];
    }
    let scale = -t_next / (32.0 * lambda * norm);
    g.iter().map(|v| scale * v).collect()
}

pub(crate) fn check_potential(iteration: usize, phi: f64, cfg: &PotentialConfig) -> Result<()> {
    if !(phi <= cfg.phi_cap * (1.0 + 1e-6)) {
        return Err(Error::invariant(iteration, format!("potential {phi:e} exceeds the cap {:e}", cfg.phi_cap)));
    }
    Ok(())
}

/// Follow the path from `start.t()` to `t_end`, stepping along the
/// potential gradient at the oracle's approximate iterate.
pub fn robust_step_path(
    lp: &LpInstance,
    start: PathState,
    t_end: f64,
    cfg: &PotentialConfig,
    oracle: &mut dyn ApproxOracle,
    obs: &mut (impl StepObserver + ?Sized),
) -> Result<StepOutcome> {
    cfg.validate(lp.cols())?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidInput(format!("t_end = {t_end} must be positive")));
    }
    let r0 = start.relative_deviation();
    let phi0 = potential(&r0, cfg)?;
    check_potential(0, phi0, cfg)?;
    oracle.start(start.x(), start.s(), &r0);

    let schedule = Schedule::new(start.t(), t_end, cfg.h);
    let mut out = StepOutcome::new(start);
    let mut max_phi = phi0;
    for k in 1..=schedule.len() {
        let st = &mut out.state;
        let t_next = schedule.t(k);
        let triple = oracle.triple();
        if cfg.check_oracle {
            triple.check(st.x(), st.s(), &st.relative_deviation(), cfg.lambda)?;
        }
        let g = potential_gradient(triple.rbar, cfg)?;
        let delta_mu = gradient_target(&g, t_next, cfg.lambda);
        let dir = solve_newton(lp, triple.xbar, triple.sbar, &delta_mu)?;
        st.advance(&dir.dx, &dir.ds, &dir.dy, t_next);
        st.resync_slack(lp);
        if let Some(i) = st.x().iter().chain(st.s()).position(|v| !(*v > 0.0)) {
            return Err(Error::invariant(k, format!("coordinate {i} left the positive orthant")));
        }
        let r = st.relative_deviation();
        let phi = potential(&r, cfg)?;
        check_potential(k, phi, cfg)?;
        max_phi = max_phi.max(phi);
        oracle.advance(st.x(), st.s(), &r);
        out.iterations = k;
        obs.record(&StepRecord {
            iteration: k,
            phase: "",
            t: t_next,
            l2_centrality: l2_centrality(st),
            phi: Some(phi),
            gap: st.mu().iter().sum(),
            update_rank: 0,
            snapshot_refresh: false,
            state: st,
        });
    }
    out.max_phi = Some(max_phi);
    Ok(out)
}
