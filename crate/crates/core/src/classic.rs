//! Short-step path following under the `ℓ₂` centrality invariant.

use crate::error::{Error, Result};
use crate::lp::{l2_centrality, LpInstance, PathState};
use crate::newton::solve_newton;
use crate::schedule::Schedule;
use crate::trace::{StepObserver, StepOutcome, StepRecord};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct L2Config {
    pub h: f64,
    pub centrality_cap: f64,
}

impl L2Config {
    pub fn for_dimension(n: usize) -> Self {
        Self { h: 1.0 / (16.0 * (n as f64).sqrt()), centrality_cap: 0.25 }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let h_max = 1.0 / (16.0 * (n as f64).sqrt());
        if !(self.h > 0.0 && self.h <= h_max * (1.0 + 1e-12)) {
            return Err(Error::InvalidInput(format!("step h = {} must lie in (0, {h_max}]", self.h)));
        }
        if !(self.centrality_cap > 0.0 && self.centrality_cap <= 0.25) {
            return Err(Error::InvalidInput(format!("centrality cap {} must lie in (0, 1/4]", self.centrality_cap)));
        }
        Ok(())
    }
}

/// Follow the central path from `start.t()` to `t_end`, taking one exact
/// Newton step toward `t'·1` per iteration.
pub fn l2_step_path(
    lp: &LpInstance,
    start: PathState,
    t_end: f64,
    cfg: &L2Config,
    obs: &mut (impl StepObserver + ?Sized),
) -> Result<StepOutcome> {
    let n = lp.cols();
    cfg.validate(n)?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidInput(format!("t_end = {t_end} must be positive")));
    }
    let start_centrality = l2_centrality(&start);
    if !(start_centrality <= cfg.centrality_cap) {
        return Err(Error::invariant(0, format!("start centrality {start_centrality:e} exceeds the cap")));
    }
    let schedule = Schedule::new(start.t(), t_end, cfg.h);
    let mut out = StepOutcome::new(start);
    for k in 1..=schedule.len() {
        let st = &mut out.state;
        let t_next = schedule.t(k);
        let delta_mu: Vec<f64> = st.mu().iter().map(|m| t_next - m).collect();
        let dir = solve_newton(lp, st.x(), st.s(), &delta_mu)?;
        st.advance(&dir.dx, &dir.ds, &dir.dy, t_next);
        st.resync_slack(lp);
        if let Some(i) = st.x().iter().chain(st.s()).position(|v| !(*v > 0.0)) {
            return Err(Error::invariant(k, format!("coordinate {i} left the positive orthant")));
        }
        let centrality = l2_centrality(st);
        if !(centrality <= cfg.centrality_cap) {
            return Err(Error::invariant(k, format!("centrality {centrality:e} exceeds the cap")));
        }
        out.iterations = k;
        obs.record(&StepRecord {
            iteration: k,
            phase: "",
            t: t_next,
            l2_centrality: centrality,
            phi: None,
            gap: st.mu().iter().sum(),
            update_rank: 0,
            snapshot_refresh: false,
            state: st,
        });
    }
    Ok(out)
}
