//! Two-phase driver: embedded program down to `t = LR`, extraction, then
//! the original program down to `δLR/(2n)`.

use std::time::Instant;

use serde::Serialize;

use crate::classic::{l2_step_path, L2Config};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::init::{build_modified, default_epsilon, extract, ExtractionDiagnostics};
use crate::lp::{certify_gap, LpInstance, LpParameters, PathState};
use crate::maintenance::{fast_robust_step_path, FastOptions};
use crate::potential::{potential, PotentialConfig};
use crate::robust::{robust_step_path, SelectVectorOracle};
use crate::trace::{NoTrace, PhaseTagged, StepObserver, StepOutcome};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    L2,
    Robust,
    Fast,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::L2, Mode::Robust, Mode::Fast];

    pub fn name(self) -> &'static str {
        match self {
            Mode::L2 => "l2",
            Mode::Robust => "robust",
            Mode::Fast => "fast",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l2" => Ok(Mode::L2),
            "robust" => Ok(Mode::Robust),
            "fast" => Ok(Mode::Fast),
            other => Err(Error::InvalidInput(format!("unknown mode {other:?}"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveConfig {
    /// Embedding slack; `None` uses `1/(100√n)`.
    pub epsilon: Option<f64>,
    pub ell_star: Option<u32>,
    /// Compare every maintained solve with a dense one (fast mode).
    pub cross_check: bool,
    /// Verify the approximation oracle contract at every step.
    pub check_oracle: bool,
    pub exec: Exec,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self { epsilon: None, ell_star: None, cross_check: false, check_oracle: cfg!(debug_assertions), exec: Exec::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub x: Vec<f64>,
    pub s: Vec<f64>,
    pub y: Vec<f64>,
    pub objective: f64,
    /// `xᵀs` at termination.
    pub gap_certificate: f64,
    /// `δLR`.
    pub gap_bound: f64,
    pub iterations: usize,
    pub phase1_iterations: usize,
    pub phase2_iterations: usize,
    pub mode: Mode,
    pub fallback_count: usize,
    pub snapshot_refreshes: usize,
    pub max_update_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_cross_check_error: Option<f64>,
    pub extraction: ExtractionDiagnostics,
    /// Exact vertex recovered from `x`, when rounding was requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<Vec<f64>>,
    /// Seconds.
    pub wall_time: f64,
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields always serialize")
    }
}

fn run_phase(
    mode: Mode,
    lp: &LpInstance,
    start: PathState,
    t_end: f64,
    config: &SolveConfig,
    obs: &mut (impl StepObserver + ?Sized),
) -> Result<StepOutcome> {
    let n = lp.cols();
    match mode {
        Mode::L2 => l2_step_path(lp, start, t_end, &L2Config::for_dimension(n), obs),
        Mode::Robust | Mode::Fast => {
            let mut cfg = PotentialConfig::for_dimension(n);
            cfg.check_oracle = config.check_oracle;
            if mode == Mode::Robust {
                let mut oracle = SelectVectorOracle::new(cfg.lambda);
                robust_step_path(lp, start, t_end, &cfg, &mut oracle, obs)
            } else {
                let opts = FastOptions { ell_star: config.ell_star, cross_check: config.cross_check, exec: config.exec };
                fast_robust_step_path(lp, start, t_end, &cfg, &opts, obs)
            }
        }
    }
}

pub fn solve(lp: &LpInstance, params: &LpParameters, delta: f64, mode: Mode, config: &SolveConfig) -> Result<SolveReport> {
    solve_traced(lp, params, delta, mode, config, &mut NoTrace)
}

/// [`solve`], reporting every step of both phases to `obs`.
pub fn solve_traced(
    lp: &LpInstance,
    params: &LpParameters,
    delta: f64,
    mode: Mode,
    config: &SolveConfig,
    obs: &mut (impl StepObserver + ?Sized),
) -> Result<SolveReport> {
    let started = Instant::now();
    let n = lp.cols();
    let p = params.resolve(lp).map_err(|e| e.in_phase("setup"))?;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidInput(format!("delta = {delta} must lie in (0, 1]")).in_phase("setup"));
    }
    let lr = p.lr();
    let epsilon = config.epsilon.unwrap_or_else(|| default_epsilon(n));
    let (modified, start) = build_modified(lp, params, epsilon)
        .map_err(|e| match e {
            Error::PreconditionViolation(what) => Error::InfeasibleInput(what),
            other => other,
        })
        .map_err(|e| e.in_phase("init"))?;

    let mut tagged = PhaseTagged { inner: obs, phase: "phase1", offset: 0 };
    let one = run_phase(mode, modified.lp(), start, lr, config, &mut tagged).map_err(|e| e.in_phase("phase1"))?;
    let (point, extraction) = extract(&modified, &one.state).map_err(|e| e.in_phase("extract"))?;
    if !(extraction.centrality <= 0.25) {
        return Err(Error::ExtractionFailure(format!(
            "extracted point has ‖xs − LR‖₂ = {:e}·LR, above 1/4",
            extraction.centrality
        ))
        .in_phase("extract"));
    }
    let handoff = PathState::new(point, lr).map_err(|e| e.in_phase("extract"))?;
    if mode != Mode::L2 {
        let cfg = PotentialConfig::for_dimension(n);
        let phi = potential(&handoff.relative_deviation(), &cfg).map_err(|e| e.in_phase("extract"))?;
        if !(phi <= cfg.phi_cap) {
            return Err(Error::invariant(0, format!("handoff potential {phi:e} exceeds 16n")).in_phase("extract"));
        }
    }

    let t_end = delta * lr / (2.0 * n as f64);
    let mut tagged = PhaseTagged { inner: obs, phase: "phase2", offset: one.iterations };
    let two = run_phase(mode, lp, handoff, t_end, config, &mut tagged).map_err(|e| e.in_phase("phase2"))?;

    let point = two.state.into_point();
    let gap = certify_gap(lp, &point).map_err(|e| e.in_phase("certify"))?;
    let gap_bound = delta * lr;
    if !(gap <= gap_bound * (1.0 + 1e-6)) {
        return Err(Error::invariant(two.iterations, format!("final gap {gap:e} exceeds δLR = {gap_bound:e}"))
            .in_phase("certify"));
    }
    let objective = lp.objective(point.x());
    let (x, s, y) = point.into_parts();
    let cross = match (one.max_cross_check_error, two.max_cross_check_error) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    Ok(SolveReport {
        x,
        s,
        y,
        objective,
        gap_certificate: gap,
        gap_bound,
        iterations: one.iterations + two.iterations,
        phase1_iterations: one.iterations,
        phase2_iterations: two.iterations,
        mode,
        fallback_count: one.fallback_count + two.fallback_count,
        snapshot_refreshes: one.snapshot_refreshes + two.snapshot_refreshes,
        max_update_rank: one.max_update_rank.max(two.max_update_rank),
        max_cross_check_error: cross,
        extraction,
        vertex: None,
        wall_time: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::tests::tiny;

    #[test]
    fn tiny_l2() {
        let lp = tiny();
        let params = LpParameters::new(0.5, 1.0);
        let delta = 1e-6;
        let rep = solve(&lp, &params, delta, Mode::L2, &SolveConfig::default()).unwrap();
        let lr = 5f64.sqrt();
        assert!(rep.objective <= 1.0 + delta * lr);
        assert!((rep.x[0] - 1.0).abs() < 1e-4 && rep.x[1].abs() < 1e-4);
        assert!(rep.gap_certificate <= delta * lr);
        assert_eq!(rep.iterations, rep.phase1_iterations + rep.phase2_iterations);
        assert!(rep.extraction.max_x_ratio <= default_epsilon(2));
    }

    #[test]
    fn mode_names_round_trip() {
        for m in Mode::ALL {
            assert_eq!(m.name().parse::<Mode>().unwrap(), m);
        }
        assert!("fastest".parse::<Mode>().is_err());
    }
}
