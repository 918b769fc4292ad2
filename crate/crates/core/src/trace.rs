//! Per-iteration records and the outcome of a stepping run.

use crate::lp::PathState;

/// One stepper iteration, as seen by an observer.
#[derive(Clone, Copy, Debug)]
pub struct StepRecord<'a> {
    /// 1-based iteration index.
    pub iteration: usize,
    pub phase: &'static str,
    pub t: f64,
    pub l2_centrality: f64,
    /// Potential of the true iterate, when the stepper tracks it.
    pub phi: Option<f64>,
    /// `xᵀs`.
    pub gap: f64,
    /// Replaced columns served by the low-rank update this iteration.
    pub update_rank: usize,
    pub snapshot_refresh: bool,
    /// The state after the step.
    pub state: &'a PathState,
}

pub trait StepObserver {
    fn record(&mut self, rec: &StepRecord<'_>);
}

impl<F: FnMut(&StepRecord<'_>)> StepObserver for F {
    fn record(&mut self, rec: &StepRecord<'_>) {
        self(rec)
    }
}

/// Discards every record.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoTrace;

impl StepObserver for NoTrace {
    fn record(&mut self, _: &StepRecord<'_>) {}
}

/// Relabels records with a phase and continues the iteration numbering
/// after `offset`.
pub struct PhaseTagged<'o, O: StepObserver + ?Sized> {
    pub inner: &'o mut O,
    pub phase: &'static str,
    pub offset: usize,
}

impl<O: StepObserver + ?Sized> StepObserver for PhaseTagged<'_, O> {
    fn record(&mut self, rec: &StepRecord<'_>) {
        let tagged = StepRecord { phase: self.phase, iteration: rec.iteration + self.offset, ..*rec };
        self.inner.record(&tagged);
    }
}

/// Result of a stepping run.
#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub state: PathState,
    pub iterations: usize,
    /// Dense re-inversions forced by a failed low-rank update.
    pub fallback_count: usize,
    pub snapshot_refreshes: usize,
    /// Largest pending rank served by a single maintained solve.
    pub max_update_rank: usize,
    /// Sum of pending ranks over all iterations.
    pub total_update_rank: usize,
    /// Largest relative gap between a maintained solve and a fresh dense
    /// solve, when cross-checking was requested.
    pub max_cross_check_error: Option<f64>,
    /// Largest potential of the true iterate, for the potential steppers.
    pub max_phi: Option<f64>,
}

impl StepOutcome {
    pub(crate) fn new(state: PathState) -> Self {
        Self {
            state,
            iterations: 0,
            fallback_count: 0,
            snapshot_refreshes: 0,
            max_update_rank: 0,
            total_update_rank: 0,
            max_cross_check_error: None,
            max_phi: None,
        }
    }
}
