//! The deterministic path-parameter schedule shared by every stepper.

/// Geometric schedule from `t_start` to `t_end` with ratio `1 + h`.
///
/// `t_k = t_start / (1+h)^k` (or `t_start (1+h)^k` when increasing),
/// clamped at `t_end`, with exactly [`Schedule::len`] steps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Schedule {
    t_start: f64,
    t_end: f64,
    h: f64,
    steps: usize,
}

impl Schedule {
    pub fn new(t_start: f64, t_end: f64, h: f64) -> Self {
        assert!(t_start > 0.0 && t_end > 0.0 && h > 0.0, "schedule needs positive parameters");
        Self { t_start, t_end, h, steps: step_count(t_start, t_end, h) }
    }

    /// Number of iterations.
    pub fn len(&self) -> usize {
        self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps == 0
    }

    pub fn decreasing(&self) -> bool {
        self.t_end < self.t_start
    }

    /// `t_k` for `k = 0..=len()`.
    pub fn t(&self, k: usize) -> f64 {
        if k == 0 {
            return self.t_start;
        }
        if k >= self.steps {
            return self.t_end;
        }
        let factor = (1.0 + self.h).powi(k as i32);
        if self.decreasing() {
            (self.t_start / factor).max(self.t_end)
        } else {
            (self.t_start * factor).min(self.t_end)
        }
    }
}

/// `⌈|ln(t_start/t_end)| / ln(1+h)⌉`.
pub fn step_count(t_start: f64, t_end: f64, h: f64) -> usize {
    if t_start == t_end {
        return 0;
    }
    let k = ((t_start / t_end).ln().abs() / h.ln_1p()).ceil();
    (k as usize).max(1)
}
