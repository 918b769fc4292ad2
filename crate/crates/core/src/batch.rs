//! Independent solves run side by side.

use crate::error::Result;
use crate::exec::{self, Exec};
use crate::lp::{LpInstance, LpParameters};
use crate::solver::{solve, Mode, SolveConfig, SolveReport};

#[derive(Clone, Debug)]
pub struct BatchJob {
    pub lp: LpInstance,
    pub params: LpParameters,
    pub delta: f64,
    pub mode: Mode,
    pub config: SolveConfig,
}

/// Solve every job, in input order. Each solve is itself sequential.
pub fn solve_batch(jobs: &[BatchJob], exec: Exec) -> Vec<Result<SolveReport>> {
    exec::map(jobs, exec, |job| {
        let config = SolveConfig { exec: Exec::Sequential, ..job.config };
        solve(&job.lp, &job.params, job.delta, job.mode, &config)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::bounded_instance;

    #[test]
    fn batch_matches_individual_solves() {
        let jobs: Vec<BatchJob> = (0..4)
            .map(|seed| {
                let (lp, params) = bounded_instance(seed, 5, 2);
                BatchJob { lp, params, delta: 1e-4, mode: Mode::L2, config: SolveConfig::default() }
            })
            .collect();
        let seq = solve_batch(&jobs, Exec::Sequential);
        let par = solve_batch(&jobs, Exec::Parallel);
        for (a, b) in seq.iter().zip(&par) {
            let (a, b) = (a.as_ref().unwrap(), b.as_ref().unwrap());
            assert_eq!(a.x, b.x);
            assert_eq!(a.iterations, b.iterations);
        }
    }
}
