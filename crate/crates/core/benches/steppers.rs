use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use ripm::batch::{solve_batch, BatchJob};
use ripm::classic::{l2_step_path, L2Config};
use ripm::exec::Exec;
use ripm::gen::{bounded_instance, centered_instance};
use ripm::maintenance::{fast_robust_step_path, FastOptions};
use ripm::potential::PotentialConfig;
use ripm::robust::{robust_step_path, SelectVectorOracle};
use ripm::solver::{Mode, SolveConfig};
use ripm::trace::NoTrace;

/// A short stretch of path following from an exactly central start.
fn path_segments(c: &mut Criterion) {
    let mut group = c.benchmark_group("path_segment");
    group.sample_size(10);
    for n in [10usize, 40] {
        let (lp, st) = centered_instance(1, n, n / 2, 1.0);
        group.bench_with_input(BenchmarkId::new("l2", n), &n, |b, &n| {
            b.iter(|| black_box(l2_step_path(&lp, st.clone(), 0.5, &L2Config::for_dimension(n), &mut NoTrace).unwrap()))
        });
        let mut cfg = PotentialConfig::for_dimension(n);
        cfg.check_oracle = false;
        group.bench_with_input(BenchmarkId::new("robust", n), &cfg, |b, cfg| {
            b.iter(|| {
                let mut oracle = SelectVectorOracle::new(cfg.lambda);
                black_box(robust_step_path(&lp, st.clone(), 0.98, cfg, &mut oracle, &mut NoTrace).unwrap())
            })
        });
        for (name, exec) in [("fast_seq", Exec::Sequential), ("fast_par", Exec::Parallel)] {
            let opts = FastOptions { exec, ..FastOptions::default() };
            group.bench_with_input(BenchmarkId::new(name, n), &cfg, |b, cfg| {
                b.iter(|| black_box(fast_robust_step_path(&lp, st.clone(), 0.98, cfg, &opts, &mut NoTrace).unwrap()))
            });
        }
    }
    group.finish();
}

/// Independent end-to-end solves, one per job.
fn batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("batch_l2");
    group.sample_size(10);
    let jobs: Vec<BatchJob> = (0..8u64)
        .map(|seed| {
            let (lp, params) = bounded_instance(seed, 12, 5);
            BatchJob { lp, params, delta: 1e-6, mode: Mode::L2, config: SolveConfig { check_oracle: false, ..SolveConfig::default() } }
        })
        .collect();
    for (name, exec) in [("seq", Exec::Sequential), ("par", Exec::Parallel)] {
        group.bench_function(name, |b| b.iter(|| black_box(solve_batch(&jobs, exec))));
    }
    group.finish();
}

criterion_group!(benches, path_segments, batch);
criterion_main!(benches);
