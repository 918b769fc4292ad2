mod common;

use ripm::gen::bounded_instance;
use ripm::init::{build_modified, default_epsilon};
use ripm::linalg::DenseMatrix;
use ripm::lp::{LpInstance, LpParameters};
use ripm::potential::PotentialConfig;
use ripm::schedule::step_count;
use ripm::solver::{solve, Mode, SolveConfig, SolveReport};

fn tiny() -> (LpInstance, LpParameters) {
    let a = DenseMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
    (LpInstance::new(a, vec![1.0], vec![1.0, 2.0]).unwrap(), LpParameters::new(0.5, 1.0))
}

fn without_clock(mut r: SolveReport) -> String {
    r.wall_time = 0.0;
    r.to_json()
}

#[test]
fn tiny_program_in_every_mode() {
    let (lp, params) = tiny();
    let delta = 1e-6;
    let bound = delta * 5f64.sqrt();
    for mode in Mode::ALL {
        let rep = solve(&lp, &params, delta, mode, &SolveConfig::default()).unwrap();
        assert_eq!(rep.mode, mode);
        assert!(rep.gap_certificate <= bound, "{mode}: gap {}", rep.gap_certificate);
        assert!(rep.objective <= 1.0 + bound, "{mode}: objective {}", rep.objective);
        assert!((rep.x[0] - 1.0).abs() < 1e-4 && rep.x[1].abs() < 1e-4, "{mode}: x = {:?}", rep.x);
        assert_eq!(rep.fallback_count, 0);
    }
}

#[test]
fn l2_iteration_counts_follow_the_schedule() {
    let (lp, params) = bounded_instance(11, 6, 3);
    let delta = 1e-6;
    let rep = solve(&lp, &params, delta, Mode::L2, &SolveConfig::default()).unwrap();
    let n = lp.cols();
    let (m, start) = build_modified(&lp, &params, default_epsilon(n)).unwrap();
    let lr = m.embedding().params.lr();
    let h1 = 1.0 / (16.0 * ((2 * n + 1) as f64).sqrt());
    let h2 = 1.0 / (16.0 * (n as f64).sqrt());
    assert_eq!(rep.phase1_iterations, step_count(start.t(), lr, h1));
    assert_eq!(rep.phase2_iterations, step_count(lr, delta * lr / (2.0 * n as f64), h2));
}

#[test]
fn robust_phase_one_count_uses_its_own_step() {
    let (lp, params) = tiny();
    let rep = solve(&lp, &params, 1e-6, Mode::Robust, &SolveConfig::default()).unwrap();
    let (m, start) = build_modified(&lp, &params, default_epsilon(2)).unwrap();
    let h = PotentialConfig::for_dimension(5).h;
    assert_eq!(rep.phase1_iterations, step_count(start.t(), m.embedding().params.lr(), h));
}

#[test]
fn matches_enumeration_at_twenty_columns() {
    let (lp, params) = bounded_instance(20, 20, 8);
    let (opt, _, _) = common::brute_force(&lp);
    let delta = 1e-6;
    let lr = params.resolve(&lp).unwrap().lr();
    let rep = solve(&lp, &params, delta, Mode::L2, &SolveConfig::default()).unwrap();
    assert!(rep.objective - opt <= delta * lr, "excess {:e}", rep.objective - opt);
    assert!(opt - rep.objective <= 1e-8 * lr, "objective below the optimum by {:e}", opt - rep.objective);
}

#[test]
fn repeated_solves_are_identical() {
    let (lp, params) = bounded_instance(12, 5, 2);
    for mode in [Mode::L2, Mode::Robust] {
        let a = solve(&lp, &params, 1e-4, mode, &SolveConfig::default()).unwrap();
        let b = solve(&lp, &params, 1e-4, mode, &SolveConfig::default()).unwrap();
        assert_eq!(without_clock(a), without_clock(b));
    }
}

#[test]
fn more_rows_than_columns_is_rejected() {
    let text = r#"{"rows": 3, "cols": 2, "A": [1, 0, 0, 1, 1, 1], "b": [1, 1, 2], "c": [1, 1]}"#;
    let err = ripm::io::parse_instance(text).unwrap_err();
    assert!(matches!(err, ripm::Error::RankDeficient | ripm::Error::Dimension(_)), "{err}");
}
