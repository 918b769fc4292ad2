//! Shared helpers for the integration tests: a brute-force vertex oracle
//! built on nalgebra, and small integral programs with known optima.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use ripm::linalg::DenseMatrix;
use ripm::lp::{LpInstance, LpParameters};

/// All basic feasible solutions of `Ax = b, x ≥ 0`, deduplicated.
pub fn vertices(lp: &LpInstance) -> Vec<Vec<f64>> {
    let (d, n) = (lp.rows(), lp.cols());
    let a = DMatrix::from_fn(d, n, |i, j| lp.a().get(i, j));
    let b = DVector::from_column_slice(lp.b());
    let scale = 1.0 + b.amax();
    let mut out: Vec<Vec<f64>> = Vec::new();
    for basis in combinations(n, d) {
        let ab = DMatrix::from_fn(d, d, |i, k| a[(i, basis[k])]);
        let Some(lu) = ab.clone().lu().try_inverse() else { continue };
        if lu.amax() > 1e10 {
            continue;
        }
        let xb = &lu * &b;
        if xb.iter().any(|v| *v < -1e-9 * scale) {
            continue;
        }
        let mut x = vec![0.0; n];
        for (k, &j) in basis.iter().enumerate() {
            x[j] = xb[k].max(0.0);
        }
        if (&a * DVector::from_column_slice(&x) - &b).amax() > 1e-9 * scale {
            continue;
        }
        if !out.iter().any(|v| v.iter().zip(&x).all(|(p, q)| (p - q).abs() <= 1e-9 * scale)) {
            out.push(x);
        }
    }
    out
}

/// `(OPT, argmin, second-best value)` by enumeration.
pub fn brute_force(lp: &LpInstance) -> (f64, Vec<f64>, Option<f64>) {
    let mut vals: Vec<(f64, Vec<f64>)> = vertices(lp).into_iter().map(|x| (lp.objective(&x), x)).collect();
    assert!(!vals.is_empty(), "program has no vertex");
    vals.sort_by(|p, q| p.0.total_cmp(&q.0));
    assert!(vals.len() < 2 || vals[1].0 > vals[0].0 + 1e-9, "optimum is not unique");
    let second = vals.iter().skip(1).map(|v| v.0).find(|v| *v > vals[0].0 + 1e-9);
    (vals[0].0, vals[0].1.clone(), second)
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            if n - j < k - cur.len() {
                break;
            }
            cur.push(j);
            rec(j + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// An integral program, its parameters and its vertex gap `η`.
pub struct IntegralCase {
    pub name: String,
    pub lp: LpInstance,
    pub params: LpParameters,
    pub optimum: Vec<f64>,
    pub eta: f64,
}

fn finish(name: String, lp: LpInstance, interior: &[f64], big_r: f64) -> IntegralCase {
    let (opt, optimum, second) = brute_force(&lp);
    let second = second.expect("program has a second vertex value");
    let r = interior.iter().copied().fold(f64::INFINITY, f64::min);
    let params = LpParameters::new(r, big_r);
    let l = ripm::linalg::norm2(lp.c());
    IntegralCase { name, eta: (second - opt) / (l * big_r), lp, params, optimum }
}

/// `k × k` assignment with the last column constraint dropped (it is
/// implied by the others).
pub fn assignment(k: usize, costs: &[f64]) -> IntegralCase {
    assert_eq!(costs.len(), k * k);
    let n = k * k;
    let d = 2 * k - 1;
    let a = DenseMatrix::from_fn(d, n, |row, var| {
        let (i, j) = (var / k, var % k);
        let hit = if row < k { i == row } else { j == row - k };
        if hit { 1.0 } else { 0.0 }
    });
    let lp = LpInstance::new(a, vec![1.0; d], costs.to_vec()).unwrap();
    let interior = vec![1.0 / k as f64; n];
    finish(format!("assignment {k}x{k}"), lp, &interior, k as f64)
}

/// Unit flow from node 0 to node `nodes − 1` over the given arcs of a DAG;
/// conservation at the sink is dropped.
pub fn shortest_path(nodes: usize, arcs: &[(usize, usize, f64)]) -> IntegralCase {
    let n = arcs.len();
    let d = nodes - 1;
    let a = DenseMatrix::from_fn(d, n, |v, e| {
        let (from, to, _) = arcs[e];
        if from == v {
            1.0
        } else if to == v {
            -1.0
        } else {
            0.0
        }
    });
    let mut b = vec![0.0; d];
    b[0] = 1.0;
    let c: Vec<f64> = arcs.iter().map(|a| a.2).collect();
    let lp = LpInstance::new(a, b, c).unwrap();
    // Average of all source-sink path indicators.
    let paths = vertices(&lp);
    let mut interior = vec![0.0; n];
    for p in &paths {
        for (x, v) in interior.iter_mut().zip(p) {
            *x += v / paths.len() as f64;
        }
    }
    assert!(interior.iter().all(|v| *v > 0.0), "every arc must lie on a path");
    finish(format!("shortest path {nodes} nodes"), lp, &interior, n as f64)
}

/// The five exact-recovery cases.
pub fn integral_cases() -> Vec<IntegralCase> {
    vec![
        assignment(2, &[3.0, 1.0, 2.0, 5.0]),
        assignment(3, &[4.0, 2.0, 8.0, 4.0, 3.0, 9.0, 3.0, 1.0, 6.0]),
        assignment(3, &[1.0, 5.0, 9.0, 6.0, 2.0, 7.0, 8.0, 3.0, 4.0]),
        shortest_path(4, &[(0, 1, 1.0), (0, 2, 4.0), (1, 2, 1.0), (1, 3, 5.0), (2, 3, 1.0)]),
        shortest_path(5, &[(0, 1, 2.0), (0, 2, 1.0), (1, 3, 1.0), (2, 3, 3.0), (2, 4, 6.0), (3, 4, 1.0), (1, 4, 5.0)]),
    ]
}
