//! Newton block matrix, its maintained inverse, and the fast robust stepper.
//!
//! With `ḡ = ∇Φ(r̄)` folded into the last column,
//!
//! ```text
//!     [ S̄  X̄  0   ḡ ]
//! M = [ A  0  0   0 ]
//!     [ 0  I  Aᵀ  0 ]
//!     [ 0  0  0  −1 ]
//! ```
//!
//! and `M⁻¹ e_last = (δx, δs, δy, −1)` solves `S̄δx + X̄δs = ḡ`. Changing
//! `s̄ⱼ`, `x̄ⱼ` or `r̄ᵢ` changes a single entry of column `j`, `n + j` or the
//! last column, so the inverse is kept current by column-replacement
//! updates against a snapshot.

use log::warn;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{self, DenseMatrix, LowRankDelta, WoodburyFactors};
use crate::lp::{l2_centrality, LpInstance, PathState};
use crate::potential::{potential, potential_gradient, PotentialConfig};
use crate::robust::{check_potential, ApproxOracle, SelectVectorOracle};
use crate::schedule::Schedule;
use crate::trace::{StepObserver, StepOutcome, StepRecord};

/// Componentwise backward error above which a maintained solve is redone
/// densely.
pub const BACKWARD_ERROR_TOLERANCE: f64 = 1e-6;

/// Backward error at which a maintained solve is accepted without
/// refinement.
pub const REFINEMENT_TARGET: f64 = 1e-12;
const MAX_REFINEMENT_STEPS: usize = 3;

/// The Newton block matrix at `(x̄, s̄, r̄)`, kept in structured form.
#[derive(Clone, Debug)]
pub struct NewtonBlockMatrix<'a> {
    a: &'a DenseMatrix,
    xbar: &'a [f64],
    sbar: &'a [f64],
    gradient: Vec<f64>,
}

pub fn assemble_block<'a>(
    a: &'a DenseMatrix,
    xbar: &'a [f64],
    sbar: &'a [f64],
    rbar: &[f64],
    cfg: &PotentialConfig,
) -> Result<NewtonBlockMatrix<'a>> {
    let n = a.cols();
    if xbar.len() != n || sbar.len() != n || rbar.len() != n {
        return Err(Error::Dimension(format!("block matrix needs vectors of length {n}")));
    }
    if xbar.iter().chain(sbar).any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidInput("x̄ and s̄ must be strictly positive".into()));
    }
    Ok(NewtonBlockMatrix { a, xbar, sbar, gradient: potential_gradient(rbar, cfg)? })
}

impl NewtonBlockMatrix<'_> {
    /// `2n + d + 1`.
    pub fn dim(&self) -> usize {
        2 * self.a.cols() + self.a.rows() + 1
    }

    pub fn gradient(&self) -> &[f64] {
        &self.gradient
    }

    pub fn dense(&self) -> DenseMatrix {
        let (d, n) = (self.a.rows(), self.a.cols());
        let mut m = DenseMatrix::zeros(self.dim(), self.dim());
        let last = 2 * n + d;
        for j in 0..n {
            m.set(j, j, self.sbar[j]);
            m.set(j, n + j, self.xbar[j]);
            m.set(j, last, self.gradient[j]);
            m.set(n + d + j, n + j, 1.0);
            for i in 0..d {
                m.set(n + i, j, self.a.get(i, j));
                m.set(n + d + j, 2 * n + i, self.a.get(i, j));
            }
        }
        m.set(last, last, -1.0);
        m
    }

    /// `(M z, |M| |z|)`.
    pub fn mul_vec_with_abs(&self, z: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let (d, n) = (self.a.rows(), self.a.cols());
        let last = 2 * n + d;
        assert_eq!(z.len(), self.dim(), "block matrix dimension mismatch");
        let (zx, rest) = z.split_at(n);
        let (zs, rest) = rest.split_at(n);
        let (zy, zl) = rest.split_at(d);
        let zl = zl[0];
        let mut out = Vec::with_capacity(self.dim());
        let mut mag = Vec::with_capacity(self.dim());
        for j in 0..n {
            let terms = [self.sbar[j] * zx[j], self.xbar[j] * zs[j], self.gradient[j] * zl];
            out.push(terms.iter().sum());
            mag.push(terms.iter().map(|v| v.abs()).sum());
        }
        for i in 0..d {
            let row = self.a.row(i);
            out.push(linalg::dot(row, zx));
            mag.push(row.iter().zip(zx).map(|(a, z)| (a * z).abs()).sum());
        }
        let aty = self.a.mul_t_vec(zy);
        for j in 0..n {
            let abs_aty: f64 = (0..d).map(|i| (self.a.get(i, j) * zy[i]).abs()).sum();
            out.push(zs[j] + aty[j]);
            mag.push(zs[j].abs() + abs_aty);
        }
        out.push(-zl);
        mag.push(zl.abs());
        debug_assert_eq!(out.len(), last + 1);
        (out, mag)
    }

    pub fn mul_vec(&self, z: &[f64]) -> Vec<f64> {
        self.mul_vec_with_abs(z).0
    }

    /// Componentwise backward error of `z` as a solution of `M z = e_last`.
    pub fn backward_error(&self, z: &[f64]) -> f64 {
        let (mz, mag) = self.mul_vec_with_abs(z);
        let last = mz.len() - 1;
        mz.iter()
            .zip(&mag)
            .enumerate()
            .map(|(i, (v, m))| {
                let e = if i == last { 1.0 } else { 0.0 };
                let den = m + e;
                if den == 0.0 {
                    if v - e == 0.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    (v - e).abs() / den
                }
            })
            .fold(0.0, f64::max)
    }

    fn e_last(&self) -> Vec<f64> {
        let mut e = vec![0.0; self.dim()];
        e[self.dim() - 1] = 1.0;
        e
    }
}

/// Work counters for the maintained inverse.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MaintenanceCounters {
    pub woodbury_updates: usize,
    pub woodbury_applies: usize,
    /// Full `O(N³)` inversions, including the initial one.
    pub dense_inversions: usize,
    pub fallbacks: usize,
    /// Replaced columns processed by updates and applies.
    pub columns_touched: usize,
}

/// Snapshot inverse `T = M₀⁻¹`, `u = T e_last`, and the triple it was
/// taken at.
#[derive(Clone, Debug)]
pub struct MaintainedInverse {
    n: usize,
    d: usize,
    t_inv: DenseMatrix,
    u: Vec<f64>,
    snap_x: Vec<f64>,
    snap_s: Vec<f64>,
    snap_g: Vec<f64>,
    exec: Exec,
    counters: MaintenanceCounters,
}

impl MaintainedInverse {
    pub fn new(m: &NewtonBlockMatrix<'_>, exec: Exec) -> Result<Self> {
        let mut mi = Self {
            n: m.a.cols(),
            d: m.a.rows(),
            t_inv: DenseMatrix::zeros(0, 0),
            u: Vec::new(),
            snap_x: Vec::new(),
            snap_s: Vec::new(),
            snap_g: Vec::new(),
            exec,
            counters: MaintenanceCounters::default(),
        };
        mi.invert_densely(m)?;
        Ok(mi)
    }

    pub fn inverse(&self) -> &DenseMatrix {
        &self.t_inv
    }

    /// `T e_last` at the snapshot.
    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn counters(&self) -> MaintenanceCounters {
        self.counters
    }

    fn invert_densely(&mut self, m: &NewtonBlockMatrix<'_>) -> Result<()> {
        self.t_inv = linalg::equilibrated_inverse(&m.dense(), self.exec)?;
        self.counters.dense_inversions += 1;
        self.take_snapshot(m);
        let mut u = std::mem::take(&mut self.u);
        self.refine(m, None, &mut u);
        self.u = u;
        Ok(())
    }

    fn take_snapshot(&mut self, m: &NewtonBlockMatrix<'_>) {
        let last = self.t_inv.cols() - 1;
        self.u = self.t_inv.column(last);
        for (snap, cur) in [(&mut self.snap_x, m.xbar), (&mut self.snap_s, m.sbar), (&mut self.snap_g, &m.gradient[..])] {
            snap.clear();
            snap.extend_from_slice(cur);
        }
    }

    /// Iterative refinement of `v ≈ M⁻¹e_last`, with corrections
    /// `T' (e_last − M v)` where `T'` is the snapshot inverse adjusted by
    /// `factors`. Returns the final backward error.
    fn refine(&self, m: &NewtonBlockMatrix<'_>, factors: Option<&WoodburyFactors>, v: &mut [f64]) -> f64 {
        let mut err = m.backward_error(v);
        for _ in 0..MAX_REFINEMENT_STEPS {
            if err <= REFINEMENT_TARGET {
                break;
            }
            let mut rho = m.mul_vec(v);
            for r in rho.iter_mut() {
                *r = -*r;
            }
            *rho.last_mut().expect("block matrix is nonempty") += 1.0;
            let z = self.t_inv.mul_vec(&rho);
            let z = match factors {
                Some(f) => f.apply(&z),
                None => z,
            };
            linalg::axpy(1.0, &z, v);
            let next = m.backward_error(v);
            if !(next < err) {
                err = next;
                break;
            }
            err = next;
        }
        err
    }

    fn fall_back(&mut self, m: &NewtonBlockMatrix<'_>, why: &str) -> Result<()> {
        warn!("low-rank inverse update abandoned ({why}); re-inverting densely");
        self.counters.fallbacks += 1;
        self.invert_densely(m)
    }

    /// Columns of `m` that differ from the snapshot matrix.
    pub fn pending_delta(&self, m: &NewtonBlockMatrix<'_>) -> LowRankDelta {
        let (n, d) = (self.n, self.d);
        let mut columns = Vec::new();
        for j in 0..n {
            if m.sbar[j] != self.snap_s[j] {
                columns.push((j, vec![(j, m.sbar[j] - self.snap_s[j])]));
            }
        }
        for j in 0..n {
            if m.xbar[j] != self.snap_x[j] {
                columns.push((n + j, vec![(j, m.xbar[j] - self.snap_x[j])]));
            }
        }
        let g_diff: Vec<(usize, f64)> = (0..n)
            .filter(|&i| m.gradient[i] != self.snap_g[i])
            .map(|i| (i, m.gradient[i] - self.snap_g[i]))
            .collect();
        if !g_diff.is_empty() {
            columns.push((2 * n + d, g_diff));
        }
        LowRankDelta::from_differences(2 * n + d + 1, columns).expect("columns are generated in order")
    }

    /// Move the snapshot to `m` by a low-rank update of `T`. Returns the
    /// rank of the update.
    pub fn refresh_snapshot(&mut self, m: &NewtonBlockMatrix<'_>) -> Result<usize> {
        let delta = self.pending_delta(m);
        let q = delta.rank();
        if q == 0 {
            return Ok(0);
        }
        match WoodburyFactors::new(&self.t_inv, &delta) {
            Ok(f) => {
                f.update_in_place(&mut self.t_inv, self.exec);
                self.counters.woodbury_updates += 1;
                self.counters.columns_touched += q;
                self.take_snapshot(m);
                let mut u = std::mem::take(&mut self.u);
                let err = self.refine(m, None, &mut u);
                self.u = u;
                if !(err <= BACKWARD_ERROR_TOLERANCE) {
                    self.fall_back(m, &format!("backward error {err:e} after update"))?;
                }
            }
            Err(Error::SingularUpdate) => self.fall_back(m, "singular middle matrix")?,
            Err(e) => return Err(e),
        }
        Ok(q)
    }

    /// `M⁻¹ e_last` for the current `m`, from the snapshot. Returns the
    /// solution and the pending rank.
    pub fn maintained_solve(&mut self, m: &NewtonBlockMatrix<'_>) -> Result<(Vec<f64>, usize)> {
        let delta = self.pending_delta(m);
        let q = delta.rank();
        if q == 0 {
            return Ok((self.u.clone(), 0));
        }
        match WoodburyFactors::new(&self.t_inv, &delta) {
            Ok(f) => {
                let mut v = f.apply(&self.u);
                self.counters.woodbury_applies += 1;
                self.counters.columns_touched += q;
                let err = self.refine(m, Some(&f), &mut v);
                if err <= BACKWARD_ERROR_TOLERANCE {
                    return Ok((v, q));
                }
                self.fall_back(m, &format!("backward error {err:e} after apply"))?;
            }
            Err(Error::SingularUpdate) => self.fall_back(m, "singular middle matrix")?,
            Err(e) => return Err(e),
        }
        Ok((self.u.clone(), q))
    }
}

/// Snapshot exponent with `2^{2ℓ*} ≤ min(n^0.31, n^{2/3})`.
pub fn default_ell_star(n: usize) -> u32 {
    let n = n as f64;
    let budget = n.powf(0.31).min(n.powf(2.0 / 3.0));
    (budget.log2() / 2.0).floor().max(0.0) as u32
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FastOptions {
    /// Snapshot refresh period exponent; `None` picks [`default_ell_star`].
    pub ell_star: Option<u32>,
    /// Compare every maintained solve with a fresh dense solve.
    pub cross_check: bool,
    pub exec: Exec,
}


/// The robust stepper with the lazy oracle, with every Newton solve served
/// by the maintained inverse.
pub fn fast_robust_step_path(
    lp: &LpInstance,
    start: PathState,
    t_end: f64,
    cfg: &PotentialConfig,
    opts: &FastOptions,
    obs: &mut (impl StepObserver + ?Sized),
) -> Result<StepOutcome> {
    let (d, n) = (lp.rows(), lp.cols());
    cfg.validate(n)?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidInput(format!("t_end = {t_end} must be positive")));
    }
    let ell_star = opts.ell_star.unwrap_or_else(|| default_ell_star(n));
    let period = 1usize.checked_shl(ell_star).ok_or_else(|| Error::InvalidInput("ell_star too large".into()))?;
    let r0 = start.relative_deviation();
    let phi0 = potential(&r0, cfg)?;
    check_potential(0, phi0, cfg)?;

    let mut oracle = SelectVectorOracle::new(cfg.lambda);
    oracle.start(start.x(), start.s(), &r0);
    let a = lp.a();
    let mut mi = {
        let tr = oracle.triple();
        MaintainedInverse::new(&assemble_block(a, tr.xbar, tr.sbar, tr.rbar, cfg)?, opts.exec)?
    };

    let schedule = Schedule::new(start.t(), t_end, cfg.h);
    let mut out = StepOutcome::new(start);
    let mut max_phi = phi0;
    let mut max_cross: f64 = 0.0;
    for k in 0..schedule.len() {
        let st = &mut out.state;
        let t_next = schedule.t(k + 1);
        let tr = oracle.triple();
        if cfg.check_oracle {
            tr.check(st.x(), st.s(), &st.relative_deviation(), cfg.lambda)?;
        }
        let m = assemble_block(a, tr.xbar, tr.sbar, tr.rbar, cfg)?;
        let refresh = k % period == 0;
        let (v, q) = if refresh {
            let q = mi.refresh_snapshot(&m)?;
            out.snapshot_refreshes += 1;
            (mi.u().to_vec(), q)
        } else {
            mi.maintained_solve(&m)?
        };
        if opts.cross_check {
            let dense = linalg::equilibrated_solve(&m.dense(), &m.e_last())?;
            let scale = linalg::norm_inf(&dense).max(f64::MIN_POSITIVE);
            max_cross = max_cross.max(linalg::norm_inf(&linalg::sub(&v, &dense)) / scale);
        }
        out.max_update_rank = out.max_update_rank.max(q);
        out.total_update_rank += q;

        let g_norm = linalg::norm2(m.gradient());
        let scale = if g_norm <= 1e-300 { 0.0 } else { -t_next / (32.0 * cfg.lambda * g_norm) };
        let dx: Vec<f64> = v[..n].iter().map(|z| scale * z).collect();
        let ds: Vec<f64> = v[n..2 * n].iter().map(|z| scale * z).collect();
        let dy: Vec<f64> = v[2 * n..2 * n + d].iter().map(|z| scale * z).collect();
        st.advance(&dx, &ds, &dy, t_next);
        st.resync_slack(lp);
        let iteration = k + 1;
        if let Some(i) = st.x().iter().chain(st.s()).position(|v| !(*v > 0.0)) {
            return Err(Error::invariant(iteration, format!("coordinate {i} left the positive orthant")));
        }
        let r = st.relative_deviation();
        let phi = potential(&r, cfg)?;
        check_potential(iteration, phi, cfg)?;
        max_phi = max_phi.max(phi);
        oracle.advance(st.x(), st.s(), &r);
        out.iterations = iteration;
        obs.record(&StepRecord {
            iteration,
            phase: "",
            t: t_next,
            l2_centrality: l2_centrality(st),
            phi: Some(phi),
            gap: st.mu().iter().sum(),
            update_rank: q,
            snapshot_refresh: refresh,
            state: st,
        });
    }
    out.fallback_count = mi.counters().fallbacks;
    out.max_phi = Some(max_phi);
    out.max_cross_check_error = opts.cross_check.then_some(max_cross);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::centered_instance;
    use crate::newton::solve_newton;
    use crate::robust::{robust_step_path, SelectVectorOracle};
    use crate::trace::NoTrace;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg(n: usize) -> PotentialConfig {
        PotentialConfig::for_dimension(n)
    }

    #[test]
    fn scalar_block() {
        let a = DenseMatrix::from_rows(&[vec![1.0]]).unwrap();
        let m = assemble_block(&a, &[1.0], &[1.0], &[0.0], &cfg(1)).unwrap();
        let want = DenseMatrix::from_rows(&[
            vec![1.0, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, -1.0],
        ])
        .unwrap();
        assert_eq!(m.dense(), want);
    }

    #[test]
    fn structured_product_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = DenseMatrix::from_fn(3, 6, |_, _| rng.random_range(-1.0..1.0));
        let x: Vec<f64> = (0..6).map(|_| rng.random_range(0.5..2.0)).collect();
        let s: Vec<f64> = (0..6).map(|_| rng.random_range(0.5..2.0)).collect();
        let r: Vec<f64> = (0..6).map(|_| rng.random_range(-0.01..0.01)).collect();
        let m = assemble_block(&a, &x, &s, &r, &cfg(6)).unwrap();
        let z: Vec<f64> = (0..m.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let want = m.dense().mul_vec(&z);
        for (p, q) in m.mul_vec(&z).iter().zip(&want) {
            assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn last_column_reproduces_newton_direction() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let (d, n) = (3, 7);
        let a = DenseMatrix::from_fn(d, n, |_, _| rng.random_range(-1.0..1.0));
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
        let s: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
        let r: Vec<f64> = (0..n).map(|_| rng.random_range(-0.01..0.01)).collect();
        let c = cfg(n);
        let m = assemble_block(&a, &x, &s, &r, &c).unwrap();
        let v = linalg::lu_solve(&m.dense(), &m.e_last()).unwrap();
        assert_eq!(v[m.dim() - 1], -1.0);

        let t_next = 0.9;
        let dmu = crate::robust::gradient_target(m.gradient(), t_next, c.lambda);
        let dir = solve_newton(&a, &x, &s, &dmu).unwrap();
        let scale = -t_next / (32.0 * c.lambda * linalg::norm2(m.gradient()));
        for j in 0..n {
            assert!((scale * v[j] - dir.dx[j]).abs() < 1e-10);
            assert!((scale * v[n + j] - dir.ds[j]).abs() < 1e-10);
        }
        for i in 0..d {
            assert!((scale * v[2 * n + i] - dir.dy[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn refresh_and_solve_track_fresh_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let (d, n) = (4, 10);
        let a = DenseMatrix::from_fn(d, n, |_, _| rng.random_range(-1.0..1.0));
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
        let s: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
        let r: Vec<f64> = (0..n).map(|_| rng.random_range(-0.01..0.01)).collect();
        let c = cfg(n);
        let m0 = assemble_block(&a, &x, &s, &r, &c).unwrap();
        let mut mi = MaintainedInverse::new(&m0, Exec::Sequential).unwrap();

        // No drift: the solve returns u.
        let (v, q) = mi.maintained_solve(&m0).unwrap();
        assert_eq!((v.as_slice(), q), (mi.u(), 0));
        assert_eq!(mi.refresh_snapshot(&m0).unwrap(), 0);

        // One coordinate of x̄.
        let mut x1 = x.clone();
        x1[3] *= 1.01;
        let m1 = assemble_block(&a, &x1, &s, &r, &c).unwrap();
        let (v, q) = mi.maintained_solve(&m1).unwrap();
        assert_eq!(q, 1);
        let want = linalg::lu_solve(&m1.dense(), &m1.e_last()).unwrap();
        let scale = linalg::norm_inf(&want);
        assert!(linalg::norm_inf(&linalg::sub(&v, &want)) <= 1e-6 * scale);

        // Three columns: s̄₀, x̄₃, and r̄₅.
        let mut s2 = s.clone();
        s2[0] *= 0.98;
        let mut r2 = r.clone();
        r2[5] += 0.001;
        let m2 = assemble_block(&a, &x1, &s2, &r2, &c).unwrap();
        assert_eq!(mi.refresh_snapshot(&m2).unwrap(), 3);
        let fresh = linalg::equilibrated_inverse(&m2.dense(), Exec::Sequential).unwrap();
        assert!(mi.inverse().max_abs_diff(&fresh) <= 1e-6);
        assert!(m2.backward_error(mi.u()) <= 1e-6);
        let residual = linalg::sub(&m2.mul_vec(mi.u()), &m2.e_last());
        assert!(linalg::norm_inf(&residual) <= 1e-6);
        assert_eq!(mi.counters().fallbacks, 0);
    }

    #[test]
    fn ell_star_defaults() {
        assert_eq!(default_ell_star(10), 0);
        assert_eq!(default_ell_star(50), 0);
        assert_eq!(default_ell_star(100), 1);
    }

    #[test]
    fn fast_path_matches_lazy_robust_path() {
        let n = 10;
        let (lp, st) = centered_instance(21, n, 4, 1.0);
        let mut c = cfg(n);
        c.check_oracle = true;
        for ell_star in [0, 2] {
            let opts = FastOptions { ell_star: Some(ell_star), cross_check: true, exec: Exec::Sequential };
            let mut refreshes = Vec::new();
            let fast = fast_robust_step_path(&lp, st.clone(), 0.5, &c, &opts, &mut |r: &StepRecord<'_>| {
                refreshes.push(r.snapshot_refresh)
            })
            .unwrap();
            let mut oracle = SelectVectorOracle::new(c.lambda);
            let slow = robust_step_path(&lp, st.clone(), 0.5, &c, &mut oracle, &mut NoTrace).unwrap();
            assert_eq!(fast.iterations, slow.iterations);
            assert_eq!(fast.fallback_count, 0);
            assert!(fast.max_cross_check_error.unwrap() <= 1e-6);
            assert!(fast.max_phi.unwrap() <= 16.0 * n as f64);
            for (k, r) in refreshes.iter().enumerate() {
                assert_eq!(*r, k % (1 << ell_star) == 0);
            }
            // Round-off flips a few lazy rewrites, so the two paths agree
            // only to path-following accuracy.
            for (p, q) in fast.state.x().iter().zip(slow.state.x()) {
                assert!((p - q).abs() <= 1e-3 * q.abs(), "{p} vs {q} (ell* {ell_star})");
            }
        }
    }
}
