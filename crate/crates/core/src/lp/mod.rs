//! Standard-form programs `min cᵀx s.t. Ax = b, x ≥ 0`, primal-dual points
//! and centrality measures.

mod oracle;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, modified_normal_solve, Cholesky, DenseMatrix};

pub use oracle::{central_path_oracle, central_path_oracle_from, ORACLE_MAX_ITERATIONS};

/// Default relative tolerance for primal and dual feasibility.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-8;

/// Something that acts like a constraint matrix inside a Newton solve.
pub trait Constraints {
    /// `(d, n)`.
    fn dims(&self) -> (usize, usize);
    fn apply(&self, x: &[f64]) -> Vec<f64>;
    fn apply_t(&self, y: &[f64]) -> Vec<f64>;
    /// Solve `A diag(w) Aᵀ z = rhs`.
    fn normal_solve(&self, w: &[f64], rhs: &[f64]) -> Result<Vec<f64>>;
}

impl Constraints for DenseMatrix {
    fn dims(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.mul_vec(x)
    }

    fn apply_t(&self, y: &[f64]) -> Vec<f64> {
        self.mul_t_vec(y)
    }

    fn normal_solve(&self, w: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
        linalg::spd_solve(&self.scaled_gram(w), rhs)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Structure {
    General,
    /// `[[A, −A, 0], [1ᵀ, 0, 1]]` built from the inner `A`.
    Embedded(DenseMatrix),
}

/// A standard-form linear program with full-row-rank `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct LpInstance {
    a: DenseMatrix,
    b: Vec<f64>,
    c: Vec<f64>,
    structure: Structure,
}

impl LpInstance {
    pub fn new(a: DenseMatrix, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        let (d, n) = (a.rows(), a.cols());
        if b.len() != d {
            return Err(Error::Dimension(format!("b has length {}, A has {d} rows", b.len())));
        }
        if c.len() != n {
            return Err(Error::Dimension(format!("c has length {}, A has {n} columns", c.len())));
        }
        if d == 0 || d > n {
            return Err(Error::Dimension(format!("need 0 < d <= n, got a {d}x{n} constraint matrix")));
        }
        if b.iter().chain(&c).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("b and c must be finite".into()));
        }
        if Cholesky::factor(&a.scaled_gram(&vec![1.0; n])).is_err() {
            return Err(Error::RankDeficient);
        }
        Ok(Self { a, b, c, structure: Structure::General })
    }

    /// The embedded program built from `inner`, whose normal matrix is
    /// solved blockwise.
    pub(crate) fn embedded(inner: &DenseMatrix, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        let (d, n) = (inner.rows(), inner.cols());
        let a = DenseMatrix::from_fn(d + 1, 2 * n + 1, |i, j| match (i < d, j) {
            (true, j) if j < n => inner.get(i, j),
            (true, j) if j < 2 * n => -inner.get(i, j - n),
            (true, _) => 0.0,
            (false, j) if j < n => 1.0,
            (false, j) if j < 2 * n => 0.0,
            (false, _) => 1.0,
        });
        let mut lp = Self::new(a, b, c)?;
        lp.structure = Structure::Embedded(inner.clone());
        Ok(lp)
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// Number of equality constraints `d`.
    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    /// Number of variables `n`.
    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        linalg::dot(&self.c, x)
    }

    pub fn dual_objective(&self, y: &[f64]) -> f64 {
        linalg::dot(&self.b, y)
    }

    /// `‖Ax − b‖₂`.
    pub fn primal_residual(&self, x: &[f64]) -> f64 {
        linalg::norm2(&linalg::sub(&self.a.mul_vec(x), &self.b))
    }

    /// `‖Aᵀy + s − c‖₂`.
    pub fn dual_residual(&self, y: &[f64], s: &[f64]) -> f64 {
        let aty = self.a.mul_t_vec(y);
        aty.iter().zip(s).zip(&self.c).map(|((a, s), c)| (a + s - c).powi(2)).sum::<f64>().sqrt()
    }

    /// `c − Aᵀy`.
    pub fn dual_slack(&self, y: &[f64]) -> Vec<f64> {
        let aty = self.a.mul_t_vec(y);
        self.c.iter().zip(&aty).map(|(c, a)| c - a).collect()
    }
}

impl Constraints for LpInstance {
    fn dims(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.a.mul_vec(x)
    }

    fn apply_t(&self, y: &[f64]) -> Vec<f64> {
        self.a.mul_t_vec(y)
    }

    fn normal_solve(&self, w: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
        match &self.structure {
            Structure::General => self.a.normal_solve(w, rhs),
            Structure::Embedded(inner) => {
                let n = inner.cols();
                modified_normal_solve(inner, &w[..n], &w[n..2 * n], w[2 * n], rhs)
            }
        }
    }
}

/// Conditioning parameters: inner radius `r`, outer radius `R` and the
/// Lipschitz constant `L ≥ ‖c‖₂`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpParameters {
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
}

impl LpParameters {
    pub fn new(r: f64, big_r: f64) -> Self {
        Self { r, big_r, l: None }
    }

    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.l = Some(l);
        self
    }

    /// Check the radii and return the Lipschitz constant to use: `‖c‖₂`,
    /// or the supplied value when `c = 0`.
    pub fn resolve(&self, lp: &LpInstance) -> Result<ResolvedParameters> {
        let Self { r, big_r, l } = *self;
        if !(r > 0.0 && r.is_finite()) || !(big_r > 0.0 && big_r.is_finite()) {
            return Err(Error::InvalidInput(format!("radii must be positive and finite, got r = {r}, R = {big_r}")));
        }
        if r > big_r {
            return Err(Error::InvalidInput(format!("inner radius {r} exceeds outer radius {big_r}")));
        }
        let norm_c = linalg::norm2(lp.c());
        if let Some(l) = l {
            if !(l.is_finite() && l >= norm_c * (1.0 - 1e-12)) {
                return Err(Error::InvalidInput(format!("lipschitz constant {l} is below ‖c‖₂ = {norm_c}")));
            }
        }
        let l = if norm_c > 0.0 {
            norm_c
        } else {
            match l {
                Some(l) if l > 0.0 => l,
                _ => return Err(Error::InvalidInput("c = 0 needs a positive lipschitz constant".into())),
            }
        };
        Ok(ResolvedParameters { r, big_r, l })
    }
}

/// Validated `(r, R, L)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResolvedParameters {
    pub r: f64,
    pub big_r: f64,
    pub l: f64,
}

impl ResolvedParameters {
    /// The scale `LR` of objective errors.
    pub fn lr(&self) -> f64 {
        self.l * self.big_r
    }
}

/// Strictly positive primal `x`, slack `s` and dual `y`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimalDualPoint {
    x: Vec<f64>,
    s: Vec<f64>,
    y: Vec<f64>,
}

impl PrimalDualPoint {
    /// Validate positivity and feasibility against `lp` at the default
    /// tolerance.
    pub fn new(lp: &LpInstance, x: Vec<f64>, s: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(lp, x, s, y, FEASIBILITY_TOLERANCE)
    }

    pub fn with_tolerance(lp: &LpInstance, x: Vec<f64>, s: Vec<f64>, y: Vec<f64>, tol: f64) -> Result<Self> {
        let p = Self::unchecked(x, s, y);
        p.check(lp, tol)?;
        Ok(p)
    }

    /// Skip validation; for points produced by a stepper from a validated
    /// start.
    pub fn unchecked(x: Vec<f64>, s: Vec<f64>, y: Vec<f64>) -> Self {
        Self { x, s, y }
    }

    pub fn check(&self, lp: &LpInstance, tol: f64) -> Result<()> {
        let (d, n) = (lp.rows(), lp.cols());
        if self.x.len() != n || self.s.len() != n || self.y.len() != d {
            return Err(Error::Dimension(format!(
                "point has |x| = {}, |s| = {}, |y| = {} for a {d}x{n} program",
                self.x.len(),
                self.s.len(),
                self.y.len()
            )));
        }
        if let Some(i) = self.x.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::Infeasible(format!("x[{i}] = {} is not positive", self.x[i])));
        }
        if let Some(i) = self.s.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::Infeasible(format!("s[{i}] = {} is not positive", self.s[i])));
        }
        let primal = lp.primal_residual(&self.x);
        let primal_scale = linalg::norm2(lp.b()).max(f64::MIN_POSITIVE);
        if primal > tol * primal_scale {
            return Err(Error::Infeasible(format!("‖Ax − b‖ = {primal:e} exceeds {tol:e}·‖b‖")));
        }
        let dual = lp.dual_residual(&self.y, &self.s);
        let dual_scale = linalg::norm2(lp.c()).max(linalg::norm2(&self.s));
        if dual > tol * dual_scale {
            return Err(Error::Infeasible(format!("‖Aᵀy + s − c‖ = {dual:e} exceeds {tol:e}·‖c‖")));
        }
        Ok(())
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        (self.x, self.s, self.y)
    }
}

/// `xᵀs`, which equals `cᵀx − bᵀy` for feasible points.
pub fn duality_gap(p: &PrimalDualPoint) -> f64 {
    linalg::dot(&p.x, &p.s)
}

/// `xᵀs`, after checking it against `cᵀx − bᵀy`.
pub fn certify_gap(lp: &LpInstance, p: &PrimalDualPoint) -> Result<f64> {
    let gap = duality_gap(p);
    let cx = lp.objective(&p.x);
    let by = lp.dual_objective(&p.y);
    if (cx - by - gap).abs() > 1e-6 * (1.0 + cx.abs()) {
        return Err(Error::Infeasible(format!("cᵀx − bᵀy = {:e} but xᵀs = {gap:e}", cx - by)));
    }
    Ok(gap)
}

/// A primal-dual point tagged with its path parameter `t` and the cached
/// products `μ = x∘s`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathState {
    point: PrimalDualPoint,
    t: f64,
    mu: Vec<f64>,
}

impl PathState {
    pub fn new(point: PrimalDualPoint, t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidInput(format!("path parameter t = {t} must be positive")));
        }
        let mu = products(&point.x, &point.s);
        Ok(Self { point, t, mu })
    }

    pub fn point(&self) -> &PrimalDualPoint {
        &self.point
    }

    pub fn into_point(self) -> PrimalDualPoint {
        self.point
    }

    pub fn x(&self) -> &[f64] {
        &self.point.x
    }

    pub fn s(&self) -> &[f64] {
        &self.point.s
    }

    pub fn y(&self) -> &[f64] {
        &self.point.y
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn dim(&self) -> usize {
        self.point.x.len()
    }

    /// `r = μ/t − 1`.
    pub fn relative_deviation(&self) -> Vec<f64> {
        self.mu.iter().map(|m| m / self.t - 1.0).collect()
    }

    /// Move to `(x + δx, s + δs, y + δy)` at the new `t`.
    pub(crate) fn advance(&mut self, dx: &[f64], ds: &[f64], dy: &[f64], t: f64) {
        linalg::axpy(1.0, dx, &mut self.point.x);
        linalg::axpy(1.0, ds, &mut self.point.s);
        linalg::axpy(1.0, dy, &mut self.point.y);
        self.t = t;
        self.mu = products(&self.point.x, &self.point.s);
    }

    /// Reset `s` to the exact dual slack `c − Aᵀy`, so round-off from
    /// incremental updates does not accumulate over long runs.
    pub(crate) fn resync_slack(&mut self, lp: &LpInstance) {
        self.point.s = lp.dual_slack(&self.point.y);
        self.mu = products(&self.point.x, &self.point.s);
    }

    /// Recompute the cache from scratch and compare; used in tests.
    pub fn cache_is_coherent(&self) -> bool {
        products(&self.point.x, &self.point.s) == self.mu
    }
}

fn products(x: &[f64], s: &[f64]) -> Vec<f64> {
    x.iter().zip(s).map(|(x, s)| x * s).collect()
}

/// `‖x∘s − t·1‖₂ / t`.
pub fn l2_centrality(st: &PathState) -> f64 {
    st.mu.iter().map(|m| (m - st.t).powi(2)).sum::<f64>().sqrt() / st.t
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn tiny() -> LpInstance {
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        LpInstance::new(a, vec![1.0], vec![1.0, 2.0]).unwrap()
    }

    #[test]
    fn construction_rejects_bad_shapes() {
        let a = DenseMatrix::from_rows(&[vec![1.0], vec![2.0]]).unwrap();
        assert!(matches!(LpInstance::new(a, vec![1.0, 2.0], vec![1.0]), Err(Error::Dimension(_))));
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 0.0]]).unwrap();
        assert!(matches!(LpInstance::new(a, vec![1.0, 2.0], vec![0.0; 3]), Err(Error::RankDeficient)));
    }

    #[test]
    fn gap_examples() {
        let lp = tiny();
        let p = PrimalDualPoint::unchecked(vec![1.0, 0.0], vec![0.0, 3.0], vec![0.0]);
        assert_eq!(duality_gap(&p), 0.0);
        let p = PrimalDualPoint::unchecked(vec![1.0, 1.0], vec![2.0, 3.0], vec![0.0]);
        assert_eq!(duality_gap(&p), 5.0);

        // x = (0.25, 0.75), y = 0.5, s = c − Aᵀy = (0.5, 1.5).
        let p = PrimalDualPoint::new(&lp, vec![0.25, 0.75], vec![0.5, 1.5], vec![0.5]).unwrap();
        let independent = lp.objective(p.x()) - lp.dual_objective(p.y());
        assert!((duality_gap(&p) - independent).abs() <= 1e-8);
        assert!((certify_gap(&lp, &p).unwrap() - 1.25).abs() < 1e-15);
    }

    #[test]
    fn infeasible_points_are_rejected() {
        let lp = tiny();
        assert!(PrimalDualPoint::new(&lp, vec![0.5, 0.6], vec![0.5, 1.5], vec![0.5]).is_err());
        assert!(PrimalDualPoint::new(&lp, vec![0.25, 0.75], vec![0.5, 1.0], vec![0.5]).is_err());
        assert!(PrimalDualPoint::new(&lp, vec![1.5, -0.5], vec![0.5, 1.5], vec![0.5]).is_err());
    }

    #[test]
    fn centrality_examples() {
        let on_path = PathState::new(PrimalDualPoint::unchecked(vec![2.0, 0.5], vec![1.5, 6.0], vec![0.0]), 3.0).unwrap();
        assert_eq!(l2_centrality(&on_path), 0.0);
        let scalar = PathState::new(PrimalDualPoint::unchecked(vec![1.25], vec![1.0], vec![]), 1.0).unwrap();
        assert_eq!(l2_centrality(&scalar), 0.25);
        let st = PathState::new(PrimalDualPoint::unchecked(vec![1.1, 0.9], vec![1.0, 1.0], vec![0.0]), 1.0).unwrap();
        let direct = ((1.1f64 - 1.0).powi(2) + (0.9f64 - 1.0).powi(2)).sqrt();
        assert!((l2_centrality(&st) - direct).abs() < 1e-15);
    }

    #[test]
    fn cache_tracks_mutation() {
        let mut st = PathState::new(PrimalDualPoint::unchecked(vec![1.0, 2.0], vec![3.0, 4.0], vec![0.0]), 1.0).unwrap();
        st.advance(&[0.1, -0.2], &[0.3, 0.01], &[1.0], 0.5);
        assert!(st.cache_is_coherent());
        assert_eq!(st.t(), 0.5);
    }

    #[test]
    fn parameter_resolution() {
        let lp = tiny();
        let norm_c = 5f64.sqrt();
        let p = LpParameters::new(0.5, 1.0).resolve(&lp).unwrap();
        assert_eq!(p.l, norm_c);
        assert!(LpParameters::new(0.5, 1.0).with_lipschitz(1.0).resolve(&lp).is_err());
        assert_eq!(LpParameters::new(0.5, 1.0).with_lipschitz(10.0).resolve(&lp).unwrap().l, norm_c);
        assert!(LpParameters::new(2.0, 1.0).resolve(&lp).is_err());
    }

    #[test]
    fn embedded_normal_solve_matches_dense() {
        let inner = DenseMatrix::from_rows(&[vec![1.0, 2.0, 0.5], vec![0.0, 1.0, 1.0]]).unwrap();
        let lp = LpInstance::embedded(&inner, vec![1.0, 2.0, 3.0], vec![1.0; 7]).unwrap();
        let w = [1.0, 2.0, 3.0, 0.5, 0.25, 4.0, 2.0];
        let rhs = [1.0, -1.0, 0.5];
        let blocked = lp.normal_solve(&w, &rhs).unwrap();
        let dense = lp.a().normal_solve(&w, &rhs).unwrap();
        for (p, q) in blocked.iter().zip(&dense) {
            assert!((p - q).abs() < 1e-12);
        }
    }
}
