//! The embedded program with a known central point, extraction back to the
//! original program, and rounding to an exact vertex.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, min_norm_point, spd_solve, DenseMatrix};
use crate::lp::{LpInstance, LpParameters, PathState, PrimalDualPoint, ResolvedParameters, FEASIBILITY_TOLERANCE};

/// Default embedding slack `ε = 1/(100√n)`.
pub fn default_epsilon(n: usize) -> f64 {
    1.0 / (100.0 * (n as f64).sqrt())
}

/// Quantities fixed when the embedding is built.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Embedding {
    pub epsilon: f64,
    pub r_bar: f64,
    /// Path parameter of the explicit central point.
    pub t: f64,
    pub x_plus: Vec<f64>,
    pub x_minus: Vec<f64>,
    pub b_tilde: f64,
    pub c_tilde: Vec<f64>,
    #[serde(skip)]
    pub params: ResolvedParameters,
}

/// `min c̄ᵀx̄` over `Āx̄ = b̄, x̄ ≥ 0` with `Ā = [[A, −A, 0], [1ᵀ, 0, 1]]`,
/// `b̄ = (b, b̃)`, `c̄ = (c, c̃, 0)`.
#[derive(Clone, Debug)]
pub struct ModifiedLp {
    original: LpInstance,
    lp: LpInstance,
    embed: Embedding,
}

impl ModifiedLp {
    pub fn original(&self) -> &LpInstance {
        &self.original
    }

    pub fn lp(&self) -> &LpInstance {
        &self.lp
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embed
    }

    /// Split a dual point of the embedded program into its blocks.
    pub fn dual_point(&self, st: &PathState) -> ModifiedDualPoint {
        let (d, n) = (self.original.rows(), self.original.cols());
        let s = st.s();
        ModifiedDualPoint {
            s_plus: s[..n].to_vec(),
            s_minus: s[n..2 * n].to_vec(),
            s_theta: s[2 * n],
            y: st.y()[..d].to_vec(),
            lambda_dual: st.y()[d],
        }
    }
}

/// Dual blocks of the embedded program:
/// `Aᵀy + λ1 + s⁺ = c`, `−Aᵀy + s⁻ = c̃`, `λ + s^θ = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModifiedDualPoint {
    pub s_plus: Vec<f64>,
    pub s_minus: Vec<f64>,
    pub s_theta: f64,
    pub y: Vec<f64>,
    pub lambda_dual: f64,
}

impl ModifiedDualPoint {
    /// Largest relative violation among the three dual blocks.
    pub fn residual(&self, m: &ModifiedLp) -> f64 {
        let c = m.original.c();
        let aty = m.original.a().mul_t_vec(&self.y);
        let rel = |v: f64, scale: f64| v.abs() / scale.abs().max(1.0);
        let mut worst: f64 = 0.0;
        for i in 0..c.len() {
            let scale = c[i].abs().max(self.s_plus[i]).max(self.lambda_dual.abs());
            worst = worst.max(rel(aty[i] + self.lambda_dual + self.s_plus[i] - c[i], scale));
            let scale = m.embed.c_tilde[i].max(self.s_minus[i]);
            worst = worst.max(rel(-aty[i] + self.s_minus[i] - m.embed.c_tilde[i], scale));
        }
        worst.max(rel(self.lambda_dual + self.s_theta, self.s_theta))
    }
}

/// Build the embedded program and its central point at
/// `t = 2¹⁶ ε⁻³ n² (R/r) LR`.
pub fn build_modified(lp: &LpInstance, params: &LpParameters, epsilon: f64) -> Result<(ModifiedLp, PathState)> {
    let p = params.resolve(lp)?;
    if !(epsilon > 0.0 && epsilon <= 0.5) {
        return Err(Error::InvalidInput(format!("epsilon = {epsilon} must lie in (0, 1/2]")));
    }
    let (d, n) = (lp.rows(), lp.cols());
    let nf = n as f64;
    let r_bar = 5.0 * p.big_r / epsilon;
    let ln_t = 16.0 * std::f64::consts::LN_2 - 3.0 * epsilon.ln() + 2.0 * nf.ln() + (p.big_r / p.r).ln() + p.lr().ln();
    if !(ln_t < 700.0) {
        return Err(Error::PreconditionViolation(format!("ln t = {ln_t} overflows a double")));
    }
    let t = ln_t.exp();
    if !(t >= 8.0 * p.l * r_bar) {
        return Err(Error::PreconditionViolation(format!("t = {t:e} is below 8LR̄ = {:e}", 8.0 * p.l * r_bar)));
    }

    let x_plus: Vec<f64> = lp.c().iter().map(|c| t / (c + t / r_bar)).collect();
    let x_hat = min_norm_point(lp.a(), lp.b())?;
    let x_minus: Vec<f64> = x_plus.iter().zip(&x_hat).map(|(p, h)| p - h).collect();
    if let Some(i) = x_minus.iter().position(|v| !(*v > 0.0)) {
        return Err(Error::PreconditionViolation(format!(
            "x_c⁻[{i}] = {:e} is not positive; the outer radius is too small",
            x_minus[i]
        )));
    }
    let c_tilde: Vec<f64> = x_minus.iter().map(|x| t / x).collect();
    let b_tilde = x_plus.iter().sum::<f64>() + r_bar;

    let fail = |what: String| Err(Error::PreconditionViolation(what));
    if !(0.75 * nf * r_bar <= b_tilde && b_tilde <= 3.0 * nf * r_bar) {
        return fail(format!("b̃ = {b_tilde:e} outside [¾nR̄, 3nR̄]"));
    }
    if let Some(i) = c_tilde.iter().position(|c| !(*c >= t / (2.0 * r_bar))) {
        return fail(format!("c̃[{i}] = {:e} is below t/(2R̄)", c_tilde[i]));
    }
    if let Some(i) = x_plus.iter().position(|x| !(0.75 * r_bar <= *x && *x <= 1.5 * r_bar)) {
        return fail(format!("x_c⁺[{i}] = {:e} outside [¾R̄, 3R̄/2]", x_plus[i]));
    }

    let b_bar: Vec<f64> = lp.b().iter().copied().chain([b_tilde]).collect();
    let c_bar: Vec<f64> = lp.c().iter().chain(&c_tilde).copied().chain([0.0]).collect();
    let modified = LpInstance::embedded(lp.a(), b_bar, c_bar)?;

    let x0: Vec<f64> = x_plus.iter().chain(&x_minus).copied().chain([r_bar]).collect();
    let s0: Vec<f64> = x0.iter().map(|x| t / x).collect();
    let mut y0 = vec![0.0; d + 1];
    y0[d] = -t / r_bar;
    if let Some(i) = x0.iter().zip(&s0).position(|(x, s)| !((x * s - t).abs() <= 1e-10 * t)) {
        return fail(format!("x⁰ s⁰ misses t at coordinate {i}"));
    }
    let point = PrimalDualPoint::new(&modified, x0, s0, y0)?;
    let state = PathState::new(point, t)?;
    let embed = Embedding { epsilon, r_bar, t, x_plus, x_minus, b_tilde, c_tilde, params: p };
    Ok((ModifiedLp { original: lp.clone(), lp: modified, embed }, state))
}

/// Measured quantities at extraction, with the bounds they are expected
/// to respect.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtractionDiagnostics {
    pub max_x_ratio: f64,
    pub max_s_ratio: f64,
    pub min_x_plus: f64,
    pub min_x_plus_bound: f64,
    pub max_x_minus: f64,
    pub max_x_minus_bound: f64,
    /// `‖xs − LR‖₂ / LR` for the extracted point.
    pub centrality: f64,
    /// `‖(c − Aᵀy) − (s⁺ − s^θ)‖∞ / L`.
    pub slack_drift: f64,
}

impl ExtractionDiagnostics {
    pub fn distance_bounds_hold(&self) -> bool {
        self.min_x_plus >= self.min_x_plus_bound && self.max_x_minus <= self.max_x_minus_bound
    }
}

/// Largest `‖(c − Aᵀy) − (s⁺ − s^θ)‖∞ / L` accepted at extraction.
pub const SLACK_DRIFT_TOLERANCE: f64 = 1e-4;

/// Map a point of the embedded program at `t = LR` to the original program:
/// `x = x⁺ − x⁻`, `s = c − Aᵀy`, with `y` the first `d` dual entries.
pub fn extract(m: &ModifiedLp, st: &PathState) -> Result<(PrimalDualPoint, ExtractionDiagnostics)> {
    let (d, n) = (m.original.rows(), m.original.cols());
    if st.dim() != 2 * n + 1 || st.y().len() != d + 1 {
        return Err(Error::Dimension("state does not belong to the embedded program".into()));
    }
    let p = &m.embed.params;
    let lr = p.lr();
    if let Some(i) = st.mu().iter().position(|v| !(5.0 / 6.0 * lr <= *v && *v <= 7.0 / 6.0 * lr)) {
        return Err(Error::PreconditionViolation(format!(
            "x s[{i}] = {:e} outside [⅚LR, 7/6·LR] with LR = {lr:e}",
            st.mu()[i]
        )));
    }
    let eps = m.embed.epsilon;
    let (x, s) = (st.x(), st.s());
    let (x_plus, x_minus) = (&x[..n], &x[n..2 * n]);
    let (s_plus, s_theta) = (&s[..n], s[2 * n]);
    for i in 0..n {
        if !(x_minus[i] <= eps * x_plus[i]) {
            return Err(Error::ExtractionFailure(format!("x⁻[{i}] = {:e} exceeds ε·x⁺[{i}]", x_minus[i])));
        }
        if !(s_theta <= eps * s_plus[i]) {
            return Err(Error::ExtractionFailure(format!("s^θ = {s_theta:e} exceeds ε·s⁺[{i}]")));
        }
    }

    let y = st.y()[..d].to_vec();
    let x_out: Vec<f64> = x_plus.iter().zip(x_minus).map(|(p, m)| p - m).collect();
    let s_blocks: Vec<f64> = s_plus.iter().map(|v| v - s_theta).collect();
    // The slack is recomputed from y: the blocks carry round-off at the
    // scale of the starting point.
    let s_out = m.original.dual_slack(&y);
    let slack_drift = linalg::norm_inf(&linalg::sub(&s_out, &s_blocks)) / p.l;
    if !(slack_drift <= SLACK_DRIFT_TOLERANCE) {
        return Err(Error::ExtractionFailure(format!("dual slack drifted by {slack_drift:e}·L")));
    }

    let centrality = x_out.iter().zip(&s_out).map(|(x, s)| (x * s - lr).powi(2)).sum::<f64>().sqrt() / lr;
    let nf = n as f64;
    let diag = ExtractionDiagnostics {
        max_x_ratio: (0..n).map(|i| x_minus[i] / x_plus[i]).fold(0.0, f64::max),
        max_s_ratio: s_plus.iter().map(|v| s_theta / v).fold(0.0, f64::max),
        min_x_plus: x_plus.iter().copied().fold(f64::INFINITY, f64::min),
        min_x_plus_bound: p.big_r * p.r / (10.0 * nf * m.embed.r_bar),
        max_x_minus: x_minus.iter().copied().fold(0.0, f64::max),
        max_x_minus_bound: 20.0 * nf * p.l * m.embed.r_bar.powi(2) / m.embed.t,
        centrality,
        slack_drift,
    };
    let point = PrimalDualPoint::new(&m.original, x_out, s_out, y).map_err(|e| Error::ExtractionFailure(e.to_string()))?;
    Ok((point, diag))
}

fn is_integral(lp: &LpInstance) -> bool {
    lp.a().as_slice().iter().chain(lp.b()).all(|v| v.fract() == 0.0)
}

/// Recover the optimal vertex from a `δLR`-optimal point, given the vertex
/// gap `η` (every other vertex is worse by at least `ηLR`).
pub fn round_to_vertex(lp: &LpInstance, x: &[f64], eta: f64, delta: f64, params: &LpParameters) -> Result<Vec<f64>> {
    let p = params.resolve(lp)?;
    let (d, n) = (lp.rows(), lp.cols());
    if x.len() != n {
        return Err(Error::Dimension(format!("x has length {}, expected {n}", x.len())));
    }
    if !(eta > 0.0 && delta > 0.0 && delta < eta) {
        return Err(Error::InvalidInput(format!("need 0 < δ < η, got δ = {delta}, η = {eta}")));
    }
    let radius = 2.0 * delta * p.big_r / eta;
    let support: Vec<usize> = (0..n).filter(|&i| x[i] > radius).collect();
    if support.is_empty() || support.len() > d {
        return Err(Error::RoundingFailure(format!(
            "{} coordinates exceed 2δR/η = {radius:e}; a vertex has between 1 and {d}",
            support.len()
        )));
    }
    let a_b = DenseMatrix::from_fn(d, support.len(), |i, k| lp.a().get(i, support[k]));
    let z = spd_solve(&a_b.transpose().matmul(&a_b), &a_b.mul_t_vec(lp.b()))
        .map_err(|e| Error::RoundingFailure(format!("support columns are dependent: {e}")))?;
    let mut v = vec![0.0; n];
    for (k, &i) in support.iter().enumerate() {
        v[i] = z[k];
    }

    let scale = 1.0 + linalg::norm_inf(x);
    let off_support_zero = (0..n).all(|i| support.contains(&i) || x[i] == 0.0);
    if off_support_zero && linalg::norm_inf(&linalg::sub(&v, x)) <= 1e-12 * scale {
        return Ok(x.to_vec());
    }
    if is_integral(lp) {
        let snapped: Vec<f64> = v.iter().map(|v| if (v - v.round()).abs() <= radius { v.round() } else { *v }).collect();
        if lp.primal_residual(&snapped) == 0.0 {
            v = snapped;
        }
    }

    let b_scale = 1.0 + linalg::norm2(lp.b());
    if v.iter().any(|v| *v < 0.0) || lp.primal_residual(&v) > FEASIBILITY_TOLERANCE * b_scale {
        return Err(Error::RoundingFailure("support system yields an infeasible point".into()));
    }
    let dist = linalg::norm2(&linalg::sub(&v, x));
    if dist > radius {
        return Err(Error::RoundingFailure(format!("vertex lies {dist:e} from x, outside the ball of radius {radius:e}")));
    }
    let slack = lp.objective(&v) - lp.objective(x);
    if slack > delta * p.lr() {
        return Err(Error::RoundingFailure(format!("vertex objective exceeds cᵀx by {slack:e}")));
    }
    Ok(v)
}
