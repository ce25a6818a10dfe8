//! Certified approximation of vanishing multipliers by compactly supported
//! smooth ones, plus the structural reductions used around it: splitting off
//! `a(∞)`, removing jumps, and rational approximation in the Wiener algebra.
//!
//! A certificate stores every constant and every measured sup norm, so its
//! arithmetic can be replayed without the symbol.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{classical_s_bound, Provenance};
use crate::exponent::{ExponentSpec, VariableExponent};
use crate::expr::{self, Expr};
use crate::oracle::{cyclic_nodes, cyclic_space, multiplier_matrix, opnorm_on, OracleBudget};
use crate::quad;
use crate::symbol::{
    convolve_mollify, jump_killer_at, jump_killer_infinity, mollifier_constant, psi_n, vnorm, wiener_norm, Symbol,
    SymbolSpec,
};

/// Relative tolerance of the arithmetic replay.
pub const REPLAY_TOL: f64 = 1e-12;
/// Largest cutoff index tried before a symbol is declared non-decaying.
const MAX_CUTOFF: u64 = 1 << 52;
const MAX_HALVINGS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureConfig {
    /// Spacing of the uniform measurement grid.
    pub step: f64,
    /// Width measured uniformly beyond the cutoff ramp before the sampled tail starts.
    pub window: f64,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig { step: 1.0 / 64.0, window: 8.0 }
    }
}

/// A grid-measured sup norm with its Lipschitz safety margin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupMeasurement {
    pub measured: f64,
    pub lipschitz: f64,
    pub step: f64,
    /// `2·step·lipschitz`.
    pub margin: f64,
    /// Sampled sup of the tail beyond the uniform windows.
    pub tail: f64,
    /// `max(measured + margin, tail)`: the value entering the bound.
    pub value: f64,
}

impl SupMeasurement {
    fn recompute(&self) -> f64 {
        (self.measured + 2.0 * self.step * self.lipschitz).max(self.tail)
    }
}

/// Analytic bound for `‖b*φ_δ − b‖_∞` from the moments `μ_k = ∫|u|^k φ(u) du`:
/// `min(δ·μ₁·Lip, ½δ²μ₂·M₂ + ½δ·μ₁·J)` with `M₂ = sup|b″|` on the pieces and
/// `J` the largest total slope jump inside one window of width `2δ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothingBound {
    pub delta: f64,
    pub lipschitz: f64,
    pub second_derivative: f64,
    pub kink_jump: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub value: f64,
}

impl SmoothingBound {
    fn recompute(&self) -> f64 {
        let d = self.delta;
        let first = d * self.mu1 * self.lipschitz;
        let second = 0.5 * d * d * self.mu2 * self.second_derivative + 0.5 * d * self.mu1 * self.kink_jump;
        first.min(second)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundFormula {
    /// Interpolation between `L^{p_θ(·)}` and `L²` with a multiplier bound `A_θ`.
    Cloud,
    /// Interpolation through a constant `L^{p₀}` and `L^q`, driven by `‖a‖_V`.
    Variation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    pub s_theta: f64,
    pub c_theta: f64,
    pub p_theta: ExponentSpec,
    /// `A_θ` bounding `‖a‖_{M_{p_θ(·)}}` (cloud formula).
    pub a_theta: Option<f64>,
    pub a_theta_source: Option<Provenance>,
    /// `‖a‖_V` (variation formula).
    pub vnorm: Option<f64>,
    pub p0: Option<f64>,
    pub q: Option<f64>,
    pub s_q: Option<f64>,
    pub c_q: Option<f64>,
    pub eta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stage1 {
    pub n0: u64,
    pub sup: SupMeasurement,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stage2 {
    pub delta0: f64,
    pub sup: SmoothingBound,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproximationCertificate {
    pub target: String,
    pub target_spec: SymbolSpec,
    pub exponent: ExponentSpec,
    pub formula: BoundFormula,
    pub epsilon: f64,
    pub theta: f64,
    pub constants: Constants,
    pub measurement: MeasureConfig,
    pub stage1: Stage1,
    pub stage2: Stage2,
    pub certified_total: f64,
    pub approximant: SymbolSpec,
}

fn cloud_factor1(k: &Constants, theta: f64) -> f64 {
    let a = k.a_theta.unwrap_or(f64::NAN);
    4.0 * (1.0 + k.c_theta).powf(1.0 - theta) * a.powf(1.0 - theta)
}

fn cloud_factor2(k: &Constants, theta: f64) -> f64 {
    let a = k.a_theta.unwrap_or(f64::NAN);
    2f64.powf(3.0 - theta) * k.c_theta.powf(1.0 - theta) * a.powf(1.0 - theta)
}

fn variation_exponent(theta: f64, eta: f64) -> f64 {
    (1.0 - eta) * theta + 1.0 - theta
}

fn variation_factor1(k: &Constants, theta: f64) -> f64 {
    let (cq, eta, v) = (k.c_q.unwrap_or(f64::NAN), k.eta.unwrap_or(f64::NAN), k.vnorm.unwrap_or(f64::NAN));
    4.0 * ((1.0 + k.c_theta) * k.c_theta).powf(1.0 - theta)
        * ((1.0 + cq) * cq).powf((1.0 - eta) * theta)
        * v.powf(variation_exponent(theta, eta))
}

fn variation_factor2(k: &Constants, theta: f64) -> f64 {
    let (cq, eta, v) = (k.c_q.unwrap_or(f64::NAN), k.eta.unwrap_or(f64::NAN), k.vnorm.unwrap_or(f64::NAN));
    2f64.powf(2.0 + (1.0 - eta) * theta + 1.0 - theta)
        * cq.powf(2.0 * (1.0 - eta) * theta)
        * k.c_theta.powf(2.0 * (1.0 - theta))
        * v.powf(variation_exponent(theta, eta))
}

/// Power applied to the measured sup norm.
fn sup_power(formula: BoundFormula, k: &Constants, theta: f64) -> f64 {
    match formula {
        BoundFormula::Cloud => theta,
        BoundFormula::Variation => k.eta.unwrap_or(f64::NAN) * theta,
    }
}

fn bound1(formula: BoundFormula, k: &Constants, theta: f64, sup: f64) -> f64 {
    let f = match formula {
        BoundFormula::Cloud => cloud_factor1(k, theta),
        BoundFormula::Variation => variation_factor1(k, theta),
    };
    apply_power(f, sup, sup_power(formula, k, theta))
}

fn bound2(formula: BoundFormula, k: &Constants, theta: f64, sup: f64) -> f64 {
    let f = match formula {
        BoundFormula::Cloud => cloud_factor2(k, theta),
        BoundFormula::Variation => variation_factor2(k, theta),
    };
    apply_power(f, sup, sup_power(formula, k, theta))
}

/// `factor · sup^power`, with `0·anything = 0` so that the zero symbol certifies exactly.
fn apply_power(factor: f64, sup: f64, power: f64) -> f64 {
    if sup == 0.0 || factor == 0.0 {
        0.0
    } else {
        factor * sup.powf(power)
    }
}

// ---------------------------------------------------------------------------
// Measurements

fn phi(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        mollifier_constant() * (-1.0 / (1.0 - u * u)).exp()
    }
}

/// `(μ₁, μ₂)` of the unit bump.
pub fn mollifier_moments() -> (f64, f64) {
    let m1 = 2.0 * quad::integrate(|u| u * phi(u), 0.0, 1.0, 1e-16, 1e-14).value;
    let m2 = 2.0 * quad::integrate(|u| u * u * phi(u), 0.0, 1.0, 1e-16, 1e-14).value;
    (m1, m2)
}

fn uniform(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let cells = ((hi - lo) / step).ceil().max(1.0) as usize;
    (0..=cells).map(|k| lo + (hi - lo) * k as f64 / cells as f64).collect()
}

/// Largest `|f|` at geometric points `x₀·1.01^k` out to `1e15`, refined by golden section.
fn tail_sup(f: &dyn Fn(f64) -> f64, x0: f64, sign: f64) -> f64 {
    let mut xs = Vec::new();
    let mut x = x0.max(1.0);
    while x < 1e15 {
        xs.push(sign * x);
        x *= 1.01;
    }
    let mut best = (0.0, 0usize);
    for (i, &x) in xs.iter().enumerate() {
        let v = f(x);
        if v > best.0 {
            best = (v, i);
        }
    }
    if xs.is_empty() {
        return 0.0;
    }
    let i = best.1;
    let lo = xs[i.saturating_sub(1)];
    let hi = xs[(i + 1).min(xs.len() - 1)];
    let (a, b) = if lo < hi { (lo, hi) } else { (hi, lo) };
    best.0.max(quad::golden_max(f, a, b, 1e-12 * b.abs().max(1.0)).1)
}

/// Sup of `|a·(1 − ψ_n)|`, supported on `|x| ≥ n`.
fn measure_cutoff_error(a: &Symbol, n: u64, m: &MeasureConfig, step: f64) -> SupMeasurement {
    let nf = n.max(1) as f64;
    let psi = psi_n(n);
    let g = |x: f64| a.eval(x) * (1.0 - psi.eval(x));
    let dg = |x: f64| a.derivative(x) * (1.0 - psi.eval(x)) - a.eval(x) * psi.derivative(x);
    let outer = nf + 1.0 + m.window;
    let mut measured: f64 = 0.0;
    let mut lip: f64 = 0.0;
    for (lo, hi) in [(nf, outer), (-outer, -nf)] {
        for x in uniform(lo, hi, step) {
            measured = measured.max(g(x).norm());
            lip = lip.max(dg(x).norm());
        }
    }
    let f = |x: f64| a.eval(x).norm();
    let tail = tail_sup(&f, outer, 1.0).max(tail_sup(&f, outer, -1.0));
    let margin = 2.0 * step * lip;
    SupMeasurement { measured, lipschitz: lip, step, margin, tail, value: (measured + margin).max(tail) }
}

/// Sample points for a sup over `[lo, hi]`: uniform near the origin and near
/// finite ends, geometric in between.
fn piece_points(lo: f64, hi: f64) -> Vec<f64> {
    let step = 1.0 / 64.0;
    if hi - lo <= 128.0 {
        return uniform(lo, hi, step);
    }
    let mut xs = Vec::new();
    let (a, b) = (lo.max(-64.0), hi.min(64.0));
    if a < b {
        xs.extend(uniform(a, b, step));
    }
    if lo.is_finite() {
        xs.extend(uniform(lo, (lo + 64.0).min(hi), step));
    }
    if hi.is_finite() {
        xs.extend(uniform((hi - 64.0).max(lo), hi, step));
    }
    let mut x = 64.0;
    while x < 1e15 {
        for s in [x, -x] {
            if s > lo && s < hi {
                xs.push(s);
            }
        }
        x *= 1.01;
    }
    xs
}

fn sampled_sup(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let mut xs = piece_points(lo, hi);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let Some((i, &top)) = vals.iter().enumerate().max_by(|x, y| x.1.total_cmp(y.1)) else {
        return 0.0;
    };
    let a = xs[i.saturating_sub(1)];
    let b = xs[(i + 1).min(xs.len() - 1)];
    if a < b {
        top.max(quad::golden_max(f, a, b, 1e-12 * b.abs().max(1.0)).1)
    } else {
        top
    }
}

/// Shape data of a continuous piecewise symbol entering [`SmoothingBound`].
#[derive(Clone, Debug)]
struct Shape {
    lipschitz: f64,
    second_derivative: f64,
    /// `(x, |b′(x+) − b′(x−)|)` at each breakpoint.
    kinks: Vec<(f64, f64)>,
}

fn shape(b: &Symbol) -> Result<Shape> {
    let pieces = b.pieces().ok_or_else(|| Error::InvalidSymbol("smoothing bound needs a piecewise symbol".into()))?;
    if !b.jumps().is_empty() {
        return Err(Error::InvalidSymbol("smoothing bound needs a continuous symbol".into()));
    }
    let derivs: Vec<Expr> = pieces.iter().map(|(_, _, e)| e.derivative()).collect();
    let mut lipschitz: f64 = 0.0;
    let mut second: f64 = 0.0;
    for ((lo, hi, _), d) in pieces.iter().zip(&derivs) {
        let dd = d.derivative();
        lipschitz = lipschitz.max(sampled_sup(&|x| d.eval(x).norm(), *lo, *hi));
        second = second.max(sampled_sup(&|x| dd.eval(x).norm(), *lo, *hi));
    }
    let kinks = pieces
        .windows(2)
        .zip(derivs.windows(2))
        .map(|(w, d)| {
            let x = w[0].1;
            (x, (d[1].eval(x) - d[0].eval(x)).norm())
        })
        .filter(|(_, j)| *j > 0.0)
        .collect();
    Ok(Shape { lipschitz, second_derivative: second, kinks })
}

fn smoothing_bound(s: &Shape, delta: f64, mu: (f64, f64)) -> SmoothingBound {
    let kink_jump = s
        .kinks
        .iter()
        .map(|(x, _)| s.kinks.iter().filter(|(y, _)| (y - x).abs() <= 2.0 * delta).map(|(_, j)| j).sum::<f64>())
        .fold(0.0, f64::max);
    let mut out = SmoothingBound {
        delta,
        lipschitz: s.lipschitz,
        second_derivative: s.second_derivative,
        kink_jump,
        mu1: mu.0,
        mu2: mu.1,
        value: 0.0,
    };
    out.value = out.recompute();
    out
}

// ---------------------------------------------------------------------------
// Pipelines

/// Smallest `n` with `accept(n)`, by doubling then bisection; `accept` must be
/// monotone in `n`.
fn search_cutoff(accept: &dyn Fn(u64) -> bool) -> Result<u64> {
    let mut hi = 1u64;
    while !accept(hi) {
        if hi >= MAX_CUTOFF {
            return Err(Error::NonDecaying(format!("cutoff bound not reached by n = {hi}")));
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    if lo == 0 {
        return Ok(hi);
    }
    // accept(lo) is false here.
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if accept(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn require_c0(a: &Symbol) -> Result<()> {
    if !a.flags().c0 {
        let (l, r) = a.limits();
        return Err(Error::NonDecaying(format!(
            "symbol must be continuous with zero limits (limits {:?}, {:?}; {} jumps)",
            l,
            r,
            a.jumps().len()
        )));
    }
    Ok(())
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} must be positive")));
    }
    Ok(())
}

/// Runs both stages for a formula whose constants are already fixed.
fn run_stages(
    a: &Symbol,
    p: &VariableExponent,
    formula: BoundFormula,
    theta: f64,
    epsilon: f64,
    constants: Constants,
    m: &MeasureConfig,
) -> Result<ApproximationCertificate> {
    let half = epsilon / 2.0;
    let stage1_at = |n: u64| {
        let sup = measure_cutoff_error(a, n, m, m.step);
        let b = bound1(formula, &constants, theta, sup.value);
        (sup, b)
    };
    let n0 = search_cutoff(&|n| stage1_at(n).1 < half)?;
    let (sup1, b1) = stage1_at(n0);
    let b = a.mul(&psi_n(n0))?;
    let shp = shape(&b)?;
    let mu = mollifier_moments();
    let mut delta = 1.0;
    let mut halvings = 0;
    let (sup2, b2) = loop {
        let sb = smoothing_bound(&shp, delta, mu);
        let b2 = bound2(formula, &constants, theta, sb.value);
        if b2 < half {
            break (sb, b2);
        }
        halvings += 1;
        if halvings > MAX_HALVINGS {
            return Err(Error::InvalidArgument("smoothing bound did not reach epsilon/2".into()));
        }
        delta *= 0.5;
    };
    let approximant = convolve_mollify(&b, delta);
    Ok(ApproximationCertificate {
        target: a.name().unwrap_or("anonymous").to_string(),
        target_spec: a.spec(),
        exponent: p.spec(),
        formula,
        epsilon,
        theta,
        constants,
        measurement: *m,
        stage1: Stage1 { n0, sup: sup1, bound: b1 },
        stage2: Stage2 { delta0: delta, sup: sup2, bound: b2 },
        certified_total: b1 + b2,
        approximant: approximant.spec(),
    })
}

/// `A_θ` bounding `‖a‖_{M_{p_θ(·)}}`: the Stechkin bound, or the Wiener norm when smaller.
fn multiplier_bound(a: &Symbol, s_theta: f64) -> Result<(f64, Provenance)> {
    let stechkin = vnorm(a).ok().map(|v| (s_theta * v, Provenance::Stechkin));
    let wiener = match a.as_constant() {
        Some(c) => Some((c.norm(), Provenance::Wiener)),
        None => wiener_norm(a).ok().map(|w| (w, Provenance::Wiener)),
    };
    match (stechkin, wiener) {
        (Some(s), Some(w)) => Ok(if w.0 < s.0 { w } else { s }),
        (Some(s), None) => Ok(s),
        (None, Some(w)) => Ok(w),
        (None, None) => Err(Error::NoMultiplierBound("symbol has unbounded variation and no Wiener form".into())),
    }
}

/// Certificate for `‖a − b*φ_δ‖_{M_{p(·)}} < ε` interpolating between
/// `L^{p_θ(·)}` and `L²`. `s_bound_theta` bounds `‖S‖` on `L^{p_θ(·)}`; it
/// defaults to the classical value when `p_θ` is constant. `tau` overrides the
/// admissible θ-range when `p` has no analytic log-Hölder certificate.
pub fn certify_c0_cloud(
    a: &Symbol,
    p: &VariableExponent,
    theta: f64,
    epsilon: f64,
    s_bound_theta: Option<f64>,
    tau: Option<f64>,
    m: &MeasureConfig,
) -> Result<ApproximationCertificate> {
    check_epsilon(epsilon)?;
    let tau = match (p.tau(), tau) {
        (Some(t), _) => t,
        (None, Some(t)) => t.min(p.theta_range()),
        (None, None) => return Err(p.lh_certificate().err().unwrap_or_else(|| Error::NotLogHoelder("θ-range unknown".into()))),
    };
    if !(theta > 0.0 && theta < tau) {
        return Err(Error::ThetaOutOfRange { theta, max: tau });
    }
    let p_theta = p.p_theta(theta)?;
    require_c0(a)?;
    let s_theta = s_bound_theta
        .or_else(|| classical_s_bound(&p_theta))
        .ok_or_else(|| Error::NoMultiplierBound("p_theta is variable: an s_bound for it must be supplied".into()))?;
    if !(s_theta >= 1.0) {
        return Err(Error::InvalidArgument(format!("s_bound {s_theta} is below 1")));
    }
    let (a_theta, source) = multiplier_bound(a, s_theta)?;
    let constants = Constants {
        s_theta,
        c_theta: 3.0 * s_theta,
        p_theta: p_theta.spec(),
        a_theta: Some(a_theta),
        a_theta_source: Some(source),
        vnorm: None,
        p0: None,
        q: None,
        s_q: None,
        c_q: None,
        eta: None,
    };
    run_stages(a, p, BoundFormula::Cloud, theta, epsilon, constants, m)
}

/// `1/p(x) = θ/p₀ + (1−θ)/p_θ(x)` with constant `p₀`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Decomposition {
    pub p0: f64,
    pub theta: f64,
    pub p_theta: ExponentSpec,
}

impl Decomposition {
    /// Solves the identity for `p_θ` in closed form.
    pub fn solve(p: &VariableExponent, p0: f64, theta: f64) -> Result<Decomposition> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::ThetaOutOfRange { theta, max: 1.0 });
        }
        let p_theta = match p.as_constant() {
            Some(r) => ExponentSpec::Constant { value: (1.0 - theta) / (1.0 / r - theta / p0) },
            None => {
                let inv = expr::sub(expr::div(Expr::constant(1.0), p.to_expr()), Expr::constant(theta / p0));
                let e = expr::div(Expr::constant(1.0 - theta), inv);
                let halfwidth = match p.spec() {
                    ExponentSpec::ClosedForm { domain_halfwidth, .. } => domain_halfwidth,
                    ExponentSpec::Pwl { knots, .. } => knots.iter().map(|k| k[0].abs()).fold(1.0, f64::max) * 4.0,
                    ExponentSpec::Constant { .. } => 1.0,
                };
                ExponentSpec::ClosedForm { expr: e.to_string(), domain_halfwidth: halfwidth }
            }
        };
        Ok(Decomposition { p0, theta, p_theta })
    }

    /// Checks the identity at dense and far sample points.
    pub fn verify(&self, p: &VariableExponent) -> Result<VariableExponent> {
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(Error::ThetaOutOfRange { theta: self.theta, max: 1.0 });
        }
        if !(self.p0 > 1.0 && self.p0.is_finite()) {
            return Err(Error::BadDecomposition(format!("p0 = {} must lie in (1, ∞)", self.p0)));
        }
        let pt = VariableExponent::from_spec(&self.p_theta)?;
        let mut xs: Vec<f64> = (-4000..=4000).map(|k| k as f64 / 100.0).collect();
        let mut x = 40.0;
        while x < 1e12 {
            xs.push(x);
            xs.push(-x);
            x *= 1.05;
        }
        for x in xs {
            let lhs = 1.0 / p.eval(x);
            let rhs = self.theta / self.p0 + (1.0 - self.theta) / pt.eval(x);
            if (lhs - rhs).abs() > 1e-9 {
                return Err(Error::BadDecomposition(format!("identity fails at x = {x}: {lhs} vs {rhs}")));
            }
        }
        Ok(pt)
    }
}

/// `η = (2p₀ − 2q)/(2p₀ − p₀q)`, solving `1/p₀ = η/2 + (1−η)/q`.
pub fn eta(p0: f64, q: f64) -> Result<f64> {
    let e = (2.0 * p0 - 2.0 * q) / (2.0 * p0 - p0 * q);
    if !(e > 0.0 && e <= 1.0) {
        return Err(Error::EtaOutOfRange(e));
    }
    Ok(e)
}

/// Certificate driven by `‖a‖_V` through a constant exponent `p₀` and an auxiliary `q`
/// (`q > p₀` when `p₀ ≥ 2`, `q < p₀` otherwise).
#[allow(clippy::too_many_arguments)]
pub fn certify_c0_variation(
    a: &Symbol,
    p: &VariableExponent,
    decomposition: &Decomposition,
    q: f64,
    epsilon: f64,
    s_theta: Option<f64>,
    s_q: Option<f64>,
    m: &MeasureConfig,
) -> Result<ApproximationCertificate> {
    check_epsilon(epsilon)?;
    let pt = decomposition.verify(p)?;
    let p0 = decomposition.p0;
    let side_ok = if p0 >= 2.0 { q > p0 } else { q > 1.0 && q < p0 };
    if !(side_ok && q.is_finite()) {
        return Err(Error::BadDecomposition(format!("q = {q} is on the wrong side of p0 = {p0}")));
    }
    let eta = eta(p0, q)?;
    require_c0(a)?;
    let v = vnorm(a)?;
    let s_theta = s_theta
        .or_else(|| classical_s_bound(&pt))
        .ok_or_else(|| Error::NoMultiplierBound("p_theta is variable: an s_bound for it must be supplied".into()))?;
    let s_q = match s_q {
        Some(s) => s,
        None => classical_s_bound(&VariableExponent::constant(q)?).expect("constant exponent"),
    };
    if !(s_theta >= 1.0 && s_q >= 1.0) {
        return Err(Error::InvalidArgument(format!("s_bounds ({s_theta}, {s_q}) must be at least 1")));
    }
    let constants = Constants {
        s_theta,
        c_theta: 3.0 * s_theta,
        p_theta: decomposition.p_theta.clone(),
        a_theta: None,
        a_theta_source: None,
        vnorm: Some(v),
        p0: Some(p0),
        q: Some(q),
        s_q: Some(s_q),
        c_q: Some(3.0 * s_q),
        eta: Some(eta),
    };
    run_stages(a, p, BoundFormula::Variation, decomposition.theta, epsilon, constants, m)
}

// ---------------------------------------------------------------------------
// Replay and audits

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayCheck {
    pub name: String,
    pub stored: f64,
    pub recomputed: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub checks: Vec<ReplayCheck>,
    pub ok: bool,
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= REPLAY_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Re-evaluates every stored identity of a certificate from its stored constants.
pub fn replay(c: &ApproximationCertificate) -> ReplayReport {
    let k = &c.constants;
    let mut checks = Vec::new();
    let mut eq = |name: &str, stored: f64, recomputed: f64| {
        checks.push(ReplayCheck { name: name.into(), stored, recomputed, pass: close(stored, recomputed) });
    };
    eq("c_theta = 3 s_theta", k.c_theta, 3.0 * k.s_theta);
    if c.formula == BoundFormula::Variation {
        let (p0, q) = (k.p0.unwrap_or(f64::NAN), k.q.unwrap_or(f64::NAN));
        eq("c_q = 3 s_q", k.c_q.unwrap_or(f64::NAN), 3.0 * k.s_q.unwrap_or(f64::NAN));
        eq("eta", k.eta.unwrap_or(f64::NAN), (2.0 * p0 - 2.0 * q) / (2.0 * p0 - p0 * q));
    }
    eq("stage1 sup", c.stage1.sup.value, c.stage1.sup.recompute());
    eq("stage1 margin", c.stage1.sup.margin, 2.0 * c.stage1.sup.step * c.stage1.sup.lipschitz);
    eq("stage2 sup", c.stage2.sup.value, c.stage2.sup.recompute());
    eq("stage2 delta", c.stage2.sup.delta, c.stage2.delta0);
    let b1 = bound1(c.formula, k, c.theta, c.stage1.sup.value);
    let b2 = bound2(c.formula, k, c.theta, c.stage2.sup.value);
    eq("bound1", c.stage1.bound, b1);
    eq("bound2", c.stage2.bound, b2);
    eq("certified_total", c.certified_total, b1 + b2);
    let mut ineq = |name: &str, lhs: f64, rhs: f64| {
        checks.push(ReplayCheck { name: name.into(), stored: lhs, recomputed: rhs, pass: lhs < rhs });
    };
    ineq("bound1 < epsilon/2", b1, c.epsilon / 2.0);
    ineq("bound2 < epsilon/2", b2, c.epsilon / 2.0);
    ineq("certified_total < epsilon", b1 + b2, c.epsilon);
    let ok = checks.iter().all(|x| x.pass);
    ReplayReport { checks, ok }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HonestyReport {
    pub stage1_refined: f64,
    pub stage1_used: f64,
    pub stage2_refined: f64,
    pub stage2_used: f64,
    pub pass: bool,
}

/// `|(b*φ_δ)(x) − b(x)| = |∫(b(x−δu) − b(x))φ(u)du|`, integrated directly.
fn smoothing_error_at(b: &Symbol, delta: f64, x: f64) -> f64 {
    let bx = b.eval(x);
    let mut breaks: Vec<f64> = b.breakpoints().into_iter().map(|t| (x - t) / delta).filter(|u| u.abs() < 1.0).collect();
    breaks.sort_by(f64::total_cmp);
    let re = quad::integrate_with_breaks(|u| (b.eval(x - delta * u) - bx).re * phi(u), -1.0, 1.0, &breaks, 1e-16, 1e-10);
    let im = quad::integrate_with_breaks(|u| (b.eval(x - delta * u) - bx).im * phi(u), -1.0, 1.0, &breaks, 1e-16, 1e-10);
    Complex64::new(re.value, im.value).norm()
}

/// Re-measures both sup norms on a 4× refined grid: stage 1 over the whole
/// measured window, stage 2 around every kink of `b = aψ_{n₀}` and around the
/// point of largest curvature.
pub fn honesty_check(c: &ApproximationCertificate, a: &Symbol) -> Result<HonestyReport> {
    let m = c.measurement;
    let fine = m.step / 4.0;
    let s1 = measure_cutoff_error(a, c.stage1.n0, &m, fine);
    let stage1_refined = s1.measured.max(s1.tail);
    let b = a.mul(&psi_n(c.stage1.n0))?;
    let delta = c.stage2.delta0;
    let shp = shape(&b)?;
    let mut centres: Vec<f64> = shp.kinks.iter().map(|k| k.0).collect();
    // Largest |b''| sits where the curvature peaks; scan the core for it.
    if let Some(pieces) = b.pieces() {
        let mut best = (0.0, 0.0);
        for (lo, hi, e) in pieces {
            let dd = e.derivative().derivative();
            for x in uniform(lo.max(-64.0), hi.min(64.0), m.step) {
                if x >= lo && x <= hi {
                    let v = dd.eval(x).norm();
                    if v > best.0 {
                        best = (v, x);
                    }
                }
            }
        }
        centres.push(best.1);
    }
    let w = (2.0 * delta + 8.0 * fine).min(1.0);
    let err = |x: f64| smoothing_error_at(&b, delta, x);
    let mut stage2_refined: f64 = 0.0;
    for x0 in centres {
        let xs = uniform(x0 - w, x0 + w, w / 256.0);
        let vals: Vec<f64> = xs.iter().map(|&x| err(x)).collect();
        let i = (0..vals.len()).max_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap_or(0);
        let (lo, hi) = (xs[i.saturating_sub(1)], xs[(i + 1).min(xs.len() - 1)]);
        stage2_refined = stage2_refined.max(vals[i]).max(quad::golden_max(err, lo, hi, 1e-4 * (hi - lo)).1);
    }
    let stage1_used = c.stage1.sup.value;
    let stage2_used = c.stage2.sup.value;
    let pass = stage1_refined <= stage1_used && stage2_refined <= stage2_used + 1e-15;
    Ok(HonestyReport { stage1_refined, stage1_used, stage2_refined, stage2_used, pass })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConsistency {
    pub size: usize,
    pub span: f64,
    pub discrete_norm: f64,
    pub certified_total: f64,
    pub pass: bool,
}

pub const ORACLE_SLACK: f64 = 0.05;

/// Cyclic-model norm of the multiplier `a − approximant` against the certified total.
pub fn oracle_consistency(
    c: &ApproximationCertificate,
    a: &Symbol,
    p: &VariableExponent,
    size: usize,
    span: f64,
    budget: &OracleBudget,
) -> Result<OracleConsistency> {
    let approx = Symbol::from_spec(&c.approximant)?;
    let (xs, _) = cyclic_nodes(size, span);
    let diff: Vec<Complex64> = xs.iter().map(|&x| a.eval(x) - approx.eval(x)).collect();
    let space = cyclic_space(p, size, span)?;
    let norm = opnorm_on(&multiplier_matrix(&diff), &space, budget)?;
    Ok(OracleConsistency {
        size,
        span,
        discrete_norm: norm,
        certified_total: c.certified_total,
        pass: norm <= c.certified_total * (1.0 + ORACLE_SLACK),
    })
}

// ---------------------------------------------------------------------------
// Structural reductions

/// `a = a(∞) + rest` for `a` continuous with equal limits at `±∞`.
pub fn reduce_to_dot(a: &Symbol) -> Result<(Complex64, Symbol)> {
    let (l, r) = a.limits();
    let (Some(l), Some(r)) = (l, r) else {
        return Err(Error::NotDotContinuous { minus: format!("{l:?}"), plus: format!("{r:?}") });
    };
    if (l - r).norm() > 1e-9 {
        return Err(Error::NotDotContinuous { minus: l.to_string(), plus: r.to_string() });
    }
    if !a.jumps().is_empty() {
        return Err(Error::InvalidSymbol("symbol has jumps".into()));
    }
    let rest = a.add_constant(-r)?;
    let rest = match a.name() {
        Some(n) => rest.with_name(format!("{n}-rest")),
        None => rest,
    };
    Ok((r, rest))
}

/// `b = killers + rest`: a local hat per finite jump plus the killer of the
/// jump at infinity; `rest` is continuous and vanishes at `±∞`.
pub fn remove_jumps(b: &Symbol) -> Result<(Symbol, Symbol)> {
    let (Some(l), Some(r)) = b.limits() else {
        return Err(Error::InvalidSymbol("symbol needs finite limits at ±∞".into()));
    };
    let mut killer = jump_killer_infinity(l, r);
    for j in b.jumps() {
        killer = killer.add(&jump_killer_at(j.at, j.left, j.right))?;
    }
    let rest = b.sub(&killer)?;
    let rest = match b.name() {
        Some(n) => rest.with_name(format!("{n}-rest")),
        None => rest,
    };
    Ok((killer.with_name("killers"), rest))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalApprox {
    pub constant: Complex64,
    /// `(k, c_k)` for `k = −n..=n`.
    pub coefficients: Vec<(i32, Complex64)>,
    pub nodes: usize,
    /// Largest sampled `|a − b|`.
    pub sup_error: f64,
}

/// `b = a(∞) + Σ_{|k|≤n} c_k (((x−i)/(x+i))^k − 1)` with `c_k` the Fourier
/// coefficients of `a(−cot(φ/2)) − a(∞)` on the circle (trapezoid rule on
/// `max(64n, 256)` nodes).
pub fn wiener_rational_approx(a: &Symbol, n: u32) -> Result<(Symbol, RationalApprox)> {
    if let Some(c) = a.as_constant() {
        let s = Symbol::constant(c);
        return Ok((s, RationalApprox { constant: c, coefficients: Vec::new(), nodes: 0, sup_error: 0.0 }));
    }
    if a.wiener().is_none() {
        return Err(Error::NotInWienerForm("a Wiener form (constant + density) must be attached".into()));
    }
    let (_, Some(at_inf)) = a.limits() else {
        return Err(Error::NotInWienerForm("symbol has no limit at infinity".into()));
    };
    let m = (64 * n as usize).max(256);
    let g: Vec<Complex64> = (0..m)
        .map(|j| {
            if j == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                let phi = std::f64::consts::TAU * j as f64 / m as f64;
                a.eval(-1.0 / (phi / 2.0).tan()) - at_inf
            }
        })
        .collect();
    let nn = n as i32;
    let coefficients: Vec<(i32, Complex64)> = (-nn..=nn)
        .map(|k| {
            let c: Complex64 = g
                .iter()
                .enumerate()
                .map(|(j, v)| v * Complex64::from_polar(1.0, -std::f64::consts::TAU * (k as f64) * j as f64 / m as f64))
                .sum();
            (k, c / m as f64)
        })
        .collect();
    let i = Complex64::new(0.0, 1.0);
    let z = expr::div(expr::sub(Expr::x(), Expr::complex(i)), expr::add(Expr::x(), Expr::complex(i)));
    let mut e = Expr::complex(at_inf);
    for &(k, c) in &coefficients {
        if k == 0 || c.norm() < 1e-15 {
            continue;
        }
        let term = expr::sub(expr::pow(z.clone(), Expr::constant(f64::from(k))), Expr::constant(1.0));
        e = expr::add(e, expr::mul(Expr::complex(c), term));
    }
    let b = Symbol::from_expr(e)?.with_name(format!("wiener_rational_{n}"));
    let mut sup_error: f64 = 0.0;
    for j in 1..4 * m {
        let x = -1.0 / (std::f64::consts::PI * j as f64 / (4 * m) as f64).tan();
        sup_error = sup_error.max((a.eval(x) - b.eval(x)).norm());
    }
    Ok((b, RationalApprox { constant: at_inf, coefficients, nodes: m, sup_error }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::lorentzian;
    use crate::symbol::blaschke_rational;

    fn three() -> VariableExponent {
        VariableExponent::constant(3.0).unwrap()
    }

    /// Independent re-evaluation of the cloud bounds, written out longhand.
    fn cloud_oracle(c: &ApproximationCertificate) -> (f64, f64) {
        let t = c.theta;
        let ct = c.constants.c_theta;
        let a = c.constants.a_theta.unwrap();
        let one = 4.0 * ((1.0 + ct) * a).powf(1.0 - t) * c.stage1.sup.value.powf(t);
        let two = 2f64.powf(3.0 - t) * (ct * a).powf(1.0 - t) * c.stage2.sup.value.powf(t);
        (one, two)
    }

    #[test]
    fn lorentzian_cloud_certificate() {
        let a = lorentzian();
        let c = certify_c0_cloud(&a, &three(), 0.25, 0.5, None, None, &MeasureConfig::default()).unwrap();
        assert!(c.certified_total < 0.5);
        assert_eq!(c.constants.a_theta_source, Some(Provenance::Wiener));
        assert!((c.constants.a_theta.unwrap() - 2.0).abs() < 1e-6);
        let (o1, o2) = cloud_oracle(&c);
        assert!((o1 - c.stage1.bound).abs() <= 1e-12 * o1.max(1.0));
        assert!((o2 - c.stage2.bound).abs() <= 1e-12 * o2.max(1.0));
        assert!(replay(&c).ok);
        let h = honesty_check(&c, &a).unwrap();
        assert!(h.pass, "{h:?}");
    }

    #[test]
    fn zero_symbol_certifies_trivially() {
        let z = Symbol::constant(Complex64::new(0.0, 0.0));
        let c = certify_c0_cloud(&z, &three(), 0.25, 0.5, None, None, &MeasureConfig::default()).unwrap();
        assert_eq!(c.stage1.n0, 1);
        assert_eq!(c.stage2.delta0, 1.0);
        assert_eq!(c.certified_total, 0.0);
        assert!(replay(&c).ok);
    }

    #[test]
    fn cutoff_index_is_monotone_in_epsilon() {
        let a = Symbol::parse("exp(-abs(x))").unwrap();
        let m = MeasureConfig::default();
        let mut last = 0;
        for eps in [2.0, 1.0, 0.5, 0.25] {
            let c = certify_c0_cloud(&a, &three(), 0.25, eps, None, None, &m).unwrap();
            assert!(c.stage1.n0 >= last);
            last = c.stage1.n0;
        }
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let a = lorentzian();
        let mut c = certify_c0_cloud(&a, &three(), 0.25, 0.5, None, None, &MeasureConfig::default()).unwrap();
        c.constants.a_theta = Some(c.constants.a_theta.unwrap() * 1.001);
        assert!(!replay(&c).ok);
    }

    #[test]
    fn non_vanishing_and_theta_preconditions() {
        let m = MeasureConfig::default();
        let arctan = Symbol::parse("atan(x)").unwrap();
        assert!(matches!(certify_c0_cloud(&arctan, &three(), 0.25, 0.5, None, None, &m), Err(Error::NonDecaying(_))));
        // θ must stay below θ_p = min(1, 2/3, 4/3).
        let r = certify_c0_cloud(&lorentzian(), &three(), 0.7, 0.5, None, None, &m);
        assert!(matches!(r, Err(Error::ThetaOutOfRange { .. })));
    }

    #[test]
    fn eta_formula() {
        assert!((eta(2.5, 4.0).unwrap() - 0.6).abs() < 1e-15);
        for (p0, q) in [(2.5, 4.0), (1.5, 1.2), (3.0, 10.0)] {
            let e = eta(p0, q).unwrap();
            assert!((1.0 / p0 - (e / 2.0 + (1.0 - e) / q)).abs() < 1e-14);
        }
        assert!(matches!(eta(2.5, 2.0), Err(Error::EtaOutOfRange(_))));
    }

    #[test]
    fn variation_certificate_for_variable_exponent() {
        let p = VariableExponent::pwl(&[[-1.0, 2.0], [0.0, 3.0], [1.0, 2.0]], 2.0, 2.0).unwrap();
        let d = Decomposition::solve(&p, 2.5, 0.2).unwrap();
        let pt = d.verify(&p).unwrap();
        let s_theta = classical_s_bound(&VariableExponent::constant(pt.p_minus()).unwrap())
            .unwrap()
            .max(classical_s_bound(&VariableExponent::constant(pt.p_plus()).unwrap()).unwrap());
        let a = lorentzian();
        let c = certify_c0_variation(&a, &p, &d, 4.0, 1.0, Some(s_theta), None, &MeasureConfig::default()).unwrap();
        assert!(c.certified_total < 1.0);
        assert!((c.constants.eta.unwrap() - 0.6).abs() < 1e-15);
        // Independent re-evaluation of both bounds with η = 0.6, θ = 0.2.
        let k = &c.constants;
        let (ct, cq, v) = (k.c_theta, k.c_q.unwrap(), k.vnorm.unwrap());
        let e = 0.4 * 0.2 + 0.8;
        let one = 4.0 * ((1.0 + ct) * ct).powf(0.8) * ((1.0 + cq) * cq).powf(0.4 * 0.2) * v.powf(e)
            * c.stage1.sup.value.powf(0.12);
        let two = 2f64.powf(2.0 + 0.4 * 0.2 + 0.8) * cq.powf(0.8 * 0.2) * ct.powf(1.6) * v.powf(e)
            * c.stage2.sup.value.powf(0.12);
        assert!((one - c.stage1.bound).abs() <= 1e-12 * one);
        assert!((two - c.stage2.bound).abs() <= 1e-12 * two);
        let r = replay(&c);
        assert!(r.ok, "{r:?}");
    }

    #[test]
    fn variation_preconditions() {
        let p = three();
        let m = MeasureConfig::default();
        let a = lorentzian();
        let bad_theta = Decomposition { p0: 3.0, theta: 1.0, p_theta: ExponentSpec::Constant { value: 3.0 } };
        assert!(matches!(
            certify_c0_variation(&a, &p, &bad_theta, 4.0, 1.0, None, None, &m),
            Err(Error::ThetaOutOfRange { .. })
        ));
        let wrong = Decomposition { p0: 3.0, theta: 0.5, p_theta: ExponentSpec::Constant { value: 2.0 } };
        assert!(matches!(certify_c0_variation(&a, &p, &wrong, 4.0, 1.0, None, None, &m), Err(Error::BadDecomposition(_))));
        let ok = Decomposition::solve(&p, 3.0, 0.5).unwrap();
        assert!(matches!(certify_c0_variation(&a, &p, &ok, 2.5, 1.0, None, None, &m), Err(Error::BadDecomposition(_))));
    }

    #[test]
    fn reduce_to_dot_examples() {
        let (c, rest) = reduce_to_dot(&Symbol::constant(Complex64::new(7.0, 0.0))).unwrap();
        assert_eq!(c, Complex64::new(7.0, 0.0));
        assert_eq!(rest.as_constant(), Some(Complex64::new(0.0, 0.0)));
        let a = Symbol::parse("1 + 2/(1+x^2)").unwrap();
        let (c, rest) = reduce_to_dot(&a).unwrap();
        assert!((c - 1.0).norm() < 1e-12);
        assert!(rest.flags().c0);
        for x in [-5.0, -0.3, 0.0, 1.7, 40.0] {
            assert!((c + rest.eval(x) - a.eval(x)).norm() < 1e-12);
            assert!((rest.eval(x) - 2.0 / (1.0 + x * x)).norm() < 1e-12);
        }
        assert!(matches!(reduce_to_dot(&Symbol::parse("atan(x)").unwrap()), Err(Error::NotDotContinuous { .. })));
    }

    /// Scans for discontinuities on a fine grid.
    fn largest_step(s: &Symbol, lo: f64, hi: f64) -> f64 {
        let n = 200_000;
        let mut prev = s.eval(lo);
        let mut worst: f64 = 0.0;
        for k in 1..=n {
            let x = lo + (hi - lo) * k as f64 / n as f64;
            let v = s.eval(x);
            worst = worst.max((v - prev).norm());
            prev = v;
        }
        worst
    }

    #[test]
    fn remove_jumps_examples() {
        let step = Symbol::piecewise(vec![0.0], vec![Expr::constant(0.0), Expr::constant(1.0)]).unwrap();
        let (_, rest) = remove_jumps(&step).unwrap();
        assert!(rest.jumps().is_empty());
        assert!(largest_step(&rest, -5.0, 5.0) < 1e-4);
        assert!(rest.eval(-50.0).norm() <= 1e-6 && rest.eval(50.0).norm() <= 1e-6);

        let cont = Symbol::parse("atan(x)").unwrap();
        let (killer, rest) = remove_jumps(&cont).unwrap();
        let inf = jump_killer_infinity(Complex64::new(-std::f64::consts::FRAC_PI_2, 0.0), Complex64::new(std::f64::consts::FRAC_PI_2, 0.0));
        for x in [-3.0, -0.5, 0.0, 0.9, 4.0] {
            assert!((killer.eval(x) - inf.eval(x)).norm() < 1e-9);
        }
        assert!(rest.flags().c0);

        let two = Symbol::piecewise(
            vec![-1.0, 2.0],
            vec![Expr::constant(1.0), Expr::constant(-2.0), Expr::constant(3.0)],
        )
        .unwrap();
        let (_, rest) = remove_jumps(&two).unwrap();
        assert!(rest.jumps().is_empty());
        assert!(rest.eval(-1e9).norm() <= 1e-9 && rest.eval(1e9).norm() <= 1e-9);
        assert!(largest_step(&rest, -6.0, 6.0) < 1e-3);
    }

    #[test]
    fn rational_approximation() {
        let c = Symbol::constant(Complex64::new(2.0, -1.0));
        let (b, _) = wiener_rational_approx(&c, 3).unwrap();
        assert_eq!(b.eval(0.4), Complex64::new(2.0, -1.0));

        let r1 = blaschke_rational(1)
            .with_wiener(Complex64::new(1.0, 0.0), Expr::parse("-exp(-x)*(1+sgn(x))").unwrap());
        // ((x−i)/(x+i)) − 1 = −2i/(x+i) has density −2e^{−t} on t > 0.
        let r1 = r1.unwrap();
        let (b, info) = wiener_rational_approx(&r1, 1).unwrap();
        assert!(info.sup_error < 1e-12, "{}", info.sup_error);
        for x in [-7.0, 0.0, 0.5, 30.0] {
            assert!((b.eval(x) - r1.eval(x)).norm() < 1e-12);
        }

        let (b, info) = wiener_rational_approx(&lorentzian(), 8).unwrap();
        let mut err: f64 = 0.0;
        for k in -20000..=20000 {
            let x = k as f64 / 100.0;
            err = err.max((b.eval(x) - 2.0 / (1.0 + x * x)).norm());
        }
        assert!(err < 0.05 && info.sup_error < 0.05, "{err}");
    }

    #[test]
    fn moments_of_the_bump() {
        let (m1, m2) = mollifier_moments();
        assert!(m2 < m1 && m1 < 1.0 && m2 > 0.0);
        // Oracle: midpoint rule on a fine grid.
        let n = 200_000;
        let h = 2.0 / n as f64;
        let (mut s1, mut s2) = (0.0, 0.0);
        for k in 0..n {
            let u = -1.0 + (k as f64 + 0.5) * h;
            s1 += u.abs() * phi(u) * h;
            s2 += u * u * phi(u) * h;
        }
        assert!((m1 - s1).abs() < 1e-8 && (m2 - s2).abs() < 1e-8);
    }
}
