//! Variable exponents `p(·)` and exponent-level formulas: bounds, conjugates,
//! log-Hölder certificates, the θ-range and the `p_θ` transform.

use std::f64::consts::E;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::quad::golden_max;

/// Guard kept between θ and the pole of `2 − θ·p(x)`.
pub const THETA_GUARD: f64 = 1e-9;

/// Serialized exponent description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExponentSpec {
    Constant {
        value: f64,
    },
    Pwl {
        knots: Vec<[f64; 2]>,
        left_tail: f64,
        right_tail: f64,
    },
    ClosedForm {
        expr: String,
        domain_halfwidth: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LhMethod {
    AnalyticForPiecewiseLinear,
    SampledLowerEstimate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LHCertificate {
    pub c0: f64,
    pub c_infinity: f64,
    pub p_infinity: f64,
    pub method: LhMethod,
}

#[derive(Clone, Debug)]
enum Repr {
    Constant(f64),
    Pwl {
        xs: Vec<f64>,
        ps: Vec<f64>,
        left: f64,
        right: f64,
    },
    Closed {
        expr: Expr,
        halfwidth: f64,
    },
    Conjugate(Arc<VariableExponent>),
    Theta {
        parent: Arc<VariableExponent>,
        theta: f64,
    },
}

/// An exponent `p(·)` with `1 < p₋ ≤ p(x) ≤ p₊ < ∞`.
///
/// Evaluation is clamped to the cached bounds, so the bound invariant holds
/// exactly for every returned value.
#[derive(Clone, Debug)]
pub struct VariableExponent {
    repr: Repr,
    p_minus: f64,
    p_plus: f64,
}

fn check_bounds(p_minus: f64, p_plus: f64) -> Result<()> {
    if !(p_minus.is_finite() && p_plus.is_finite()) {
        return Err(Error::InvalidExponent(format!(
            "bounds ({p_minus}, {p_plus}) must be finite"
        )));
    }
    if p_minus <= 1.0 {
        return Err(Error::InvalidExponent(format!("p_minus = {p_minus} must exceed 1")));
    }
    Ok(())
}

fn conj(p: f64) -> f64 {
    p / (p - 1.0)
}

fn theta_map(p: f64, theta: f64) -> f64 {
    2.0 * (1.0 - theta) * p / (2.0 - theta * p)
}

/// Sample points used to bound closed-form exponents: a dense uniform grid on
/// `[−L, L]` plus geometric tails out to `1e15`.
fn closed_form_samples(halfwidth: f64) -> Vec<f64> {
    let n = 20_001;
    let mut xs: Vec<f64> = (0..n)
        .map(|i| -halfwidth + 2.0 * halfwidth * i as f64 / (n - 1) as f64)
        .collect();
    let mut r = halfwidth.max(1.0);
    while r < 1e15 {
        r *= 1.05;
        xs.push(r);
        xs.push(-r);
    }
    xs.push(1e15);
    xs.push(-1e15);
    xs
}

impl VariableExponent {
    pub fn constant(value: f64) -> Result<Self> {
        check_bounds(value, value)?;
        Ok(Self { repr: Repr::Constant(value), p_minus: value, p_plus: value })
    }

    /// Piecewise-linear exponent through `knots`, constant `left`/`right`
    /// outside the outermost knots. A tail differing from the adjacent knot
    /// value is a jump at that knot.
    pub fn pwl(knots: &[[f64; 2]], left: f64, right: f64) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidExponent("pwl exponent needs at least one knot".into()));
        }
        let xs: Vec<f64> = knots.iter().map(|k| k[0]).collect();
        let ps: Vec<f64> = knots.iter().map(|k| k[1]).collect();
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidExponent("knots must be strictly increasing".into()));
        }
        if xs.iter().chain(ps.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidExponent("knots must be finite".into()));
        }
        let all = ps.iter().copied().chain([left, right]);
        let p_minus = all.clone().fold(f64::INFINITY, f64::min);
        let p_plus = all.fold(f64::NEG_INFINITY, f64::max);
        check_bounds(p_minus, p_plus)?;
        Ok(Self { repr: Repr::Pwl { xs, ps, left, right }, p_minus, p_plus })
    }

    pub fn closed_form(text: &str, halfwidth: f64) -> Result<Self> {
        let expr = Expr::parse(text)?;
        if !(halfwidth > 0.0 && halfwidth.is_finite()) {
            return Err(Error::InvalidExponent(format!(
                "domain_halfwidth {halfwidth} must be positive"
            )));
        }
        let eval = |x: f64| -> Result<f64> {
            let z = expr.eval(x);
            if !z.re.is_finite() || z.im.abs() > 1e-12 * z.re.abs().max(1.0) {
                return Err(Error::InvalidExponent(format!(
                    "`{text}` is not real and finite at x = {x}"
                )));
            }
            Ok(z.re)
        };
        let xs = closed_form_samples(halfwidth);
        let mut vals = Vec::with_capacity(xs.len());
        for &x in &xs {
            vals.push(eval(x)?);
        }
        let mut p_minus = f64::INFINITY;
        let mut p_plus = f64::NEG_INFINITY;
        for &v in &vals {
            p_minus = p_minus.min(v);
            p_plus = p_plus.max(v);
        }
        // Refine interior extrema between neighbouring samples.
        let n_uniform = 20_001;
        for i in 1..n_uniform - 1 {
            let (a, b) = (xs[i - 1], xs[i + 1]);
            if vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1] {
                let (_, v) = golden_max(|x| expr.eval(x).re, a, b, 1e-13);
                p_plus = p_plus.max(v);
            }
            if vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1] {
                let (_, v) = golden_max(|x| -expr.eval(x).re, a, b, 1e-13);
                p_minus = p_minus.min(-v);
            }
        }
        check_bounds(p_minus, p_plus)?;
        Ok(Self { repr: Repr::Closed { expr, halfwidth }, p_minus, p_plus })
    }

    pub fn from_spec(spec: &ExponentSpec) -> Result<Self> {
        match spec {
            ExponentSpec::Constant { value } => Self::constant(*value),
            ExponentSpec::Pwl { knots, left_tail, right_tail } => {
                Self::pwl(knots, *left_tail, *right_tail)
            }
            ExponentSpec::ClosedForm { expr, domain_halfwidth } => {
                Self::closed_form(expr, *domain_halfwidth)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ExponentSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("exponent spec: {e}")))?;
        Self::from_spec(&spec)
    }

    /// Spec that reproduces this exponent. Derived exponents (conjugates and
    /// θ-transforms) serialize as closed forms.
    pub fn spec(&self) -> ExponentSpec {
        match &self.repr {
            Repr::Constant(v) => ExponentSpec::Constant { value: *v },
            Repr::Pwl { xs, ps, left, right } => ExponentSpec::Pwl {
                knots: xs.iter().zip(ps).map(|(&x, &p)| [x, p]).collect(),
                left_tail: *left,
                right_tail: *right,
            },
            _ => ExponentSpec::ClosedForm {
                expr: self.to_expr().to_string(),
                domain_halfwidth: self.halfwidth(),
            },
        }
    }

    fn halfwidth(&self) -> f64 {
        match &self.repr {
            Repr::Constant(_) => 1.0,
            Repr::Pwl { xs, .. } => xs[0].abs().max(xs[xs.len() - 1].abs()).max(1.0),
            Repr::Closed { halfwidth, .. } => *halfwidth,
            Repr::Conjugate(p) | Repr::Theta { parent: p, .. } => p.halfwidth(),
        }
    }

    /// Closed-form expression for `p(x)`. Piecewise-linear exponents are
    /// written with `abs` kinks and `sgn` jumps (a jump takes its midpoint
    /// value at the knot).
    pub fn to_expr(&self) -> Expr {
        match &self.repr {
            Repr::Constant(v) => Expr::constant(*v),
            Repr::Pwl { xs, ps, left, right } => {
                let n = xs.len();
                let mut slopes = vec![0.0];
                for i in 0..n - 1 {
                    slopes.push((ps[i + 1] - ps[i]) / (xs[i + 1] - xs[i]));
                }
                slopes.push(0.0);
                // Continuous part anchored so the value at xs[0] is ps[0].
                let mut e = Expr::constant(ps[0]);
                for k in 0..n {
                    let ds = 0.5 * (slopes[k + 1] - slopes[k]);
                    if ds != 0.0 {
                        let kink = expr::call(
                            expr::Func::Abs,
                            expr::sub(Expr::x(), Expr::constant(xs[k])),
                        );
                        let at_anchor = ds * (xs[0] - xs[k]).abs();
                        e = expr::add(e, expr::mul(Expr::constant(ds), kink));
                        e = expr::sub(e, Expr::constant(at_anchor));
                    }
                }
                let jl = ps[0] - left;
                let jr = right - ps[n - 1];
                let step = |e: Expr, at: f64, j: f64, side: f64| {
                    if j == 0.0 {
                        return e;
                    }
                    let s = expr::call(expr::Func::Sgn, expr::sub(Expr::x(), Expr::constant(at)));
                    // jump j: contributes -j/2 left of `at`, +j/2 right; shift so the
                    // anchor side (side) is unchanged.
                    let e = expr::add(e, expr::mul(Expr::constant(0.5 * j), s));
                    expr::sub(e, Expr::constant(0.5 * j * side))
                };
                let e = step(e, xs[0], jl, 1.0);
                step(e, xs[n - 1], jr, -1.0)
            }
            Repr::Closed { expr, .. } => expr.clone(),
            Repr::Conjugate(p) => {
                let pe = p.to_expr();
                expr::div(pe.clone(), expr::sub(pe, Expr::constant(1.0)))
            }
            Repr::Theta { parent, theta } => {
                let pe = parent.to_expr();
                expr::div(
                    expr::mul(Expr::constant(2.0 * (1.0 - theta)), pe.clone()),
                    expr::sub(Expr::constant(2.0), expr::mul(Expr::constant(*theta), pe)),
                )
            }
        }
    }

    fn raw(&self, x: f64) -> f64 {
        match &self.repr {
            Repr::Constant(v) => *v,
            Repr::Pwl { xs, ps, left, right } => {
                let n = xs.len();
                if x < xs[0] {
                    *left
                } else if x > xs[n - 1] {
                    *right
                } else {
                    let k = xs.partition_point(|&k| k <= x);
                    if k == 0 {
                        return ps[0];
                    }
                    let i = k - 1;
                    if i == n - 1 || xs[i] == x {
                        return ps[i];
                    }
                    let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
                    ps[i] + t * (ps[i + 1] - ps[i])
                }
            }
            Repr::Closed { expr, .. } => expr.eval(x).re,
            Repr::Conjugate(p) => conj(p.eval(x)),
            Repr::Theta { parent, theta } => theta_map(parent.eval(x), *theta),
        }
    }

    /// `p(x)`, clamped to `[p₋, p₊]`.
    pub fn eval(&self, x: f64) -> f64 {
        self.raw(x).clamp(self.p_minus, self.p_plus)
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.p_minus, self.p_plus)
    }

    pub fn p_minus(&self) -> f64 {
        self.p_minus
    }

    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }

    pub fn is_constant(&self) -> bool {
        self.p_minus == self.p_plus
    }

    /// The constant value when `p₋ = p₊`.
    pub fn as_constant(&self) -> Option<f64> {
        self.is_constant().then_some(self.p_minus)
    }

    pub fn conjugate(&self) -> VariableExponent {
        let (lo, hi) = (conj(self.p_plus), conj(self.p_minus));
        match &self.repr {
            Repr::Constant(v) => VariableExponent {
                repr: Repr::Constant(conj(*v)),
                p_minus: conj(*v),
                p_plus: conj(*v),
            },
            Repr::Conjugate(inner) => (**inner).clone(),
            _ => VariableExponent {
                repr: Repr::Conjugate(Arc::new(self.clone())),
                p_minus: lo,
                p_plus: hi,
            },
        }
    }

    /// `θ_{p(·)} = min{1, 2/p₊, 2 − 2/p₋}`.
    pub fn theta_range(&self) -> f64 {
        1f64.min(2.0 / self.p_plus).min(2.0 - 2.0 / self.p_minus)
    }

    /// Admissible θ-range bound: equals [`Self::theta_range`] when an analytic
    /// log-Hölder certificate exists, otherwise it must come from the caller.
    pub fn tau(&self) -> Option<f64> {
        match self.lh_certificate() {
            Ok(c) if c.method == LhMethod::AnalyticForPiecewiseLinear => Some(self.theta_range()),
            _ => None,
        }
    }

    pub fn p_theta(&self, theta: f64) -> Result<VariableExponent> {
        let max = self.theta_range();
        if !(theta > 0.0 && theta < max - THETA_GUARD) {
            return Err(Error::ThetaOutOfRange { theta, max });
        }
        let (lo, hi) = (theta_map(self.p_minus, theta), theta_map(self.p_plus, theta));
        let repr = match &self.repr {
            Repr::Constant(v) => Repr::Constant(theta_map(*v, theta)),
            _ => Repr::Theta { parent: Arc::new(self.clone()), theta },
        };
        Ok(VariableExponent { repr, p_minus: lo, p_plus: hi })
    }

    /// Lipschitz factor `4(1−θ)/(2−θp₊)²` of the map `p ↦ p_θ` on `[p₋, p₊]`.
    pub fn theta_propagation_factor(&self, theta: f64) -> f64 {
        4.0 * (1.0 - theta) / (2.0 - theta * self.p_plus).powi(2)
    }

    /// Log-Hölder constants. Piecewise-linear exponents (and exponents derived
    /// from them) are certified analytically; closed forms yield sampled lower
    /// estimates.
    pub fn lh_certificate(&self) -> Result<LHCertificate> {
        match &self.repr {
            Repr::Constant(v) => Ok(LHCertificate {
                c0: 0.0,
                c_infinity: 0.0,
                p_infinity: *v,
                method: LhMethod::AnalyticForPiecewiseLinear,
            }),
            Repr::Pwl { xs, ps, left, right } => pwl_certificate(xs, ps, *left, *right),
            Repr::Closed { expr, halfwidth } => sampled_certificate(expr, *halfwidth, self.bounds()),
            Repr::Conjugate(p) => {
                let c = p.lh_certificate()?;
                let k = 1.0 / (p.p_minus - 1.0).powi(2);
                Ok(LHCertificate {
                    c0: c.c0 * k,
                    c_infinity: c.c_infinity * k,
                    p_infinity: conj(c.p_infinity),
                    method: c.method,
                })
            }
            Repr::Theta { parent, theta } => {
                let c = parent.lh_certificate()?;
                let k = parent.theta_propagation_factor(*theta);
                Ok(LHCertificate {
                    c0: c.c0 * k,
                    c_infinity: c.c_infinity * k,
                    p_infinity: theta_map(c.p_infinity, *theta),
                    method: c.method,
                })
            }
        }
    }
}

fn pwl_certificate(xs: &[f64], ps: &[f64], left: f64, right: f64) -> Result<LHCertificate> {
    let n = xs.len();
    if left != right {
        return Err(Error::NotLogHoelder(format!(
            "tails {left} and {right} differ, no single limit at infinity"
        )));
    }
    if left != ps[0] || right != ps[n - 1] {
        return Err(Error::NotLogHoelder("exponent jumps at an outer knot".into()));
    }
    let p_inf = left;
    let p_minus = ps.iter().copied().fold(p_inf, f64::min);
    let p_plus = ps.iter().copied().fold(p_inf, f64::max);
    let range = p_plus - p_minus;
    let slope = xs
        .windows(2)
        .zip(ps.windows(2))
        .map(|(x, p)| ((p[1] - p[0]) / (x[1] - x[0])).abs())
        .fold(0.0, f64::max);
    // |p(x)−p(y)| ≤ min(L·t, range) for t = |x−y|; t·log(e+1/t) increases and
    // log(e+1/t) decreases, so the supremum sits at t = range/L.
    let c0 = if range == 0.0 || slope == 0.0 {
        0.0
    } else {
        range * (E + slope / range).ln()
    };
    let mut c_inf: f64 = 0.0;
    for i in 0..n.saturating_sub(1) {
        let (x0, x1) = (xs[i], xs[i + 1]);
        let (p0, p1) = (ps[i], ps[i + 1]);
        let line = |x: f64| p0 + (x - x0) / (x1 - x0) * (p1 - p0) - p_inf;
        // Split where the log factor or |p − p∞| loses smoothness; on each part
        // both factors are concave and nonnegative, so the product is unimodal.
        let mut cuts = vec![x0, x1];
        if x0 < 0.0 && x1 > 0.0 {
            cuts.push(0.0);
        }
        if (p0 - p_inf) * (p1 - p_inf) < 0.0 {
            cuts.push(x0 + (p_inf - p0) / (p1 - p0) * (x1 - x0));
        }
        cuts.sort_by(f64::total_cmp);
        for w in cuts.windows(2) {
            let g = |x: f64| line(x).abs() * (E + x.abs()).ln();
            let (_, v) = golden_max(g, w[0], w[1], 1e-14);
            c_inf = c_inf.max(v);
        }
    }
    for i in 0..n {
        c_inf = c_inf.max((ps[i] - p_inf).abs() * (E + xs[i].abs()).ln());
    }
    Ok(LHCertificate {
        c0,
        c_infinity: c_inf * (1.0 + 1e-12),
        p_infinity: p_inf,
        method: LhMethod::AnalyticForPiecewiseLinear,
    })
}

fn sampled_certificate(expr: &Expr, halfwidth: f64, bounds: (f64, f64)) -> Result<LHCertificate> {
    let p = |x: f64| expr.eval(x).re.clamp(bounds.0, bounds.1);
    let far = 1e15;
    let (pl, pr) = (p(-far), p(far));
    if (pl - pr).abs() > 1e-6 {
        return Err(Error::NotLogHoelder(format!(
            "sampled limits {pl} and {pr} at ±infinity differ"
        )));
    }
    let p_inf = 0.5 * (pl + pr);
    let m = 1201;
    let xs: Vec<f64> = (0..m)
        .map(|i| -halfwidth + 2.0 * halfwidth * i as f64 / (m - 1) as f64)
        .collect();
    let vs: Vec<f64> = xs.iter().map(|&x| p(x)).collect();
    let mut c0: f64 = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            let t = xs[j] - xs[i];
            c0 = c0.max((vs[j] - vs[i]).abs() * (E + 1.0 / t).ln());
        }
    }
    let mut c_inf: f64 = 0.0;
    for (x, v) in xs.iter().zip(&vs) {
        c_inf = c_inf.max((v - p_inf).abs() * (E + x.abs()).ln());
    }
    let mut r = halfwidth;
    while r < far {
        for x in [r, -r] {
            c_inf = c_inf.max((p(x) - p_inf).abs() * (E + r).ln());
        }
        r *= 1.1;
    }
    Ok(LHCertificate { c0, c_infinity: c_inf, p_infinity: p_inf, method: LhMethod::SampledLowerEstimate })
}

/// One open interval `(lo, hi)` of `R_p`; `hi = ∞` is allowed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpenInterval {
    pub lo: f64,
    pub hi: f64,
}

impl OpenInterval {
    pub fn contains(&self, r: f64) -> bool {
        r > self.lo && r < self.hi
    }
}

/// `R_p = {r ∈ (1,∞) : |1/r − 1/2| > |1/p − 1/2|}` as at most two intervals.
pub fn rp_range(p: f64) -> Result<Vec<OpenInterval>> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(format!("p = {p} must lie in (1, ∞)")));
    }
    let d = (1.0 / p - 0.5).abs();
    Ok(vec![
        OpenInterval { lo: 1.0, hi: 1.0 / (0.5 + d) },
        OpenInterval { lo: 1.0 / (0.5 - d), hi: f64::INFINITY },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn peak() -> VariableExponent {
        VariableExponent::pwl(&[[-1.0, 2.0], [0.0, 3.0], [1.0, 2.0]], 2.0, 2.0).unwrap()
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(VariableExponent::constant(2.0).unwrap().bounds(), (2.0, 2.0));
        let p = VariableExponent::pwl(&[[-1.0, 3.0], [1.0, 1.5]], 3.0, 1.5).unwrap();
        assert_eq!(p.bounds(), (1.5, 3.0));
        let c = VariableExponent::closed_form("2+1/(1+x^2)", 10.0).unwrap();
        assert!((c.p_minus() - 2.0).abs() < 1e-9);
        assert!((c.p_plus() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn construction_rejects_bad_bounds() {
        assert!(VariableExponent::constant(1.0).is_err());
        assert!(VariableExponent::constant(f64::INFINITY).is_err());
        assert!(VariableExponent::pwl(&[[0.0, 2.0], [0.0, 3.0]], 2.0, 3.0).is_err());
        assert!(VariableExponent::closed_form("1+x^2", 5.0).is_err());
    }

    #[test]
    fn conjugate_examples() {
        let p = VariableExponent::constant(3.0).unwrap().conjugate();
        assert_eq!(p.as_constant(), Some(1.5));
        let q = VariableExponent::constant(2.0).unwrap().conjugate();
        assert_eq!(q.as_constant(), Some(2.0));
        let v = VariableExponent::pwl(&[[0.0, 1.5], [1.0, 3.0]], 1.5, 3.0).unwrap().conjugate();
        assert!((v.eval(0.0) - 3.0).abs() < 1e-15);
        assert_eq!(v.bounds(), (1.5, 3.0));
    }

    #[test]
    fn theta_range_examples() {
        assert_eq!(VariableExponent::constant(4.0).unwrap().theta_range(), 0.5);
        assert_eq!(VariableExponent::constant(2.0).unwrap().theta_range(), 1.0);
        let p = VariableExponent::pwl(&[[0.0, 1.5], [1.0, 3.0]], 1.5, 3.0).unwrap();
        assert!((p.theta_range() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn p_theta_examples() {
        let p = VariableExponent::constant(4.0).unwrap().p_theta(0.25).unwrap();
        assert!((p.eval(0.0) - 6.0).abs() < 1e-14);
        let p = VariableExponent::constant(2.0).unwrap().p_theta(0.7).unwrap();
        assert!((p.eval(0.0) - 2.0).abs() < 1e-15);
        let q = peak().p_theta(0.2).unwrap();
        assert!((q.eval(0.0) - 4.8 / 1.4).abs() < 1e-14);
        assert!(matches!(
            VariableExponent::constant(4.0).unwrap().p_theta(0.5),
            Err(Error::ThetaOutOfRange { .. })
        ));
    }

    #[test]
    fn lh_constant_and_tails() {
        let c = VariableExponent::constant(2.5).unwrap().lh_certificate().unwrap();
        assert_eq!((c.c0, c.c_infinity, c.p_infinity), (0.0, 0.0, 2.5));
        let p = VariableExponent::pwl(&[[0.0, 2.0], [1.0, 3.0]], 2.0, 3.0).unwrap();
        assert!(matches!(p.lh_certificate(), Err(Error::NotLogHoelder(_))));
    }

    #[test]
    fn lh_c0_matches_golden_oracle() {
        let c = peak().lh_certificate().unwrap();
        let oracle = |t: f64| t.min(1.0) * (E + 1.0 / t).ln();
        let (_, best) = crate::quad::scan_max(oracle, 1e-6, 50.0, 200_001, 1e-14);
        assert!((c.c0 - best).abs() < 1e-9, "{} vs {}", c.c0, best);
        assert_eq!(c.p_infinity, 2.0);
    }

    #[test]
    fn lh_c_infinity_dominates_samples() {
        let c = peak().lh_certificate().unwrap();
        let p = peak();
        for i in 0..=4000 {
            let x = -2.0 + i as f64 * 1e-3;
            assert!((p.eval(x) - 2.0).abs() * (E + x.abs()).ln() <= c.c_infinity);
        }
    }

    #[test]
    fn pwl_expression_agrees_with_evaluation() {
        let p = VariableExponent::pwl(&[[-1.0, 3.0], [0.5, 1.5], [2.0, 2.5]], 3.0, 2.5).unwrap();
        let e = p.to_expr();
        for i in 0..200 {
            let x = -4.0 + 0.0371 * i as f64;
            assert!((e.eval_re(x) - p.eval(x)).abs() < 1e-12, "x = {x}");
        }
        let s = VariableExponent::pwl(&[[1.0, 2.0]], 2.0, 3.0).unwrap();
        let e = s.to_expr();
        assert!((e.eval_re(0.5) - 2.0).abs() < 1e-15);
        assert!((e.eval_re(1.5) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn rp_examples() {
        let r = rp_range(4.0).unwrap();
        assert!((r[0].hi - 4.0 / 3.0).abs() < 1e-14 && (r[1].lo - 4.0).abs() < 1e-12);
        let r43 = rp_range(4.0 / 3.0).unwrap();
        assert!((r43[0].hi - 4.0 / 3.0).abs() < 1e-14 && (r43[1].lo - 4.0).abs() < 1e-12);
        let r2 = rp_range(2.0).unwrap();
        assert!(!r2.iter().any(|i| i.contains(2.0)));
        assert!(r2.iter().any(|i| i.contains(3.0)));
    }

    #[test]
    fn spec_round_trip_json() {
        let text = r#"{"kind":"pwl","knots":[[-1,3],[1,1.5]],"left_tail":3,"right_tail":1.5}"#;
        let p = VariableExponent::from_json(text).unwrap();
        assert_eq!(p.bounds(), (1.5, 3.0));
        assert!(VariableExponent::from_json(r#"{"kind":"constant","value":2,"extra":1}"#).is_err());
        assert!(VariableExponent::from_json(r#"{"kind":"cubic"}"#).is_err());
    }
}
