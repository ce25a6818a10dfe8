//! Sup, variation, Wiener and SO³ norms of symbols.

use num_complex::Complex64;

use super::{Symbol, Wiener};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::grid::GridFunction;
use crate::quad;

/// Variation integrals above this are reported as divergent.
pub const VARIATION_CAP: f64 = 1e8;

/// Dense sample points for one piece: uniform on finite pieces; on infinite
/// pieces uniform out to 50 units from the finite end (or origin) and
/// geometric beyond, out to `1e15`.
pub(crate) fn dense_points(lo: f64, hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let uniform = |a: f64, b: f64, n: usize, out: &mut Vec<f64>| {
        for i in 0..=n {
            out.push(a + (b - a) * i as f64 / n as f64);
        }
    };
    let geometric = |e: f64, s: f64, out: &mut Vec<f64>| {
        let mut d: f64 = 50.0;
        while d < 1e15 {
            d *= 1.01;
            out.push(e + s * d);
        }
    };
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => uniform(lo, hi, 2000, &mut out),
        (true, false) => {
            uniform(lo, lo + 50.0, 2000, &mut out);
            geometric(lo, 1.0, &mut out);
        }
        (false, true) => {
            uniform(hi - 50.0, hi, 2000, &mut out);
            geometric(hi, -1.0, &mut out);
        }
        (false, false) => {
            uniform(-50.0, 50.0, 4000, &mut out);
            geometric(0.0, 1.0, &mut out);
            geometric(0.0, -1.0, &mut out);
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Sampled maximum of `f` over sorted `xs`, refined by golden-section
/// search around every local maximum.
pub(crate) fn refined_max<F: Fn(f64) -> f64>(f: F, xs: &[f64]) -> f64 {
    let vs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut best = vs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for i in 1..xs.len().saturating_sub(1) {
        if vs[i] >= vs[i - 1] && vs[i] >= vs[i + 1] && vs[i] > 0.0 {
            let (_, v) = quad::golden_max(&f, xs[i - 1], xs[i + 1], 1e-12);
            best = best.max(v);
        }
    }
    best
}

fn piece_sup(e: &Expr, de: &Expr, lo: f64, hi: f64, limit_lo: Option<Complex64>, limit_hi: Option<Complex64>) -> f64 {
    let end = |x: f64, lim: Option<Complex64>| {
        if x.is_finite() {
            e.eval(x).norm()
        } else {
            lim.map_or(0.0, |z| z.norm())
        }
    };
    if let Some(c) = e.as_const() {
        return c.norm();
    }
    if de.as_const().is_some() {
        // |affine| is convex, so the maximum sits at an endpoint.
        return end(lo, limit_lo).max(end(hi, limit_hi));
    }
    let xs = dense_points(lo, hi);
    refined_max(|x| e.eval(x).norm(), &xs)
        .max(end(lo, limit_lo))
        .max(end(hi, limit_hi))
}

/// `‖a‖_∞`: exact for piecewise-affine pieces, otherwise dense sampling with
/// golden-section refinement (a lower estimate).
pub fn sup_norm(a: &Symbol) -> f64 {
    match (a.pieces(), a.piece_derivatives()) {
        (Some(pieces), Some(derivs)) => {
            let n = pieces.len();
            let (l, r) = a.limits();
            pieces
                .iter()
                .zip(derivs)
                .enumerate()
                .map(|(i, ((lo, hi, e), de))| {
                    piece_sup(e, de, *lo, *hi, if i == 0 { l } else { None }, if i == n - 1 { r } else { None })
                })
                .fold(0.0, f64::max)
        }
        _ => {
            let (xs, _) = mollified_points(a);
            refined_max(|x| a.eval(x).norm(), &xs)
        }
    }
}

/// Sample points for a mollified symbol: dense near the smoothed breakpoints,
/// coarser elsewhere. Returns the points and the region `[lo, hi]` containing
/// all smoothed features.
fn mollified_points(a: &Symbol) -> (Vec<f64>, (f64, f64)) {
    let (_, delta) = a.mollification().expect("mollified symbol");
    let bps = a.breakpoints();
    let lo = bps.first().copied().unwrap_or(0.0) - 2.0 * delta - 1.0;
    let hi = bps.last().copied().unwrap_or(0.0) + 2.0 * delta + 1.0;
    let mut xs = Vec::new();
    let n = 1500;
    for i in 0..=n {
        xs.push(lo + (hi - lo) * i as f64 / n as f64);
    }
    for &b in &bps {
        for i in 0..=100 {
            xs.push(b - delta + 2.0 * delta * i as f64 / 100.0);
        }
    }
    let mut d = 1.0;
    while d < 1e12 {
        d *= 1.1;
        xs.push(hi + d);
        xs.push(lo - d);
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    (xs, (lo, hi))
}

fn unbounded(what: String) -> Error {
    Error::UnboundedVariation(what)
}

/// Core half-width split at unit breaks before the tails are mapped to `[0, 1)`.
const VARIATION_CORE: f64 = 64.0;
const VARIATION_REL_ERR: f64 = 1e-4;

/// `∫|e|` over `(lo, hi)`: unit cells on the core (zeros of `e` become cell-local
/// kinks), mapped quadrature on the tails.
fn abs_derivative_integral(e: &Expr, lo: f64, hi: f64) -> quad::Quad {
    let f = |x: f64| e.eval(x).norm();
    let a = lo.max(-VARIATION_CORE);
    let b = hi.min(VARIATION_CORE);
    let mut total = quad::Quad { value: 0.0, error: 0.0, evaluations: 0 };
    let mut add = |q: quad::Quad| {
        total.value += q.value;
        total.error += q.error;
        total.evaluations += q.evaluations;
    };
    if a < b {
        let breaks: Vec<f64> = ((a.floor() as i64 + 1)..=(b.ceil() as i64 - 1)).map(|k| k as f64).filter(|k| *k > a && *k < b).collect();
        add(quad::integrate_with_breaks(f, a, b, &breaks, 1e-13, 1e-11));
    }
    if lo < a {
        add(quad::integrate(f, lo, a.min(hi), 1e-12, 1e-10));
    }
    if hi > b {
        add(quad::integrate(f, b.max(lo), hi, 1e-12, 1e-10));
    }
    total
}

/// `V(a) = Σ ∫|a′|` over pieces plus the jump magnitudes `|a(x+0) − a(x−0)|`.
/// Pieces with constant derivative are integrated exactly.
pub fn total_variation(a: &Symbol) -> Result<f64> {
    match (a.pieces(), a.piece_derivatives()) {
        (Some(pieces), Some(derivs)) => {
            let mut v = 0.0;
            for ((lo, hi, e), de) in pieces.iter().zip(derivs) {
                if let Some(c) = de.as_const() {
                    if c.norm() == 0.0 {
                        continue;
                    }
                    if !(lo.is_finite() && hi.is_finite()) {
                        return Err(unbounded(format!("piece `{e}` has nonzero constant slope on an infinite interval")));
                    }
                    v += c.norm() * (hi - lo);
                    continue;
                }
                let q = abs_derivative_integral(de, *lo, *hi);
                if !q.value.is_finite() || q.value > VARIATION_CAP || q.error > VARIATION_REL_ERR * q.value.max(1.0) {
                    return Err(unbounded(format!(
                        "∫|a′| on ({lo}, {hi}) did not converge (value {:.3e}, error {:.3e})",
                        q.value, q.error
                    )));
                }
                // The error estimate is added so that V is not under-reported.
                v += q.value + q.error;
            }
            if let Some(pieces) = a.pieces() {
                for w in pieces.windows(2) {
                    let b = w[0].1;
                    v += (w[1].2.eval(b) - w[0].2.eval(b)).norm();
                }
            }
            Ok(v)
        }
        _ => {
            // V(a*φ_δ) = ∫|(a*φ_δ)′| with the derivative given by convolution.
            let mut breaks = a.breakpoints();
            breaks.sort_by(f64::total_cmp);
            let (_, (lo, hi)) = mollified_points(a);
            let inner = quad::integrate_with_breaks(|x| a.derivative(x).norm(), lo, hi, &breaks, 1e-11, 1e-9);
            let left = quad::integrate(|x| a.derivative(x).norm(), f64::NEG_INFINITY, lo, 1e-11, 1e-9);
            let right = quad::integrate(|x| a.derivative(x).norm(), hi, f64::INFINITY, 1e-11, 1e-9);
            let v = inner.value + left.value + right.value;
            let err = inner.error + left.error + right.error;
            if !v.is_finite() || v > VARIATION_CAP || err > 1e-6 * v.max(1.0) {
                return Err(unbounded(format!("mollified variation did not converge ({v:.3e} ± {err:.3e})")));
            }
            Ok(v)
        }
    }
}

/// `‖a‖_V = ‖a‖_∞ + V(a)`.
pub fn vnorm(a: &Symbol) -> Result<f64> {
    Ok(sup_norm(a) + total_variation(a)?)
}

/// Refinement sum `Σ |a(x_k) − a(x_{k−1})|` on a uniform partition of `[lo, hi]`
/// with `n` cells. Increases to the variation on `[lo, hi]` as `n` grows.
pub fn refinement_variation(a: &Symbol, lo: f64, hi: f64, n: usize) -> f64 {
    let mut prev = a.eval(lo);
    let mut v = 0.0;
    for k in 1..=n {
        let x = lo + (hi - lo) * k as f64 / n as f64;
        let cur = a.eval(x);
        v += (cur - prev).norm();
        prev = cur;
    }
    v
}

/// `‖c + F f‖_W = |c| + ‖f‖₁` for the attached closed-form density; constants need none.
pub fn wiener_norm(a: &Symbol) -> Result<f64> {
    if let (None, Some(c)) = (a.wiener(), a.as_constant()) {
        return Ok(c.norm());
    }
    let w = a
        .wiener()
        .ok_or_else(|| Error::NotInWienerForm("no L¹ density attached to the symbol".into()))?;
    wiener_norm_of(w)
}

pub(crate) fn wiener_norm_of(w: &Wiener) -> Result<f64> {
    let q = quad::integrate(|t| w.density.eval(t).norm(), f64::NEG_INFINITY, f64::INFINITY, 1e-13, 1e-12);
    if !q.value.is_finite() || q.error > 1e-8 * q.value.max(1.0) {
        return Err(Error::NotInWienerForm(format!("density `{}` is not integrable", w.density)));
    }
    Ok(w.constant.norm() + q.value)
}

/// `|c| + h·Σ|f_j|` for a sampled density.
pub fn wiener_norm_from_grid(c: Complex64, f: &GridFunction) -> f64 {
    c.norm() + f.grid().step() * f.samples().iter().map(|z| z.norm()).sum::<f64>()
}

/// Checks `a(x) = c + ∫ f(t) e^{ixt} dt` at a few frequencies.
pub(crate) fn check_wiener_form(a: &Symbol, w: &Wiener) -> Result<()> {
    wiener_norm_of(w)?;
    for x in [0.0, 0.37, 1.0, 2.5, -1.7] {
        let re = quad::integrate(
            |t| {
                let f = w.density.eval(t);
                f.re * (x * t).cos() - f.im * (x * t).sin()
            },
            f64::NEG_INFINITY,
            f64::INFINITY,
            1e-12,
            1e-11,
        )
        .value;
        let im = quad::integrate(
            |t| {
                let f = w.density.eval(t);
                f.re * (x * t).sin() + f.im * (x * t).cos()
            },
            f64::NEG_INFINITY,
            f64::INFINITY,
            1e-12,
            1e-11,
        )
        .value;
        let expected = w.constant + Complex64::new(re, im);
        let actual = a.eval(x);
        if (expected - actual).norm() > 1e-6 * (1.0 + actual.norm()) {
            return Err(Error::NotInWienerForm(format!(
                "c + F f = {expected} but a({x}) = {actual}"
            )));
        }
    }
    Ok(())
}

/// `Σ_{j=0}^{3} (1/j!)·‖D^j a‖_∞` with `(D f)(x) = x f′(x)`.
pub fn so3_norm(a: &Symbol) -> Result<f64> {
    let pieces = a
        .pieces()
        .ok_or_else(|| Error::NotInSO3("only closed-form piecewise symbols are supported".into()))?;
    if !a.jumps().is_empty() {
        return Err(Error::NotInSO3("symbol has jumps".into()));
    }
    let n = pieces.len();
    let mut total = 0.0;
    let mut factorial = 1.0;
    let mut current: Vec<Expr> = pieces.iter().map(|p| p.2.clone()).collect();
    for j in 0..=3 {
        if j > 0 {
            factorial *= j as f64;
            current = current.iter().map(|e| e.euler()).collect();
            for (e, x) in [(&current[0], -1.0), (&current[n - 1], 1.0)] {
                for far in [1e12, 1e15] {
                    let v = e.eval(x * far);
                    if !(v.norm() <= 1e-6) {
                        return Err(Error::NotInSO3(format!(
                            "D^{j}a({}) = {v} does not vanish at infinity",
                            x * far
                        )));
                    }
                }
            }
        }
        let mut sup: f64 = 0.0;
        for (i, e) in current.iter().enumerate() {
            let (lo, hi, _) = pieces[i];
            let xs = dense_points(lo, hi);
            sup = sup.max(refined_max(|x| e.eval(x).norm(), &xs));
        }
        total += sup / factorial;
    }
    Ok(total)
}

/// `sup_{x,y ∈ J} |f(x) − f(y)|` over `samples` uniform points of `J = [lo, hi]`.
pub fn osc<F: Fn(f64) -> Complex64>(f: F, lo: f64, hi: f64, samples: usize) -> f64 {
    let n = samples.max(2);
    let vs: Vec<Complex64> = (0..n).map(|i| f(lo + (hi - lo) * i as f64 / (n - 1) as f64)).collect();
    let mut best: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            best = best.max((vs[i] - vs[j]).norm());
        }
    }
    best
}
