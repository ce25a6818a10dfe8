//! Explicit symbol constructions: trapezoid cutoffs, the smoothing bump,
//! jump killers, Blaschke rationals and piecewise-constant quantization.

use std::sync::OnceLock;

use num_complex::Complex64;

use super::norms::dense_points;
use super::Symbol;
use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::quad;

fn k(v: f64) -> Expr {
    Expr::constant(v)
}

fn kc(z: Complex64) -> Expr {
    Expr::complex(z)
}

/// Trapezoid cutoff: 1 on `[−n, n]`, linear ramps to 0 on `n < |x| < n+1`.
pub fn psi_n(n: u64) -> Symbol {
    let n = n.max(1) as f64;
    let x = Expr::x;
    Symbol::piecewise(
        vec![-n - 1.0, -n, n, n + 1.0],
        vec![
            k(0.0),
            expr::add(x(), k(n + 1.0)),
            k(1.0),
            expr::sub(k(n + 1.0), x()),
            k(0.0),
        ],
    )
    .expect("trapezoid cutoff is a valid symbol")
    .with_name(format!("psi_{n}"))
}

/// `∫_{−1}^{1} exp(−1/(1−u²)) du`.
fn bump_mass() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| {
        quad::integrate(|u| (-1.0 / (1.0 - u * u)).exp(), -1.0, 1.0, 1e-16, 1e-15).value
    })
}

/// Normalizing constant `C` of `φ(u) = C·exp(−1/(1−u²))`.
pub fn mollifier_constant() -> f64 {
    1.0 / bump_mass()
}

/// The unit-mass bump `φ`, zero outside `(−1, 1)`.
pub(crate) fn bump(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        mollifier_constant() * (-1.0 / (1.0 - u * u)).exp()
    }
}

/// `φ_δ(x) = δ^{−1} φ(x/δ)` as a symbol.
pub fn mollifier(delta: f64) -> Result<Symbol> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!("delta {delta} must be positive")));
    }
    let u = expr::div(Expr::x(), k(delta));
    let inner = expr::div(k(-1.0), expr::sub(k(1.0), expr::pow(u, k(2.0))));
    let body = expr::mul(k(mollifier_constant() / delta), expr::call(expr::Func::Exp, inner));
    Ok(Symbol::piecewise(vec![-delta, delta], vec![k(0.0), body, k(0.0)])?.with_name(format!("phi_{delta}")))
}

/// `a * φ_δ`, evaluated by quadrature on demand.
pub fn convolve_mollify(a: &Symbol, delta: f64) -> Symbol {
    let name = a.name().map(|n| format!("{n}*phi_{delta}"));
    let s = Symbol::mollified(a.clone(), delta);
    match name {
        Some(n) => s.with_name(n),
        None => s,
    }
}

/// `½[f₋(1−x) + f₊(1+x)]` on `[−1, 1]`, `f₋` to the left and `f₊` to the right.
pub fn jump_killer_infinity(minus: Complex64, plus: Complex64) -> Symbol {
    if minus == plus {
        return Symbol::constant(minus).with_name("jump_killer_inf");
    }
    let x = Expr::x;
    let body = expr::mul(
        k(0.5),
        expr::add(
            expr::mul(kc(minus), expr::sub(k(1.0), x())),
            expr::mul(kc(plus), expr::add(k(1.0), x())),
        ),
    );
    Symbol::piecewise(vec![-1.0, 1.0], vec![kc(minus), body, kc(plus)])
        .expect("jump killer is a valid symbol")
        .with_name("jump_killer_inf")
}

/// Hat on `[x₀−1, x₀+1]` jumping from `left` to `right` at `x₀`.
pub fn jump_killer_at(x0: f64, left: Complex64, right: Complex64) -> Symbol {
    let x = Expr::x;
    let rising = expr::mul(kc(left), expr::add(x(), k(1.0 - x0)));
    let falling = expr::mul(kc(right), expr::sub(k(x0 + 1.0), x()));
    Symbol::piecewise(vec![x0 - 1.0, x0, x0 + 1.0], vec![k(0.0), rising, falling, k(0.0)])
        .expect("local jump killer is a valid symbol")
        .with_name(format!("jump_killer_{x0}"))
}

/// `((x−i)/(x+i))^k`.
pub fn blaschke_rational(kk: i32) -> Symbol {
    if kk == 0 {
        return Symbol::constant(Complex64::new(1.0, 0.0)).with_name("blaschke_0");
    }
    let i = Complex64::new(0.0, 1.0);
    let base = expr::div(expr::sub(Expr::x(), kc(i)), expr::add(Expr::x(), kc(i)));
    Symbol::from_expr(expr::pow(base, k(f64::from(kk))))
        .expect("Blaschke rationals are bounded")
        .with_name(format!("blaschke_{kk}"))
}

type Segment<'a> = (f64, f64, &'a dyn Fn(f64) -> f64);

/// Change points of the midpoint-rule quantization of one real component.
/// Returns the starting level and `(x, new_level)` events in order.
fn quantize_component(
    segments: &[Segment],
    h: f64,
) -> (i64, Vec<(f64, i64)>) {
    let nearest = |v: f64| (v / h).round() as i64;
    let first = segments[0];
    let first_x = dense_points(first.0, first.1)[0];
    let mut level = nearest((first.2)(first_x));
    let start = level;
    let mut events = Vec::new();
    for &(lo, hi, f) in segments {
        let xs = dense_points(lo, hi);
        let mut prev_x = xs[0];
        for &x in &xs {
            let v = f(x);
            // Hysteresis: move only when strictly past a midpoint; ties keep the level.
            while (v - level as f64 * h).abs() > 0.5 * h {
                let up = v > level as f64 * h;
                let threshold = (level as f64 + if up { 0.5 } else { -0.5 }) * h;
                let crossed = |y: f64| if up { f(y) > threshold } else { f(y) < threshold };
                let at = if crossed(prev_x) {
                    prev_x
                } else {
                    let (mut a, mut b) = (prev_x, x);
                    for _ in 0..200 {
                        let m = 0.5 * (a + b);
                        if m <= a || m >= b {
                            break;
                        }
                        if crossed(m) {
                            b = m;
                        } else {
                            a = m;
                        }
                    }
                    b
                };
                level += if up { 1 } else { -1 };
                events.push((at, level));
                prev_x = at;
            }
            prev_x = x;
        }
    }
    (start, events)
}

/// Quantizes the codomain to the lattice `h_q·ℤ` (real and imaginary parts
/// separately) with the midpoint rule, producing a piecewise-constant symbol
/// with finitely many jumps.
pub fn pc0_quantize(a: &Symbol, h_q: f64) -> Result<Symbol> {
    if !(h_q > 0.0 && h_q.is_finite()) {
        return Err(Error::InvalidArgument(format!("lattice step {h_q} must be positive")));
    }
    let mut comps: Vec<(i64, Vec<(f64, i64)>)> = Vec::new();
    let parts: [fn(Complex64) -> f64; 2] = [|z| z.re, |z| z.im];
    for (ci, part) in parts.iter().enumerate() {
        if ci == 1 && a.is_real() {
            comps.push((0, Vec::new()));
            continue;
        }
        let result = match a.pieces() {
            Some(pieces) => {
                let fs: Vec<Box<dyn Fn(f64) -> f64 + '_>> = pieces
                    .iter()
                    .map(|(_, _, e)| {
                        let e: &Expr = e;
                        Box::new(move |x: f64| part(e.eval(x))) as Box<dyn Fn(f64) -> f64>
                    })
                    .collect();
                let segs: Vec<Segment> = pieces
                    .iter()
                    .zip(&fs)
                    .map(|((lo, hi, _), f)| (*lo, *hi, f.as_ref()))
                    .collect();
                quantize_component(&segs, h_q)
            }
            None => {
                let f = |x: f64| part(a.eval(x));
                quantize_component(&[(f64::NEG_INFINITY, f64::INFINITY, &f)], h_q)
            }
        };
        comps.push(result);
    }
    // Merge the two event streams into constant pieces.
    let mut events: Vec<(f64, usize, i64)> = Vec::new();
    for (ci, (_, ev)) in comps.iter().enumerate() {
        events.extend(ev.iter().map(|&(x, l)| (x, ci, l)));
    }
    events.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut levels = [comps[0].0, comps[1].0];
    let value = |l: [i64; 2]| Complex64::new(l[0] as f64 * h_q, l[1] as f64 * h_q);
    let mut breaks: Vec<f64> = Vec::new();
    let mut vals = vec![value(levels)];
    for (x, ci, l) in events {
        levels[ci] = l;
        let v = value(levels);
        if breaks.last() == Some(&x) {
            *vals.last_mut().unwrap() = v;
        } else {
            breaks.push(x);
            vals.push(v);
        }
    }
    // Remove breakpoints that no longer separate different values.
    let mut kb = Vec::new();
    let mut kv = vec![vals[0]];
    for (b, v) in breaks.into_iter().zip(vals.into_iter().skip(1)) {
        if v != *kv.last().unwrap() {
            kb.push(b);
            kv.push(v);
        }
    }
    let sym = Symbol::piecewise(kb, kv.into_iter().map(kc).collect())?;
    Ok(match a.name() {
        Some(n) => sym.with_name(format!("{n}_quantized")),
        None => sym,
    })
}
