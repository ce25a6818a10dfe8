//! Multiplier symbols: piecewise closed-form functions with finitely many
//! jumps, and their mollifications.

mod constructions;
mod norms;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::quad;

pub use constructions::{
    blaschke_rational, convolve_mollify, jump_killer_at, jump_killer_infinity, mollifier,
    mollifier_constant, pc0_quantize, psi_n,
};
pub use norms::{osc, refinement_variation, so3_norm, sup_norm, total_variation, vnorm, wiener_norm, wiener_norm_from_grid};

/// Points at which limits at ±∞ are probed.
const FAR: [f64; 2] = [1e12, 1e15];
/// Jumps smaller than this (relative to the symbol's scale) are treated as continuity.
pub const JUMP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub at: f64,
    pub left: Complex64,
    pub right: Complex64,
}

impl Jump {
    pub fn size(&self) -> f64 {
        (self.right - self.left).norm()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFlags {
    /// Continuous with both limits zero.
    pub c0: bool,
    /// Continuous with equal limits at ±∞.
    pub c_dot: bool,
    /// Continuous with (possibly different) limits at ±∞.
    pub c_bar: bool,
    /// Finitely many jumps and limits at ±∞.
    pub pc0: bool,
    /// Piecewise constant with finitely many jumps.
    pub pcc0: bool,
}

#[derive(Clone, Debug)]
struct Piecewise {
    /// Finite breakpoints, strictly increasing.
    breaks: Vec<f64>,
    /// `breaks.len() + 1` expressions, piece `i` living on `(breaks[i−1], breaks[i])`.
    exprs: Vec<Expr>,
    derivs: Vec<Expr>,
}

#[derive(Clone, Debug)]
enum Repr {
    Piecewise(Piecewise),
    Mollified { base: Arc<Symbol>, delta: f64 },
}

/// A bounded multiplier symbol `a: ℝ → ℂ`.
#[derive(Clone, Debug)]
pub struct Symbol {
    name: Option<String>,
    repr: Repr,
    limits: (Option<Complex64>, Option<Complex64>),
    real: bool,
    wiener: Option<Wiener>,
}

/// Wiener-algebra representation `a = c + F f` with a closed-form density.
#[derive(Clone, Debug, PartialEq)]
pub struct Wiener {
    pub constant: Complex64,
    pub density: Expr,
}

fn snap(z: Complex64) -> Complex64 {
    let re = if z.re.abs() < 1e-12 { 0.0 } else { z.re };
    let im = if z.im.abs() < 1e-12 { 0.0 } else { z.im };
    Complex64::new(re, im)
}

fn expr_limit(e: &Expr, sign: f64) -> Option<Complex64> {
    if let Some(c) = e.as_const() {
        return Some(c);
    }
    let a = e.eval(sign * FAR[0]);
    let b = e.eval(sign * FAR[1]);
    if !(b.re.is_finite() && b.im.is_finite()) {
        return None;
    }
    if (a - b).norm() > 1e-6 * (1.0 + b.norm()) {
        return None;
    }
    Some(snap(b))
}

fn has_complex_const(e: &Expr) -> bool {
    match e {
        Expr::Const(z) => z.im != 0.0,
        Expr::X => false,
        Expr::Neg(a) | Expr::Call(_, a) => has_complex_const(a),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
            has_complex_const(a) || has_complex_const(b)
        }
    }
}

/// Probe points for an interval, used for boundedness and realness checks.
pub(crate) fn probe_points(lo: f64, hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            let n = 64;
            for i in 1..n {
                out.push(lo + (hi - lo) * i as f64 / n as f64);
            }
        }
        (true, false) | (false, true) => {
            let (e, s) = if lo.is_finite() { (lo, 1.0) } else { (hi, -1.0) };
            let mut d = 1e-3;
            while d < 1e15 {
                out.push(e + s * d);
                d *= 1.7;
            }
        }
        (false, false) => {
            out.push(0.0);
            let mut d = 1e-3;
            while d < 1e15 {
                out.push(d);
                out.push(-d);
                d *= 1.7;
            }
        }
    }
    out
}

impl Symbol {
    /// Builds a piecewise symbol. `exprs` has one more entry than `breaks`.
    pub fn piecewise(breaks: Vec<f64>, exprs: Vec<Expr>) -> Result<Symbol> {
        if exprs.len() != breaks.len() + 1 {
            return Err(Error::InvalidSymbol(format!(
                "{} breakpoints need {} pieces, got {}",
                breaks.len(),
                breaks.len() + 1,
                exprs.len()
            )));
        }
        if breaks.iter().any(|b| !b.is_finite()) || breaks.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidSymbol("breakpoints must be finite and strictly increasing".into()));
        }
        let n = exprs.len();
        let mut real = !exprs.iter().any(has_complex_const);
        for (i, e) in exprs.iter().enumerate() {
            let lo = if i == 0 { f64::NEG_INFINITY } else { breaks[i - 1] };
            let hi = if i == n - 1 { f64::INFINITY } else { breaks[i] };
            for x in probe_points(lo, hi) {
                let v = e.eval(x);
                if !(v.re.is_finite() && v.im.is_finite()) || v.norm() > 1e12 {
                    return Err(Error::InvalidSymbol(format!("piece `{e}` is unbounded or undefined near x = {x}")));
                }
                if v.im != 0.0 {
                    real = false;
                }
            }
        }
        let limits = (expr_limit(&exprs[0], -1.0), expr_limit(&exprs[n - 1], 1.0));
        let derivs = exprs.iter().map(|e| e.derivative()).collect();
        Ok(Symbol {
            name: None,
            repr: Repr::Piecewise(Piecewise { breaks, exprs, derivs }),
            limits,
            real,
            wiener: None,
        })
    }

    pub fn from_expr(e: Expr) -> Result<Symbol> {
        Symbol::piecewise(Vec::new(), vec![e])
    }

    pub fn parse(text: &str) -> Result<Symbol> {
        Symbol::from_expr(Expr::parse(text)?)
    }

    pub fn constant(c: Complex64) -> Symbol {
        Symbol::from_expr(Expr::complex(c)).expect("constants are valid symbols")
    }

    pub(crate) fn mollified(base: Symbol, delta: f64) -> Symbol {
        let limits = base.limits;
        let real = base.real;
        Symbol { name: None, repr: Repr::Mollified { base: Arc::new(base), delta }, limits, real, wiener: None }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Symbol {
        self.name = Some(name.into());
        self
    }

    /// Attaches a Wiener form after checking `a(x) = c + ∫ f(t)e^{ixt} dt` at
    /// a handful of frequencies.
    pub fn with_wiener(mut self, constant: Complex64, density: Expr) -> Result<Symbol> {
        let w = Wiener { constant, density };
        norms::check_wiener_form(&self, &w)?;
        self.wiener = Some(w);
        Ok(self)
    }

    pub fn wiener(&self) -> Option<&Wiener> {
        self.wiener.as_ref()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn is_mollified(&self) -> bool {
        matches!(self.repr, Repr::Mollified { .. })
    }

    pub fn mollification(&self) -> Option<(&Symbol, f64)> {
        match &self.repr {
            Repr::Mollified { base, delta } => Some((base, *delta)),
            Repr::Piecewise(_) => None,
        }
    }

    /// Finite breakpoints of the piecewise form; for mollified symbols the
    /// base breakpoints shifted by `±δ` (where the smoothing kernel's support ends).
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.repr {
            Repr::Piecewise(p) => p.breaks.clone(),
            Repr::Mollified { base, delta } => {
                let mut out: Vec<f64> = base
                    .breakpoints()
                    .iter()
                    .flat_map(|&b| [b - delta, b, b + delta])
                    .collect();
                out.sort_by(f64::total_cmp);
                out.dedup();
                out
            }
        }
    }

    /// Pieces as `(lo, hi, expr)`; `None` for mollified symbols.
    pub fn pieces(&self) -> Option<Vec<(f64, f64, &Expr)>> {
        match &self.repr {
            Repr::Piecewise(p) => {
                let n = p.exprs.len();
                Some(
                    (0..n)
                        .map(|i| {
                            let lo = if i == 0 { f64::NEG_INFINITY } else { p.breaks[i - 1] };
                            let hi = if i == n - 1 { f64::INFINITY } else { p.breaks[i] };
                            (lo, hi, &p.exprs[i])
                        })
                        .collect(),
                )
            }
            Repr::Mollified { .. } => None,
        }
    }

    pub(crate) fn piece_derivatives(&self) -> Option<&[Expr]> {
        match &self.repr {
            Repr::Piecewise(p) => Some(&p.derivs),
            Repr::Mollified { .. } => None,
        }
    }

    /// Value at `x`; at a jump the midpoint of the one-sided limits.
    pub fn eval(&self, x: f64) -> Complex64 {
        match &self.repr {
            Repr::Piecewise(p) => {
                let i = p.breaks.partition_point(|&b| b < x);
                if i < p.breaks.len() && p.breaks[i] == x {
                    let l = p.exprs[i].eval(x);
                    let r = p.exprs[i + 1].eval(x);
                    if l == r {
                        l
                    } else {
                        0.5 * (l + r)
                    }
                } else {
                    p.exprs[i].eval(x)
                }
            }
            Repr::Mollified { base, delta } => {
                let phi = constructions::bump;
                let breaks: Vec<f64> = base
                    .jump_points()
                    .into_iter()
                    .map(|b| (x - b) / delta)
                    .filter(|u| u.abs() < 1.0)
                    .collect();
                let mut breaks = breaks;
                breaks.sort_by(f64::total_cmp);
                let re = quad::integrate_with_breaks(
                    |u| base.eval(x - delta * u).re * phi(u),
                    -1.0,
                    1.0,
                    &breaks,
                    1e-14,
                    1e-13,
                )
                .value;
                let im = if self.real {
                    0.0
                } else {
                    quad::integrate_with_breaks(
                        |u| base.eval(x - delta * u).im * phi(u),
                        -1.0,
                        1.0,
                        &breaks,
                        1e-14,
                        1e-13,
                    )
                    .value
                };
                Complex64::new(re, im)
            }
        }
    }

    /// Derivative away from the jump set.
    pub fn derivative(&self, x: f64) -> Complex64 {
        match &self.repr {
            Repr::Piecewise(p) => {
                let i = p.breaks.partition_point(|&b| b < x);
                if i < p.breaks.len() && p.breaks[i] == x {
                    0.5 * (p.derivs[i].eval(x) + p.derivs[i + 1].eval(x))
                } else {
                    p.derivs[i].eval(x)
                }
            }
            Repr::Mollified { base, delta } => {
                let phi = constructions::bump;
                let jumps = base.jumps();
                let mut breaks: Vec<f64> = base
                    .breakpoints()
                    .into_iter()
                    .map(|b| (x - b) / delta)
                    .filter(|u| u.abs() < 1.0)
                    .collect();
                breaks.sort_by(f64::total_cmp);
                let part = |f: &dyn Fn(Complex64) -> f64| {
                    quad::integrate_with_breaks(
                        |u| f(base.derivative(x - delta * u)) * phi(u),
                        -1.0,
                        1.0,
                        &breaks,
                        1e-14,
                        1e-13,
                    )
                    .value
                };
                let mut d = Complex64::new(part(&|z| z.re), if self.real { 0.0 } else { part(&|z| z.im) });
                for j in jumps {
                    d += (j.right - j.left) * phi((x - j.at) / delta) / delta;
                }
                d
            }
        }
    }

    /// One-sided values at every finite breakpoint with a nonzero jump.
    pub fn jumps(&self) -> Vec<Jump> {
        match &self.repr {
            Repr::Piecewise(p) => {
                let scale = 1.0 + self.tail_scale();
                p.breaks
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| Jump { at: b, left: p.exprs[i].eval(b), right: p.exprs[i + 1].eval(b) })
                    .filter(|j| j.size() > JUMP_TOL * scale)
                    .collect()
            }
            Repr::Mollified { .. } => Vec::new(),
        }
    }

    fn jump_points(&self) -> Vec<f64> {
        match &self.repr {
            Repr::Piecewise(p) => p.breaks.clone(),
            Repr::Mollified { .. } => Vec::new(),
        }
    }

    fn tail_scale(&self) -> f64 {
        let (l, r) = self.limits;
        l.map_or(0.0, |z| z.norm()).max(r.map_or(0.0, |z| z.norm()))
    }

    /// Limits at `−∞` and `+∞` (when they exist).
    pub fn limits(&self) -> (Option<Complex64>, Option<Complex64>) {
        self.limits
    }

    pub fn flags(&self) -> ClassFlags {
        let continuous = self.jumps().is_empty();
        let (l, r) = self.limits;
        let both = l.is_some() && r.is_some();
        let equal = match (l, r) {
            (Some(a), Some(b)) => (a - b).norm() <= 1e-9,
            _ => false,
        };
        let zero = matches!((l, r), (Some(a), Some(b)) if a.norm() <= 1e-9 && b.norm() <= 1e-9);
        let piecewise_constant = match &self.repr {
            Repr::Piecewise(p) => p.exprs.iter().all(|e| e.as_const().is_some()),
            Repr::Mollified { .. } => false,
        };
        ClassFlags {
            c0: continuous && zero,
            c_dot: continuous && equal,
            c_bar: continuous && both,
            pc0: both,
            pcc0: both && piecewise_constant,
        }
    }

    /// Constant value when every piece is the same constant.
    pub fn as_constant(&self) -> Option<Complex64> {
        match &self.repr {
            Repr::Piecewise(p) => {
                let c = p.exprs[0].as_const()?;
                p.exprs.iter().all(|e| e.as_const() == Some(c)).then_some(c)
            }
            Repr::Mollified { base, .. } => base.as_constant(),
        }
    }

    /// Pointwise combination of two piecewise symbols over the merged breakpoints.
    fn combine(&self, other: &Symbol, op: fn(Expr, Expr) -> Expr) -> Result<Symbol> {
        let (Repr::Piecewise(a), Repr::Piecewise(b)) = (&self.repr, &other.repr) else {
            return Err(Error::InvalidSymbol("algebra is only defined on piecewise symbols".into()));
        };
        let mut breaks: Vec<f64> = a.breaks.iter().chain(&b.breaks).copied().collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let mut exprs = Vec::with_capacity(breaks.len() + 1);
        for i in 0..=breaks.len() {
            // Any interior point of the merged piece selects the operand pieces.
            let probe = match (i.checked_sub(1).map(|k| breaks[k]), breaks.get(i)) {
                (None, None) => 0.0,
                (None, Some(&hi)) => hi - 1.0,
                (Some(lo), None) => lo + 1.0,
                (Some(lo), Some(&hi)) => 0.5 * (lo + hi),
            };
            let ia = a.breaks.partition_point(|&x| x < probe);
            let ib = b.breaks.partition_point(|&x| x < probe);
            exprs.push(op(a.exprs[ia].clone(), b.exprs[ib].clone()));
        }
        // Drop breakpoints where neither operand changes piece.
        let mut keep_b = Vec::new();
        let mut keep_e = vec![exprs[0].clone()];
        for (i, &x) in breaks.iter().enumerate() {
            if exprs[i + 1] == *keep_e.last().unwrap() {
                continue;
            }
            keep_b.push(x);
            keep_e.push(exprs[i + 1].clone());
        }
        Symbol::piecewise(keep_b, keep_e)
    }

    pub fn add(&self, other: &Symbol) -> Result<Symbol> {
        self.combine(other, expr::add)
    }

    pub fn sub(&self, other: &Symbol) -> Result<Symbol> {
        self.combine(other, expr::sub)
    }

    pub fn mul(&self, other: &Symbol) -> Result<Symbol> {
        self.combine(other, expr::mul)
    }

    pub fn scale(&self, c: Complex64) -> Result<Symbol> {
        self.mul(&Symbol::constant(c))
    }

    pub fn add_constant(&self, c: Complex64) -> Result<Symbol> {
        self.add(&Symbol::constant(c))
    }

    /// Samples on `xs`.
    pub fn sample(&self, xs: &[f64]) -> Vec<Complex64> {
        xs.iter().map(|&x| self.eval(x)).collect()
    }

    pub fn spec(&self) -> SymbolSpec {
        match &self.repr {
            Repr::Piecewise(p) => {
                let n = p.exprs.len();
                let pieces = (0..n)
                    .map(|i| PieceSpec {
                        from: if i == 0 { Bound::NegInf } else { Bound::Finite(p.breaks[i - 1]) },
                        to: if i == n - 1 { Bound::PosInf } else { Bound::Finite(p.breaks[i]) },
                        expr: p.exprs[i].to_string(),
                    })
                    .collect();
                let jumps = self
                    .jumps()
                    .iter()
                    .map(|j| [Scalar::from(j.at), Scalar::from(j.left), Scalar::from(j.right)])
                    .collect();
                SymbolSpec { name: self.name.clone(), pieces, jumps, mollified: None, wiener: self.wiener_spec() }
            }
            Repr::Mollified { base, delta } => SymbolSpec {
                name: self.name.clone(),
                pieces: Vec::new(),
                jumps: Vec::new(),
                mollified: Some(MollifiedSpec { base: Box::new(base.spec()), delta: *delta }),
                wiener: self.wiener_spec(),
            },
        }
    }

    pub fn from_spec(spec: &SymbolSpec) -> Result<Symbol> {
        let sym = match (&spec.mollified, spec.pieces.is_empty()) {
            (Some(m), true) => {
                if !spec.jumps.is_empty() {
                    return Err(Error::InvalidSymbol("mollified symbols carry no jumps".into()));
                }
                if !(m.delta > 0.0 && m.delta.is_finite()) {
                    return Err(Error::InvalidSymbol(format!("delta {} must be positive", m.delta)));
                }
                Symbol::mollified(Symbol::from_spec(&m.base)?, m.delta)
            }
            (None, false) => piecewise_from_spec(spec)?,
            (Some(_), false) => {
                return Err(Error::InvalidSymbol("give either pieces or mollified, not both".into()))
            }
            (None, true) => return Err(Error::InvalidSymbol("symbol has no pieces".into())),
        };
        let sym = match &spec.name {
            Some(n) => sym.with_name(n.clone()),
            None => sym,
        };
        match &spec.wiener {
            Some(w) => sym.with_wiener(w.constant.value()?, Expr::parse(&w.density)?),
            None => Ok(sym),
        }
    }

    fn wiener_spec(&self) -> Option<WienerSpec> {
        self.wiener.as_ref().map(|w| WienerSpec {
            constant: Scalar::from(w.constant),
            density: w.density.to_string(),
        })
    }

    pub fn from_json(text: &str) -> Result<Symbol> {
        let spec: SymbolSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("symbol spec: {e}")))?;
        Symbol::from_spec(&spec)
    }

    /// CSV with columns `x,re,im` for plotting.
    pub fn write_samples_csv<W: std::io::Write>(&self, xs: &[f64], writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["x", "re", "im"])?;
        for &x in xs {
            let z = self.eval(x);
            w.write_record(&[format!("{x:?}"), format!("{:?}", z.re), format!("{:?}", z.im)])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn piecewise_from_spec(spec: &SymbolSpec) -> Result<Symbol> {
    let pieces = &spec.pieces;
    if pieces[0].from != Bound::NegInf || pieces[pieces.len() - 1].to != Bound::PosInf {
        return Err(Error::InvalidSymbol("pieces must cover the whole real line".into()));
    }
    let mut breaks = Vec::new();
    let mut exprs = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        if i > 0 && p.from != pieces[i - 1].to {
            return Err(Error::InvalidSymbol(format!("piece {i} does not start where piece {} ends", i - 1)));
        }
        if i + 1 < pieces.len() {
            match p.to {
                Bound::Finite(x) => breaks.push(x),
                _ => return Err(Error::InvalidSymbol("interior bounds must be finite".into())),
            }
        }
        exprs.push(Expr::parse(&p.expr)?);
    }
    let sym = Symbol::piecewise(breaks, exprs)?;
    // Declared jumps must match the pieces, and every jump must be declared.
    let actual = sym.jumps();
    for j in &spec.jumps {
        let at = j[0].value()?.re;
        let (l, r) = (j[1].value()?, j[2].value()?);
        let hit = actual.iter().find(|a| a.at == at).ok_or_else(|| {
            Error::InvalidSymbol(format!("declared jump at {at} is not a discontinuity of the pieces"))
        })?;
        if (hit.left - l).norm() > 1e-9 * (1.0 + l.norm()) || (hit.right - r).norm() > 1e-9 * (1.0 + r.norm()) {
            return Err(Error::InvalidSymbol(format!(
                "declared jump at {at} ({l} → {r}) disagrees with the pieces ({} → {})",
                hit.left, hit.right
            )));
        }
    }
    for a in &actual {
        let declared = spec.jumps.iter().any(|j| j[0].value().map(|v| v.re == a.at).unwrap_or(false));
        if !declared {
            return Err(Error::InvalidSymbol(format!("undeclared jump at {}", a.at)));
        }
    }
    Ok(sym)
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Piecewise(p) if p.breaks.is_empty() => write!(f, "{}", p.exprs[0]),
            Repr::Piecewise(p) => {
                write!(f, "{}", p.exprs[0])?;
                for (b, e) in p.breaks.iter().zip(&p.exprs[1..]) {
                    write!(f, " |{b}| {e}")?;
                }
                Ok(())
            }
            Repr::Mollified { base, delta } => write!(f, "({base}) * phi_{delta}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Serialized form

#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    NegInf,
    PosInf,
    Finite(f64),
}

impl Serialize for Bound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bound::NegInf => s.serialize_str("-inf"),
            Bound::PosInf => s.serialize_str("inf"),
            Bound::Finite(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) if x.is_finite() => Ok(Bound::Finite(x)),
            Raw::Num(x) => Err(serde::de::Error::custom(format!("bound {x} is not finite"))),
            Raw::Text(t) => match t.trim() {
                "-inf" => Ok(Bound::NegInf),
                "inf" | "+inf" => Ok(Bound::PosInf),
                other => Err(serde::de::Error::custom(format!("bound `{other}` is neither a number nor ±inf"))),
            },
        }
    }
}

/// A complex scalar: a JSON number, or a constant expression string such as `"-pi/2"` or `"1+2*i"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Num(f64),
    Text(String),
}

impl Scalar {
    pub fn value(&self) -> Result<Complex64> {
        match self {
            Scalar::Num(x) => Ok(Complex64::new(*x, 0.0)),
            Scalar::Text(t) => {
                let e = Expr::parse(t)?;
                if e.depends_on_x() {
                    return Err(Error::Parse(format!("`{t}` is not a constant")));
                }
                Ok(e.eval(0.0))
            }
        }
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Scalar {
        Scalar::Num(x)
    }
}

impl From<Complex64> for Scalar {
    fn from(z: Complex64) -> Scalar {
        if z.im == 0.0 {
            Scalar::Num(z.re)
        } else {
            Scalar::Text(Expr::complex(z).to_string())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub from: Bound,
    pub to: Bound,
    pub expr: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MollifiedSpec {
    pub base: Box<SymbolSpec>,
    pub delta: f64,
}

/// Wiener-algebra form `a = c + F f` with an integrable closed-form density `f(x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WienerSpec {
    pub constant: Scalar,
    pub density: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pieces: Vec<PieceSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub jumps: Vec<[Scalar; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mollified: Option<MollifiedSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wiener: Option<WienerSpec>,
}
