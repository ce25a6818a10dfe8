//! Closed-form scalar expressions in one real variable `x`.
//!
//! Grammar: `+ - * / ^`, the functions `exp log sin cos atan abs sqrt sgn`,
//! numeric literals, the constants `pi`, `e`, `i` and the variable `x`.
//! Expressions evaluate in complex arithmetic so that unimodular symbols such
//! as `((x-i)/(x+i))^3` are first-class; real expressions simply carry a zero
//! imaginary part. Symbolic differentiation is used for total variation and the
//! `x d/dx` iterates of slowly oscillating symbols.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Atan,
    Abs,
    Sqrt,
    Sgn,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Atan => "atan",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
            Func::Sgn => "sgn",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" | "ln" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "atan" | "arctan" => Func::Atan,
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            "sgn" | "sign" => Func::Sgn,
            _ => return None,
        })
    }

    fn apply(self, z: Complex64) -> Complex64 {
        match self {
            Func::Exp => z.exp(),
            Func::Log => {
                if z.im == 0.0 && z.re > 0.0 {
                    Complex64::new(z.re.ln(), 0.0)
                } else {
                    z.ln()
                }
            }
            Func::Sin => {
                if z.im == 0.0 {
                    Complex64::new(z.re.sin(), 0.0)
                } else {
                    z.sin()
                }
            }
            Func::Cos => {
                if z.im == 0.0 {
                    Complex64::new(z.re.cos(), 0.0)
                } else {
                    z.cos()
                }
            }
            Func::Atan => {
                if z.im == 0.0 {
                    Complex64::new(z.re.atan(), 0.0)
                } else {
                    z.atan()
                }
            }
            Func::Abs => Complex64::new(z.norm(), 0.0),
            Func::Sqrt => {
                if z.im == 0.0 && z.re >= 0.0 {
                    Complex64::new(z.re.sqrt(), 0.0)
                } else {
                    z.sqrt()
                }
            }
            Func::Sgn => {
                let r = z.norm();
                if r == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    z / r
                }
            }
        }
    }
}

/// Expression tree. Build through [`Expr::parse`] or the smart constructors,
/// which fold constants and drop neutral elements.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Complex64),
    X,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn is_zero(z: Complex64) -> bool {
    z.re == 0.0 && z.im == 0.0
}

fn is_one(z: Complex64) -> bool {
    z.re == 1.0 && z.im == 0.0
}

fn as_int(z: Complex64) -> Option<i32> {
    if z.im == 0.0 && z.re.fract() == 0.0 && z.re.abs() <= 1024.0 {
        Some(z.re as i32)
    } else {
        None
    }
}

fn pow_complex(base: Complex64, exponent: Complex64) -> Complex64 {
    if let Some(k) = as_int(exponent) {
        if base.im == 0.0 {
            return c(base.re.powi(k));
        }
        return base.powi(k);
    }
    if exponent.im == 0.0 && base.im == 0.0 && base.re >= 0.0 {
        return c(base.re.powf(exponent.re));
    }
    if is_zero(base) {
        return c(0.0);
    }
    base.powc(exponent)
}

impl Expr {
    pub fn constant(v: f64) -> Expr {
        Expr::Const(c(v))
    }

    pub fn complex(z: Complex64) -> Expr {
        Expr::Const(z)
    }

    pub fn x() -> Expr {
        Expr::X
    }

    pub fn parse(text: &str) -> Result<Expr> {
        let tokens = tokenize(text)?;
        let mut parser = Parser { tokens, pos: 0 };
        let e = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(Error::Parse(format!(
                "unexpected trailing input in expression `{text}`"
            )));
        }
        Ok(e)
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match self {
            Expr::Const(z) => Some(*z),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        match self {
            Expr::Const(z) => *z,
            Expr::X => c(x),
            Expr::Neg(a) => -a.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => {
                let (u, v) = (a.eval(x), b.eval(x));
                if u.im == 0.0 && v.im == 0.0 {
                    c(u.re / v.re)
                } else {
                    u / v
                }
            }
            Expr::Pow(a, b) => pow_complex(a.eval(x), b.eval(x)),
            Expr::Call(f, a) => f.apply(a.eval(x)),
        }
    }

    pub fn eval_re(&self, x: f64) -> f64 {
        self.eval(x).re
    }

    pub fn depends_on_x(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::X => true,
            Expr::Neg(a) | Expr::Call(_, a) => a.depends_on_x(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.depends_on_x() || b.depends_on_x()
            }
        }
    }

    /// Symbolic derivative with respect to `x`. `abs` and `sgn` are
    /// differentiated almost everywhere.
    pub fn derivative(&self) -> Expr {
        match self {
            Expr::Const(_) => Expr::constant(0.0),
            Expr::X => Expr::constant(1.0),
            Expr::Neg(a) => neg(a.derivative()),
            Expr::Add(a, b) => add(a.derivative(), b.derivative()),
            Expr::Sub(a, b) => sub(a.derivative(), b.derivative()),
            Expr::Mul(a, b) => add(
                mul(a.derivative(), (**b).clone()),
                mul((**a).clone(), b.derivative()),
            ),
            Expr::Div(a, b) => {
                if let Some(k) = b.as_const() {
                    return div(a.derivative(), Expr::Const(k));
                }
                div(
                    sub(
                        mul(a.derivative(), (**b).clone()),
                        mul((**a).clone(), b.derivative()),
                    ),
                    pow((**b).clone(), Expr::constant(2.0)),
                )
            }
            Expr::Pow(a, b) => {
                if let Some(k) = b.as_const() {
                    mul(
                        mul(
                            Expr::Const(k),
                            pow((**a).clone(), Expr::Const(k - c(1.0))),
                        ),
                        a.derivative(),
                    )
                } else {
                    mul(
                        self.clone(),
                        add(
                            mul(b.derivative(), call(Func::Log, (**a).clone())),
                            div(mul((**b).clone(), a.derivative()), (**a).clone()),
                        ),
                    )
                }
            }
            Expr::Call(f, a) => {
                let inner = a.derivative();
                let outer = match f {
                    Func::Exp => call(Func::Exp, (**a).clone()),
                    Func::Log => div(Expr::constant(1.0), (**a).clone()),
                    Func::Sin => call(Func::Cos, (**a).clone()),
                    Func::Cos => neg(call(Func::Sin, (**a).clone())),
                    Func::Atan => div(
                        Expr::constant(1.0),
                        add(Expr::constant(1.0), pow((**a).clone(), Expr::constant(2.0))),
                    ),
                    Func::Abs => call(Func::Sgn, (**a).clone()),
                    Func::Sqrt => div(
                        Expr::constant(0.5),
                        call(Func::Sqrt, (**a).clone()),
                    ),
                    Func::Sgn => Expr::constant(0.0),
                };
                mul(outer, inner)
            }
        }
    }

    /// Euler operator `(D f)(x) = x f'(x)`.
    pub fn euler(&self) -> Expr {
        mul(Expr::X, self.derivative())
    }
}

pub fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(z) => Expr::Const(-z),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

pub fn add(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::Const(x + y),
        (Some(x), None) if is_zero(x) => b,
        (None, Some(y)) if is_zero(y) => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

pub fn sub(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::Const(x - y),
        (Some(x), None) if is_zero(x) => neg(b),
        (None, Some(y)) if is_zero(y) => a,
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

pub fn mul(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::Const(x * y),
        (Some(x), _) if is_zero(x) => Expr::constant(0.0),
        (_, Some(y)) if is_zero(y) => Expr::constant(0.0),
        (Some(x), None) if is_one(x) => b,
        (None, Some(y)) if is_one(y) => a,
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

pub fn div(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::Const(x / y),
        (Some(x), _) if is_zero(x) => Expr::constant(0.0),
        (None, Some(y)) if is_one(y) => a,
        _ => Expr::Div(Box::new(a), Box::new(b)),
    }
}

pub fn pow(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => Expr::Const(pow_complex(x, y)),
        (_, Some(y)) if is_zero(y) => Expr::constant(1.0),
        (_, Some(y)) if is_one(y) => a,
        _ => Expr::Pow(Box::new(a), Box::new(b)),
    }
}

pub fn call(f: Func, a: Expr) -> Expr {
    match a.as_const() {
        Some(z) => Expr::Const(f.apply(z)),
        None => Expr::Call(f, Box::new(a)),
    }
}

// ---------------------------------------------------------------------------
// Display (round-trips through the parser)

fn fmt_real(v: f64) -> String {
    let s = format!("{v:?}");
    if v < 0.0 {
        format!("({s})")
    } else {
        s
    }
}

fn fmt_const(z: Complex64) -> String {
    if z.im == 0.0 {
        fmt_real(z.re)
    } else if z.re == 0.0 {
        format!("({:?}*i)", z.im)
    } else {
        format!("({:?}+{:?}*i)", z.re, z.im)
    }
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(_) | Expr::X | Expr::Call(..) => 5,
        }
    }
}

fn wrap(e: &Expr, min: u8) -> String {
    if e.precedence() < min {
        format!("({e})")
    } else {
        e.to_string()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(z) => write!(f, "{}", fmt_const(*z)),
            Expr::X => write!(f, "x"),
            Expr::Neg(a) => write!(f, "-{}", wrap(a, 4)),
            Expr::Add(a, b) => write!(f, "{}+{}", wrap(a, 1), wrap(b, 2)),
            Expr::Sub(a, b) => write!(f, "{}-{}", wrap(a, 1), wrap(b, 2)),
            Expr::Mul(a, b) => write!(f, "{}*{}", wrap(a, 2), wrap(b, 3)),
            Expr::Div(a, b) => write!(f, "{}/{}", wrap(a, 2), wrap(b, 3)),
            Expr::Pow(a, b) => write!(f, "{}^{}", wrap(a, 5), wrap(b, 4)),
            Expr::Call(func, a) => write!(f, "{}({})", func.name(), a),
        }
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Expr> {
        Expr::parse(s)
    }
}

// ---------------------------------------------------------------------------
// Lexer and recursive-descent parser

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let lit: String = chars[start..i].iter().collect();
            let v: f64 = lit
                .parse()
                .map_err(|_| Error::Parse(format!("bad number `{lit}`")))?;
            out.push(Token::Num(v));
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else {
            match ch {
                '+' | '-' | '*' | '/' | '^' => out.push(Token::Op(ch)),
                '\u{2212}' => out.push(Token::Op('-')),
                '(' => out.push(Token::LParen),
                ')' => out.push(Token::RParen),
                _ => return Err(Error::Parse(format!("unexpected character `{ch}`"))),
            }
            i += 1;
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(Token::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == '+' { add(lhs, rhs) } else { sub(lhs, rhs) };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(Token::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if op == '*' { mul(lhs, rhs) } else { div(lhs, rhs) };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(neg(self.unary()?))
            }
            Some(Token::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some(Token::Op('^')) = self.peek() {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(pow(base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Token::Num(v)) => Ok(Expr::constant(v)),
            Some(Token::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(e),
                    _ => Err(Error::Parse("missing `)`".into())),
                }
            }
            Some(Token::Ident(name)) => {
                if let Some(Token::LParen) = self.peek() {
                    let f = Func::from_name(&name)
                        .ok_or_else(|| Error::Parse(format!("unknown function `{name}`")))?;
                    self.pos += 1;
                    let arg = self.expr()?;
                    match self.next() {
                        Some(Token::RParen) => Ok(call(f, arg)),
                        _ => Err(Error::Parse(format!("missing `)` after {name}("))),
                    }
                } else {
                    match name.as_str() {
                        "x" => Ok(Expr::X),
                        "pi" => Ok(Expr::constant(std::f64::consts::PI)),
                        "e" => Ok(Expr::constant(std::f64::consts::E)),
                        "i" => Ok(Expr::complex(Complex64::new(0.0, 1.0))),
                        _ => Err(Error::Parse(format!("unknown identifier `{name}`"))),
                    }
                }
            }
            Some(tok) => Err(Error::Parse(format!("unexpected token {tok:?}"))),
            None => Err(Error::Parse("unexpected end of expression".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, x: f64) -> Complex64 {
        Expr::parse(s).unwrap().eval(x)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("1+2*3", 0.0).re, 7.0);
        assert_eq!(ev("2^3^2", 0.0).re, 512.0);
        assert_eq!(ev("-x^2", 3.0).re, -9.0);
        assert_eq!(ev("8/2/2", 0.0).re, 2.0);
        assert!((ev("2+1/(1+x^2)", 1.0).re - 2.5).abs() < 1e-15);
        assert_eq!(ev("1.5e-3*1000", 0.0).re, 1.5);
    }

    #[test]
    fn complex_constants() {
        let z = ev("(x-i)/(x+i)", 0.0);
        assert!((z - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let w = ev("((x-i)/(x+i))^3", 0.7);
        assert!((w.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn errors() {
        assert!(Expr::parse("").is_err());
        assert!(Expr::parse("foo(x)").is_err());
        assert!(Expr::parse("(x+1").is_err());
        assert!(Expr::parse("x y").is_err());
        assert!(Expr::parse("y").is_err());
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let cases = [
            "2/(1+x^2)",
            "atan(x)",
            "exp(-x^2)*cos(3*x)",
            "log(1+x^2)",
            "sqrt(1+x^2)",
            "x^x",
            "((x-i)/(x+i))^2",
        ];
        for s in cases {
            let e = Expr::parse(s).unwrap();
            let d = e.derivative();
            for &x in &[0.3, 1.1, 2.7] {
                let h = 1e-6;
                let fd = (e.eval(x + h) - e.eval(x - h)) / (2.0 * h);
                assert!((fd - d.eval(x)).norm() < 1e-6, "{s} at {x}");
            }
        }
    }

    #[test]
    fn affine_derivative_folds_to_constant() {
        let e = Expr::parse("0.5*(3*(1-x)+7*(1+x))").unwrap();
        assert_eq!(e.derivative().as_const(), Some(c(2.0)));
    }

    #[test]
    fn display_round_trips() {
        for s in ["2/(1+x^2)", "-x^2+3", "exp(-abs(x))", "(x-i)/(x+i)", "x^(-2)", "2-(3-x)"] {
            let e = Expr::parse(s).unwrap();
            let back = Expr::parse(&e.to_string()).unwrap();
            for &x in &[-1.3, 0.2, 2.0] {
                assert!((e.eval(x) - back.eval(x)).norm() < 1e-15, "{s} -> {e}");
            }
        }
    }
}
