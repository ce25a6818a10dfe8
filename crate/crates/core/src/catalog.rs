//! Shipped test symbols and exponents used by the default suites.

use num_complex::Complex64;

use crate::error::Result;
use crate::exponent::VariableExponent;
use crate::expr::Expr;
use crate::oracle::SuiteExponent;
use crate::symbol::{
    blaschke_rational, convolve_mollify, jump_killer_at, jump_killer_infinity, pc0_quantize, psi_n, Symbol,
};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn step(left: f64, right: f64) -> Symbol {
    Symbol::piecewise(vec![0.0], vec![Expr::constant(left), Expr::constant(right)]).expect("step")
}

fn parsed(name: &str, text: &str) -> Symbol {
    Symbol::parse(text).expect("catalog expression").with_name(name)
}

/// `2/(1+x²) = F(e^{−|t|})`, with its Wiener form attached.
pub fn lorentzian() -> Symbol {
    parsed("lorentz", "2/(1+x^2)")
        .with_wiener(c(0.0), Expr::parse("exp(-abs(x))").expect("density"))
        .expect("Wiener form of the Lorentzian")
}

/// Twenty symbols of finite total variation.
pub fn symbols() -> Result<Vec<Symbol>> {
    let arctan = parsed("arctan", "atan(x)");
    let sign = step(1.0, -1.0).with_name("cauchy");
    Ok(vec![
        Symbol::constant(c(1.0)).with_name("one"),
        lorentzian(),
        parsed("gauss", "exp(-x^2)"),
        arctan.clone(),
        sign.clone(),
        psi_n(1).with_name("psi1"),
        psi_n(3).with_name("psi3"),
        jump_killer_infinity(c(1.0), c(-1.0)).with_name("killer_inf"),
        jump_killer_at(0.0, c(1.0), c(-1.0)).with_name("killer_0"),
        blaschke_rational(1).with_name("blaschke1"),
        blaschke_rational(-2).with_name("blaschke_m2"),
        parsed("odd_rational", "x/(1+x^2)"),
        parsed("damped_cos", "cos(x)/(1+x^2)"),
        parsed("complex_rational", "1/(1-i*x)"),
        parsed("exp_abs", "exp(-abs(x))"),
        parsed("sigmoid", "x/sqrt(1+x^2)"),
        convolve_mollify(&sign, 0.5).with_name("smooth_step"),
        pc0_quantize(&arctan, 0.25)?.with_name("staircase"),
        parsed("wave_packet", "sin(3*x)*exp(-x^2)"),
        Symbol::piecewise(vec![-1.0, 1.0], vec![Expr::constant(0.0), Expr::constant(1.0), Expr::constant(0.0)])?
            .with_name("window"),
    ])
}

/// Constant exponents 1.5, 2, 3, 4 with classical `‖S‖` values, and two
/// piecewise-linear variable exponents whose `s_bound` is a configured value.
pub fn exponents() -> Result<Vec<(VariableExponent, Option<f64>)>> {
    let cot = |r: f64| 1.0 / (std::f64::consts::PI / (2.0 * r.max(r / (r - 1.0)))).tan();
    Ok(vec![
        (VariableExponent::constant(1.5)?, None),
        (VariableExponent::constant(2.0)?, None),
        (VariableExponent::constant(3.0)?, None),
        (VariableExponent::constant(4.0)?, None),
        (VariableExponent::pwl(&[[-1.0, 1.5], [1.0, 3.0]], 1.5, 3.0)?, Some(2.0 * cot(3.0))),
        (VariableExponent::pwl(&[[-2.0, 2.0], [0.0, 4.0], [2.0, 2.0]], 2.0, 2.0)?, Some(2.0 * cot(4.0))),
    ])
}

pub fn suite_exponents() -> Result<Vec<SuiteExponent>> {
    Ok(exponents()?.into_iter().map(|(p, s)| SuiteExponent { exponent: p.spec(), s_bound: s }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::vnorm;

    #[test]
    fn catalog_symbols_have_finite_variation_and_round_trip() {
        let syms = symbols().unwrap();
        assert_eq!(syms.len(), 20);
        for s in &syms {
            let v = vnorm(s).unwrap();
            assert!(v.is_finite() && v > 0.0, "{:?}", s.name());
            let back = Symbol::from_spec(&s.spec()).unwrap();
            for x in [-3.3, -0.4, 0.0, 0.71, 2.0, 9.5] {
                assert!((back.eval(x) - s.eval(x)).norm() < 1e-12, "{:?} at {x}", s.name());
            }
        }
    }
}
