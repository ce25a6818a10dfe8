use std::f64::consts::PI;

use num_complex::Complex64;
use vlex_core::catalog::lorentzian;
use vlex_core::expr::Expr;
use vlex_core::grid::{Grid, GridFunction};
use vlex_core::symbol::{
    osc, psi_n, refinement_variation, so3_norm, sup_norm, total_variation, vnorm, wiener_norm, wiener_norm_from_grid,
    Symbol,
};
use vlex_core::Error;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn variation_examples() {
    for n in [1, 4, 50] {
        assert_eq!(total_variation(&psi_n(n)).unwrap(), 2.0);
        assert_eq!(vnorm(&psi_n(n)).unwrap(), 3.0);
    }
    let arctan = Symbol::parse("atan(x)").unwrap();
    assert!((total_variation(&arctan).unwrap() - PI).abs() < 1e-6);
    let step = Symbol::piecewise(vec![0.0], vec![Expr::constant(0.0), Expr::constant(1.0)]).unwrap();
    assert_eq!(total_variation(&step).unwrap(), 1.0);
    assert_eq!(vnorm(&step).unwrap(), 2.0);
    // ‖sgn‖_V = 1 + 2.
    let sign = Symbol::piecewise(vec![0.0], vec![Expr::constant(-1.0), Expr::constant(1.0)]).unwrap();
    assert_eq!(vnorm(&sign).unwrap(), 3.0);
}

#[test]
fn variation_matches_refinement_sums() {
    // Oracle: partition sums on a fine grid never exceed V and approach it.
    for text in ["cos(x)/(1+x^2)", "x/(1+x^2)", "sin(3*x)*exp(-x^2)", "exp(-abs(x))"] {
        let a = Symbol::parse(text).unwrap();
        let v = total_variation(&a).unwrap();
        let sum = refinement_variation(&a, -5000.0, 5000.0, 2_000_000);
        assert!(sum <= v * (1.0 + 1e-9), "{text}: {sum} > {v}");
        assert!(sum >= v * (1.0 - 1e-3), "{text}: {sum} << {v}");
    }
}

#[test]
fn unbounded_variation_is_reported() {
    let a = Symbol::parse("sin(x)").unwrap();
    assert!(matches!(total_variation(&a), Err(Error::UnboundedVariation(_))));
}

#[test]
fn wiener_examples() {
    let k = Symbol::constant(Complex64::new(3.0, -4.0));
    assert_eq!(wiener_norm(&k).unwrap(), 5.0);
    let l = lorentzian();
    assert!((wiener_norm(&l).unwrap() - 2.0).abs() < 1e-9);
    let l2 = l.scale(c(2.0)).unwrap().with_wiener(c(0.0), Expr::parse("2*exp(-abs(x))").unwrap()).unwrap();
    assert!((wiener_norm(&l2).unwrap() - 2.0 * wiener_norm(&l).unwrap()).abs() < 1e-12);
    assert!(matches!(wiener_norm(&Symbol::parse("atan(x)").unwrap()), Err(Error::NotInWienerForm(_))));

    let g = Grid::new(40.0, 8192).unwrap();
    let f = GridFunction::from_real(g, |t| (-t.abs()).exp()).unwrap();
    assert!((wiener_norm_from_grid(c(1.0), &f) - 3.0).abs() < 1e-3);
}

#[test]
fn mismatched_wiener_form_is_rejected() {
    let r = Symbol::parse("2/(1+x^2)").unwrap().with_wiener(c(0.0), Expr::parse("exp(-2*abs(x))").unwrap());
    assert!(matches!(r, Err(Error::NotInWienerForm(_))));
}

#[test]
fn so3_examples() {
    assert_eq!(so3_norm(&Symbol::constant(c(5.0))).unwrap(), 5.0);
    assert!(matches!(so3_norm(&Symbol::parse("log(1+x^2)").unwrap()), Err(Error::NotInSO3(_))));
    let v = so3_norm(&Symbol::parse("atan(x)").unwrap()).unwrap();
    assert!(v.is_finite() && v >= PI / 2.0);
}

#[test]
fn oscillation_on_dyadic_annuli_vanishes_for_arctan() {
    let a = Symbol::parse("atan(x)").unwrap();
    let near = osc(|x| a.eval(x), 1.0, 2.0, 1000);
    let far = osc(|x| a.eval(x), 1e6, 2e6, 1000);
    assert!((near - (2f64.atan() - 1f64.atan())).abs() < 1e-9);
    assert!(far < 1e-6);
}

#[test]
fn sup_norm_examples() {
    assert!((sup_norm(&lorentzian()) - 2.0).abs() < 1e-12);
    assert!((sup_norm(&Symbol::parse("atan(x)").unwrap()) - PI / 2.0).abs() < 1e-9);
}
