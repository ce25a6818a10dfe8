use num_complex::Complex64;
use proptest::prelude::*;
use vlex_core::approx::eta;
use vlex_core::exponent::VariableExponent;
use vlex_core::expr::Expr;
use vlex_core::grid::{luxemburg_norm, modular, Grid, GridFunction};
use vlex_core::oracle::{discrete_luxemburg, DiscreteSpace};
use vlex_core::symbol::{blaschke_rational, total_variation, Symbol};
use vlex_core::transform::fourier;

fn grid() -> Grid {
    Grid::new(8.0, 256).unwrap()
}

/// Piecewise-linear exponent with knots at -2, 0, 2 and flat tails.
fn pwl(values: [f64; 3]) -> VariableExponent {
    VariableExponent::pwl(&[[-2.0, values[0]], [0.0, values[1]], [2.0, values[2]]], values[0], values[2]).unwrap()
}

fn bump_family(coeffs: &[(f64, f64, f64)]) -> GridFunction {
    let c = coeffs.to_vec();
    GridFunction::from_fn(grid(), move |t| {
        c.iter().map(|&(a, m, w)| Complex64::new(a, 0.3 * a) * (-(t - m) * (t - m) / (w * w)).exp()).sum()
    })
    .unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    prop::collection::vec((-3.0..3.0f64, -2.0..2.0f64, 0.3..1.0f64), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn p_theta_round_trip_and_propagation(v in prop::array::uniform3(1.1..6.0f64), frac in 0.05..0.95f64, x in -5.0..5.0f64, y in -5.0..5.0f64) {
        let p = pwl(v);
        let theta = frac * p.theta_range();
        let pt = p.p_theta(theta).unwrap();
        prop_assert!((1.0 / p.eval(x) - theta / 2.0 - (1.0 - theta) / pt.eval(x)).abs() <= 1e-12);
        let factor = 4.0 * (1.0 - theta) / (2.0 - theta * p.p_plus()).powi(2);
        prop_assert!((pt.eval(x) - pt.eval(y)).abs() <= factor * (p.eval(x) - p.eval(y)).abs() * (1.0 + 1e-12) + 1e-14);
    }

    #[test]
    fn conjugate_is_an_involution(v in prop::array::uniform3(1.1..6.0f64), x in -5.0..5.0f64) {
        let p = pwl(v);
        let q = p.conjugate();
        prop_assert!((1.0 / p.eval(x) + 1.0 / q.eval(x) - 1.0).abs() <= 1e-12);
        prop_assert!((q.conjugate().eval(x) - p.eval(x)).abs() <= 1e-9 * p.eval(x));
    }

    #[test]
    fn luxemburg_is_a_norm(c1 in coeffs(), c2 in coeffs(), s in -4.0..4.0f64, v in prop::array::uniform3(1.1..5.0f64)) {
        let p = pwl(v);
        let (f, g) = (bump_family(&c1), bump_family(&c2));
        let nf = luxemburg_norm(&f, &p).unwrap();
        let ng = luxemburg_norm(&g, &p).unwrap();
        let scaled = luxemburg_norm(&f.scale(Complex64::new(s, 0.0)), &p).unwrap();
        prop_assert!((scaled - s.abs() * nf).abs() <= 1e-9 * nf.max(1e-300) * s.abs().max(1.0));
        let sum = luxemburg_norm(&f.add(&g).unwrap(), &p).unwrap();
        prop_assert!(sum <= (nf + ng) * (1.0 + 1e-9));
        if nf > 0.0 {
            prop_assert!((modular(&f, &p, nf) - 1.0).abs() <= 1e-8);
        }
    }

    #[test]
    fn modular_decreases_in_lambda(c1 in coeffs(), l1 in 0.1..5.0f64, dl in 0.01..5.0f64, v in prop::array::uniform3(1.1..5.0f64)) {
        let p = pwl(v);
        let f = bump_family(&c1);
        prop_assert!(modular(&f, &p, l1 + dl) <= modular(&f, &p, l1) * (1.0 + 1e-12));
    }

    #[test]
    fn fourier_is_linear(c1 in coeffs(), c2 in coeffs(), a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let (f, g) = (bump_family(&c1), bump_family(&c2));
        let (za, zb) = (Complex64::new(a, 0.5), Complex64::new(b, -0.25));
        let lhs = fourier(&f.scale(za).add(&g.scale(zb)).unwrap()).unwrap();
        let rhs = fourier(&f).unwrap().scale(za).add(&fourier(&g).unwrap().scale(zb)).unwrap();
        let scale = lhs.sup_norm().max(1.0);
        for (x, y) in lhs.samples().iter().zip(rhs.samples()) {
            prop_assert!((x - y).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn variation_is_subadditive(
        b1 in prop::collection::vec(-4.0..4.0f64, 3),
        v1 in prop::collection::vec(-3.0..3.0f64, 4),
        b2 in prop::collection::vec(-4.0..4.0f64, 3),
        v2 in prop::collection::vec(-3.0..3.0f64, 4),
    ) {
        let make = |mut b: Vec<f64>, v: &[f64]| {
            b.sort_by(f64::total_cmp);
            b.dedup_by(|x, y| (*x - *y).abs() < 1e-3);
            let exprs = v.iter().take(b.len() + 1).enumerate().map(|(k, &c)| {
                // Alternate constants and slopes so pieces carry their own variation.
                if k % 2 == 0 { Expr::constant(c) } else { Expr::parse(&format!("{c}*atan(x)")).unwrap() }
            }).collect();
            Symbol::piecewise(b, exprs).unwrap()
        };
        let (a, b) = (make(b1, &v1), make(b2, &v2));
        let va = total_variation(&a).unwrap();
        let vb = total_variation(&b).unwrap();
        let vab = total_variation(&a.add(&b).unwrap()).unwrap();
        prop_assert!(vab <= va + vb + 1e-8, "{vab} > {va} + {vb}");
    }

    #[test]
    fn discrete_luxemburg_axioms(
        xs in prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 6),
        ys in prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 6),
        ps in prop::collection::vec(1.05..8.0f64, 6),
        ws in prop::collection::vec(0.1..3.0f64, 6),
        s in -3.0..3.0f64,
    ) {
        let space = DiscreteSpace::new(ws, ps).unwrap();
        let u: Vec<Complex64> = xs.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let v: Vec<Complex64> = ys.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let nu = discrete_luxemburg(&u, &space);
        let nv = discrete_luxemburg(&v, &space);
        let su: Vec<Complex64> = u.iter().map(|z| z * s).collect();
        prop_assert!((discrete_luxemburg(&su, &space) - s.abs() * nu).abs() <= 1e-10 * nu.max(1.0) * s.abs().max(1.0));
        let w: Vec<Complex64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        prop_assert!(discrete_luxemburg(&w, &space) <= (nu + nv) * (1.0 + 1e-10));
    }

    #[test]
    fn blaschke_rationals_are_unimodular(k in -8i32..=8, x in -1e4..1e4f64) {
        prop_assert!((blaschke_rational(k).eval(x).norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn eta_solves_its_identity(p0 in 1.1..8.0f64, gap in 0.05..4.0f64) {
        let q = if p0 >= 2.0 { p0 + gap } else { 1.0 + (p0 - 1.0) * (gap / 4.05) };
        let e = eta(p0, q).unwrap();
        prop_assert!(e > 0.0 && e <= 1.0);
        prop_assert!((1.0 / p0 - e / 2.0 - (1.0 - e) / q).abs() <= 1e-12);
    }
}
