//! Fourier transform `(Ff)(x) = ∫ f(t) e^{ixt} dt` on a uniform grid, Fourier
//! multipliers `W⁰(a) = F⁻¹ a F` and the Cauchy singular integral.
//!
//! With `t_j = −L + jh` and `x_k = −π/h + k·π/L`, the phase `e^{i x_k t_j}`
//! factors as `(−1)^{j+k} e^{2πi jk/N}` (the constant `e^{iπN/2}` is 1 since
//! `4 | N`), so both directions are a sign-twisted unnormalized FFT.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::Result;
use crate::grid::{Grid, GridFunction};
use crate::symbol::Symbol;

pub use crate::grid::maximal_function;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

fn twist(buf: &mut [Complex64]) {
    for v in buf.iter_mut().skip(1).step_by(2) {
        *v = -*v;
    }
}

/// Grid of the dual variable: half-width `π/h`, same node count.
pub fn dual_grid(grid: &Grid) -> Grid {
    Grid { half_width: std::f64::consts::PI / grid.step(), count: grid.count }
}

/// Spectrum samples `h·Σ_j f(t_j) e^{i x_k t_j}` without the decay check.
pub(crate) fn spectrum(grid: &Grid, samples: &[Complex64]) -> Vec<Complex64> {
    let mut buf = samples.to_vec();
    twist(&mut buf);
    // e^{+2πi jk/N} is rustfft's (unnormalized) inverse direction.
    plan(buf.len(), true).process(&mut buf);
    twist(&mut buf);
    let h = grid.step();
    for v in &mut buf {
        *v *= h;
    }
    buf
}

/// `(1/(2π))·Δx·Σ_k g_k e^{−i x_k t_j}` with `Δx = 2π/(Nh)`.
pub(crate) fn inverse_spectrum(grid: &Grid, spec: &[Complex64]) -> Vec<Complex64> {
    let mut buf = spec.to_vec();
    twist(&mut buf);
    plan(buf.len(), false).process(&mut buf);
    twist(&mut buf);
    let scale = 1.0 / (grid.count as f64 * grid.step());
    for v in &mut buf {
        *v *= scale;
    }
    buf
}

/// Discrete `(Ff)(x_k)` on the dual grid. Requires `f` to decay at the grid ends.
pub fn fourier(f: &GridFunction) -> Result<GridFunction> {
    f.decay_check()?;
    let g = f.grid();
    GridFunction::new(dual_grid(&g), spectrum(&g, f.samples()))
}

/// Inverse of [`fourier`]: maps dual-grid samples back to `grid`.
pub fn inverse_fourier(g: &GridFunction, grid: &Grid) -> Result<GridFunction> {
    GridFunction::new(*grid, inverse_spectrum(grid, g.samples()))
}

/// Symbol values on the dual grid of `grid`.
pub fn symbol_on_dual(a: &Symbol, grid: &Grid) -> Vec<Complex64> {
    a.sample(&dual_grid(grid).nodes())
}

/// `W⁰(a) f` for symbol samples already evaluated on the dual grid.
pub fn apply_multiplier_samples(a: &[Complex64], f: &GridFunction) -> Result<GridFunction> {
    f.decay_check()?;
    let g = f.grid();
    let mut spec = spectrum(&g, f.samples());
    for (s, m) in spec.iter_mut().zip(a) {
        *s *= m;
    }
    GridFunction::new(g, inverse_spectrum(&g, &spec))
}

pub fn apply_multiplier(a: &Symbol, f: &GridFunction) -> Result<GridFunction> {
    apply_multiplier_samples(&symbol_on_dual(a, &f.grid()), f)
}

/// Symbol of the Cauchy singular integral `(Sf)(x) = (1/(πi)) p.v.∫ f(t)/(t−x) dt`
/// under this transform convention: its kernel `i/(πu)` transforms to `−sgn`.
pub fn cauchy_symbol() -> Symbol {
    use crate::expr::Expr;
    Symbol::piecewise(vec![0.0], vec![Expr::constant(1.0), Expr::constant(-1.0)])
        .expect("constant pieces")
        .with_name("cauchy")
}

pub fn cauchy_singular(f: &GridFunction) -> Result<GridFunction> {
    apply_multiplier(&cauchy_symbol(), f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;
    use std::f64::consts::PI;

    fn gauss(grid: Grid) -> GridFunction {
        GridFunction::from_real(grid, |t| (-t * t / 2.0).exp()).unwrap()
    }

    #[test]
    fn gaussian_is_self_dual() {
        let g = Grid::new(20.0, 4096).unwrap();
        let f = gauss(g);
        let ff = fourier(&f).unwrap();
        let d = ff.grid();
        for (k, z) in ff.samples().iter().enumerate() {
            let x = d.node(k);
            let exact = (2.0 * PI).sqrt() * (-x * x / 2.0).exp();
            assert!((z - exact).norm() <= 1e-6 * (2.0 * PI).sqrt(), "k = {k}");
        }
        let ratio = ff.l2_norm() / f.l2_norm();
        assert!((ratio / (2.0 * PI).sqrt() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn indicator_transform() {
        let g = Grid::new(16.0, 4096).unwrap();
        let chi = GridFunction::indicator(g, -1.0, 1.0);
        let ff = fourier(&chi).unwrap();
        let d = ff.grid();
        for (k, z) in ff.samples().iter().enumerate() {
            let x = d.node(k);
            if x.abs() > 40.0 {
                continue;
            }
            let exact = if x == 0.0 { 2.0 } else { 2.0 * x.sin() / x };
            assert!((z - exact).norm() < 1e-3, "x = {x}: {z} vs {exact}");
        }
    }

    #[test]
    fn round_trip_and_decay_guard() {
        let g = Grid::new(10.0, 1024).unwrap();
        let f = GridFunction::from_fn(g, |t| Complex64::new((-t * t).exp(), t * (-t * t).exp())).unwrap();
        let back = inverse_fourier(&fourier(&f).unwrap(), &g).unwrap();
        let err = back.sub(&f).unwrap().sup_norm();
        assert!(err <= 1e-10 * f.sup_norm());
        let slow = GridFunction::from_real(g, |t| 1.0 / (1.0 + t * t)).unwrap();
        assert!(matches!(fourier(&slow), Err(crate::Error::DecayViolation { .. })));
    }

    #[test]
    fn identity_and_translation_multipliers() {
        let g = Grid::new(16.0, 2048).unwrap();
        let f = GridFunction::from_real(g, |t| (-(t - 1.0) * (t - 1.0)).exp()).unwrap();
        let one = Symbol::constant(Complex64::new(1.0, 0.0));
        let same = apply_multiplier(&one, &f).unwrap();
        assert!(same.sub(&f).unwrap().sup_norm() < 1e-12);
        // F(f(·−s))(x) = e^{ixs} F f(x).
        let s = 40.0 * g.step();
        let shift = Symbol::parse(&format!("exp(i*{s:?}*x)")).unwrap();
        let moved = apply_multiplier(&shift, &f).unwrap();
        let expected = GridFunction::from_real(g, |t| (-(t - 1.0 - s) * (t - 1.0 - s)).exp()).unwrap();
        assert!(moved.sub(&expected).unwrap().sup_norm() < 1e-10);
    }

    /// `(1/(πi)) p.v.∫ f(t)/(t−x) dt = (1/(πi)) ∫_0^∞ (f(x+s) − f(x−s))/s ds`,
    /// evaluated by adaptive quadrature (the symmetric pairing excises the pole).
    fn pv_oracle(f: impl Fn(f64) -> f64, x: f64) -> Complex64 {
        let q = quad::integrate(
            |s: f64| if s == 0.0 { 0.0 } else { (f(x + s) - f(x - s)) / s },
            0.0,
            f64::INFINITY,
            1e-13,
            1e-12,
        );
        Complex64::new(q.value, 0.0) / Complex64::new(0.0, PI)
    }

    #[test]
    fn cauchy_matches_principal_value_quadrature() {
        // The periodic grid replaces 1/u by (π/2L)·cot(πu/2L); the difference
        // is O(x/L²), hence the wide grid.
        let g = Grid::new(256.0, 1 << 16).unwrap();
        let f = gauss(g);
        let sf = cauchy_singular(&f).unwrap();
        // The multiplier sgn is the negative of S in this convention.
        let sgn = Symbol::piecewise(
            vec![0.0],
            vec![crate::expr::Expr::constant(-1.0), crate::expr::Expr::constant(1.0)],
        )
        .unwrap();
        let sgn_f = apply_multiplier(&sgn, &f).unwrap();
        for j in (0..g.count).step_by(97) {
            let x = g.node(j);
            if x.abs() > 6.0 {
                continue;
            }
            let oracle = pv_oracle(|t| (-t * t / 2.0).exp(), x);
            assert!((sf.samples()[j] - oracle).norm() < 1e-4, "x = {x}");
            assert!((sgn_f.samples()[j] + oracle).norm() < 1e-4, "x = {x}");
        }
    }

    #[test]
    fn cauchy_isometry_and_involution() {
        // The zero-frequency node carries the midpoint value 0 of the jump, so
        // the Gaussian is modulated away from it.
        let g = Grid::new(20.0, 4096).unwrap();
        let f = GridFunction::from_fn(g, |t| (-t * t / 2.0).exp() * Complex64::new(0.0, -9.0 * t).exp()).unwrap();
        let sf = cauchy_singular(&f).unwrap();
        assert!((sf.l2_norm() / f.l2_norm() - 1.0).abs() < 1e-9);
        let ssf = cauchy_singular(&sf).unwrap();
        assert!(ssf.sub(&f).unwrap().sup_norm() < 1e-9);
    }

    #[test]
    fn cauchy_of_indicator() {
        let g = Grid::new(256.0, 1 << 17).unwrap();
        let chi = GridFunction::indicator(g, -1.0, 1.0);
        let spec = spectrum(&g, chi.samples());
        let sym = symbol_on_dual(&cauchy_symbol(), &g);
        let prod: Vec<Complex64> = spec.iter().zip(&sym).map(|(a, b)| a * b).collect();
        let sf = inverse_spectrum(&g, &prod);
        for j in (0..g.count).step_by(61) {
            let x = g.node(j);
            if !(x.abs() > 1.2 && x.abs() < 8.0) {
                continue;
            }
            let exact = Complex64::new(((1.0 - x) / (1.0 + x)).abs().ln(), 0.0) / Complex64::new(0.0, PI);
            assert!((sf[j] - exact).norm() < 1e-3, "x = {x}: {} vs {exact}", sf[j]);
        }
    }

    #[test]
    fn maximal_dominates() {
        let g = Grid::new(4.0, 256).unwrap();
        let f = gauss(g);
        let m = maximal_function(&f);
        assert!(m.samples().iter().zip(f.samples()).all(|(a, b)| a.re >= b.norm()));
    }
}
