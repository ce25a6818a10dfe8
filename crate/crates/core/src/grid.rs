//! Uniform symmetric grids, sampled functions and discretized `L^{p(·)}` norms.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::VariableExponent;
use crate::quad;

/// Relative size of boundary samples tolerated by the decay check.
pub const DECAY_TOL: f64 = 1e-8;
/// Samples at each end inspected by the decay check.
const DECAY_EDGE: usize = 4;

/// Nodes `t_j = −L + j·h`, `j = 0..N`, with `h = 2L/N` and `N` a power of two.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub half_width: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(half_width: f64, count: usize) -> Result<Grid> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidGrid(format!("half width {half_width} must be positive")));
        }
        if count < 8 || !count.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("count {count} must be a power of two ≥ 8")));
        }
        let g = Grid { half_width, count };
        if g.step() * count as f64 != 2.0 * half_width {
            return Err(Error::InvalidGrid("h·N ≠ 2L in floating point".into()));
        }
        Ok(g)
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / self.count as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.step()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.count).map(|j| self.node(j)).collect()
    }

    /// Dual frequencies `x_k = −π/h + k·2π/(N h)`.
    pub fn dual_node(&self, k: usize) -> f64 {
        let h = self.step();
        -std::f64::consts::PI / h + k as f64 * 2.0 * std::f64::consts::PI / (self.count as f64 * h)
    }

    pub fn dual_nodes(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.dual_node(k)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        Grid::new(self.half_width, self.count).map(|_| ())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    samples: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Grid, samples: Vec<Complex64>) -> Result<GridFunction> {
        if samples.len() != grid.count {
            return Err(Error::InvalidGrid(format!(
                "{} samples for a grid of {} nodes",
                samples.len(),
                grid.count
            )));
        }
        if let Some(index) = samples.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        Ok(GridFunction { grid, samples })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: Grid, f: F) -> Result<GridFunction> {
        GridFunction::new(grid, grid.nodes().into_iter().map(f).collect())
    }

    pub fn from_real<F: Fn(f64) -> f64>(grid: Grid, f: F) -> Result<GridFunction> {
        GridFunction::from_fn(grid, |t| Complex64::new(f(t), 0.0))
    }

    /// Samples of `χ_(a,b)`; nodes exactly at an endpoint get the midpoint value 1/2.
    pub fn indicator(grid: Grid, a: f64, b: f64) -> GridFunction {
        let samples = grid
            .nodes()
            .into_iter()
            .map(|t| {
                let v = if t > a && t < b {
                    1.0
                } else if t == a || t == b {
                    0.5
                } else {
                    0.0
                };
                Complex64::new(v, 0.0)
            })
            .collect();
        GridFunction { grid, samples }
    }

    pub fn zeros(grid: Grid) -> GridFunction {
        GridFunction { grid, samples: vec![Complex64::new(0.0, 0.0); grid.count] }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Trapezoid `L²` norm.
    pub fn l2_norm(&self) -> f64 {
        (self.grid.step() * self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Whether the outermost samples are below `DECAY_TOL` times the peak.
    pub fn decays(&self) -> bool {
        self.decay_check().is_ok()
    }

    pub fn decay_check(&self) -> Result<()> {
        let peak = self.sup_norm();
        let n = self.samples.len();
        let edge = DECAY_EDGE.min(n / 2);
        let boundary = self.samples[..edge]
            .iter()
            .chain(&self.samples[n - edge..])
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if boundary > DECAY_TOL * peak {
            return Err(Error::DecayViolation { boundary, peak });
        }
        Ok(())
    }

    pub fn scale(&self, c: Complex64) -> GridFunction {
        GridFunction { grid: self.grid, samples: self.samples.iter().map(|z| z * c).collect() }
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("grids differ".into()));
        }
        Ok(GridFunction {
            grid: self.grid,
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Reads CSV with header `t,re,im`; node positions must form a valid grid.
    pub fn read_csv<R: Read>(reader: R) -> Result<GridFunction> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        let names: Vec<&str> = headers.iter().collect();
        if names != ["t", "re", "im"] {
            return Err(Error::Parse(format!("expected header t,re,im, found {}", names.join(","))));
        }
        let mut ts = Vec::new();
        let mut samples = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let field = |i: usize| -> Result<f64> {
                rec.get(i)
                    .ok_or_else(|| Error::Parse(format!("row {}: missing column", line + 2)))?
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {}: {e}", line + 2)))
            };
            ts.push(field(0)?);
            samples.push(Complex64::new(field(1)?, field(2)?));
        }
        if ts.is_empty() {
            return Err(Error::Parse("function file has no samples".into()));
        }
        let n = ts.len();
        let half_width = -ts[0];
        let grid = Grid::new(half_width, n)?;
        let h = grid.step();
        for (j, &t) in ts.iter().enumerate() {
            if (t - grid.node(j)).abs() > 1e-9 * h.max(half_width) {
                return Err(Error::InvalidGrid(format!("node {j} at t = {t} is off the uniform grid")));
            }
        }
        GridFunction::new(grid, samples)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["t", "re", "im"])?;
        for (j, z) in self.samples.iter().enumerate() {
            w.write_record(&[
                format!("{:?}", self.grid.node(j)),
                format!("{:?}", z.re),
                format!("{:?}", z.im),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Exponent values at the grid nodes.
pub fn sample_exponent(grid: &Grid, p: &VariableExponent) -> Vec<f64> {
    grid.nodes().into_iter().map(|t| p.eval(t)).collect()
}

/// `I(f/λ) = h·Σ |f_j/λ|^{p(t_j)}`.
pub fn modular(f: &GridFunction, p: &VariableExponent, lambda: f64) -> f64 {
    let ps = sample_exponent(&f.grid, p);
    modular_sampled(f.grid.step(), f.samples(), &ps, lambda)
}

fn modular_sampled(h: f64, samples: &[Complex64], ps: &[f64], lambda: f64) -> f64 {
    h * samples
        .iter()
        .zip(ps)
        .map(|(z, &p)| {
            let a = z.norm();
            if a == 0.0 {
                0.0
            } else {
                (a / lambda).powf(p)
            }
        })
        .sum::<f64>()
}

/// Luxemburg norm `inf{λ > 0 : I(f/λ) ≤ 1}` on the grid.
pub fn luxemburg_norm(f: &GridFunction, p: &VariableExponent) -> Result<f64> {
    if let Some(index) = f.samples.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite { index });
    }
    let ps = sample_exponent(&f.grid, p);
    let weights = vec![f.grid.step(); ps.len()];
    let mags: Vec<f64> = f.samples.iter().map(|z| z.norm()).collect();
    Ok(luxemburg_weighted(&mags, &weights, &ps, 2.0 * f.grid.half_width, p.p_minus()))
}

/// Luxemburg norm for a weighted modular `Σ w_i (a_i/λ)^{p_i}` of nonnegative
/// magnitudes. `measure` is the total weight, used only to seed the bracket.
///
/// The bracket `[‖a‖_∞·min(1, m^{−1/p₋}), ‖a‖_∞·max(1, m^{1/p₋})]` is doubled
/// outward until it straddles the root; the root is then polished by Newton
/// steps on `log I` against `log λ` (convex and decreasing), falling back to
/// bisection whenever a step leaves the bracket.
pub fn luxemburg_weighted(mags: &[f64], weights: &[f64], ps: &[f64], measure: f64, p_minus: f64) -> f64 {
    let active: Vec<(f64, f64, f64)> = mags
        .iter()
        .zip(weights)
        .zip(ps)
        .filter(|((a, w), _)| **a > 0.0 && **w > 0.0)
        .map(|((a, w), p)| (a.ln(), w.ln(), *p))
        .collect();
    if active.is_empty() {
        return 0.0;
    }
    let peak = mags.iter().copied().fold(0.0, f64::max);
    let r = active[0].2;
    if active.iter().all(|t| t.2 == r) {
        // Constant exponent: λ = peak·(Σ w (a/peak)^r)^{1/r}.
        let sum: f64 = active.iter().map(|&(la, lw, _)| (lw + r * (la - peak.ln())).exp()).sum();
        return peak * sum.powf(1.0 / r);
    }
    // log I(λ) via a shifted log-sum-exp, with its derivative in s = log λ.
    let log_modular = |s: f64| -> (f64, f64) {
        let mut m = f64::NEG_INFINITY;
        for &(la, lw, p) in &active {
            m = m.max(lw + p * (la - s));
        }
        let mut sum = 0.0;
        let mut dsum = 0.0;
        for &(la, lw, p) in &active {
            let e = (lw + p * (la - s) - m).exp();
            sum += e;
            dsum -= p * e;
        }
        (m + sum.ln(), dsum / sum)
    };
    let scale = measure.max(f64::MIN_POSITIVE).powf(1.0 / p_minus);
    let mut lo = (peak * 1f64.min(1.0 / scale)).ln();
    let mut hi = (peak * 1f64.max(scale)).ln();
    while log_modular(lo).0 < 0.0 {
        lo -= std::f64::consts::LN_2;
    }
    while log_modular(hi).0 > 0.0 {
        hi += std::f64::consts::LN_2;
    }
    let mut s = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (g, dg) = log_modular(s);
        if g == 0.0 {
            break;
        }
        if g > 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let newton = s - g / dg;
        let next = if newton > lo && newton < hi && dg < 0.0 { newton } else { 0.5 * (lo + hi) };
        if (next - s).abs() <= 1e-15 * s.abs().max(1.0) || hi - lo <= 1e-15 * s.abs().max(1.0) {
            s = next;
            break;
        }
        s = next;
    }
    s.exp()
}

/// Luxemburg norm of `χ_(a,b)` computed in the continuum: the root of
/// `∫_a^b λ^{−p(x)} dx = 1`.
pub fn indicator_norm(p: &VariableExponent, a: f64, b: f64) -> f64 {
    if let Some(r) = p.as_constant() {
        return (b - a).powf(1.0 / r);
    }
    let m = |lambda: f64| {
        let ll = lambda.ln();
        quad::integrate(|x| (-p.eval(x) * ll).exp(), a, b, 1e-14, 1e-13).value
    };
    // m is decreasing in λ; bracket the root on a log scale.
    let mut lo = 1.0;
    let mut hi = 1.0;
    while m(lo) < 1.0 {
        lo *= 0.5;
    }
    while m(hi) > 1.0 {
        hi *= 2.0;
    }
    quad::bisect(|l| m(l) - 1.0, lo, hi, 1e-14)
}

/// Largest value of `(1/(b−a))·‖χ_(a,b)‖_{p(·)}·‖χ_(a,b)‖_{p′(·)}` over the
/// supplied intervals: a lower estimate of the averaged-indicator constant.
pub fn averaged_indicator_constant(
    p: &VariableExponent,
    intervals: &[(f64, f64)],
    grid: &Grid,
) -> Result<f64> {
    let q = p.conjugate();
    let mut best: f64 = 0.0;
    for &(a, b) in intervals {
        if !(a < b) || a <= -grid.half_width || b >= grid.half_width {
            return Err(Error::IntervalOutOfGrid { a, b });
        }
        let v = indicator_norm(p, a, b) * indicator_norm(&q, a, b) / (b - a);
        best = best.max(v);
    }
    Ok(best)
}

/// Dyadic intervals `[k·2^{−j}, (k+1)·2^{−j}]` inside `(−L, L)` for `j` in `levels`.
pub fn dyadic_intervals(half_width: f64, levels: std::ops::RangeInclusive<i32>) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for j in levels {
        let len = 2f64.powi(-j);
        let kmax = (half_width / len).ceil() as i64;
        for k in -kmax..kmax {
            let (a, b) = (k as f64 * len, (k + 1) as f64 * len);
            if a > -half_width && b < half_width {
                out.push((a, b));
            }
        }
    }
    out
}

/// Hardy–Littlewood maximal function over grid-aligned intervals: node `i`
/// gets the largest mean of `|f_j|` over index windows `[j, k] ∋ i`.
///
/// For each left end `j`, a right-to-left sweep keeps `max_{k ≥ i} mean(j..=k)`,
/// giving `O(N²)` work in total.
pub fn maximal_function(f: &GridFunction) -> GridFunction {
    let a: Vec<f64> = f.samples.iter().map(|z| z.norm()).collect();
    let n = a.len();
    let mut prefix = vec![0.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + a[i];
    }
    let mut m = a.clone();
    for j in 0..n {
        let mut run = f64::NEG_INFINITY;
        for i in (j..n).rev() {
            let mean = (prefix[i + 1] - prefix[j]) / (i + 1 - j) as f64;
            run = run.max(mean);
            if run > m[i] {
                m[i] = run;
            }
        }
    }
    GridFunction {
        grid: f.grid,
        samples: m.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
    }
}
