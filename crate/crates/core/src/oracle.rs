//! Finite weighted `ℓ^{p(·)}` models: exact-to-tolerance Luxemburg norms,
//! operator norms by a generalized power method, and the property suite on
//! cyclic Fourier-multiplier matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::{ExponentSpec, VariableExponent};
use crate::grid::luxemburg_weighted;
use crate::symbol::{convolve_mollify, vnorm, Symbol, SymbolSpec};

pub type CMatrix = DMatrix<Complex64>;

/// Largest dimension the oracle accepts.
pub const MAX_DIM: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscreteSpace {
    pub weights: Vec<f64>,
    pub exponents: Vec<f64>,
}

impl DiscreteSpace {
    pub fn new(weights: Vec<f64>, exponents: Vec<f64>) -> Result<DiscreteSpace> {
        if weights.len() != exponents.len() || weights.is_empty() {
            return Err(Error::InvalidArgument("weights and exponents must be non-empty and of equal length".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidArgument(format!("weight {w} is not positive")));
        }
        if let Some(p) = exponents.iter().find(|p| !(**p > 1.0 + 1e-6 && **p < 1e6)) {
            return Err(Error::InvalidExponent(format!("discrete exponent {p} outside (1+1e-6, 1e6)")));
        }
        Ok(DiscreteSpace { weights, exponents })
    }

    /// Unit weights, constant exponent.
    pub fn uniform(n: usize, p: f64) -> Result<DiscreteSpace> {
        DiscreteSpace::new(vec![1.0; n], vec![p; n])
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn is_constant_exponent(&self) -> bool {
        self.exponents.iter().all(|p| *p == self.exponents[0])
    }

    fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    fn p_min(&self) -> f64 {
        self.exponents.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `1/p_ϑ = ϑ/p₀ + (1−ϑ)/p₁` per index, weights taken from `self`.
    pub fn interpolate(&self, other: &DiscreteSpace, theta: f64) -> Result<DiscreteSpace> {
        let ps = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(p0, p1)| 1.0 / (theta / p0 + (1.0 - theta) / p1))
            .collect();
        DiscreteSpace::new(self.weights.clone(), ps)
    }
}

/// Root `λ` of `Σ w_i |v_i/λ|^{p_i} = 1`; 0 for the zero vector.
pub fn discrete_luxemburg(v: &[Complex64], space: &DiscreteSpace) -> f64 {
    let mags: Vec<f64> = v.iter().map(|z| z.norm()).collect();
    luxemburg_weighted(&mags, &space.weights, &space.exponents, space.measure(), space.p_min())
}

/// Gradient of the Luxemburg norm at `y` for the pairing `Re Σ conj(g_i) y_i`.
fn norm_gradient(y: &[Complex64], space: &DiscreteSpace) -> Vec<Complex64> {
    let lambda = discrete_luxemburg(y, space);
    if lambda == 0.0 {
        return vec![Complex64::new(0.0, 0.0); y.len()];
    }
    let mut t = Vec::with_capacity(y.len());
    let mut total = 0.0;
    for ((z, w), p) in y.iter().zip(&space.weights).zip(&space.exponents) {
        let u = z.norm() / lambda;
        let ti = if u == 0.0 { 0.0 } else { w * p * u.powf(*p) };
        total += ti;
        t.push(ti);
    }
    y.iter()
        .zip(&t)
        .map(|(z, ti)| {
            let a = z.norm();
            if a == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                // w p u^{p−1} sgn(z) / Σ t = (t_i / u_i) sgn(z) / Σ t.
                z * (lambda * ti / (a * a * total))
            }
        })
        .collect()
}

/// Maximizer of `Re Σ conj(z_i) v_i` over the unit modular ball of `space`:
/// `|v_i| = (a_i/μ)^{1/(p_i−1)}`, `a_i = |z_i|/(w_i p_i)`, with `μ` fixing the modular at 1.
fn dual_argmax(z: &[Complex64], space: &DiscreteSpace) -> Vec<Complex64> {
    let a: Vec<f64> =
        z.iter().zip(&space.weights).zip(&space.exponents).map(|((zi, w), p)| zi.norm() / (w * p)).collect();
    let beta: Vec<f64> = space.exponents.iter().map(|p| p / (p - 1.0)).collect();
    let beta_min = beta.iter().copied().fold(f64::INFINITY, f64::min);
    let mu = luxemburg_weighted(&a, &space.weights, &beta, space.measure(), beta_min);
    z.iter()
        .zip(&a)
        .zip(&space.exponents)
        .map(|((zi, ai), p)| {
            let m = zi.norm();
            if m == 0.0 || mu == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                zi / m * (ai / mu).powf(1.0 / (p - 1.0))
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleBudget {
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { seed: 0, restarts: 32, max_iters: 400 }
    }
}

fn matvec(a: &CMatrix, v: &[Complex64]) -> Vec<Complex64> {
    (a * DVector::from_column_slice(v)).as_slice().to_vec()
}

fn ratio(a: &CMatrix, v: &[Complex64], dom: &DiscreteSpace, cod: &DiscreteSpace) -> f64 {
    let nv = discrete_luxemburg(v, dom);
    if nv == 0.0 {
        return 0.0;
    }
    discrete_luxemburg(&matvec(a, v), cod) / nv
}

/// Power iteration `v ← argmax_{‖v‖≤1} Re⟨A* ∇‖·‖(Av), v⟩`; the ratio never decreases.
fn ascend(a: &CMatrix, adj: &CMatrix, start: Vec<Complex64>, dom: &DiscreteSpace, cod: &DiscreteSpace, iters: usize) -> f64 {
    let nv = discrete_luxemburg(&start, dom);
    if nv == 0.0 {
        return 0.0;
    }
    let mut v: Vec<Complex64> = start.iter().map(|z| z / nv).collect();
    let mut best = discrete_luxemburg(&matvec(a, &v), cod);
    let mut still = 0;
    for _ in 0..iters {
        let y = matvec(a, &v);
        if discrete_luxemburg(&y, cod) == 0.0 {
            break;
        }
        let z = matvec(adj, &norm_gradient(&y, cod));
        let next = dual_argmax(&z, dom);
        let r = ratio(a, &next, dom, cod);
        if !(r.is_finite()) || r <= best * (1.0 + 1e-14) {
            best = best.max(if r.is_finite() { r } else { 0.0 });
            still += 1;
            if still >= 3 {
                break;
            }
        } else {
            still = 0;
            best = r;
        }
        v = next;
    }
    best
}

fn fourier_mode(n: usize, k: usize) -> Vec<Complex64> {
    (0..n).map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * (j * k) as f64 / n as f64)).collect()
}

/// Lower bound for `‖A‖_{dom→cod}`, converged to stationarity of the power
/// iteration from seeded random starts, basis vectors, Fourier modes and the
/// top right singular vector.
pub fn discrete_opnorm(a: &CMatrix, dom: &DiscreteSpace, cod: &DiscreteSpace, budget: &OracleBudget) -> Result<f64> {
    let (rows, cols) = a.shape();
    if rows.max(cols) > MAX_DIM {
        return Err(Error::BudgetExceeded(rows.max(cols)));
    }
    if cols != dom.dim() || rows != cod.dim() {
        return Err(Error::InvalidArgument(format!(
            "matrix is {rows}x{cols} but spaces have dimensions {} and {}",
            cod.dim(),
            dom.dim()
        )));
    }
    if a.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return Ok(0.0);
    }
    let adj = a.adjoint();
    let mut starts: Vec<Vec<Complex64>> = Vec::new();
    // Screen basis vectors and Fourier modes; keep the best few of each.
    let keep = 4.min(cols);
    for family in [0, 1] {
        let mut scored: Vec<(f64, usize, Vec<Complex64>)> = (0..cols)
            .map(|k| {
                let v = if family == 0 {
                    let mut e = vec![Complex64::new(0.0, 0.0); cols];
                    e[k] = Complex64::new(1.0, 0.0);
                    e
                } else {
                    fourier_mode(cols, k)
                };
                (ratio(a, &v, dom, cod), k, v)
            })
            .collect();
        scored.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
        starts.extend(scored.into_iter().take(keep).map(|t| t.2));
    }
    let svd = a.clone().svd(false, true);
    if let Some(vt) = svd.v_t {
        let top = svd.singular_values.imax();
        starts.push(vt.row(top).adjoint().as_slice().to_vec());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    for _ in 0..budget.restarts {
        starts.push((0..cols).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect());
    }
    Ok(starts.into_iter().map(|s| ascend(a, &adj, s, dom, cod, budget.max_iters)).fold(0.0, f64::max))
}

/// Same-space norm `‖A‖_{X→X}`.
pub fn opnorm_on(a: &CMatrix, space: &DiscreteSpace, budget: &OracleBudget) -> Result<f64> {
    discrete_opnorm(a, space, space, budget)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RieszThorinRow {
    pub theta: f64,
    pub lhs: f64,
    pub norm_p0: f64,
    pub norm_p1: f64,
    pub constant: f64,
    pub rhs: f64,
    /// `lhs / (‖A‖₀^ϑ‖A‖₁^{1−ϑ})`, diagnostic only.
    pub ratio: f64,
    pub violation: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RieszThorinReport {
    pub rows: Vec<RieszThorinRow>,
    pub violations: usize,
    pub max_ratio: f64,
}

pub const INTERPOLATION_TOL: f64 = 1e-6;

/// Checks `‖A‖_{p_ϑ} ≤ C‖A‖_{p₀}^ϑ‖A‖_{p₁}^{1−ϑ}` with `C = 1` when both exponent
/// vectors are constant and `C = 4` otherwise.
pub fn check_riesz_thorin(
    a: &CMatrix,
    p0: &DiscreteSpace,
    p1: &DiscreteSpace,
    thetas: &[f64],
    budget: &OracleBudget,
) -> Result<RieszThorinReport> {
    let constant = if p0.is_constant_exponent() && p1.is_constant_exponent() { 1.0 } else { 4.0 };
    let n0 = opnorm_on(a, p0, budget)?;
    let n1 = opnorm_on(a, p1, budget)?;
    let mut rows = Vec::new();
    for &theta in thetas {
        let pt = p0.interpolate(p1, theta)?;
        let lhs = opnorm_on(a, &pt, budget)?;
        let base = n0.powf(theta) * n1.powf(1.0 - theta);
        let rhs = constant * base;
        rows.push(RieszThorinRow {
            theta,
            lhs,
            norm_p0: n0,
            norm_p1: n1,
            constant,
            rhs,
            ratio: if base > 0.0 { lhs / base } else { 0.0 },
            violation: lhs > rhs * (1.0 + INTERPOLATION_TOL),
        });
    }
    let violations = rows.iter().filter(|r| r.violation).count();
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(RieszThorinReport { rows, violations, max_ratio })
}

/// Frequencies `x_k = (k − n/2)·2X/n` and spatial step `h = π/X` of the
/// `n`-point cyclic model spanning `[−X, X)` in frequency.
pub fn cyclic_nodes(n: usize, span: f64) -> (Vec<f64>, f64) {
    let dx = 2.0 * span / n as f64;
    ((0..n).map(|k| (k as f64 - (n / 2) as f64) * dx).collect(), std::f64::consts::PI / span)
}

/// Cyclic multiplier `(1/n) Σ_k a_k e^{2πi(k−n/2)(j−l)/n}`, i.e. IDFT·diag(a)·DFT.
pub fn multiplier_matrix(samples: &[Complex64]) -> CMatrix {
    let n = samples.len();
    let half = (n / 2) as i64;
    // Column l of the result depends only on j − l (mod n).
    let kernel: Vec<Complex64> = (0..n)
        .map(|d| {
            samples
                .iter()
                .enumerate()
                .map(|(k, a)| a * Complex64::from_polar(1.0, std::f64::consts::TAU * ((k as i64 - half) * d as i64) as f64 / n as f64))
                .sum::<Complex64>()
                / n as f64
        })
        .collect();
    DMatrix::from_fn(n, n, |j, l| kernel[(j + n - l) % n])
}

/// The space of the cyclic model: exponent sampled at `t_j = (j − n/2)·h`, weights `h`.
pub fn cyclic_space(p: &VariableExponent, n: usize, span: f64) -> Result<DiscreteSpace> {
    let (_, h) = cyclic_nodes(n, span);
    let ps = (0..n).map(|j| p.eval((j as f64 - (n / 2) as f64) * h)).collect();
    DiscreteSpace::new(vec![h; n], ps)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteExponent {
    pub exponent: ExponentSpec,
    /// Bound for `‖S‖` on this exponent; defaults to the classical value for
    /// constant exponents and is required otherwise.
    #[serde(default)]
    pub s_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RieszThorinConfig {
    pub matrices: usize,
    pub size: usize,
    pub p0: f64,
    pub p1: f64,
    pub thetas: Vec<f64>,
    /// Additionally draw random variable exponent vectors in `[p_lo, p_hi]`.
    #[serde(default)]
    pub variable: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    pub size: usize,
    pub span: f64,
    pub symbols: Vec<SymbolSpec>,
    pub exponents: Vec<SuiteExponent>,
    pub deltas: Vec<f64>,
    #[serde(default)]
    pub budget: Option<OracleBudget>,
    #[serde(default)]
    pub riesz_thorin: Option<RieszThorinConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub case: String,
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
    /// Soft rows are search-quality targets; only hard failures count as violations.
    pub hard: bool,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub rows: Vec<CheckRow>,
    pub hard_violations: usize,
    pub soft_misses: usize,
    pub errors: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.hard_violations == 0 && self.errors.is_empty()
    }

    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["case", "check", "lhs", "rhs", "margin", "pass", "hard"])?;
        for r in &self.rows {
            w.write_record([
                r.case.clone(),
                r.check.clone(),
                format!("{:?}", r.lhs),
                format!("{:?}", r.rhs),
                format!("{:?}", r.margin),
                r.pass.to_string(),
                r.hard.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub const EMBEDDING_TOL: f64 = 1e-6;
pub const EMBEDDING_SEARCH_TOL: f64 = 0.02;
pub const MOLLIFICATION_TOL: f64 = 0.01;

fn row(case: &str, check: &str, lhs: f64, rhs: f64, hard: bool, note: String) -> CheckRow {
    CheckRow { case: case.into(), check: check.into(), lhs, rhs, margin: rhs - lhs, pass: lhs <= rhs, hard, note }
}

/// Embedding, mollification and Stechkin checks for one symbol on one exponent.
pub fn suite_case(
    case: &str,
    a: &Symbol,
    p: &VariableExponent,
    s_bound: f64,
    config: &SuiteConfig,
    budget: &OracleBudget,
) -> Result<Vec<CheckRow>> {
    let (xs, _) = cyclic_nodes(config.size, config.span);
    let space = cyclic_space(p, config.size, config.span)?;
    let samples = a.sample(&xs);
    let norm = opnorm_on(&multiplier_matrix(&samples), &space, budget)?;
    let peak = samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut rows = Vec::new();
    if p.as_constant() == Some(2.0) {
        rows.push(row(case, "embedding", peak, norm * (1.0 + EMBEDDING_TOL), true, "max|a_k| <= opnorm".into()));
    } else {
        rows.push(row(case, "embedding-search", peak * (1.0 - EMBEDDING_SEARCH_TOL), norm, false, "search target".into()));
    }
    for &delta in &config.deltas {
        let m = convolve_mollify(a, delta).sample(&xs);
        let nm = opnorm_on(&multiplier_matrix(&m), &space, budget)?;
        rows.push(row(
            case,
            &format!("mollification-{delta}"),
            nm,
            norm * (1.0 + MOLLIFICATION_TOL),
            true,
            format!("opnorm(a*phi_{delta}) <= opnorm(a)"),
        ));
    }
    let v = vnorm(a)?;
    rows.push(row(case, "stechkin", norm, s_bound * v + EMBEDDING_TOL, true, format!("s_bound {s_bound} * V {v}")));
    Ok(rows)
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    DMatrix::from_fn(n, n, |_, _| Complex64::new(2.0 * rng.random::<f64>() - 1.0, 2.0 * rng.random::<f64>() - 1.0))
}

/// Seeded random interpolation pairs: `(matrix, p0-space, p1-space)`.
pub fn riesz_thorin_corpus(rt: &RieszThorinConfig, seed: u64, variable: bool) -> Result<Vec<(CMatrix, DiscreteSpace, DiscreteSpace)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(rt.matrices);
    for _ in 0..rt.matrices {
        let a = random_matrix(&mut rng, rt.size);
        let (s0, s1) = match (variable, rt.variable) {
            (true, Some([lo, hi])) => {
                let w: Vec<f64> = (0..rt.size).map(|_| 0.5 + 1.5 * rng.random::<f64>()).collect();
                let e0 = (0..rt.size).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect();
                let e1 = (0..rt.size).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect();
                (DiscreteSpace::new(w.clone(), e0)?, DiscreteSpace::new(w, e1)?)
            }
            _ => (DiscreteSpace::uniform(rt.size, rt.p0)?, DiscreteSpace::uniform(rt.size, rt.p1)?),
        };
        out.push((a, s0, s1));
    }
    Ok(out)
}

/// Runs every configured case; failures are collected, never thrown.
pub fn run_property_suite(config: &SuiteConfig) -> SuiteReport {
    let budget = config.budget.unwrap_or(OracleBudget { seed: config.seed, ..OracleBudget::default() });
    let mut errors = Vec::new();
    let mut jobs = Vec::new();
    if config.size > MAX_DIM {
        errors.push(Error::BudgetExceeded(config.size).to_string());
    } else {
        for (i, spec) in config.symbols.iter().enumerate() {
            for (j, e) in config.exponents.iter().enumerate() {
                jobs.push((i, spec, j, e));
            }
        }
    }
    let case_results: Vec<(String, Result<Vec<CheckRow>>)> = jobs
        .par_iter()
        .enumerate()
        .map(|(idx, (i, spec, j, e))| {
            let name = spec.name.clone().unwrap_or_else(|| format!("symbol{i}"));
            let case = format!("s{i:02}-{name}/p{j}");
            let run = || -> Result<Vec<CheckRow>> {
                let a = Symbol::from_spec(spec)?;
                let p = VariableExponent::from_spec(&e.exponent)?;
                let s = match e.s_bound.or_else(|| crate::estimate::classical_s_bound(&p)) {
                    Some(s) => s,
                    None => return Err(Error::InvalidArgument(format!("exponent {j} is variable and has no s_bound"))),
                };
                let b = OracleBudget { seed: budget.seed.wrapping_add(idx as u64), ..budget };
                suite_case(&case, &a, &p, s, config, &b)
            };
            (case.clone(), run())
        })
        .collect();
    let mut rows = Vec::new();
    for (case, r) in case_results {
        match r {
            Ok(rs) => rows.extend(rs),
            Err(e) => errors.push(format!("{case}: {e}")),
        }
    }
    if let Some(rt) = &config.riesz_thorin {
        let thetas = &rt.thetas;
        let mut families = vec![(false, "rt-constant")];
        if rt.variable.is_some() {
            families.push((true, "rt-variable"));
        }
        for (variable, label) in families {
            match riesz_thorin_corpus(rt, config.seed, variable) {
                Ok(corpus) => {
                    let reports: Vec<(usize, Result<RieszThorinReport>)> = corpus
                        .par_iter()
                        .enumerate()
                        .map(|(m, (a, s0, s1))| {
                            let b = OracleBudget { seed: budget.seed.wrapping_add(m as u64), ..budget };
                            (m, check_riesz_thorin(a, s0, s1, thetas, &b))
                        })
                        .collect();
                    for (m, r) in reports {
                        match r {
                            Ok(rep) => rows.extend(rep.rows.iter().map(|x| {
                                row(
                                    &format!("{label}-{m:03}"),
                                    &format!("interpolation-{}", x.theta),
                                    x.lhs,
                                    x.rhs * (1.0 + INTERPOLATION_TOL),
                                    true,
                                    format!("C = {}", x.constant),
                                )
                            })),
                            Err(e) => errors.push(format!("{label}-{m:03}: {e}")),
                        }
                    }
                }
                Err(e) => errors.push(format!("{label}: {e}")),
            }
        }
    }
    rows.sort_by(|a, b| a.case.cmp(&b.case).then(a.check.cmp(&b.check)));
    errors.sort();
    let hard_violations = rows.iter().filter(|r| r.hard && !r.pass).count();
    let soft_misses = rows.iter().filter(|r| !r.hard && !r.pass).count();
    SuiteReport { rows, hard_violations, soft_misses, errors }
}
