//! Brackets for operator norms on the discretized `L^{p(·)}`: witness searches
//! over modulated Gaussians for lower bounds, Stechkin/Wiener/Plancherel
//! upper bounds for multipliers.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::{ExponentSpec, VariableExponent};
use crate::grid::{luxemburg_norm, Grid, GridFunction};
use crate::symbol::{sup_norm, vnorm, wiener_norm, Symbol};
use crate::transform::{apply_multiplier_samples, dual_grid, symbol_on_dual};

/// Atoms keep `|center| + SPREAD·width ≤ L` and `|frequency| + SPREAD/width ≤ π/h`.
const SPREAD: f64 = 6.5;
/// Relative slack allowed when comparing a lower estimate against an upper bound.
pub const BRACKET_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Family {
    /// Atoms in the random superposition starts; 1 disables them.
    pub gaussians: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub seed: u64,
    pub starts: usize,
    pub iters: usize,
    pub family: Family,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { seed: 0, starts: 8, iters: 40, family: Family { gaussians: 3 } }
    }
}

/// `amplitude · exp(−(t−center)²/(2·width²)) · e^{−i·frequency·t}`, whose
/// transform is concentrated around `x = frequency`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atom {
    pub center: f64,
    pub width: f64,
    pub frequency: f64,
    pub amplitude: Complex64,
}

impl Atom {
    fn eval(&self, t: f64) -> Complex64 {
        let u = (t - self.center) / self.width;
        self.amplitude * (-0.5 * u * u).exp() * Complex64::from_polar(1.0, -self.frequency * t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witness {
    /// Index of the start that produced it; its stream is `seed + start`.
    pub start: usize,
    pub atoms: Vec<Atom>,
    pub ratio: f64,
}

impl Witness {
    pub fn evaluate(&self, grid: &Grid) -> Result<GridFunction> {
        GridFunction::from_fn(*grid, |t| self.atoms.iter().map(|a| a.eval(t)).sum())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerEstimate {
    pub value: f64,
    pub witness: Option<Witness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Stechkin,
    Wiener,
    SupNormTrivial,
    ConfigSupplied,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SBoundSource {
    /// `cot(π/(2·max(r, r')))` for a constant exponent `r`.
    Classical,
    Config,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SBound {
    pub value: f64,
    pub source: SBoundSource,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperCandidate {
    pub provenance: Provenance,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateMetadata {
    pub grid: Grid,
    pub exponent: ExponentSpec,
    pub search: SearchConfig,
    pub s_bound: Option<SBound>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub lower: f64,
    pub lower_witness: Option<Witness>,
    pub upper: f64,
    pub upper_provenance: Provenance,
    pub upper_candidates: Vec<UpperCandidate>,
    /// `‖a‖_∞`: the supremum of achievable ratios is at least this, but it is
    /// not assumed as a lower bound.
    pub sup_norm_target: f64,
    pub metadata: EstimateMetadata,
}

/// Classical `‖S‖_{L^r}` for constant `r`; `None` for variable exponents.
pub fn classical_s_bound(p: &VariableExponent) -> Option<f64> {
    let r = p.as_constant()?;
    let m = r.max(r / (r - 1.0));
    Some(1.0 / (std::f64::consts::PI / (2.0 * m)).tan())
}

/// Box constraints of the witness family on `grid`.
#[derive(Clone, Copy, Debug)]
struct Feasible {
    half_width: f64,
    nyquist: f64,
    w_min: f64,
    w_max: f64,
}

impl Feasible {
    fn new(grid: &Grid) -> Feasible {
        let h = grid.step();
        Feasible { half_width: grid.half_width, nyquist: std::f64::consts::PI / h, w_min: 4.0 * h, w_max: grid.half_width / SPREAD }
    }

    fn project(&self, a: &mut Atom) {
        a.width = a.width.clamp(self.w_min, self.w_max);
        let c = self.half_width - SPREAD * a.width;
        a.center = a.center.clamp(-c, c);
        let f = (self.nyquist - SPREAD / a.width).max(0.0);
        a.frequency = a.frequency.clamp(-f, f);
    }

    fn random_atom(&self, rng: &mut ChaCha8Rng, amplitude: Complex64) -> Atom {
        let width = (self.w_min.ln() + rng.random::<f64>() * (self.w_max / self.w_min).ln()).exp();
        let mut a = Atom {
            center: (rng.random::<f64>() - 0.5) * self.half_width,
            width,
            frequency: (rng.random::<f64>() - 0.5) * (self.nyquist - SPREAD / width),
            amplitude,
        };
        self.project(&mut a);
        a
    }
}

/// Coordinates: per atom center, ln width, frequency, and for all but the
/// first atom the amplitude (the first is fixed to 1 by homogeneity).
fn coordinate_count(atoms: usize) -> usize {
    3 * atoms + 2 * atoms.saturating_sub(1)
}

fn nudge(atoms: &[Atom], coord: usize, delta: f64, bx: &Feasible) -> Vec<Atom> {
    let mut out = atoms.to_vec();
    let (i, c) = if coord < 3 { (0, coord) } else { (1 + (coord - 3) / 5, (coord - 3) % 5) };
    let a = &mut out[i];
    match c {
        0 => a.center += delta,
        1 => a.width *= delta.exp(),
        2 => a.frequency += delta,
        3 => a.amplitude.re += delta,
        _ => a.amplitude.im += delta,
    }
    bx.project(a);
    out
}

fn initial_steps(atoms: usize, bx: &Feasible) -> Vec<f64> {
    (0..coordinate_count(atoms))
        .map(|coord| {
            let c = if coord < 3 { coord } else { (coord - 3) % 5 };
            match c {
                0 => bx.half_width / 8.0,
                1 => 0.5,
                2 => bx.nyquist / 16.0,
                _ => 0.5,
            }
        })
        .collect()
}

fn ratio<A>(apply: &A, p: &VariableExponent, grid: &Grid, atoms: &[Atom]) -> f64
where
    A: Fn(&GridFunction) -> Result<GridFunction>,
{
    let w = Witness { start: 0, atoms: atoms.to_vec(), ratio: 0.0 };
    let Ok(f) = w.evaluate(grid) else { return f64::NEG_INFINITY };
    let Ok(nf) = luxemburg_norm(&f, p) else { return f64::NEG_INFINITY };
    if !(nf > 0.0) {
        return f64::NEG_INFINITY;
    }
    match apply(&f).and_then(|g| luxemburg_norm(&g, p)) {
        Ok(ng) if ng.is_finite() => ng / nf,
        _ => f64::NEG_INFINITY,
    }
}

fn descend<A>(apply: &A, p: &VariableExponent, grid: &Grid, bx: &Feasible, mut atoms: Vec<Atom>, iters: usize) -> (f64, Vec<Atom>)
where
    A: Fn(&GridFunction) -> Result<GridFunction>,
{
    let mut best = ratio(apply, p, grid, &atoms);
    let mut steps = initial_steps(atoms.len(), bx);
    for _ in 0..iters {
        let mut moved = false;
        for (coord, step) in steps.iter_mut().enumerate() {
            let mut chosen: Option<(f64, Vec<Atom>)> = None;
            for sign in [1.0, -1.0] {
                let trial = nudge(&atoms, coord, sign * *step, bx);
                if trial == atoms {
                    continue;
                }
                let r = ratio(apply, p, grid, &trial);
                if r > best && chosen.as_ref().is_none_or(|(c, _)| r > *c) {
                    chosen = Some((r, trial));
                }
            }
            match chosen {
                Some((r, trial)) => {
                    best = r;
                    atoms = trial;
                    moved = true;
                }
                None => *step *= 0.5,
            }
        }
        if !moved && steps.iter().all(|s| *s < 1e-9) {
            break;
        }
    }
    (best, atoms)
}

/// Lower bound for the norm of a linear operator on the grid's `L^{p(·)}`:
/// the best ratio `‖Af‖/‖f‖` found by multi-start coordinate ascent.
pub fn opnorm_lower<A>(apply: A, p: &VariableExponent, grid: &Grid, search: &SearchConfig) -> Result<LowerEstimate>
where
    A: Fn(&GridFunction) -> Result<GridFunction> + Sync,
{
    opnorm_lower_hinted(apply, p, grid, search, &[])
}

/// As [`opnorm_lower`]; the first starts are wide single atoms centred at the
/// hinted frequencies.
pub fn opnorm_lower_hinted<A>(
    apply: A,
    p: &VariableExponent,
    grid: &Grid,
    search: &SearchConfig,
    hints: &[f64],
) -> Result<LowerEstimate>
where
    A: Fn(&GridFunction) -> Result<GridFunction> + Sync,
{
    if search.starts == 0 || search.iters == 0 {
        return Err(Error::BudgetZero);
    }
    grid.validate()?;
    let bx = Feasible::new(grid);
    let one = Complex64::new(1.0, 0.0);
    let results: Vec<(f64, Vec<Atom>)> = (0..search.starts)
        .into_par_iter()
        .map(|start| {
            let mut rng = ChaCha8Rng::seed_from_u64(search.seed.wrapping_add(start as u64));
            let atoms = if let Some(&xi) = hints.get(start) {
                let mut a = Atom { center: 0.0, width: bx.w_max, frequency: xi, amplitude: one };
                bx.project(&mut a);
                vec![a]
            } else if search.family.gaussians > 1 && start % 2 == 1 {
                let mut v = vec![bx.random_atom(&mut rng, one)];
                for _ in 1..search.family.gaussians {
                    let r = rng.random::<f64>().sqrt();
                    let amp = Complex64::from_polar(r, rng.random::<f64>() * std::f64::consts::TAU);
                    v.push(bx.random_atom(&mut rng, amp));
                }
                v
            } else {
                vec![bx.random_atom(&mut rng, one)]
            };
            descend(&apply, p, grid, &bx, atoms, search.iters)
        })
        .collect();
    let mut best: Option<(usize, f64, Vec<Atom>)> = None;
    for (start, (r, atoms)) in results.into_iter().enumerate() {
        if r.is_finite() && best.as_ref().is_none_or(|(_, b, _)| r > *b) {
            best = Some((start, r, atoms));
        }
    }
    Ok(match best {
        Some((start, value, atoms)) => {
            LowerEstimate { value, witness: Some(Witness { start, atoms, ratio: value }) }
        }
        None => LowerEstimate { value: 0.0, witness: None },
    })
}

/// Frequency where `|a|` stays largest over a window of the narrowest
/// spectral spread the family can produce.
fn frequency_hint(samples: &[Complex64], grid: &Grid) -> f64 {
    let d = dual_grid(grid);
    let bx = Feasible::new(grid);
    let reach = ((3.0 / bx.w_max) / d.step()).ceil() as usize;
    let mags: Vec<f64> = samples.iter().map(|z| z.norm()).collect();
    let n = mags.len();
    let limit = bx.nyquist - SPREAD / bx.w_max;
    let mut best = (f64::NEG_INFINITY, f64::INFINITY, 0.0);
    for k in 0..n {
        let x = d.node(k);
        if x.abs() > limit {
            continue;
        }
        let lo = k.saturating_sub(reach);
        let hi = (k + reach).min(n - 1);
        let worst = mags[lo..=hi].iter().copied().fold(f64::INFINITY, f64::min);
        if worst > best.0 || (worst == best.0 && x.abs() < best.1) {
            best = (worst, x.abs(), x);
        }
    }
    best.2
}

/// `W⁰(a)` on `grid`, with the symbol sampled once.
pub fn multiplier_operator(a: &Symbol, grid: &Grid) -> impl Fn(&GridFunction) -> Result<GridFunction> + Sync {
    let samples = symbol_on_dual(a, grid);
    move |f: &GridFunction| apply_multiplier_samples(&samples, f)
}

/// Upper-bound candidates for `‖a‖_{M_{p(·)}}`.
pub fn upper_candidates(a: &Symbol, p: &VariableExponent, s_bound: Option<SBound>) -> Vec<UpperCandidate> {
    let mut out = Vec::new();
    if let Some(s) = s_bound {
        if let Ok(v) = vnorm(a) {
            out.push(UpperCandidate { provenance: Provenance::Stechkin, value: s.value * v });
        }
    }
    let wiener = match a.as_constant() {
        Some(c) => Some(c.norm()),
        None => wiener_norm(a).ok(),
    };
    if let Some(w) = wiener {
        out.push(UpperCandidate { provenance: Provenance::Wiener, value: w });
    }
    if p.as_constant() == Some(2.0) {
        out.push(UpperCandidate { provenance: Provenance::SupNormTrivial, value: sup_norm(a) });
    }
    out
}

/// Bracket `[lower, upper]` for `‖W⁰(a)‖` on `L^{p(·)}`. `supplied_upper` is a
/// bound taken on trust from configuration.
pub fn multiplier_norm_bounds(
    a: &Symbol,
    p: &VariableExponent,
    s_bound: Option<SBound>,
    supplied_upper: Option<f64>,
    search: &SearchConfig,
    grid: &Grid,
) -> Result<NormEstimate> {
    if let Some(s) = s_bound {
        if !(s.value >= 1.0) {
            return Err(Error::InvalidArgument(format!("s_bound {} is below 1", s.value)));
        }
    }
    let mut candidates = upper_candidates(a, p, s_bound);
    if let Some(u) = supplied_upper {
        candidates.push(UpperCandidate { provenance: Provenance::ConfigSupplied, value: u });
    }
    let best = candidates
        .iter()
        .copied()
        .filter(|c| c.value.is_finite())
        .min_by(|x, y| x.value.total_cmp(&y.value))
        .ok_or_else(|| {
            Error::NoUpperBoundAvailable(
                "symbol has unbounded variation (or no s_bound), no Wiener form, and p is not 2".into(),
            )
        })?;
    let samples = symbol_on_dual(a, grid);
    let hint = frequency_hint(&samples, grid);
    let lower = opnorm_lower_hinted(move |f: &GridFunction| apply_multiplier_samples(&samples, f), p, grid, search, &[hint])?;
    if lower.value > best.value * (1.0 + BRACKET_SLACK) {
        return Err(Error::InconsistentBracket { lower: lower.value, upper: best.value });
    }
    Ok(NormEstimate {
        lower: lower.value,
        lower_witness: lower.witness,
        upper: best.value,
        upper_provenance: best.provenance,
        upper_candidates: candidates,
        sup_norm_target: sup_norm(a),
        metadata: EstimateMetadata { grid: *grid, exponent: p.spec(), search: *search, s_bound },
    })
}

/// One Stechkin comparison: the searched lower bound against `s·‖a‖_V`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StechkinRow {
    pub symbol: String,
    pub exponent: String,
    pub lower: f64,
    pub s_bound: f64,
    pub vnorm: f64,
    pub rhs: f64,
    pub pass: bool,
}

pub const STECHKIN_TOL: f64 = 1e-6;

pub fn stechkin_check(
    a: &Symbol,
    p: &VariableExponent,
    s_bound: f64,
    search: &SearchConfig,
    grid: &Grid,
) -> Result<StechkinRow> {
    let v = vnorm(a)?;
    let samples = symbol_on_dual(a, grid);
    let hint = frequency_hint(&samples, grid);
    let lower = opnorm_lower_hinted(move |f: &GridFunction| apply_multiplier_samples(&samples, f), p, grid, search, &[hint])?;
    let rhs = s_bound * v;
    Ok(StechkinRow {
        symbol: a.name().unwrap_or("anonymous").to_string(),
        exponent: serde_json::to_string(&p.spec())?,
        lower: lower.value,
        s_bound,
        vnorm: v,
        rhs,
        pass: lower.value <= rhs + STECHKIN_TOL,
    })
}
