use std::path::{Path, PathBuf};

use serde::Serialize;
use vlex_core::approx::{
    certify_c0_cloud, certify_c0_variation, honesty_check, oracle_consistency, replay as replay_certificate,
    ApproximationCertificate, Decomposition, HonestyReport, OracleConsistency, ReplayReport,
};
use vlex_core::estimate::{classical_s_bound, multiplier_norm_bounds, NormEstimate, SBound, SBoundSource};
use vlex_core::exponent::{ExponentSpec, VariableExponent};
use vlex_core::grid::{luxemburg_norm, Grid, GridFunction};
use vlex_core::oracle::{
    check_riesz_thorin, cyclic_nodes, cyclic_space, multiplier_matrix, opnorm_on, riesz_thorin_corpus,
    run_property_suite, OracleBudget, RieszThorinReport,
};
use vlex_core::symbol::Symbol;

use crate::config::ExperimentConfig;
use crate::report::{persist, render};
use crate::{Failure, Format, Mode};

pub struct Context {
    pub cfg: ExperimentConfig,
    pub out: PathBuf,
    pub format: Format,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

fn load_symbol(path: &Path) -> Result<Symbol, Failure> {
    Symbol::from_json(&read(path)?).map_err(|e| Failure::classify_input(e, path))
}

impl Failure {
    /// Input files that do not load are parse failures whatever the cause.
    fn classify_input(e: vlex_core::Error, path: &Path) -> Failure {
        Failure::parse(format!("{}: {e}", path.display()))
    }
}

fn exponent(cfg: &ExperimentConfig) -> Result<VariableExponent, Failure> {
    VariableExponent::from_spec(cfg.exponent()?).map_err(Failure::domain)
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out.into_bytes()
}

/// Persists the report and prints it in the requested format.
fn emit<R: Serialize>(ctx: &Context, command: &str, result: &R, csv: Option<Vec<u8>>) -> Result<(), Failure> {
    let json = render(command, &ctx.cfg, result)?;
    let written = persist(&ctx.out, command, &json, csv.as_deref())?;
    match (ctx.format, &csv) {
        (Format::Csv, Some(bytes)) => print!("{}", String::from_utf8_lossy(bytes)),
        _ => print!("{}", String::from_utf8_lossy(&json)),
    }
    eprintln!("report: {}", written.json.display());
    if let Some(p) = written.csv {
        eprintln!("report: {}", p.display());
    }
    Ok(())
}

#[derive(Serialize)]
struct NormReport {
    norm: f64,
    grid: Grid,
    exponent: ExponentSpec,
}

pub fn norm(ctx: &Context, function: &Path) -> Result<(), Failure> {
    let p = exponent(&ctx.cfg)?;
    let text = read(function)?;
    let f = GridFunction::read_csv(text.as_bytes()).map_err(|e| Failure::parse(format!("{}: {e}", function.display())))?;
    let value = luxemburg_norm(&f, &p).map_err(Failure::domain)?;
    let r = NormReport { norm: value, grid: f.grid(), exponent: p.spec() };
    let csv = csv_bytes(
        &["norm", "half_width", "count"],
        &[vec![format!("{value:?}"), format!("{:?}", r.grid.half_width), r.grid.count.to_string()]],
    );
    emit(ctx, "norm", &r, Some(csv))
}

fn s_bound(cfg: &ExperimentConfig, p: &VariableExponent) -> Option<SBound> {
    if let Some(v) = cfg.s_bound_for(&p.spec()) {
        return Some(SBound { value: v, source: SBoundSource::Config });
    }
    classical_s_bound(p).map(|v| SBound { value: v, source: SBoundSource::Classical })
}

pub fn mulnorm(ctx: &Context, symbol: &Path) -> Result<(), Failure> {
    let a = load_symbol(symbol)?;
    let p = exponent(&ctx.cfg)?;
    let grid = ctx.cfg.grid()?;
    let est: NormEstimate =
        multiplier_norm_bounds(&a, &p, s_bound(&ctx.cfg, &p), ctx.cfg.supplied_upper, &ctx.cfg.search(), &grid)
            .map_err(Failure::domain)?;
    let csv = csv_bytes(
        &["lower", "upper", "upper_provenance"],
        &[vec![
            format!("{:?}", est.lower),
            format!("{:?}", est.upper),
            serde_json::to_value(est.upper_provenance).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
        ]],
    );
    emit(ctx, "mulnorm", &est, Some(csv))
}

#[derive(Serialize)]
struct ApproximateReport {
    certificate_file: String,
    certificate: ApproximationCertificate,
    replay: ReplayReport,
    honesty: HonestyReport,
    oracle: Option<OracleConsistency>,
}

pub fn approximate(ctx: &Context, symbol: &Path, epsilon: f64, mode: Mode) -> Result<(), Failure> {
    let a = load_symbol(symbol)?;
    let p = exponent(&ctx.cfg)?;
    let ac = ctx
        .cfg
        .approximation
        .as_ref()
        .ok_or_else(|| Failure::parse("config has no `approximation` section"))?;
    let m = ac.measure.unwrap_or_default();
    let cert = match mode {
        Mode::A => {
            let s_theta = ac.s_bound_theta.or_else(|| p.p_theta(ac.theta).ok().and_then(|pt| ctx.cfg.s_bound_for(&pt.spec())));
            certify_c0_cloud(&a, &p, ac.theta, epsilon, s_theta, ac.tau, &m)
        }
        Mode::B => {
            let (p0, q) = match (ac.p0, ac.q) {
                (Some(p0), Some(q)) => (p0, q),
                _ => return Err(Failure::parse("mode b needs `approximation.p0` and `approximation.q`")),
            };
            Decomposition::solve(&p, p0, ac.theta).and_then(|d| {
                let s_theta = ac.s_bound_theta.or_else(|| ctx.cfg.s_bound_for(&d.p_theta));
                certify_c0_variation(&a, &p, &d, q, epsilon, s_theta, None, &m)
            })
        }
    }
    .map_err(Failure::precondition)?;
    let cert_bytes = render_certificate(&cert)?;
    let cert_path = persist(&ctx.out, "certificate", &cert_bytes, None)?.json;
    let replay = replay_certificate(&cert);
    let honesty = honesty_check(&cert, &a).map_err(Failure::domain)?;
    let oracle = match ac.oracle_check {
        Some(o) => {
            let budget = OracleBudget { seed: ctx.cfg.seed, ..OracleBudget::default() };
            Some(oracle_consistency(&cert, &a, &p, o.size, o.span, &budget).map_err(Failure::domain)?)
        }
        None => None,
    };
    let ok = replay.ok && honesty.pass && oracle.as_ref().is_none_or(|o| o.pass);
    let r = ApproximateReport {
        certificate_file: cert_path.display().to_string(),
        certificate: cert,
        replay,
        honesty,
        oracle,
    };
    let csv = csv_bytes(
        &["n0", "delta0", "stage1", "stage2", "certified_total", "epsilon", "valid"],
        &[vec![
            r.certificate.stage1.n0.to_string(),
            format!("{:?}", r.certificate.stage2.delta0),
            format!("{:?}", r.certificate.stage1.bound),
            format!("{:?}", r.certificate.stage2.bound),
            format!("{:?}", r.certificate.certified_total),
            format!("{:?}", r.certificate.epsilon),
            ok.to_string(),
        ]],
    );
    emit(ctx, "approximate", &r, Some(csv))?;
    if ok {
        Ok(())
    } else {
        Err(Failure::violation("certificate failed replay, honesty or oracle consistency"))
    }
}

fn render_certificate(c: &ApproximationCertificate) -> Result<Vec<u8>, Failure> {
    let mut bytes = serde_json::to_vec_pretty(c).map_err(|e| Failure::io(format!("serializing certificate: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn replay(ctx: &Context, certificate: &Path) -> Result<(), Failure> {
    let cert: ApproximationCertificate = serde_json::from_str(&read(certificate)?)
        .map_err(|e| Failure::parse(format!("{}: {e}", certificate.display())))?;
    let r = replay_certificate(&cert);
    let rows: Vec<Vec<String>> = r
        .checks
        .iter()
        .map(|c| vec![c.name.clone(), format!("{:?}", c.stored), format!("{:?}", c.recomputed), c.pass.to_string()])
        .collect();
    emit(ctx, "replay", &r, Some(csv_bytes(&["check", "stored", "recomputed", "pass"], &rows)))?;
    if r.ok {
        Ok(())
    } else {
        let failed: Vec<&str> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        Err(Failure::violation(format!("replay failed: {}", failed.join("; "))))
    }
}

pub fn suite(ctx: &Context) -> Result<(), Failure> {
    let sc = ctx.cfg.suite.as_ref().ok_or_else(|| Failure::parse("config has no `suite` section"))?;
    let report = run_property_suite(sc);
    let mut csv = Vec::new();
    report.write_csv(&mut csv).map_err(|e| Failure::io(e.to_string()))?;
    emit(ctx, "suite", &report, Some(csv))?;
    eprintln!(
        "suite: {} rows, {} hard violations, {} soft misses, {} errors",
        report.rows.len(),
        report.hard_violations,
        report.soft_misses,
        report.errors.len()
    );
    for e in &report.errors {
        eprintln!("error: {e}");
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::violation("suite reported violations"))
    }
}

#[derive(Serialize)]
struct SymbolNorm {
    symbol: String,
    size: usize,
    span: f64,
    norm: f64,
}

#[derive(Serialize)]
struct OracleReport {
    symbols: Vec<SymbolNorm>,
    interpolation: Vec<(String, RieszThorinReport)>,
    violations: usize,
}

pub fn oracle(ctx: &Context, files: &[PathBuf]) -> Result<(), Failure> {
    let oc = ctx.cfg.oracle.as_ref().ok_or_else(|| Failure::parse("config has no `oracle` section"))?;
    let budget = oc.budget.unwrap_or(OracleBudget { seed: ctx.cfg.seed, ..OracleBudget::default() });
    let mut symbols: Vec<Symbol> = files.iter().map(|f| load_symbol(f)).collect::<Result<_, _>>()?;
    for spec in ctx.cfg.symbols.iter().flatten() {
        symbols.push(Symbol::from_spec(spec).map_err(|e| Failure::parse(format!("config symbol: {e}")))?);
    }
    let mut norms = Vec::new();
    if !symbols.is_empty() {
        let p = exponent(&ctx.cfg)?;
        let space = cyclic_space(&p, oc.size, oc.span).map_err(Failure::domain)?;
        let (xs, _) = cyclic_nodes(oc.size, oc.span);
        for (i, a) in symbols.iter().enumerate() {
            let m = multiplier_matrix(&a.sample(&xs));
            let b = OracleBudget { seed: budget.seed.wrapping_add(i as u64), ..budget };
            let norm = opnorm_on(&m, &space, &b).map_err(Failure::domain)?;
            let name = a.name().map(String::from).unwrap_or_else(|| format!("symbol{i}"));
            norms.push(SymbolNorm { symbol: name, size: oc.size, span: oc.span, norm });
        }
    }
    let mut interpolation = Vec::new();
    if let Some(rt) = &oc.riesz_thorin {
        let mut families = vec![(false, "constant")];
        if rt.variable.is_some() {
            families.push((true, "variable"));
        }
        for (variable, label) in families {
            let corpus = riesz_thorin_corpus(rt, ctx.cfg.seed, variable).map_err(Failure::domain)?;
            for (m, (a, s0, s1)) in corpus.iter().enumerate() {
                let b = OracleBudget { seed: budget.seed.wrapping_add(m as u64), ..budget };
                let rep = check_riesz_thorin(a, s0, s1, &rt.thetas, &b).map_err(Failure::domain)?;
                interpolation.push((format!("{label}-{m:03}"), rep));
            }
        }
    }
    let violations = interpolation.iter().map(|(_, r)| r.violations).sum();
    let mut rows: Vec<Vec<String>> = norms
        .iter()
        .map(|n| vec![n.symbol.clone(), "opnorm".into(), format!("{:?}", n.norm), String::new(), "true".into()])
        .collect();
    for (case, rep) in &interpolation {
        for r in &rep.rows {
            rows.push(vec![
                case.clone(),
                format!("interpolation-{}", r.theta),
                format!("{:?}", r.lhs),
                format!("{:?}", r.rhs),
                (!r.violation).to_string(),
            ]);
        }
    }
    let report = OracleReport { symbols: norms, interpolation, violations };
    emit(ctx, "oracle", &report, Some(csv_bytes(&["case", "check", "lhs", "rhs", "pass"], &rows)))?;
    if violations == 0 {
        Ok(())
    } else {
        Err(Failure::violation(format!("{violations} interpolation violations")))
    }
}
