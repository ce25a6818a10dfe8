mod common;

use common::{default_suite_json, result, vlex, workspace_root, write_json};
use serde_json::json;

fn const_exponent(p: f64) -> serde_json::Value {
    json!({ "kind": "constant", "value": p })
}

#[test]
fn shipped_suite_config_matches_catalog() {
    let path = workspace_root().join("configs/suite-default.json");
    if std::env::var_os("VLEX_REGENERATE").is_some() {
        std::fs::write(&path, default_suite_json()).unwrap();
    }
    assert_eq!(std::fs::read_to_string(&path).unwrap(), default_suite_json());
}

#[test]
fn norm_of_indicator_and_plastic_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (l, n) = (8.0, 1024usize);
    let h = 2.0 * l / n as f64;
    let mut csv = String::from("t,re,im\n");
    for j in 0..n {
        let t = -l + j as f64 * h;
        let v = if (0.0..1.0).contains(&t) { 1.0 } else { 0.0 };
        csv.push_str(&format!("{t},{v},0\n"));
    }
    std::fs::write(d.join("chi.csv"), csv).unwrap();
    let cfg = write_json(d, "p2.json", &json!({ "exponent": const_exponent(2.0) }));
    let r = vlex(&["norm", "--config", cfg.to_str().unwrap(), "chi.csv"], d);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!((result(&r)["norm"].as_f64().unwrap() - 1.0).abs() <= 2.0 * h);

    // Two unit samples with h = 1 under exponents 2 and 3: λ⁻² + λ⁻³ = 1.
    let mut csv = String::from("t,re,im\n");
    for j in 0..8 {
        let t = -4.0 + j as f64;
        let v = if t == 0.0 || t == 1.0 { 1.0 } else { 0.0 };
        csv.push_str(&format!("{t},{v},0\n"));
    }
    std::fs::write(d.join("two.csv"), csv).unwrap();
    let step = json!({ "exponent": { "kind": "pwl", "knots": [[0.0, 2.0], [1.0, 3.0]], "left_tail": 2.0, "right_tail": 3.0 } });
    let cfg = write_json(d, "step.json", &step);
    let r = vlex(&["norm", "--config", cfg.to_str().unwrap(), "two.csv"], d);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid * mid - mid - 1.0 > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    assert!((result(&r)["norm"].as_f64().unwrap() - lo).abs() < 1e-8);

    std::fs::write(d.join("empty.csv"), "").unwrap();
    assert_eq!(vlex(&["norm", "--config", cfg.to_str().unwrap(), "empty.csv"], d).code, 2);
    std::fs::write(d.join("header.csv"), "t,re,im\n").unwrap();
    assert_eq!(vlex(&["norm", "--config", cfg.to_str().unwrap(), "header.csv"], d).code, 2);
}

#[test]
fn norm_csv_format() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let mut csv = String::from("t,re,im\n");
    for j in 0..8 {
        csv.push_str(&format!("{},{},0\n", -4.0 + j as f64, if j == 4 { 1.0 } else { 0.0 }));
    }
    std::fs::write(d.join("f.csv"), csv).unwrap();
    let cfg = write_json(d, "c.json", &json!({ "exponent": const_exponent(3.0) }));
    let r = vlex(&["--format", "csv", "norm", "--config", cfg.to_str().unwrap(), "f.csv"], d);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.lines().next(), Some("norm,half_width,count"));
    assert!(r.stdout.lines().nth(1).unwrap().starts_with("1.0,"));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = write_json(d, "c.json", &json!({ "exponent": const_exponent(2.0), "colour": "red" }));
    let sym = write_json(d, "s.json", &json!({ "pieces": [{ "from": "-inf", "to": "inf", "expr": "1" }] }));
    let r = vlex(&["mulnorm", "--config", cfg.to_str().unwrap(), sym.to_str().unwrap()], d);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("colour"), "{}", r.stderr);
    let nested = write_json(d, "n.json", &json!({ "suite": { "seed": 0, "size": 8, "span": 4.0, "symbols": [], "exponents": [], "deltas": [], "extra": 1 } }));
    assert_eq!(vlex(&["suite", "--config", nested.to_str().unwrap()], d).code, 2);
}

fn whole_line(expr: &str) -> serde_json::Value {
    json!({ "pieces": [{ "from": "-inf", "to": "inf", "expr": expr }] })
}

#[test]
fn mulnorm_brackets_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let search = json!({ "seed": 0, "starts": 4, "iters": 20, "family": { "gaussians": 2 } });
    let grid = json!({ "half_width": 32.0, "count": 2048 });
    let cfg = write_json(d, "p3.json", &json!({ "exponent": const_exponent(3.0), "search": search, "grid": grid }));
    let cfg = cfg.to_str().unwrap();

    let c = write_json(d, "c.json", &whole_line("-2.5"));
    let r = vlex(&["mulnorm", "--config", cfg, c.to_str().unwrap()], d);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let est = result(&r);
    assert!((est["lower"].as_f64().unwrap() - 2.5).abs() < 1e-9);
    assert!((est["upper"].as_f64().unwrap() - 2.5).abs() < 1e-12);

    let lorentz = json!({
        "name": "lorentz",
        "pieces": [{ "from": "-inf", "to": "inf", "expr": "2/(1+x^2)" }],
        "wiener": { "constant": 0.0, "density": "exp(-abs(x))" }
    });
    let l = write_json(d, "l.json", &lorentz);
    let r = vlex(&["mulnorm", "--config", cfg, l.to_str().unwrap()], d);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let est = result(&r);
    assert!((est["upper"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    assert_eq!(est["upper_provenance"], "wiener");
    assert!(est["lower"].as_f64().unwrap() <= 2.0 + 1e-6);

    let s = write_json(d, "sin.json", &whole_line("sin(x)"));
    assert_eq!(vlex(&["mulnorm", "--config", cfg, s.to_str().unwrap()], d).code, 3);

    let bad = write_json(d, "bad.json", &whole_line("sin(x"));
    assert_eq!(vlex(&["mulnorm", "--config", cfg, bad.to_str().unwrap()], d).code, 2);
}

#[test]
fn approximate_replay_and_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = write_json(
        d,
        "a.json",
        &json!({
            "exponent": const_exponent(3.0),
            "approximation": { "theta": 0.25, "oracle_check": { "size": 32, "span": 8.0 } },
            "output": "out"
        }),
    );
    let cfg = cfg.to_str().unwrap();
    let lorentz = json!({
        "name": "lorentz",
        "pieces": [{ "from": "-inf", "to": "inf", "expr": "2/(1+x^2)" }],
        "wiener": { "constant": 0.0, "density": "exp(-abs(x))" }
    });
    let l = write_json(d, "l.json", &lorentz);
    let r = vlex(&["approximate", "--config", cfg, l.to_str().unwrap(), "--epsilon", "0.5", "--mode", "a"], d);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rep = result(&r);
    assert!(rep["certificate"]["certified_total"].as_f64().unwrap() < 0.5);
    assert_eq!(rep["certificate"]["formula"], "cloud");
    assert_eq!(rep["replay"]["ok"], true);
    assert_eq!(rep["honesty"]["pass"], true);
    assert_eq!(rep["oracle"]["pass"], true);

    let cert = rep["certificate_file"].as_str().unwrap().to_string();
    let r = vlex(&["replay", &cert], d);
    assert_eq!(r.code, 0, "{}", r.stderr);

    let mut tampered: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join(&cert)).unwrap()).unwrap();
    let s = tampered["constants"]["s_theta"].as_f64().unwrap();
    tampered["constants"]["s_theta"] = json!(s * 1.01);
    let t = write_json(d, "tampered.json", &tampered);
    let r = vlex(&["replay", t.to_str().unwrap()], d);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("c_theta"), "{}", r.stderr);

    let arctan = write_json(d, "atan.json", &whole_line("atan(x)"));
    let r = vlex(&["approximate", "--config", cfg, arctan.to_str().unwrap(), "--epsilon", "0.5"], d);
    assert_eq!(r.code, 4, "{}", r.stderr);
}

#[test]
fn approximate_mode_b() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let p = json!({ "kind": "pwl", "knots": [[-1.0, 2.0], [0.0, 3.0], [1.0, 2.0]], "left_tail": 2.0, "right_tail": 2.0 });
    let cfg = write_json(
        d,
        "b.json",
        &json!({
            "exponent": p,
            "approximation": { "theta": 0.2, "p0": 2.5, "q": 4.0 },
            "s_bounds": [],
        }),
    );
    let l = write_json(d, "l.json", &json!({ "pieces": [{ "from": "-inf", "to": "inf", "expr": "2/(1+x^2)" }] }));
    let r = vlex(&["approximate", "--config", cfg.to_str().unwrap(), l.to_str().unwrap(), "--epsilon", "1", "--mode", "b"], d);
    // p_θ is variable here and no s_bound is configured for it.
    assert_eq!(r.code, 4, "{}", r.stderr);
    assert!(r.stderr.contains("s_bound"), "{}", r.stderr);

    let solved = vlex_core::approx::Decomposition::solve(
        &vlex_core::exponent::VariableExponent::from_spec(&serde_json::from_value(p.clone()).unwrap()).unwrap(),
        2.5,
        0.2,
    )
    .unwrap();
    let cfg = write_json(
        d,
        "b2.json",
        &json!({
            "exponent": p,
            "approximation": { "theta": 0.2, "p0": 2.5, "q": 4.0 },
            "s_bounds": [{ "exponent": solved.p_theta, "value": 2.0 }],
        }),
    );
    let r = vlex(&["approximate", "--config", cfg.to_str().unwrap(), l.to_str().unwrap(), "--epsilon", "1", "--mode", "b"], d);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rep = result(&r);
    assert_eq!(rep["certificate"]["formula"], "variation");
    assert!((rep["certificate"]["constants"]["eta"].as_f64().unwrap() - 0.6).abs() < 1e-15);
}

fn small_suite(s_bound: Option<f64>, symbols: serde_json::Value) -> serde_json::Value {
    json!({
        "suite": {
            "seed": 3,
            "size": 16,
            "span": 4.0,
            "symbols": symbols,
            "exponents": [{ "exponent": const_exponent(3.0), "s_bound": s_bound }],
            "deltas": [0.5]
        }
    })
}

#[test]
fn suite_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let empty = write_json(d, "empty.json", &small_suite(None, json!([])));
    let r = vlex(&["suite", "--config", empty.to_str().unwrap(), "--out", "r"], d);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(result(&r)["rows"], json!([]));
    let csvs: Vec<_> = std::fs::read_dir(d.join("r"))
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "csv"))
        .collect();
    assert_eq!(csvs.len(), 1);

    let syms = json!([whole_line("1"), { "name": "lorentz", "pieces": [{ "from": "-inf", "to": "inf", "expr": "2/(1+x^2)" }] }]);
    let ok = write_json(d, "ok.json", &small_suite(None, syms.clone()));
    assert_eq!(vlex(&["suite", "--config", ok.to_str().unwrap()], d).code, 0);
    let bad = write_json(d, "bad.json", &small_suite(Some(0.5), syms));
    let r = vlex(&["suite", "--config", bad.to_str().unwrap()], d);
    assert_eq!(r.code, 1);
    let rows = result(&r)["rows"].as_array().unwrap().clone();
    assert!(rows.iter().any(|x| x["check"] == "stechkin" && x["pass"] == false));
}

#[test]
fn oracle_command() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = write_json(
        d,
        "o.json",
        &json!({
            "exponent": const_exponent(2.0),
            "oracle": {
                "size": 16,
                "span": 4.0,
                "riesz_thorin": { "matrices": 3, "size": 4, "p0": 2.0, "p1": 4.0, "thetas": [0.5] }
            }
        }),
    );
    let s = write_json(d, "s.json", &json!({ "name": "lorentz", "pieces": [{ "from": "-inf", "to": "inf", "expr": "2/(1+x^2)" }] }));
    let r = vlex(&["oracle", "--config", cfg.to_str().unwrap(), s.to_str().unwrap()], d);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rep = result(&r);
    // At p = 2 the cyclic multiplier is normal, so its norm is the largest |a(x_k)| = a(0) = 2.
    assert!((rep["symbols"][0]["norm"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert_eq!(rep["violations"], 0);
    assert_eq!(rep["interpolation"].as_array().unwrap().len(), 3);
}

#[test]
fn seed_flag_changes_only_seeded_fields() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = write_json(d, "e.json", &small_suite(None, json!([whole_line("1")])));
    let a = vlex(&["suite", "--config", cfg.to_str().unwrap(), "--seed", "11"], d);
    let b = vlex(&["suite", "--config", cfg.to_str().unwrap(), "--seed", "11"], d);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(v["config"]["suite"]["seed"], 11);
}
