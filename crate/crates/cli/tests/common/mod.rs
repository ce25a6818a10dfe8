#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};
use vlex_core::catalog;
use vlex_core::oracle::{RieszThorinConfig, SuiteConfig};

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn vlex(args: &[&str], dir: &Path) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_vlex"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("vlex runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn write_json(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

pub fn result(run: &Run) -> Value {
    let v: Value = serde_json::from_str(&run.stdout).unwrap_or_else(|e| panic!("{e}: {}\n{}", run.stdout, run.stderr));
    v["result"].clone()
}

pub fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// The suite config shipped as `configs/suite-default.json`.
pub fn default_suite() -> SuiteConfig {
    SuiteConfig {
        seed: 0,
        size: 32,
        span: 8.0,
        symbols: catalog::symbols().unwrap().iter().map(|s| s.spec()).collect(),
        exponents: catalog::suite_exponents().unwrap(),
        deltas: vec![1.0, 0.5, 0.25, 0.125],
        budget: None,
        riesz_thorin: Some(RieszThorinConfig {
            matrices: 100,
            size: 8,
            p0: 2.0,
            p1: 4.0,
            thetas: vec![0.25, 0.5, 0.75],
            variable: Some([1.5, 4.0]),
        }),
    }
}

pub fn default_suite_json() -> String {
    serde_json::to_string_pretty(&json!({ "seed": 0, "suite": default_suite() })).unwrap() + "\n"
}
