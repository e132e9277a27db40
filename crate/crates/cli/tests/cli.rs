use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_leastinterp"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["least"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    let missing = run(&["least", "--config", "/nonexistent/run.toml"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("frontend.IoError"));
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), "basepoint = [0]\ncomponents = \"(t, t^^2)\"\n");
    let out = run(&["least", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("frontend.SyntaxError"));
}

#[test]
fn dependent_generators_exit_two() {
    let out = run(&["least", "--config", config("dependent_generators.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["code"], "least.DependentGenerators");
}

#[test]
fn gap_curve_reports() {
    let out = run(&["--config", config("gap_psi.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["projection"], "-5*x^2 + 5*y");
    let out = run(&["project", "--config", config("gap_phi.toml").to_str().unwrap()]);
    assert_eq!(json(&out)["result"]["projectionIsZero"], true);
    let out = run(&["classify", "--config", config("gap_phi.toml").to_str().unwrap()]);
    let r = &json(&out)["result"];
    assert_eq!(r["gapWitness"], 5);
    assert_eq!(r["taylorian"], "false");
    let out = run(&["classify", "--config", config("gap_phi_at_one.toml").to_str().unwrap()]);
    assert_eq!(json(&out)["result"]["taylorian"], "true");
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "command = \"theta\"\nbasepoint = [0]\ncomponents = \"(t, t^2)\"\n");
    let out = run(&["--config", cfg.to_str().unwrap(), "--degree", "3"]);
    let rows = json(&out)["result"]["rows"].as_array().unwrap().len();
    assert_eq!(rows, 4);
    let target = dir.path().join("out.json");
    let out = run(&["least", "--config", cfg.to_str().unwrap(), "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["command"], "least");
}

#[test]
fn report_all_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["difference_phi.toml", "dinv_not_bundle.toml", "gap_phi.toml", "least_generators.toml"] {
        let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
        for out in [&a, &b] {
            let o = run(&["report-all", "--config", config(name).to_str().unwrap(), "--out", out.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0), "{name}");
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{name}");
    }
}
