//! External-interface checks for the binary: subcommands, flag/file/env
//! precedence, exit codes, and byte-identical reports for identical
//! configs.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nonarch"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn localize_norm_matches_the_exact_value() {
    let out = run(&["localize-norm", "--i", "3", "--j", "5", "--depth", "6"]);
    assert!(out.status.success());
    let report = json_of(&out);
    assert_eq!(report["results"]["upper"], "2");
    assert_eq!(report["results"]["lower"], "2");
    assert_eq!(report["results"]["exact"], true);
}

#[test]
fn spectral_trace_ends_at_the_pinned_value() {
    let out = run(&["spectral", "--n-max", "1024"]);
    assert!(out.status.success());
    let report = json_of(&out);
    let trace = report["results"]["trace"].as_array().unwrap();
    assert_eq!(trace.last().unwrap()["lognorm"], "11/1024");
}

#[test]
fn reports_are_deterministic() {
    let a = run(&["uniformity-witness", "--i-max", "16", "--seed", "42"]);
    let b = run(&["uniformity-witness", "--i-max", "16", "--seed", "42"]);
    assert!(a.status.success());
    assert_eq!(
        a.stdout, b.stdout,
        "identical config must give identical bytes"
    );
}

#[test]
fn no_floating_point_in_reports() {
    let out = run(&["presentation-gap"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        !text.contains('e') || !text.contains("E-"),
        "no float exponents"
    );
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    fn scan(v: &serde_json::Value) {
        match v {
            serde_json::Value::Number(n) => {
                assert!(n.is_u64() || n.is_i64(), "float leaked into report: {n}")
            }
            serde_json::Value::Array(a) => a.iter().for_each(scan),
            serde_json::Value::Object(o) => o.values().for_each(scan),
            _ => {}
        }
    }
    scan(&report);
}

#[test]
fn exit_codes_follow_the_contract() {
    // 2: configuration errors
    let out = run(&["norms", "--r-log", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["norms", "--config", "/nonexistent/path.conf"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // 3: a failed check (monomial outside the algebra)
    let out = run(&["localize-norm", "--i", "2", "--j", "1"]);
    assert_eq!(out.status.code(), Some(3));
    // 0: passing checks
    let out = run(&["presentation-gap"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn config_file_flags_and_env_compose() {
    let dir = std::env::temp_dir().join(format!("nonarch-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let conf: PathBuf = dir.join("exp.conf");
    std::fs::write(&conf, "r_log = 2\nseed = 11\n").unwrap();

    // file value used
    let out = bin()
        .args(["presentation-gap", "--config"])
        .arg(&conf)
        .output()
        .unwrap();
    let report = json_of(&out);
    assert_eq!(report["config"]["r_log"], "2");
    assert_eq!(report["results"]["rows"][0]["linear"], "4");

    // flag overrides file
    let out = bin()
        .args(["presentation-gap", "--r-log", "1", "--config"])
        .arg(&conf)
        .output()
        .unwrap();
    assert_eq!(json_of(&out)["config"]["r_log"], "1");

    // env var supplies the default path
    let out = bin()
        .args(["presentation-gap"])
        .env("NONARCH_CONFIG", &conf)
        .output()
        .unwrap();
    assert_eq!(json_of(&out)["config"]["r_log"], "2");

    // --out writes the same report to a file
    let target = dir.join("report.json");
    let out = bin()
        .args(["norms", "--out"])
        .arg(&target)
        .output()
        .unwrap();
    assert!(out.status.success());
    let written = std::fs::read_to_string(&target).unwrap();
    assert_eq!(
        written.trim_end(),
        String::from_utf8(out.stdout).unwrap().trim_end()
    );
}
