use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fimreg(args: &[&str]) -> Output {
    fimreg_env(args, &[])
}

fn fimreg_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fimreg"));
    cmd.args(args).env_remove("FIMREG_FIELD");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("run fimreg")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn build(dir: &Path, name: &str, extra: &[&str]) -> String {
    let out = path(dir, name);
    let mut args = vec!["build", "--m", "1", "--d", "1", "--r", "2", "--seed", "4", "--out", &out];
    args.extend_from_slice(extra);
    let o = fimreg(&args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    out
}

#[test]
fn build_validate_homology_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let pres = build(dir.path(), "p.json", &[]);
    let module = build(dir.path(), "m.json", &["--module"]);
    for f in [&pres, &module] {
        let o = fimreg(&["validate", f]);
        assert_eq!(code(&o), 0);
        assert!(stdout(&o).contains(": ok"));
    }
    let a = fimreg(&["homology", &pres, "--max-i", "2", "--json"]);
    let b = fimreg(&["homology", &module, "--max-i", "2", "--json", "--engine", "koszul"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    let table: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(table["N"], 4);
    assert_eq!(table["I"], 2);

    let o = fimreg(&["homology", &pres, "--max-i", "2", "--oracle"]);
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("oracle agrees"));
}

#[test]
fn build_is_deterministic_and_default_window_is_two_above() {
    let dir = tempfile::tempdir().unwrap();
    let a = std::fs::read(build(dir.path(), "a.json", &[])).unwrap();
    let b = std::fs::read(build(dir.path(), "b.json", &[])).unwrap();
    assert_eq!(a, b);
    let m: Value = serde_json::from_slice(&std::fs::read(build(dir.path(), "c.json", &["--module"])).unwrap()).unwrap();
    assert_eq!(m["N"], 4);
}

#[test]
fn field_comes_from_flag_then_environment() {
    let dir = tempfile::tempdir().unwrap();
    let read_field = |f: &str| -> Value {
        let v: Value = serde_json::from_slice(&std::fs::read(f).unwrap()).unwrap();
        v["field"].clone()
    };
    let default = build(dir.path(), "d.json", &[]);
    assert_eq!(read_field(&default)["p"], 101);

    let out = path(dir.path(), "e.json");
    let args = ["build", "--m", "1", "--d", "1", "--r", "1", "--seed", "0", "--out", &out];
    let o = fimreg_env(&args, &[("FIMREG_FIELD", "p=2")]);
    assert_eq!(code(&o), 0);
    assert_eq!(read_field(&out)["p"], 2);

    let o = fimreg_env(&[&args[..], &["--field", "rationals"]].concat(), &[("FIMREG_FIELD", "p=2")]);
    assert_eq!(code(&o), 0);
    assert_eq!(read_field(&out)["kind"], "rationals");

    let o = fimreg_env(&args, &[("FIMREG_FIELD", "p=4")]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("FIMREG_FIELD"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let module = path(dir.path(), "m.json");
    let args = ["build", "--m", "1", "--d", "1", "--r", "1", "--seed", "0", "-N", "2", "--gens", "1", "--rels", "0", "--module", "--out", &module];
    assert_eq!(code(&fimreg(&args)), 0);

    // A transposition matrix that is not an involution.
    let mut v: Value = serde_json::from_slice(&std::fs::read(&module).unwrap()).unwrap();
    let deg = v["degrees"].as_array_mut().unwrap().iter_mut().find(|d| d["dim"].as_u64().unwrap() >= 2 && d["n"][0].as_u64().unwrap() >= 2).unwrap();
    let dim = deg["dim"].as_u64().unwrap() as usize;
    let mut t = vec![vec!["0".to_string(); dim]; dim];
    for (k, row) in t.iter_mut().enumerate() {
        row[k] = "1".into();
    }
    t[0][0] = "2".into();
    deg["transp"][0][0] = serde_json::to_value(t).unwrap();
    let bad = path(dir.path(), "bad.json");
    std::fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let o = fimreg(&["validate", &bad]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("violation: involution"));

    assert_eq!(code(&fimreg(&["validate", &path(dir.path(), "missing.json")])), 2);
    std::fs::write(path(dir.path(), "junk.json"), "{").unwrap();
    assert_eq!(code(&fimreg(&["validate", &path(dir.path(), "junk.json")])), 2);
    assert_eq!(code(&fimreg(&["rho", "--m", "0", "--d", "1", "--r", "1"])), 2);
    assert_eq!(code(&fimreg(&["verify", "--campaign", "ce-m1", "--m", "2"])), 2);

    let big = path(dir.path(), "big.json");
    let args = ["build", "--m", "2", "--d", "2", "--r", "2", "--seed", "0", "-N", "8", "--out", &big];
    assert_eq!(code(&fimreg(&args)), 0);
    let o = fimreg(&["homology", &big, "--max-i", "2", "--oracle"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("budget exceeded"));
    let o = fimreg(&["compare-oracle", "--m", "2", "--d", "2", "--r", "2", "-N", "8", "-I", "2", "--count", "1"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn rho_output_formats() {
    let o = fimreg(&["rho", "--m", "2", "--d", "1", "--r", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("21"));
    let o = fimreg(&["rho", "--m", "2", "--table", "2", "2", "--format", "csv"]);
    assert!(stdout(&o).starts_with("m,d,r,rho,rho_prime,rho_dprime\n"));
    assert!(stdout(&o).contains("\n2,1,1,21,7,8\n"));
    let o = fimreg(&["rho", "--m", "2", "--table", "2", "2", "--format", "json"]);
    let t: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(t["rows"].as_array().unwrap().len(), 2 * 4 * 4);
}

#[test]
fn functors_check_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let pres = path(dir.path(), "p.json");
    let args = ["build", "--m", "2", "--d", "1", "--r", "1", "--seed", "2", "-N", "4", "--out", &pres];
    assert_eq!(code(&fimreg(&args)), 0);
    for check in ["four-term", "two-row", "church", "split-h0", "restrict-free"] {
        let o = fimreg(&["functors", &pres, "--check", check, "--max-i", "2"]);
        assert_eq!(code(&o), 0, "{check}: {}", stderr(&o));
        let r: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
        assert_eq!(r["check"], check);
        assert_eq!(r["violations"].as_array().unwrap().len(), 0);
    }
    assert_eq!(code(&fimreg(&["functors", &pres, "--check", "nonsense"])), 2);
}

#[test]
fn campaign_reports_are_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "--campaign", "four-term", "--m", "2", "--d", "1", "--r", "2", "-N", "4", "-I", "2", "--count", "6", "--seed", "9", "--json"];
    let a = fimreg_env(&args, &[("RAYON_NUM_THREADS", "1")]);
    let b = fimreg_env(&args, &[("RAYON_NUM_THREADS", "4")]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let report: Value = serde_json::from_slice(&a.stdout).unwrap();
    let seeds: Vec<u64> = report["instances"].as_array().unwrap().iter().map(|i| i["seed"].as_u64().unwrap()).collect();
    assert_eq!(seeds, (9..15).collect::<Vec<_>>());
    assert_eq!(report["verdict"], "pass");

    let cfg = path(dir.path(), "cfg.json");
    std::fs::write(&cfg, r#"{"campaign":"four-term","m":2,"d":1,"r":2,"N":4,"I":2,"count":6,"seed":0}"#).unwrap();
    let out = path(dir.path(), "report.json");
    let c = fimreg(&["verify", "--config", &cfg, "--seed", "9", "--json", "--out", &out]);
    assert_eq!(code(&c), 0);
    assert_eq!(c.stdout, a.stdout);
    assert_eq!(std::fs::read_to_string(&out).unwrap().trim_end(), stdout(&a).trim_end());
}

#[test]
fn compare_oracle_subcommand() {
    let o = fimreg(&["compare-oracle", "--m", "1", "--d", "1", "--r", "2", "-N", "3", "-I", "2", "--count", "4", "--field", "p=2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).trim_end().ends_with("pass"));
}
