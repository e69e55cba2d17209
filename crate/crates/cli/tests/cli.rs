use std::path::Path;
use std::process::{Command, Output};

fn normlogic(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normlogic"))
        .current_dir(dir)
        .env_remove("NORMLOGIC_CONFIG")
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn construct_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = normlogic(dir.path(), &["construct", "--out", "a.json", "--canonical", "ca.json"]);
    let b = normlogic(dir.path(), &["construct", "--out", "b.json", "--canonical", "cb.json"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(code(&b), 0);
    let read = |f: &str| std::fs::read(dir.path().join(f)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
    assert_eq!(read("ca.json"), read("cb.json"));
    assert!(stdout(&a).contains("q  = 1/8"));
    assert!(!stdout(&a).contains("[FAIL]"));
}

#[test]
fn infeasible_q_fails_construction() {
    let dir = tempfile::tempdir().unwrap();
    let o = normlogic(dir.path(), &["--q-candidates", "1/2", "construct"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("q bound"));
}

#[test]
fn compile_writes_manifest_and_sentences() {
    let dir = tempfile::tempdir().unwrap();
    let o = normlogic(dir.path(), &["compile", "x1*x1 = 2", "--out-dir", "o2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o2/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["m"], 1);
    assert_eq!(manifest["k"], 1);
    assert_eq!(manifest["aia_shape"], true);
    for f in ["A.lnp", "B.lnp", "A.seeds.json", "B.seeds.json"] {
        assert!(dir.path().join("o2").join(f).exists(), "{f}");
    }

    let o = normlogic(dir.path(), &["compile", "x1*x1 = 2", "-d", "3", "--out-dir", "o3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let a3 = std::fs::read_to_string(dir.path().join("o3/A'.lnp")).unwrap();
    assert!(a3.contains("forall"));
    assert!(dir.path().join("o3/B'.lnp").exists());
}

#[test]
fn compile_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["x", "y"] {
        let o = normlogic(dir.path(), &["compile", "x1 + x2 = 3", "--out-dir", out]);
        assert_eq!(code(&o), 0);
    }
    for f in ["A.lnp", "B.lnp", "manifest.json"] {
        let a = std::fs::read(dir.path().join("x").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("y").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
}

#[test]
fn syntax_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = normlogic(dir.path(), &["compile", "x1 = = 2"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
    let o = normlogic(dir.path(), &["compile", "s = 1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn pw_holds_at_canonical_assignment() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&normlogic(dir.path(), &["construct", "--out", "p.json", "--canonical", "c.json"])), 0);
    assert_eq!(code(&normlogic(dir.path(), &["compile", "--gadget", "pW", "--params", "p.json", "--out-dir", "g"])), 0);
    let o = normlogic(dir.path(), &["eval", "g/pW.lnp", "--params", "p.json", "--assignment", "c.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "true");
}

#[test]
fn unit_norm_has_zero_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("u.lnp"), "(forall ((v vec)) (= (norm v) 1))\n").unwrap();
    let o = normlogic(dir.path(), &["eval", "u.lnp", "--search", "1e3"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.starts_with("Counterexample"));
    let json: serde_json::Value = serde_json::from_str(out.split_once('\n').unwrap().1).unwrap();
    assert_eq!(json["vectors"]["v"], serde_json::json!([0.0, 0.0]));

    std::fs::write(dir.path().join("n.lnp"), "(forall ((v vec)) (<= 0 (norm v)))\n").unwrap();
    let o = normlogic(dir.path(), &["eval", "n.lnp", "--search", "1000"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "HoldsOnSamples 1000");
}

#[test]
fn verify_fast_suites() {
    let dir = tempfile::tempdir().unwrap();
    let o = normlogic(
        dir.path(),
        &["verify", "--suite", "construction", "--suite", "numerals", "--json", "--report", "r.json"],
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let reports: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 2);
    assert!(reports[0].get("wall_time_ms").is_none());
    assert_eq!(std::fs::read_to_string(dir.path().join("r.json")).unwrap(), stdout(&o));

    let o = normlogic(dir.path(), &["verify", "--suite", "nope"]);
    assert_eq!(code(&o), 2);
    let o = normlogic(dir.path(), &["verify"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn config_file_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), r#"{"qCandidates": ["1/2"]}"#).unwrap();
    std::fs::write(dir.path().join("typo.json"), r#"{"sede": 1}"#).unwrap();
    let o = normlogic(dir.path(), &["--config", "bad.json", "construct"]);
    assert_eq!(code(&o), 1);
    let o = normlogic(dir.path(), &["--config", "typo.json", "construct"]);
    assert_eq!(code(&o), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_normlogic"))
        .current_dir(dir.path())
        .env("NORMLOGIC_CONFIG", "bad.json")
        .arg("construct")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    // Command-line values win over the file.
    let o = normlogic(dir.path(), &["--config", "bad.json", "--q-candidates", "1/8", "construct"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn dump_boundary_prints_unit_points() {
    let dir = tempfile::tempdir().unwrap();
    let o = normlogic(dir.path(), &["eval", "--dump-boundary", "8"]);
    assert_eq!(code(&o), 0);
    let lines: Vec<_> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 8);
    let first: Vec<f64> = lines[0].split_whitespace().map(|x| x.parse().unwrap()).collect();
    assert!((first[0] - 1.0).abs() < 1e-12 && first[1].abs() < 1e-12);
}
