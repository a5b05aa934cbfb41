use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn scmnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scmnet")).args(args).env("RUST_LOG", "warn").output().unwrap()
}

fn ok(args: &[&str]) {
    let out = scmnet(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const QUICK: [&str; 6] = ["--ntraj", "16", "--tmax", "20", "--points", "101"];

#[test]
fn manifest_lists_every_artifact_with_its_hash() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("sim");
    let mut args = vec!["simulate", "--sites", "5", "--zeta", "2", "--seed", "9", "--gnuplot", "--out", s(&out)];
    args.extend(QUICK);
    ok(&args);
    let m = manifest(&out);
    assert_eq!(m["command"], "simulate");
    assert_eq!(m["seed"], 9);
    assert_eq!(m["config"]["resolved"]["network"]["sites"], 5);
    let names: Vec<&str> = m["artifacts"].as_array().unwrap().iter().map(|a| a["path"].as_str().unwrap()).collect();
    assert!(names.contains(&"dynamics.csv") && names.contains(&"summary.csv") && names.contains(&"dynamics.dat"));
    for a in m["artifacts"].as_array().unwrap() {
        let bytes = std::fs::read(out.join(a["path"].as_str().unwrap())).unwrap();
        assert_eq!(a["sha256"].as_str().unwrap(), hex::encode(Sha256::digest(&bytes)));
        assert_eq!(a["bytes"].as_u64().unwrap(), bytes.len() as u64);
    }
    let csv = std::fs::read_to_string(out.join("dynamics.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "time,sink,std_error");
    assert_eq!(csv.lines().count(), 102);
    let dat = std::fs::read_to_string(out.join("dynamics.dat")).unwrap();
    assert!(dat.starts_with('#'));
    assert_eq!(dat.lines().filter(|l| !l.starts_with('#')).count(), 101);
}

#[test]
fn plot_files_only_on_request() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("sim");
    let mut args = vec!["simulate", "--sites", "4", "--out", s(&out)];
    args.extend(QUICK);
    ok(&args);
    assert!(out.join("dynamics.csv").exists());
    assert!(!out.join("dynamics.dat").exists());
}

#[test]
fn flags_override_the_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("run.json");
    std::fs::write(&config, r#"{"sites": 6, "seed": 4, "ntraj": 8, "tmax": 10, "points": 51, "zeta": 3}"#).unwrap();
    let out = tmp.path().join("sim");
    ok(&["simulate", "--config", s(&config), "--seed", "5", "--out", s(&out)]);
    let m = manifest(&out);
    assert_eq!(m["seed"], 5);
    let resolved = &m["config"]["resolved"];
    assert_eq!(resolved["network"]["sites"], 6);
    assert_eq!(resolved["settings"]["n_traj"], 8);
    let csv = std::fs::read_to_string(out.join("dynamics.csv")).unwrap();
    assert_eq!(csv.lines().count(), 52);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("run.json");
    std::fs::write(&config, r#"{"sitez": 6}"#).unwrap();
    let out = scmnet(&["simulate", "--config", s(&config), "--out", s(&tmp.path().join("x"))]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("sitez"));
}

#[test]
fn invalid_inputs_fail_cleanly() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("x");
    let cases: [&[&str]; 5] = [
        &["simulate", "--zeta", "-1"],
        &["sweep", "--zeta-min", "10", "--zeta-max", "1"],
        &["simulate", "--pattern", "sideways"],
        &["simulate", "--workers", "0"],
        &["theta-sweep", "--thetas", "7"],
    ];
    for case in cases {
        let mut args = case.to_vec();
        args.extend(["--out", s(&dir)]);
        args.extend(QUICK);
        let out = scmnet(&args);
        assert!(!out.status.success(), "{case:?} should fail");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn checkpoint_from_other_settings_is_refused() {
    let tmp = tempfile::tempdir().unwrap();
    let ckpt = tmp.path().join("ga.json");
    let (a, b, c) = (tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c"));
    let base = [
        "optimize", "--network", "fc", "--sites", "3", "--pool", "4", "--generations", "2", "--ntraj", "8",
        "--tmax", "10", "--points", "51", "--checkpoint", s(&ckpt),
    ];
    let mut first = base.to_vec();
    first.extend(["--out", s(&a)]);
    ok(&first);
    assert!(ckpt.exists());
    let mut resumed = base.to_vec();
    resumed.extend(["--out", s(&b)]);
    ok(&resumed);
    assert_eq!(
        std::fs::read(a.join("generations.csv")).unwrap(),
        std::fs::read(b.join("generations.csv")).unwrap()
    );
    let mut other = base.to_vec();
    other.extend(["--seed", "3", "--out", s(&c)]);
    let out = scmnet(&other);
    assert!(!out.status.success());
}

#[test]
fn optimized_profile_feeds_reshuffle() {
    let tmp = tempfile::tempdir().unwrap();
    let opt = tmp.path().join("opt");
    ok(&[
        "optimize", "--pool", "4", "--generations", "1", "--ntraj", "8", "--tmax", "4", "--points", "101",
        "--out", s(&opt),
    ]);
    let profile = opt.join("best_profile.json");
    let out = tmp.path().join("re");
    ok(&[
        "reshuffle", "--noise-profile", s(&profile), "--samples", "4", "--ntraj", "8", "--tmax", "4", "--points",
        "101", "--out", s(&out),
    ]);
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary.starts_with("samples,baseline,outperform_fraction"));
    assert_eq!(std::fs::read_to_string(out.join("reshuffle.csv")).unwrap().lines().count(), 5);
}

#[test]
fn validate_reports_through_the_exit_code() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("v");
    let r = scmnet(&["validate", "--ntraj", "200", "--tmax", "10", "--points", "21", "--out", s(&out)]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let table = std::fs::read_to_string(out.join("validation.csv")).unwrap();
    assert!(table.lines().count() > 1);
    let bad = scmnet(&["validate", "--sites", "1", "--out", s(&out)]);
    assert_eq!(bad.status.code(), Some(1));
}
