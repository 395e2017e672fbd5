use std::path::Path;
use std::process::{Command, Output};

use qac::io::{load_state, read_json, MatrixFile, MubFile};
use qac::linalg::unitarity_residual;

fn qac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qac")).args(args).output().unwrap()
}

fn qac_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qac")).current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

const BELL: &str = r#"{"dims":[2,2],"pure":{"re":[0.7071067811865476,0,0,0.7071067811865476],"im":[0,0,0,0]}}"#;

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bell.json", BELL);
    write(dir.path(), "trace.json", r#"{"dims":[2],"matrix":{"re":[[0.45,0],[0,0.45]],"im":[[0,0],[0,0]]}}"#);
    write(dir.path(), "broken.json", "{\"dims\": [2], ");
    assert_eq!(qac_in(dir.path(), &["validate", "bell.json"]).status.code(), Some(0));
    let bad = qac_in(dir.path(), &["validate", "trace.json"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("TraceNotOne residual 0.1"), "{}", stdout(&bad));
    assert_eq!(qac_in(dir.path(), &["validate", "broken.json"]).status.code(), Some(64));
    assert_eq!(qac_in(dir.path(), &["validate", "missing.json"]).status.code(), Some(64));
}

#[test]
fn measure_examples() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bell.json", BELL);
    write(dir.path(), "mixed2.json", r#"{"dims":[2],"matrix":{"re":[[0.5,0],[0,0.5]],"im":[[0,0],[0,0]]}}"#);
    write(dir.path(), "pure3.json", r#"{"dims":[3],"pure":{"re":[0.6,0,0],"im":[0,0.8,0]}}"#);
    let value = |file: &str, m: &str| -> f64 {
        let o = qac_in(dir.path(), &["measure", file, m]);
        assert_eq!(o.status.code(), Some(0), "{m}: {}", String::from_utf8_lossy(&o.stderr));
        stdout(&o).trim().parse().unwrap()
    };
    assert!((value("bell.json", "avg-correlation") - 0.5).abs() < 1e-11);
    assert!((value("bell.json", "avg-correlation-mub") - 0.5).abs() < 1e-11);
    assert!((value("bell.json", "qob") - 0.5).abs() < 1e-11);
    assert!((value("bell.json", "twirling") - 0.75).abs() < 1e-11);
    assert!(value("mixed2.json", "avg-coherence").abs() < 1e-11);
    assert!((value("pure3.json", "avg-coherence") - 0.5).abs() < 1e-11);
    assert!((value("pure3.json", "avg-coherence-mub") - 0.5).abs() < 1e-11);

    let json = qac_in(dir.path(), &["measure", "bell.json", "twirling-mc", "--json", "--n", "2000", "--seed", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert!(v["stderr"].as_f64().unwrap() > 0.0);
    assert_eq!(v["samples"], 2000);

    assert_eq!(qac_in(dir.path(), &["measure", "bell.json", "entropy"]).status.code(), Some(2));
    assert_eq!(qac_in(dir.path(), &["measure", "mixed2.json", "correlation"]).status.code(), Some(1));
    assert_eq!(qac_in(dir.path(), &["measure", "bell.json", "skew"]).status.code(), Some(64));
}

#[test]
fn mub_round_trip_and_rejections() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qac_in(dir.path(), &["mub", "--dim", "3", "--out", "m3.json"]).status.code(), Some(0));
    let cert = qac_in(dir.path(), &["mub", "--certify", "m3.json"]);
    assert_eq!(cert.status.code(), Some(0));
    assert!(stdout(&cert).contains("pass"));
    assert_eq!(qac_in(dir.path(), &["mub", "--dim", "6"]).status.code(), Some(1));
    assert_eq!(qac_in(dir.path(), &["mub", "--dim", "4", "--out", "m4.json"]).status.code(), Some(0));
    let m4: MubFile = read_json(&dir.path().join("m4.json")).unwrap();
    assert_eq!(m4.bases.len(), 5);

    // Dropping one basis leaves an incomplete set.
    let mut short = m4.clone();
    short.bases.pop();
    std::fs::write(dir.path().join("short.json"), serde_json::to_string(&short).unwrap()).unwrap();
    assert_eq!(qac_in(dir.path(), &["mub", "--certify", "short.json"]).status.code(), Some(1));
}

#[test]
fn random_is_deterministic_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    let a = qac(&["random", "--kind", "bipartite", "--dims", "2,3", "--seed", "5"]);
    let b = qac(&["random", "--kind", "bipartite", "--dims", "2,3", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    for seed in 0..100 {
        let path = dir.path().join(format!("s{seed}.json"));
        let kind = if seed % 2 == 0 { "state" } else { "pure" };
        let o = qac(&["random", "--kind", kind, "--dims", "3", "--seed", &seed.to_string(), "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        load_state(&path).unwrap();
    }
    let u = qac(&["random", "--kind", "unitary", "--dims", "4", "--seed", "1"]);
    let u: MatrixFile = serde_json::from_slice(&u.stdout).unwrap();
    assert!(unitarity_residual(&u.matrix.to_matrix().unwrap()) < 1e-12);
    let ch = qac(&["random", "--kind", "channel", "--dims", "2", "--env-dim", "3", "--seed", "1"]);
    let ch: qac::io::ChannelFile = serde_json::from_slice(&ch.stdout).unwrap();
    assert_eq!(ch.to_channel().unwrap().kraus().len(), 3);
}

#[test]
fn verify_exit_codes_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let o = qac(&["verify", "--suite", "prop4", "--dims", "2,2", "--trials", "200", "--seed", "1", "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r: qac::verify::VerifyReport = read_json(&report).unwrap();
    assert!(r.pass);
    assert_eq!(r.pass, r.checks.iter().all(|c| c.pass));
    assert_eq!(r.schema_version, 1);

    let strict = Command::new(env!("CARGO_BIN_EXE_qac"))
        .env("QAC_TOLERANCE_SCALE", "1e-40")
        .args(["verify", "--suite", "prop3", "--dims", "2,2", "--trials", "3", "--samples", "200"])
        .output()
        .unwrap();
    assert_eq!(strict.status.code(), Some(2));

    assert_eq!(qac(&["verify", "--suite", "prop9", "--dims", "2,2"]).status.code(), Some(64));
    assert_eq!(qac(&["verify", "--suite", "eq1", "--dims", "6"]).status.code(), Some(64));
    assert_eq!(qac(&["verify", "--suite", "prop3", "--dims", "2"]).status.code(), Some(64));
    assert_eq!(qac(&["verify", "--suite", "prop2", "--dims", "2,2", "--threads", "0"]).status.code(), Some(64));
}

#[test]
fn wp_reports_both_sides() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bell.json", BELL);
    let o = qac_in(dir.path(), &["wp", "bell.json", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["lhs"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!((v["rhs"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!(v["residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn help_and_usage() {
    assert_eq!(qac(&["--help"]).status.code(), Some(0));
    assert_eq!(qac(&["--version"]).status.code(), Some(0));
    assert_eq!(qac(&["teleport"]).status.code(), Some(64));
    assert_eq!(qac(&["random", "--kind", "qudit", "--dims", "2"]).status.code(), Some(64));
}
