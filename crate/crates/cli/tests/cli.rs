use std::io::Write;
use std::process::{Command, Output};

fn pflab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pflab")).args(args).output().unwrap()
}

fn write_temp(name: &str, contents: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("pflab-{}-{name}", std::process::id()));
    std::fs::File::create(&path).unwrap().write_all(contents.as_bytes()).unwrap();
    path
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["bilinear-family", "--n", "3", "--verify"][..],
        &["quadratic-family", "--n", "3", "--verify", "--format", "text"][..],
        &["quat-triple", "--alpha", "a1", "--beta", "a2"][..],
    ] {
        let (a, b) = (pflab(args), pflab(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), Some(0));
    }
}

#[test]
fn exit_codes() {
    assert_eq!(pflab(&["bilinear-family", "--n", "1"]).status.code(), Some(2));
    assert_eq!(pflab(&["bilinear-family", "--n", "5"]).status.code(), Some(2));
    assert_eq!(pflab(&["quadratic-family", "--n", "4"]).status.code(), Some(2));
    assert_eq!(pflab(&["bilinear-family", "--n", "2", "--subset", "B00,B10,B01"]).status.code(), Some(0));

    let out = pflab(&["quat-triple", "--alpha", "a1", "--beta", "a1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parity independence failed"));

    let out = pflab(&["quat-triple", "--alpha", "a1 *", "--beta", "a2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column 5"));
}

#[test]
fn common_factor_outcomes() {
    let family = r#"{"n": 2, "forms": [["a1", "a2"], ["a2", "1+a1"], ["a1", "1+a2"], ["a2", "1+a1a2"]]}"#;
    let path = write_temp("family.json", family);
    let out = pflab(&["common-factor", "--m", "1", "--forms", path.to_str().unwrap(), "--format", "text"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("result: none"));

    let three = r#"[["a1", "a2", "a3"], ["a1a2", "a2a3", "1+a1"], ["a1a3", "a2", "1+a2a3"]]"#;
    let path = write_temp("three.json", three);
    let out = pflab(&["common-factor", "--m", "2", "--forms", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdict"], "VALID");
    assert_eq!(report["evidence"]["witness"]["rho"]["slots"].as_array().unwrap().len(), 2);

    let path = write_temp("bad.json", "[[\"a1\",");
    assert_eq!(pflab(&["common-factor", "--m", "1", "--forms", path.to_str().unwrap()]).status.code(), Some(2));
    let path = write_temp("iso.json", r#"[["a1", "1+a1"]]"#);
    let out = pflab(&["common-factor", "--m", "1", "--forms", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("isotropic"));
    assert_eq!(pflab(&["common-factor", "--m", "1", "--forms", "/nonexistent/forms.json"]).status.code(), Some(2));
}

#[test]
fn reports_embed_version_and_field() {
    let out = pflab(&["quadratic-family", "--n", "2"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["version"], pflab_core::VERSION);
    assert_eq!(report["n"], 2);
    assert_eq!(report["command"], "quadratic-family");
    assert!(report.get("timing").is_none());
    let out = pflab(&["quadratic-family", "--n", "2", "--timing"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["timing"]["elapsed_ms"].is_number());
}
