use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn genform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genform"))
        .args(args)
        .env_remove("GENFORM_SEED")
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn identities_passes_with_schema() {
    let out = genform(&["identities", "--dim", "2", "--epsilon", "1", "--trials", "50", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json_stdout(&out);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["pass"], true);
    assert_eq!(report["failures"].as_array().map(Vec::len), Some(0));
    assert_eq!(report["suite"], "all");
}

#[test]
fn identities_accepts_negative_epsilon_and_single_suite() {
    let out = genform(&["identities", "--dim", "3", "--epsilon", "-1/2", "--trials", "5", "--suite", "cartan"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_stdout(&out);
    assert_eq!(report["epsilon"], "-1/2");
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["name"].as_str().unwrap().starts_with("cartan.")));
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |seed: Option<&str>, env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_genform"));
        cmd.args(["identities", "--dim", "2", "--trials", "3", "--suite", "gform"]).env_remove("GENFORM_SEED");
        if let Some(s) = seed {
            cmd.args(["--seed", s]);
        }
        if let Some(e) = env {
            cmd.env("GENFORM_SEED", e);
        }
        let out = cmd.output().unwrap();
        assert!(out.status.success());
        json_stdout(&out)["seed"].clone()
    };
    assert_eq!(run(None, Some("41")), 41);
    assert_eq!(run(Some("3"), Some("41")), 3);
    assert_eq!(run(None, None), 0);
}

#[test]
fn report_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = genform(&["identities", "--dim", "2", "--trials", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
}

#[test]
fn oscillator_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let out = genform(&[
        "oscillator", "--epsilon", "0", "--v0", "1", "--l", "1", "--t-end", "5", "--dt", "0.001", "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary = json_stdout(&out);
    assert!(summary["max_err"].as_f64().unwrap() < 1e-6);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,q1,p1"));
    assert_eq!(lines.count(), 5001);
}

#[test]
fn oscillator_rejects_bad_step() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let out = genform(&["oscillator", "--epsilon", "1", "--v0", "1", "--t-end", "1", "--dt", "-0.1", "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hamiltonian_fixture_passes() {
    let out = genform(&["hamiltonian", "--fixture", &fixture("hamiltonian_n4.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_stdout(&out)["defining_relation_zero"], true);
}

#[test]
fn connection_fixture_cases() {
    let out = genform(&["connection-thm", "--fixture", &fixture("connection_case_i_n3.json"), "--case", "i"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_stdout(&out)["nonmetricity_zero"], true);
    let out = genform(&["connection-thm", "--fixture", &fixture("connection_case_i_n3.json"), "--case", "ii"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/epsilon"));
}

#[test]
fn cover_two_chart_report() {
    let out = genform(&["cover", "--fixture", &fixture("two_chart.json"), "--epsilon", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json_stdout(&out);
    assert_eq!(report["case"], "ii");
    assert_eq!(report["dm_tilde"], "2");
    assert_eq!(report["glued"], true);
}

#[test]
fn cover_failures_and_errors() {
    let out = genform(&["cover", "--fixture", &fixture("broken_triple.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_stdout(&out)["pass"], false);
    let out = genform(&["cover", "--fixture", &fixture("two_chart.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_fixture_reports_pointer() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let bad = r#"{"dim": 1, "charts": [{"id": "1", "xi": "x1 +", "tau": {"r": "1", "s": "0"}}], "overlaps": [], "triples": []}"#;
    std::fs::write(&path, bad).unwrap();
    let out = genform(&["cover", "--fixture", path.to_str().unwrap(), "--epsilon", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("/charts/0/xi"), "{stderr}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(genform(&["identities"]).status.code(), Some(2));
    assert_eq!(genform(&["identities", "--dim", "2", "--epsilon", "1/0"]).status.code(), Some(2));
    assert_eq!(genform(&["identities", "--dim", "0"]).status.code(), Some(2));
    assert_eq!(genform(&["nonsense"]).status.code(), Some(2));
}
