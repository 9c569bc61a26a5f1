use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use widom_cauchy::cli::Report;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_widom-cauchy"));
    c.env_remove("WC_THREADS");
    c
}

fn bundled(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "configs", name].iter().collect()
}

fn run(command: &str, config: &Path, out: &Path) -> Output {
    bin()
        .args([command, "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn default_config_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run("verify-theorem", &bundled("verify-theorem.json"), dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("verify-theorem.json")).unwrap();
    let report: Report = serde_json::from_str(&text).unwrap();
    assert!(report.summary.passed >= 12);
    assert_eq!(report.schema_version, "1");
    // Reading the file back gives the same report, field for field.
    assert_eq!(serde_json::to_string_pretty(&report).unwrap(), text);
}

#[test]
fn invalid_q_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"schema_version": "1", "q": [1.5], "zeta": [[0.3, 0.0]], "k": [0],
            "h": [[{"power": 1, "coeff": [1.0, 0.0]}]]}"#,
    );
    let out_dir = dir.path().join("out");
    let out = run("verify-theorem", &cfg, &out_dir);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 < q < 1"));
    assert!(!out_dir.exists(), "no report on validation failure");
}

#[test]
fn every_violation_is_listed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"schema_version": "1", "q": [0.0], "zeta": [[0.95, 0.0]], "k": [9],
            "h": [[{"power": 1, "coeff": [1.0, 0.0]}]]}"#,
    );
    let out = run("verify-theorem", &cfg, &dir.path().join("out"));
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.lines().count() >= 3, "{err}");
}

#[test]
fn unparsable_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "{ not json");
    let out = run("verify-theorem", &cfg, dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_has_header_and_one_row_per_case() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"schema_version": "1", "q": [null], "zeta": [[0.3, 0.0]], "k": [1],
            "h": [[{"power": 2, "coeff": [1.0, 0.0]}]], "grid_size": 512}"#,
    );
    let out = run("verify-theorem", &cfg, dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("verify-theorem.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "q,zeta_re,zeta_im,k,lhs_re,lhs_im,rhs_re,rhs_im,oracle_re,oracle_im,rel_err,pass"
    );
    assert_eq!(lines.len(), 2);
    assert!(lines[1].ends_with(",true"));
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = bundled("verify-theorem.json");
    let mut cases = Vec::new();
    for (threads, env) in [("1", None), ("3", None), ("1", Some("2"))] {
        let out_dir = dir.path().join(format!("{threads}-{env:?}"));
        let mut c = bin();
        c.args(["verify-lemma", "--config"]).arg(&cfg).arg("--out").arg(&out_dir);
        match env {
            Some(n) => {
                c.env("WC_THREADS", n);
            }
            None => {
                c.args(["--threads", threads]);
            }
        }
        assert_eq!(c.output().unwrap().status.code(), Some(0));
        let report: Report =
            serde_json::from_str(&std::fs::read_to_string(out_dir.join("verify-lemma.json")).unwrap()).unwrap();
        cases.push(serde_json::to_string(&report.cases).unwrap());
    }
    assert!(cases.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn bad_thread_variable_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["verify-theorem", "--config"])
        .arg(bundled("disk.json"))
        .arg("--out")
        .arg(dir.path())
        .env("WC_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
