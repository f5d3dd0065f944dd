use qcurv_cli::output::{sha256_hex, Manifest};
use std::path::Path;
use std::process::{Command, Output};

fn qcurv(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcurv"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .unwrap()
}

fn with_config(dir: &Path, toml: &str) -> String {
    let p = dir.join("run.toml");
    std::fs::write(&p, toml).unwrap();
    p.display().to_string()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn spherical_defaults_pass() {
    let d = tempfile::tempdir().unwrap();
    let o = qcurv(d.path(), &["spherical"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = json(&d.path().join("spherical_summary.json"));
    assert!(s.is_object());
    let c = json(&d.path().join("spherical_checks.json"));
    assert!(c["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn zero_radius_is_a_config_error() {
    let d = tempfile::tempdir().unwrap();
    let cfg = with_config(d.path(), "[spherical]\nr_max = 0.0\n");
    let o = qcurv(d.path(), &["--config", &cfg, "spherical"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_config_key_is_rejected() {
    let d = tempfile::tempdir().unwrap();
    let cfg = with_config(d.path(), "[spherical]\nrmax = 3.0\n");
    let o = qcurv(d.path(), &["--config", &cfg, "spherical"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_tol_scale_is_usage() {
    let d = tempfile::tempdir().unwrap();
    let o = qcurv(d.path(), &["--tol-scale=-1", "spherical"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn example_families_get_their_labels() {
    let d = tempfile::tempdir().unwrap();
    let cfg = with_config(d.path(), "[family]\nexample = \"1b\"\nparams = [5.0, 20.0, 80.0]\nexpect = \"ii\"\n");
    let o = qcurv(d.path(), &["--config", &cfg, "family"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let cfg = with_config(d.path(), "[family]\nexample = \"1a\"\nparams = [2.0, 8.0, 32.0]\nexpect = \"i\"\n");
    let o = qcurv(d.path(), &["--config", &cfg, "family"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let rep = json(&d.path().join("family_1a.json"));
    assert_eq!(rep["label"], "i");
    assert!(d.path().join("family_1b.csv").exists());
    let m = Manifest::read(d.path()).unwrap();
    assert!(m.artifacts.contains_key("family_1a.json"));
    assert!(m.artifacts.contains_key("family_1b.json"));
}

#[test]
fn wrong_expectation_exits_one() {
    let d = tempfile::tempdir().unwrap();
    let cfg = with_config(d.path(), "[family]\nexample = \"1a\"\nparams = [2.0, 8.0]\nexpect = \"ii\"\n");
    let o = qcurv(d.path(), &["--config", &cfg, "family"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_example_and_empty_params_are_usage() {
    let d = tempfile::tempdir().unwrap();
    let cfg = with_config(d.path(), "[family]\nexample = \"7\"\n");
    assert_eq!(qcurv(d.path(), &["--config", &cfg, "family"]).status.code(), Some(2));
    let cfg = with_config(d.path(), "[family]\nexample = \"1a\"\nparams = []\n");
    assert_eq!(qcurv(d.path(), &["--config", &cfg, "family"]).status.code(), Some(2));
}

#[test]
fn subcritical_total_is_rejected() {
    let d = tempfile::tempdir().unwrap();
    let cfg = with_config(d.path(), "[hybrid]\nLambda_ratio = 0.5\n");
    let o = qcurv(d.path(), &["--config", &cfg, "hybrid"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!d.path().join("manifest.json").exists());
}

#[test]
fn linearize_reports_the_normalized_kernel_element() {
    let d = tempfile::tempdir().unwrap();
    let o = qcurv(d.path(), &["linearize"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let s = json(&d.path().join("linearize_summary.json"));
    let a = s["psi0"]["a"].as_f64().unwrap();
    let alpha = s["psi0"]["alpha"].as_f64().unwrap();
    assert!((a - 8.0).abs() < 1e-6, "{a}");
    assert!((alpha - 48.0).abs() < 0.5, "{alpha}");
    let draws = std::fs::read_to_string(d.path().join("linearize_draws.csv")).unwrap();
    assert_eq!(draws.lines().count(), 6);
}

#[test]
fn manifest_checksums_match_and_report_detects_tampering() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(qcurv(d.path(), &["spherical"]).status.code(), Some(0));
    let m = Manifest::read(d.path()).unwrap();
    assert!(!m.artifacts.is_empty());
    for (name, a) in &m.artifacts {
        let bytes = std::fs::read(d.path().join(name)).unwrap();
        assert_eq!(sha256_hex(&bytes), a.sha256, "{name}");
        assert_eq!(bytes.len() as u64, a.bytes);
    }
    assert_eq!(qcurv(d.path(), &["report"]).status.code(), Some(0));
    assert!(d.path().join("report.json").exists());
    std::fs::write(d.path().join("spherical_summary.json"), b"{}").unwrap();
    assert_eq!(qcurv(d.path(), &["report"]).status.code(), Some(1));
    let r = json(&d.path().join("report.json"));
    assert_eq!(r["mismatches"][0]["path"], "spherical_summary.json");
}

#[test]
fn analyze_reads_trajectory_csvs() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(qcurv(d.path(), &["spherical"]).status.code(), Some(0));
    let traj = d.path().join("spherical_trajectory.csv").display().to_string();
    let o = qcurv(d.path(), &["analyze", &traj]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rep = json(&d.path().join("analyze_external.json"));
    assert_eq!(rep["members"][0]["provenance"], "external");
    assert!((rep["members"][0]["u0"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-8);
    assert_eq!(qcurv(d.path(), &["analyze"]).status.code(), Some(2));
}
