use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qpgf(dir: &Path, config: &str, extra: &[&str]) -> Output {
    let path = dir.join("run.toml");
    fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_qpgf"))
        .arg("solve")
        .arg("--config")
        .arg(&path)
        .args(extra)
        .output()
        .unwrap()
}

const FLAT: &str = r#"
[problem]
k = 1.3
bc = "neumann"

[surface]
kind = "flat"
n = 8
m = 8

[green]
A = 10.0
"#;

const COSINE: &str = r#"
output = "results"

[problem]
k = 1.0

[surface]
n = 8
m = 8

[green]
A = 6.0

[sweep]
A = [4.0, 6.0]
"#;

fn csv_rows(path: &Path) -> Vec<csv::StringRecord> {
    let mut rd = csv::Reader::from_path(path).unwrap();
    let header = rd.headers().unwrap().clone();
    assert_eq!(&header.iter().take(6).collect::<Vec<_>>(), &["k", "unknowns", "A", "iters", "eps1", "eps"]);
    rd.records().map(Result::unwrap).collect()
}

#[test]
fn flat_mirror_solve_writes_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = qpgf(dir.path(), FLAT, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&dir.path().join("out/results.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][1], "8x8");
    let eps: f64 = rows[0][5].parse().unwrap();
    assert!(eps < 1e-10);
    let report: toml::Value = toml::from_str(&fs::read_to_string(dir.path().join("out/report.toml")).unwrap()).unwrap();
    let b00 = report["points"][0]["b00"].as_array().unwrap();
    assert!((b00[0].as_float().unwrap() - 1.0).abs() < 1e-10);
    assert!(report["config"]["problem"]["k"].as_float().is_some());
}

#[test]
fn sweep_is_reproducible_and_uses_reference() {
    let dir = tempfile::tempdir().unwrap();
    let out = qpgf(dir.path(), COSINE, &["--mode", "make_ref"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let reference = dir.path().join("results/reference.toml");
    assert!(reference.exists());

    let with_ref = format!("reference = \"{}\"\n{COSINE}", reference.display());
    let (a_dir, b_dir) = (dir.path().join("a"), dir.path().join("b"));
    let out = qpgf(dir.path(), &with_ref, &["--mode", "sweep_A", "--output", a_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = qpgf(dir.path(), &with_ref, &["--mode", "sweep_A", "--output", b_dir.to_str().unwrap(), "--threads", "1"]);
    assert!(out.status.success());
    let a = fs::read(dir.path().join("a/results.csv")).unwrap();
    let b = fs::read(dir.path().join("b/results.csv")).unwrap();
    assert_eq!(a, b);

    let rows = csv_rows(&dir.path().join("a/results.csv"));
    assert_eq!(rows.len(), 2);
    let eps1: Vec<f64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    // the last sweep point is the reference configuration itself
    assert!(eps1[1] < 1e-12, "{eps1:?}");
    assert!(eps1[0] > 1e-8);
}

#[test]
fn invalid_coupling_fails_before_writing() {
    let dir = tempfile::tempdir().unwrap();
    let config = format!("{FLAT}\n[solver]\neta = 1.0\n");
    let out = qpgf(dir.path(), &config, &[]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    assert!(!dir.path().join("out/results.csv").exists());
}

#[test]
fn unknown_keys_and_empty_sweeps_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = qpgf(dir.path(), &format!("{FLAT}\nbogus = 1\n"), &[]);
    assert!(!out.status.success());
    let out = qpgf(dir.path(), FLAT, &["--mode", "sweep_k"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("sweep_k"));
}

#[test]
fn green_conv_reports_a_decay_slope() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"
mode = "green_conv"

[problem]
k = 6.283185307179586

[green]
p = 3
d = 1.4

[green_conv]
A = [10.0, 20.0, 40.0]
reference_A = 160.0
"#;
    let out = qpgf(dir.path(), config, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("out/green_conv.csv")).unwrap();
    assert_eq!(text.lines().count(), 4);
    let report: toml::Value = toml::from_str(&fs::read_to_string(dir.path().join("out/report.toml")).unwrap()).unwrap();
    let slope = report["fit"]["slope"].as_float().unwrap();
    assert!(slope < -0.5, "{slope}");
}
