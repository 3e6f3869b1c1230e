use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bgue(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bgue"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env_remove("BGUE_THREADS")
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) {
    let out = bgue(dir, args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
}

fn read_csv(path: &Path, header: bool) -> Vec<Vec<String>> {
    let mut r = csv::ReaderBuilder::new().has_headers(header).from_path(path).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect()
}

fn reals(rows: &[Vec<String>], col: usize) -> Vec<f64> {
    rows.iter().map(|r| r[col].parse().unwrap()).collect()
}

fn metadata(dir: &Path, command: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(format!("{command}.json"))).unwrap()).unwrap()
}

#[test]
fn sample_shape_and_determinism() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["sample", "--n", "10", "--r", "1", "--mu", "0.5", "--sigma", "1.2", "--draws", "1000", "--seed", "7"];
    ok(a.path(), &args);
    ok(b.path(), &[&args[..], &["--threads", "1"]].concat());

    let bytes = fs::read(a.path().join("sample.csv")).unwrap();
    assert_eq!(bytes, fs::read(b.path().join("sample.csv")).unwrap());
    assert!(bytes.windows(2).any(|w| w == b"\r\n"));

    let rows = read_csv(&a.path().join("sample.csv"), false);
    assert_eq!(rows.len(), 1000);
    assert!(rows.iter().all(|r| r.len() == 11));
    // Seventeen significant digits in scientific notation.
    let first = &rows[0][0];
    let mantissa = first.trim_start_matches('-').split('e').next().unwrap();
    assert_eq!(mantissa.replace('.', "").len(), 17, "{first}");
    let spectrum: Vec<f64> = rows[0].iter().map(|x| x.parse().unwrap()).collect();
    assert!(spectrum.windows(2).all(|w| w[0] >= w[1]));

    let meta = metadata(a.path(), "sample");
    assert_eq!(meta["seed"], 7);
    assert_eq!(meta["parameters"]["sigma"], 1.2);
    assert_eq!(meta["parameters"]["r"], 1);
    assert!(meta["version"].is_string());
    assert!(meta["wall_time_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn sample_defaults_are_recorded() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["sample", "--n", "3", "--draws", "5"]);
    let p = &metadata(d.path(), "sample")["parameters"];
    assert_eq!(p["r"], 1);
    assert_eq!(p["mu"], 0.0);
    assert_eq!(p["sigma"], 1.0);
    assert_eq!(p["seed"], 0);
}

#[test]
fn bad_sigma_exits_2() {
    let d = tempfile::tempdir().unwrap();
    let out = bgue(d.path(), &["sample", "--n", "10", "--sigma", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("sigma must be > 0"), "{msg}");
}

#[test]
fn missing_and_malformed_parameters_exit_2() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(bgue(d.path(), &["sample"]).status.code(), Some(2));
    assert_eq!(bgue(d.path(), &["kernel", "--n", "4", "--grid", "1:2"]).status.code(), Some(2));
    assert_eq!(bgue(d.path(), &["edge", "--ns", "50,x"]).status.code(), Some(2));
}

#[test]
fn kernel_matrix_and_diagonal() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["kernel", "--path", "mu0", "--n", "6", "--sigma2", "1.5", "--grid", "-4:4:81"]);
    let m = read_csv(&d.path().join("kernel_matrix.csv"), false);
    assert_eq!(m.len(), 81);
    assert!(m.iter().all(|r| r.len() == 81));
    let diag = read_csv(&d.path().join("kernel_diagonal.csv"), true);
    assert_eq!(diag.len(), 81);
    // The matrix diagonal and the density file agree.
    for i in 0..81 {
        let kii: f64 = m[i][i].parse().unwrap();
        let di: f64 = diag[i][1].parse().unwrap();
        assert!((kii - di).abs() <= 1e-12 * (1.0 + di.abs()));
        assert!(di >= -1e-12);
        assert!(m[i].iter().all(|v| v.parse::<f64>().unwrap().is_finite()));
    }
    assert_eq!(metadata(d.path(), "kernel")["parameters"]["path"], "mu0");
}

fn trapezoid(rows: &[Vec<String>]) -> f64 {
    let (x, y) = (reals(rows, 0), reals(rows, 1));
    (1..x.len()).map(|i| 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1])).sum()
}

#[test]
fn kernel_diagonal_integrates_to_rank() {
    // On a grid covering the support the trapezoid sum gives N + 1.
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["kernel", "--path", "mu0", "--n", "6", "--sigma2", "1.5", "--grid", "-8:8:161"]);
    let mass = trapezoid(&read_csv(&d.path().join("kernel_diagonal.csv"), true));
    assert!((mass - 7.0).abs() <= 1e-3, "mass {mass}");

    // On [-4, 4] part of the mass lies outside the window; the coarse sum
    // still matches a much finer rule over the same interval.
    ok(d.path(), &["kernel", "--path", "mu0", "--n", "6", "--sigma2", "1.5", "--grid", "-4:4:81"]);
    let coarse = trapezoid(&read_csv(&d.path().join("kernel_diagonal.csv"), true));
    ok(d.path(), &["kernel", "--path", "mu0", "--n", "6", "--sigma2", "1.5", "--grid", "-4:4:4001"]);
    let fine = trapezoid(&read_csv(&d.path().join("kernel_diagonal.csv"), true));
    assert!((coarse - fine).abs() <= 1e-3, "coarse {coarse} fine {fine}");
    assert!(fine < 7.0 - 1e-2);
}

#[test]
fn kernel_divergent_domain_exits_3() {
    let d = tempfile::tempdir().unwrap();
    let out = bgue(d.path(), &["kernel", "--sigma2", "2.5", "--path", "general", "--n", "6", "--mu", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sigma^2 < 2"));
}

#[test]
fn phase_grid_shape() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["phase", "--c", "0:3:7", "--sigma2", "0.5:4:8", "--n", "200", "--draws", "200"]);
    let mut r = csv::Reader::from_path(d.path().join("phase_grid.csv")).unwrap();
    let header: Vec<String> = r.headers().unwrap().iter().map(str::to_string).collect();
    for col in ["c", "sigma2", "predicted_largest", "empirical_largest_mean", "predicted_smallest", "empirical_smallest_mean"] {
        assert!(header.iter().any(|h| h == col), "missing {col}");
    }
    let rows: Vec<_> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 56);
    let boundary = read_csv(&d.path().join("phase_boundary.csv"), true);
    assert!(!boundary.is_empty());
    for b in &boundary {
        let (emp, pred): (f64, f64) = (b[1].parse().unwrap(), b[2].parse().unwrap());
        assert!((emp - pred).abs() < 0.3, "{b:?}");
    }
}

#[test]
fn edge_cdf_shape() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["edge", "--path", "sigma1", "--s", "0", "--n", "200", "--draws", "5000"]);
    let cdf = read_csv(&d.path().join("edge_cdf.csv"), true);
    assert_eq!(cdf.len(), 801);
    let (emp, pred) = (reals(&cdf, 1), reals(&cdf, 2));
    assert!(emp.windows(2).all(|w| w[1] >= w[0]));
    let ks = emp.iter().zip(&pred).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(ks <= 0.05, "ks {ks}");
    let conv = read_csv(&d.path().join("edge_convergence.csv"), true);
    assert_eq!(reals(&conv, 0), vec![50.0, 100.0, 200.0]);
    let meta = metadata(d.path(), "edge");
    assert_eq!(meta["results"]["deviation_decreasing"], true);
    assert_eq!(meta["results"]["report"]["passed"], true);
}

#[test]
fn config_file_fills_unset_flags() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("cfg.json");
    fs::write(&cfg, r#"{"n": 4, "draws": 3, "mu": 0.75, "seed": 11, "grid": "0:1:2"}"#).unwrap();
    ok(d.path(), &["sample", "--config", cfg.to_str().unwrap(), "--mu", "-0.5"]);
    let p = &metadata(d.path(), "sample")["parameters"];
    assert_eq!(p["n"], 4);
    assert_eq!(p["draws"], 3);
    assert_eq!(p["seed"], 11);
    assert_eq!(p["mu"], -0.5);
    assert_eq!(read_csv(&d.path().join("sample.csv"), false).len(), 3);

    fs::write(&cfg, "[1, 2]").unwrap();
    assert_eq!(bgue(d.path(), &["sample", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn json_format_embeds_data() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["sample", "--n", "2", "--draws", "4", "--format", "json"]);
    assert!(!d.path().join("sample.csv").exists());
    let meta = metadata(d.path(), "sample");
    let data = meta["tables"][0]["data"].as_array().unwrap();
    assert_eq!(data.len(), 4);
    assert_eq!(data[0].as_array().unwrap().len(), 3);
}

#[test]
fn zero_threads_is_rejected() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(bgue(d.path(), &["sample", "--n", "2", "--threads", "0"]).status.code(), Some(2));
}
