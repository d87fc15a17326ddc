use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ftauber(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ftauber"))
        .args(args)
        .output()
        .expect("spawn ftauber")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_zeta_2_writes_reusable_document() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("z2.json");
    let o = ftauber(&["build-testfn", "--output", path(&doc)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let err = stderr(&o);
    assert!(err.contains("nu = 4.73004"), "{err}");
    assert!(err.contains("all axioms hold"));

    let source = format!("file:{}", path(&doc));
    let report = dir.path().join("report.json");
    let o = ftauber(&[
        "verify-testfn",
        "--source",
        &source,
        "--json",
        path(&report),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));
}

#[test]
fn gamma_normalized_has_unit_mass() {
    let o = ftauber(&["verify-testfn", "--source", "gamma:1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let err = stderr(&o);
    let line = err
        .lines()
        .find(|l| l.trim_start().starts_with("normalization"))
        .unwrap();
    let value: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(value <= 1e-8);
}

#[test]
fn gamma_zero_rejected() {
    let o = ftauber(&["build-testfn", "--source", "gamma:0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("l >= 1"));
}

#[test]
fn malformed_source_rejected() {
    let o = ftauber(&["build-testfn", "--source", "beta:2"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("beta:2"));
}

#[test]
fn suite_passes_and_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (
        dir.path().join("a"),
        dir.path().join("b"),
        dir.path().join("c"),
    );
    let json = dir.path().join("s.json");
    let common = ["tauber-suite", "--count", "20", "--seed", "3"];
    let o = ftauber(&[&common[..], &["--output", path(&a), "--json", path(&json)]].concat());
    assert!(o.status.success(), "{}", stderr(&o));
    ftauber(&[&common[..], &["--output", path(&b)]].concat());
    ftauber(&[
        "tauber-suite",
        "--count",
        "20",
        "--seed",
        "4",
        "--output",
        path(&c),
    ]);
    let (a, b, c) = (
        fs::read(a).unwrap(),
        fs::read(b).unwrap(),
        fs::read(c).unwrap(),
    );
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 21);

    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["total"]["functions"], 20);
    assert_eq!(v["total"]["sandwich_violations"], 0);
}

#[test]
fn empty_ensemble_passes_with_warning() {
    let o = ftauber(&["tauber-suite", "--count", "0"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning"));
}

#[test]
fn t_below_delta_rejected() {
    let o = ftauber(&["tauber-suite", "--pair", "0.5:1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("T >= delta"));
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"count": 0}"#).unwrap();
    let o = ftauber(&["--config", path(&cfg), "tauber-suite", "--count", "50"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("0 functions"));

    fs::write(&cfg, r#"{"colour": 1}"#).unwrap();
    let o = ftauber(&["tauber-suite", "--config", path(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"));
}

#[test]
fn interval_report_contains_berezin_row() {
    let o = ftauber(&[
        "laplace-report",
        "--sides",
        "pi",
        "--lambda-min",
        "10",
        "--lambda-max",
        "10.000001",
        "--lambda-count",
        "1",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = String::from_utf8(o.stdout).unwrap();
    assert!(csv.starts_with("quantity,lambda,epsilon,x,lower,upper,exact,margin,paper_eq\n"));
    let row = csv
        .lines()
        .find(|l| l.starts_with("riesz_mean,") && l.ends_with(",3.6"))
        .unwrap();
    let cols: Vec<&str> = row.split(',').collect();
    let exact: f64 = cols[6].parse().unwrap();
    let upper: f64 = cols[5].parse().unwrap();
    assert_eq!(cols[6].split('e').next().unwrap().len(), 13);
    assert!((exact - 16.0).abs() < 1e-5 && (upper - 21.08).abs() < 0.01);
}

#[test]
fn square_report_json_mirrors_csv() {
    let dir = tempfile::tempdir().unwrap();
    let domain = dir.path().join("square.json");
    fs::write(&domain, r#"{"dim": 2, "sides": [1.0, 1.0]}"#).unwrap();
    let (csv, json) = (dir.path().join("r.csv"), dir.path().join("r.json"));
    let o = ftauber(&[
        "laplace-report",
        "--domain",
        path(&domain),
        "--lambda-max",
        "1000",
        "--lambda-count",
        "8",
        "--output",
        path(&csv),
        "--json",
        path(&json),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = fs::read_to_string(csv).unwrap().lines().count() - 1;
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), rows);
}

#[test]
fn malformed_domain_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let domain = dir.path().join("bad.json");
    fs::write(&domain, "{\"dim\": 2,\n \"sides\": [1.0, ]}").unwrap();
    let o = ftauber(&["laplace-report", "--domain", path(&domain)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    fs::write(&domain, r#"{"dim": 2, "sides": [1.0, -1.0]}"#).unwrap();
    let o = ftauber(&["laplace-report", "--domain", path(&domain)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("sides"), "{}", stderr(&o));
}

#[test]
fn remainder_scan_reports_slope() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("scan.json");
    let o = ftauber(&[
        "remainder-scan",
        "--lambda-count",
        "20",
        "--json",
        path(&json),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 21);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    let slope = v["riesz_remainder_slope"].as_f64().unwrap();
    assert!(slope > 0.3 && slope < 0.65, "{slope}");

    let o = ftauber(&["remainder-scan", "--kappa", "0.7"]);
    assert_eq!(o.status.code(), Some(2));
}
