use std::path::Path;
use std::process::{Command, Output};

use dpbandit::io::{read_csv, AggregateRow, AuditCsvRow, BoundsRow, RawRow};

fn dpbandit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dpbandit")).args(args).output().unwrap()
}

fn read<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> Vec<T> {
    read_csv(std::fs::File::open(path).unwrap()).unwrap()
}

#[test]
fn short_run_prints_one_row_per_step() {
    let out = dpbandit(&["run", "--runs", "1", "--horizon", "5", "--policy", "ucb", "--means", "0.5,0.5"]);
    assert!(out.status.success());
    let rows: Vec<RawRow> = read_csv(&out.stdout[..]).unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows.iter().map(|r| r.t).collect::<Vec<_>>(), [1, 2, 3, 4, 5]);
    assert!(rows.iter().all(|r| r.cum_pseudo_regret == 0.0));
}

#[test]
fn same_command_writes_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let args = |name: &str| {
        vec![
            "run".to_owned(),
            "--policy".into(),
            "adap-klucb,dp-ucb".into(),
            "--means".into(),
            "0.75,0.625,0.5,0.375,0.25".into(),
            "--epsilon".into(),
            "0.5,1".into(),
            "--horizon".into(),
            "20000".into(),
            "--runs".into(),
            "4".into(),
            "--seed".into(),
            "42".into(),
            "--out".into(),
            dir.path().join(name).to_string_lossy().into_owned(),
        ]
    };
    for name in ["a.csv", "b.csv"] {
        let a = args(name);
        assert!(dpbandit(&a.iter().map(String::as_str).collect::<Vec<_>>()).status.success());
    }
    for (x, y) in [("a.csv", "b.csv"), ("a.raw.csv", "b.raw.csv")] {
        let x = std::fs::read(dir.path().join(x)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, std::fs::read(dir.path().join(y)).unwrap());
    }
}

#[test]
fn aggregate_is_the_mean_of_raw_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c2.csv");
    let status = dpbandit(&[
        "run",
        "--policy",
        "adap-ucb",
        "--means",
        "0.75,0.625,0.5,0.375,0.25",
        "--epsilon",
        "1",
        "--horizon",
        "30000",
        "--runs",
        "5",
        "--seed",
        "3",
        "--out",
        out.to_str().unwrap(),
    ])
    .status;
    assert!(status.success());
    let agg: Vec<AggregateRow> = read(&out);
    let raw: Vec<RawRow> = read(&dir.path().join("c2.raw.csv"));
    assert_eq!(raw.len(), 5 * agg.len());
    for a in &agg {
        let values: Vec<f64> = raw.iter().filter(|r| r.t == a.t).map(|r| r.cum_pseudo_regret).collect();
        assert_eq!(values.len(), 5);
        let mean = values.iter().sum::<f64>() / 5.0;
        let std = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 4.0).sqrt();
        approx::assert_abs_diff_eq!(a.mean_regret, mean, epsilon = 1e-9);
        approx::assert_abs_diff_eq!(a.std_regret, std, epsilon = 1e-9);
        assert_eq!(a.runs, 5);
    }
    // Rows sorted by run then t.
    assert!(raw.windows(2).all(|w| (w[0].run, w[0].t) < (w[1].run, w[1].t)));
}

#[test]
fn csv_round_trips_exact_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    assert!(dpbandit(&[
        "run",
        "--means",
        "0.6,0.4",
        "--horizon",
        "3000",
        "--runs",
        "2",
        "--out",
        out.to_str().unwrap()
    ])
    .status
    .success());
    let rows: Vec<AggregateRow> = read(&out);
    let mut buf = Vec::new();
    dpbandit::io::write_csv(&rows, &mut buf).unwrap();
    assert_eq!(buf, std::fs::read(&out).unwrap());
    let back: Vec<AggregateRow> = read_csv(&buf[..]).unwrap();
    assert_eq!(back, rows);
}

#[test]
fn bounds_rows_per_epsilon_and_arm() {
    let out = dpbandit(&[
        "bounds",
        "--means",
        "0.75,0.625,0.5,0.375,0.25",
        "--epsilon",
        "0.00001,1",
        "--horizon",
        "10000000",
    ]);
    assert!(out.status.success());
    let rows: Vec<BoundsRow> = read_csv(&out.stdout[..]).unwrap();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.t_inf == r.gap && r.k == 5));
    assert_eq!(rows[0].regime, "high-privacy");
    assert_eq!(rows[9].regime, "low-privacy");

    let flat = dpbandit(&["bounds", "--means", "0.5,0.5,0.5", "--epsilon", "1"]);
    let rows: Vec<BoundsRow> = read_csv(&flat.stdout[..]).unwrap();
    assert!(rows.iter().all(|r| r.pd_lower_rate == 0.0));
}

#[test]
fn audit_verdicts_and_exit_codes() {
    let ok = dpbandit(&[
        "audit",
        "--policy",
        "adap-ucb",
        "--epsilon",
        "1",
        "--horizon",
        "4",
        "--trials",
        "200000",
        "--seed",
        "7",
    ]);
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));
    let rows: Vec<AuditCsvRow> = read_csv(&ok.stdout[..]).unwrap();
    assert!(rows.iter().all(|r| r.verdict != "fail"));
    assert!(String::from_utf8_lossy(&ok.stderr).contains("pass"));

    let leak = dpbandit(&["audit", "--policy", "ucb", "--epsilon", "1", "--table", "0,1,1,1", "--neighbor", "1,1,1,1"]);
    assert_eq!(leak.status.code(), Some(1));
    let rows: Vec<AuditCsvRow> = read_csv(&leak.stdout[..]).unwrap();
    assert!(rows.iter().any(|r| r.verdict == "fail" && r.log_ratio.is_infinite()));

    let few = dpbandit(&["audit", "--trials", "10"]);
    assert_eq!(few.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&few.stderr).contains("100000"));
}

#[test]
fn invalid_flags_are_usage_errors() {
    assert!(!dpbandit(&["run", "--means", "0.5"]).status.success());
    assert!(!dpbandit(&["run", "--means", "0.5,1.5"]).status.success());
    assert!(!dpbandit(&["run", "--means", "0.5,0.4", "--policy", "thompson"]).status.success());
    assert!(!dpbandit(&["run", "--means", "0.5,0.4", "--epsilon", "0"]).status.success());
    assert!(!dpbandit(&["bounds", "--means", "0.5,0.4", "--alpha", "2"]).status.success());
}
