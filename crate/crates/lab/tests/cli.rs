use std::process::{Command, Output};

use serde_json::Value;

fn bisph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bisph")).args(args).output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn classify_global_verdict() {
    let o = bisph(&["classify", "--d", "2", "--p", "2", "--q", "2", "--r", "1", "--op", "global"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["status"], "Bounded");
    assert!(!v["citation"].as_str().unwrap().is_empty());

    let v = json(&bisph(&["classify", "--d", "3", "--p", "1", "--q", "3/2", "--r", "3/5"]));
    assert_eq!((v["status"].as_str(), v["case"].as_str()), (Some("WeakLorentz"), Some("b")));

    let v = json(&bisph(&["classify", "--d", "3", "--op", "p-s"]));
    assert_eq!(v["value"], "10/3");
    let v = json(&bisph(&["classify", "--d", "5", "--op", "alpha-star"]));
    assert_eq!(v["value"], "1");
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(bisph(&["classify", "--d", "2", "--p", "abc"]).status.code(), Some(2));
    assert_eq!(bisph(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(bisph(&["report", "--criteria", "13"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"sede": 1}"#).unwrap();
    let o = bisph(&["--config", cfg.to_str().unwrap(), "partition"]);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["exit"], 2);
}

#[test]
fn knapp_scan_csv_and_slope() {
    let o = bisph(&["scan", "--family", "knapp", "--d", "2", "--deltas", "1/8,1/16,1/32,1/64"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rd = csv::Reader::from_reader(&o.stdout[..]);
    let head = rd.headers().unwrap().clone();
    for col in ["family", "d", "param", "statistic", "norm_p", "norm_q", "n", "box_length", "slope"] {
        assert!(head.iter().any(|h| h == col), "missing {col}");
    }
    let rows: Vec<_> = rd.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 4);
    let slope_at = head.iter().position(|h| h == "slope").unwrap();
    let slope: f64 = rows[0][slope_at].parse().unwrap();
    assert!((slope - 3.0).abs() <= 0.2, "{slope}");
    assert!(!o.stdout.contains(&b'\r'));
}

#[test]
fn assertion_failure_exits_1_with_record() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.json");
    std::fs::write(&cfg, r#"{"scan": {"knapp_slope_tol": 0.0}}"#).unwrap();
    let o = bisph(&["--config", cfg.to_str().unwrap(), "scan", "--deltas", "1/8,1/16,1/32"]);
    assert_eq!(o.status.code(), Some(1));
    let rec: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(rec["failure"], "scan-knapp");
    assert!(rec["measured"].as_f64().is_some());
}

#[test]
fn output_is_independent_of_threads_and_reproducible() {
    let run = |threads: &str, seed: &str| {
        let o = bisph(&["--threads", threads, "--seed", seed, "--format", "json", "slice-check", "--pairs", "6", "--analytic", "2"]);
        assert_eq!(o.status.code(), Some(0));
        o.stdout
    };
    let a = run("1", "5");
    assert_eq!(a, run("4", "5"));
    assert_eq!(a, run("3", "5"));
    assert_ne!(a, run("1", "6"));

    let csv = |threads: &str| bisph(&["--threads", threads, "sqfn", "--kind", "mixed", "--deltas", "1/8,1/16,1/32"]).stdout;
    assert_eq!(csv("1"), csv("4"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("partition.json");
    let o = bisph(&["--format", "json", "--out", path.to_str().unwrap(), "partition"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["rows"][0]["n"].as_u64().is_some());
}
