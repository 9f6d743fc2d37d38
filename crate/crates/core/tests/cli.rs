use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_workload-balance"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = run(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn instance(dir: &Path, n: &str, workers: &str) {
    ok(dir, &["generate", "--n-points", n, "--n-workers", workers, "--seed", "3", "--out", "inst.json"]);
}

#[test]
fn solve_is_byte_identical_across_runs() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    instance(d, "50", "4");
    for out in ["a.json", "b.json"] {
        ok(d, &["solve", "--instance", "inst.json", "--algo", "ra-ea-ie", "--seed", "7", "--generations", "40", "--out", out]);
    }
    let a = std::fs::read(d.join("a.json")).unwrap();
    assert_eq!(a, std::fs::read(d.join("b.json")).unwrap());
    let doc: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(doc["algorithm"], "ra-ea-ie");
    assert_eq!(doc["assignment"].as_array().unwrap().len(), 50);
}

#[test]
fn solve_writes_breakdown_and_geojson() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    instance(d, "30", "3");
    ok(d, &[
        "solve", "--instance", "inst.json", "--algo", "ra-ie", "--init", "spectral", "--out", "r.json",
        "--breakdown", "b.csv", "--geojson", "g.json",
    ]);
    let csv = std::fs::read_to_string(d.join("b.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("worker,t_ow_s,t_int_s,t_tra_s,t_ext_s,t_ret_s,total_s"));
    assert_eq!(lines.count(), 3);
    let back = workload_balance::io::import_assignment_geojson(d.join("g.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("r.json")).unwrap()).unwrap();
    let expected: Vec<usize> = serde_json::from_value(doc["assignment"].clone()).unwrap();
    assert_eq!(back.assignment(), &expected[..]);
}

#[test]
fn bench_csv_has_the_four_statistics() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    instance(d, "24", "3");
    ok(d, &[
        "bench", "--instance", "inst.json", "--algos", "ea-ie,ra-ie,ra-ea-ie", "--runs", "30", "--seed", "1",
        "--generations", "10", "--out", "stats.csv",
    ]);
    let csv = std::fs::read_to_string(d.join("stats.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "algorithm,n_runs,min_s,max_s,mean_s,std_s");
    assert_eq!(rows.len(), 4);
    for row in &rows[1..] {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 6);
        assert_eq!(cells[1], "30");
        let v: Vec<f64> = cells[2..].iter().map(|c| c.parse().unwrap()).collect();
        assert!(v[0] <= v[2] && v[2] <= v[1] && v[3] >= 0.0, "{row}");
    }
    // Reproducible from the seed.
    ok(d, &[
        "bench", "--instance", "inst.json", "--algos", "ea-ie,ra-ie,ra-ea-ie", "--runs", "30", "--seed", "1",
        "--generations", "10", "--out", "again.csv",
    ]);
    assert_eq!(csv, std::fs::read_to_string(d.join("again.csv")).unwrap());
}

#[test]
fn oracle_solves_tiny_and_refuses_large() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(d, &["generate", "--n-points", "6", "--n-workers", "2", "--out", "tiny.json"]);
    ok(d, &["oracle", "--instance", "tiny.json", "--out", "opt.json"]);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("opt.json")).unwrap()).unwrap();
    assert!(doc["fitness"].as_f64().unwrap() >= 0.0);

    instance(d, "40", "3");
    let out = run(d, &["oracle", "--instance", "inst.json", "--out", "big.json"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("at most"));
    assert!(!d.join("big.json").exists());
}

#[test]
fn generate_from_spec_file() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    std::fs::write(
        d.join("spec.json"),
        r#"{"n_points": 60, "n_workers": 3, "distribution": {"kind": "clustered", "n_clusters": 3, "spread_m": 50},
            "depot_placement": "corner", "seed": 4}"#,
    )
    .unwrap();
    ok(d, &["generate", "--spec", "spec.json", "--out", "c.json"]);
    let inst = workload_balance::io::load_instance(d.join("c.json")).unwrap();
    assert_eq!(inst.n_points(), 60);
    assert_eq!(inst.depot(), workload_balance::model::Point::new(0.0, 0.0));
}

#[test]
fn bad_input_exits_nonzero_with_a_message() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    instance(d, "10", "2");
    for args in [
        &["solve", "--instance", "inst.json", "--algo", "ra-ea-ce", "--out", "x.json"][..],
        &["solve", "--instance", "missing.json", "--algo", "ea-ie", "--out", "x.json"],
        &["solve", "--instance", "inst.json", "--algo", "ea-ie", "--mix", "1,1", "--out", "x.json"],
        &["solve", "--instance", "inst.json", "--algo", "ea-ie", "--bogus-flag", "--out", "x.json"],
        &["bench", "--instance", "inst.json", "--algos", "ea-ie,nope", "--out", "s.csv"],
    ] {
        let out = run(d, args);
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    std::fs::write(d.join("dup.json"), r#"{"name": "d", "depot": [0, 0], "speed_km_h": 5, "n_workers": 1,
        "points": [{"id": 0, "x": 1, "y": 1}, {"id": 0, "x": 2, "y": 2}]}"#).unwrap();
    let out = run(d, &["oracle", "--instance", "dup.json", "--out", "o.json"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("points[1].id"));
}
