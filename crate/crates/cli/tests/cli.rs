use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hgraph(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgraph"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = hgraph(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(dir: &Path, args: &[&str]) -> i32 {
    hgraph(dir, args).status.code().unwrap()
}

fn json(dir: &Path, args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    serde_json::from_str(&ok(dir, &all)).unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn generate_is_deterministic_and_sized() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = ok(d, &["generate", "--kind", "uniform", "--scale", "10", "--degree", "4", "--seed", "2", "-o", "u.bin"]);
    assert!(out.contains("edges 4096"), "{out}");
    ok(d, &["generate", "--kind", "rmat", "--scale", "11", "--degree", "8", "--seed", "1", "-o", "a.bin"]);
    ok(d, &["generate", "--kind", "rmat", "--scale", "11", "--degree", "8", "--seed", "1", "-o", "b.bin"]);
    assert_eq!(fs::read(d.join("a.bin")).unwrap(), fs::read(d.join("b.bin")).unwrap());
    let desc = json(d, &["generate", "--kind", "rmat", "--scale", "11", "--degree", "8", "--text", "-o", "a.txt"]);
    assert_eq!(desc["vertex_count"], 2048);
    assert_eq!(desc["edge_count"], 16384);
}

#[test]
fn run_reports_the_requested_split() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["generate", "--kind", "rmat", "--scale", "12", "--degree", "8", "-o", "g.bin"]);
    ok(d, &[
        "run", "--alg", "bfs", "--graph", "g.bin", "--strategy", "high", "--alpha", "0.8",
        "--elements", "host:8,accel:64@throttle=4e9", "--source", "0",
        "--report", "r.json", "--output", "levels.txt", "--ledger-csv", "ledger.csv",
    ]);
    let r = read_json(&d.join("r.json"));
    assert!((r["plan"]["alpha_actual"].as_f64().unwrap() - 0.8).abs() < 0.01);
    assert_eq!(r["config"]["run"]["source"], 0);
    assert_eq!(r["config"]["elements"][1]["throttle"], 4e9);
    let levels = fs::read_to_string(d.join("levels.txt")).unwrap();
    assert_eq!(levels.lines().count(), 4096);
    assert!(levels.starts_with("0 0\n"));
    let csv = fs::read_to_string(d.join("ledger.csv")).unwrap();
    let supersteps = r["supersteps"].as_u64().unwrap() as usize;
    assert_eq!(csv.lines().count(), 1 + supersteps * 2 * 2);
}

#[test]
fn pagerank_runs_its_iterations() {
    let dir = tempfile::tempdir().unwrap();
    let r = json(dir.path(), &["run", "--alg", "pagerank", "--iterations", "5", "--graph", "rmat:10:8"]);
    assert_eq!(r["supersteps"], 5);
    assert_eq!(r["direction"], "pull");
}

#[test]
fn replaying_a_report_repeats_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &[
        "run", "--alg", "sssp", "--graph", "uniform:10:6", "--synth-weights", "--seed", "9",
        "--strategy", "low", "--alpha", "0.6", "--elements", "host:1,accel:1,accel:1",
        "--report", "first.json", "--output", "first.txt",
    ]);
    ok(d, &["run", "--config", "first.json", "--report", "second.json", "--output", "second.txt"]);
    assert_eq!(fs::read(d.join("first.txt")).unwrap(), fs::read(d.join("second.txt")).unwrap());
    let (a, b) = (read_json(&d.join("first.json")), read_json(&d.join("second.json")));
    assert_eq!(a["plan"], b["plan"]);
    assert_eq!(a["config"]["seeds"], b["config"]["seeds"]);
    assert_eq!(a["config"]["run"]["source"], b["config"]["run"]["source"]);
}

#[test]
fn default_source_follows_the_master_seed() {
    let dir = tempfile::tempdir().unwrap();
    let source = |seed: &str| json(dir.path(), &["run", "--alg", "bfs", "--graph", "rmat:10:8:1", "--seed", seed])
        ["config"]["run"]["source"]
        .as_u64()
        .unwrap();
    assert_eq!(source("4"), source("4"));
    assert!((1..20).map(|s| source(&s.to_string())).any(|s| s != source("0")));
}

#[test]
fn exit_codes_follow_the_error_kind() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // configuration and validation
    assert_eq!(code(d, &["run", "--alg", "sssp", "--graph", "rmat:8:4"]), 2);
    assert_eq!(code(d, &["run", "--alg", "cc", "--graph", "rmat:8:4"]), 2);
    assert_eq!(code(d, &["run", "--alg", "bfs", "--graph", "rmat:8:4", "--direction", "pull"]), 2);
    assert_eq!(code(d, &["run", "--alg", "bfs", "--graph", "rmat:8:4", "--elements", "host:1,fpga:2"]), 2);
    assert_eq!(code(d, &["run", "--alg", "bfs", "--graph", "rmat:8:4", "--alpha", "1.5"]), 2);
    assert_eq!(code(d, &["run", "--alg", "dfs", "--graph", "rmat:8:4"]), 2);
    // capacity
    assert_eq!(code(d, &["run", "--alg", "bfs", "--graph", "rmat:10:8", "--elements", "host:1,accel:1@mem=1024"]), 3);
    // I/O
    assert_eq!(code(d, &["run", "--alg", "bfs", "--graph", "missing.bin"]), 4);
    assert_eq!(code(d, &["generate", "--kind", "rmat", "--scale", "4", "-o", "no/such/dir/g.bin"]), 4);

    let out = hgraph(d, &["--json", "run", "--alg", "bfs", "--graph", "missing.bin"]);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "io");
    assert_eq!(err["error"]["exit_code"], 4);
}

#[test]
fn symmetrized_and_weighted_inputs_unlock_cc_and_sssp() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(d, &["run", "--alg", "cc", "--graph", "rmat:8:4", "--symmetrize"]), 0);
    assert_eq!(code(d, &["run", "--alg", "sssp", "--graph", "rmat:8:4", "--synth-weights"]), 0);
    ok(d, &["generate", "--kind", "rmat", "--scale", "8", "--degree", "4", "--weights", "--text", "-o", "w.txt"]);
    assert_eq!(code(d, &["run", "--alg", "sssp", "--graph", "w.txt", "--weighted"]), 0);
    assert_eq!(code(d, &["run", "--alg", "cc", "--graph", "w.txt", "--weighted", "--undirected"]), 0);
}

#[test]
fn sweep_has_a_row_per_point_plus_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["sweep", "--alg", "bfs", "--graph", "rmat:10:8", "-o", "s.csv"]);
    let csv = fs::read_to_string(d.join("s.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 1 + 19);
    assert!(lines[0].starts_with("strategy,alpha,"));
    assert!(lines[1].starts_with("baseline,"));
    assert!(lines[1..].iter().all(|l| l.ends_with(',')), "no row failed");
}

#[test]
fn sweep_records_failures_and_keeps_going() {
    let dir = tempfile::tempdir().unwrap();
    let rows = json(dir.path(), &["sweep", "--alg", "bfs", "--graph", "rmat:9:8", "--alphas", "0.5,1.5,0.9", "--strategies", "high"]);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows[2]["error"].as_str().unwrap().contains("alpha"));
    assert!(rows[2]["total_ms"].is_null());
    assert_eq!(rows[3]["error"], "");
    assert!(rows[3]["speedup"].as_f64().unwrap() > 0.0);
}

#[test]
fn model_sweep_matches_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["model", "--axis", "alpha", "--grid", "0.5,0.8", "--beta", "0.05", "--rcpu", "1e9", "--c", "3e9"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "axis,value,speedup");
    for (line, alpha) in lines[1..].iter().zip([0.5, 0.8]) {
        let s: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!((s - 1.0 / (0.05 / 3.0 + alpha)).abs() < 1e-12, "{line}");
    }
    let rows = json(dir.path(), &["model", "--axis", "beta", "--grid", "0,1"]);
    assert_eq!(rows[0]["speedup"], 2.0);
}

#[test]
fn partition_prints_boundary_stats() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = ok(d, &["partition", "--graph", "rmat:10:8", "--strategy", "rand", "--alpha", "0.5", "--full", "-o", "plan.json"]);
    assert!(out.contains("beta_reduced"));
    let plan = read_json(&d.join("plan.json"));
    assert_eq!(plan["assignment"].as_array().unwrap().len(), 1024);
    let brief = json(d, &["partition", "--graph", "rmat:10:8", "--elements", "host:1,accel:1,accel:1"]);
    assert_eq!(brief["vertex_counts"].as_array().unwrap().len(), 3);
    assert!(brief.get("assignment").is_none());
}

#[test]
fn validate_compares_prediction_and_measurement() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let common = ["--graph", "rmat:11:8", "--interconnect", "3e9", "--alg", "pagerank"];
    let mut base = vec!["run", "--elements", "host:1@throttle=1e9", "--report", "base.json"];
    base.extend_from_slice(&common);
    ok(d, &base);
    let mut hybrid = vec![
        "run", "--elements", "host:1@throttle=1e9,accel:1@throttle=4e9", "--alpha", "0.6", "--report", "hybrid.json",
    ];
    hybrid.extend_from_slice(&common);
    ok(d, &hybrid);
    let v = json(d, &["validate", "--baseline", "base.json", "--hybrid", "hybrid.json"]);
    let (p, m) = (v["predicted"].as_f64().unwrap(), v["measured"].as_f64().unwrap());
    assert!(p > 1.0 && m > 1.0);
    assert!((v["error"].as_f64().unwrap() - (p - m) / m).abs() < 1e-12);
    assert_eq!(v["c"], 3e9);
    // swapping the roles is rejected: the baseline must be a single partition
    assert_eq!(code(d, &["validate", "--baseline", "hybrid.json", "--hybrid", "base.json"]), 2);
}
