//! End-to-end tests driving the compiled binary: JSON/CSV on stdout,
//! diagnostics on stderr, and the documented exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

use interval_ordering::format::parse_instance_json;
use interval_ordering::{evaluate_ordering, CostValue, IntervalId};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_iord"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "expected success, got {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is a single JSON document")
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("iord-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).expect("temp file writes");
    path
}

fn cluster5_file() -> PathBuf {
    write_temp(
        "cluster5.json",
        r#"{"intervals": [[0,1],[1,2],[2,3],[3,6],[0,5]], "cost": {"kind": "pow2"}, "mode": "exact"}"#,
    )
}

#[test]
fn solve_reports_the_cluster_optimum_and_replays() {
    let file = cluster5_file();
    let out = run(&["solve", file.to_str().unwrap(), "--algo", "oracle"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["sum_cost"], "12");
    assert_eq!(doc["status"], "EXACT_OPTIMAL");
    assert_eq!(doc["algorithm"], "oracle");
    assert_eq!(doc["structure"]["components"], 1);

    // The reported order must replay to the reported cost on the same file.
    let inst = parse_instance_json(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let order: Vec<IntervalId> = doc["order"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap() as IntervalId)
        .collect();
    let replay = evaluate_ordering(&inst, &order).unwrap();
    assert_eq!(replay.sum_cost, CostValue::Exact(num::BigRational::from_integer(12.into())));
}

#[test]
fn solve_handles_the_bottleneck_objective() {
    let file = cluster5_file();
    let out = run(&[
        "solve",
        file.to_str().unwrap(),
        "--objective",
        "bottleneck",
        "--algo",
        "greedy",
        "--verify",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["bottleneck_cost"], "4");
    assert_eq!(doc["status"], "EXACT_OPTIMAL");
    assert_eq!(doc["objective"], "bottleneck");
}

#[test]
fn verify_passes_on_auto_and_fails_on_the_greedy_gap() {
    let gap = std::env::temp_dir().join(format!("iord-test-{}-gap.json", std::process::id()));
    let gen = run(&["gen", "greedy-gap", "--k", "2", "-o", gap.to_str().unwrap()]);
    assert!(gen.status.success());

    let ok = run(&["solve", gap.to_str().unwrap(), "--verify"]);
    assert!(ok.status.success());
    assert!(String::from_utf8_lossy(&ok.stderr).contains("verify: ok"));

    // Smallest-first greedy is off the optimum by a constant factor here, far
    // beyond the verification tolerance.
    let bad = run(&["solve", gap.to_str().unwrap(), "--algo", "greedy", "--verify"]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("disagrees"));
}

#[test]
fn detect_reports_structure_fields() {
    let file = cluster5_file();
    let doc = stdout_json(&run(&["detect", file.to_str().unwrap()]));
    assert_eq!(doc["agreeable"], false);
    assert_eq!(doc["laminar"], false);
    assert_eq!(doc["violation"], serde_json::json!([5, 4]));
    assert_eq!(doc["components"], 1);

    let disjoint = write_temp(
        "disjoint.json",
        r#"{"intervals": [[0,1],[2,3]], "cost": {"kind": "pow2"}, "mode": "exact"}"#,
    );
    let doc = stdout_json(&run(&["detect", disjoint.to_str().unwrap()]));
    assert_eq!(doc["components"], 2);

    let prefixes = write_temp(
        "prefixes.json",
        r#"{"intervals": [[0,1],[0,2],[0,3]], "cost": {"kind": "pow2"}, "mode": "exact"}"#,
    );
    let doc = stdout_json(&run(&["detect", prefixes.to_str().unwrap()]));
    assert_eq!(doc["agreeable"], true);
    assert_eq!(doc["laminar"], true);
    assert_eq!(doc["gamma"].as_array().unwrap().len(), 3);
    assert_eq!(doc["parents"], serde_json::json!([2, 3, null]));
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    for family in [
        vec!["gen", "agreeable", "--n", "6", "--seed", "9"],
        vec!["gen", "laminar", "--n", "6", "--seed", "9", "--cost", "linear:2,1"],
        vec!["gen", "general", "--n", "6", "--seed", "9", "--cost", "power:1/2", "--mode", "float"],
        vec!["gen", "greedy-gap", "--k", "3", "--eps", "1/8"],
        vec!["gen", "partition", "--q", "1,1,2", "--k", "2"],
        vec!["gen", "sorting", "--x", "5,3,9,1"],
    ] {
        let first = run(&family);
        assert!(
            first.status.success(),
            "{family:?}: {}",
            String::from_utf8_lossy(&first.stderr)
        );
        let second = run(&family);
        assert_eq!(first.stdout, second.stdout, "{family:?} is not deterministic");
        let text = String::from_utf8(first.stdout).unwrap();
        let inst = parse_instance_json(&text).expect("generated instance parses");
        assert!(inst.n() > 0);
    }
}

#[test]
fn gen_partition_logs_bounds_and_matches_the_solver() {
    let out = run(&["gen", "partition", "--q", "1,1,2", "--k", "2"]);
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("yes bound"), "missing bounds log: {stderr}");
    let inst = parse_instance_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(inst.n(), 5);
}

#[test]
fn bsrp_accepts_all_three_orders() {
    let nested = write_temp(
        "nested.json",
        r#"{"m": 5, "triplets": [{"a": 1, "b": 5, "z": "10101"}, {"a": 2, "b": 3, "z": "01"}]}"#,
    );
    let file = nested.to_str().unwrap();

    let given = stdout_json(&run(&["bsrp", file]));
    assert_eq!(given["order"], serde_json::json!([1, 2]));
    assert_eq!(given["total_space"], "33");

    let planned = stdout_json(&run(&["bsrp", file, "--order", "planned-sum"]));
    assert_eq!(planned["order"], serde_json::json!([2, 1]));
    assert_eq!(planned["total_space"], "12");
    assert_eq!(planned["outcome"]["status"], "reconstructed");
    assert_eq!(planned["outcome"]["y"], "10101");

    let bottleneck = stdout_json(&run(&["bsrp", file, "--order", "planned-bottleneck"]));
    assert_eq!(bottleneck["order"], serde_json::json!([2, 1]));
}

#[test]
fn bsrp_reports_infeasible_in_band() {
    let contradiction = write_temp(
        "contradiction.json",
        r#"{"m": 3, "triplets": [{"a": 1, "b": 2, "z": "00"}, {"a": 2, "b": 3, "z": "11"}]}"#,
    );
    let doc = stdout_json(&run(&["bsrp", contradiction.to_str().unwrap()]));
    assert_eq!(doc["outcome"]["status"], "infeasible");
    assert_eq!(doc["outcome"]["triplet"], 2);
}

#[test]
fn exit_codes_distinguish_failure_kinds() {
    let garbage = write_temp("garbage.json", "not json");
    assert_eq!(run(&["solve", garbage.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["detect", "/nonexistent/iord.json"]).status.code(), Some(1));

    let file = cluster5_file();
    let path = file.to_str().unwrap();
    // Structure preconditions fail on the non-laminar cluster.
    assert_eq!(run(&["solve", path, "--algo", "laminar"]).status.code(), Some(2));
    // Sum-only algorithms reject the bottleneck objective.
    let out = run(&["solve", path, "--algo", "convex", "--objective", "bottleneck"]);
    assert_eq!(out.status.code(), Some(2));
    // Invalid generator parameters.
    assert_eq!(run(&["gen", "partition", "--q", "1,1,1", "--k", "1"]).status.code(), Some(2));
}

#[test]
fn oracle_cap_env_var_limits_the_oracle() {
    let file = cluster5_file();
    let path = file.to_str().unwrap();
    let out = bin()
        .args(["solve", path, "--algo", "oracle"])
        .env("IO_ORACLE_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds oracle cap 3"));

    // Under the cap, --verify downgrades to a logged skip instead of failing.
    let skipped = bin()
        .args(["solve", path, "--algo", "greedy", "--verify"])
        .env("IO_ORACLE_CAP", "3")
        .output()
        .unwrap();
    assert!(skipped.status.success());
    assert!(String::from_utf8_lossy(&skipped.stderr).contains("verify: skipped"));

    let nonsense = bin()
        .args(["solve", path])
        .env("IO_ORACLE_CAP", "lots")
        .output()
        .unwrap();
    assert_eq!(nonsense.status.code(), Some(2));
}

#[test]
fn bench_emits_csv_rows() {
    let out = run(&["bench", "--family", "laminar", "--sizes", "10,20", "--repeat", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,n,algo,median_ms"));
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 4, "bad row {row:?}");
        assert_eq!(cols[0], "laminar");
        assert!(cols[1].parse::<usize>().is_ok());
        assert!(cols[3].parse::<f64>().unwrap() >= 0.0);
    }
}

#[test]
fn gen_writes_files_with_empty_stdout() {
    let target = std::env::temp_dir().join(format!("iord-test-{}-out.json", std::process::id()));
    let out = run(&["gen", "sorting", "--x", "3,1,2", "-o", target.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let inst = parse_instance_json(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(inst.n(), 3);
}

#[test]
fn sum_greedy_is_reported_as_heuristic() {
    let file = cluster5_file();
    let doc = stdout_json(&run(&["solve", file.to_str().unwrap(), "--algo", "greedy"]));
    assert_eq!(doc["status"], "HEURISTIC");
    assert_eq!(doc["algorithm"], "greedy");
}
