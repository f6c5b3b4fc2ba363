use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("formality-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str], out: &PathBuf) -> (i32, Option<Value>) {
    let status = Command::new(env!("CARGO_BIN_EXE_formality"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
        .status;
    let report = std::fs::read_to_string(out)
        .ok()
        .map(|s| serde_json::from_str(&s).unwrap());
    (status.code().unwrap(), report)
}

#[test]
fn enumerate_single_edge() {
    let out = scratch("enumerate.json");
    let (code, report) = run(&["enumerate", "--n", "2", "--weight", "1"], &out);
    let report = report.unwrap();
    assert_eq!(code, 0);
    assert_eq!(report["command"], "enumerate");
    assert_eq!(report["results"]["count"], 1);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn cohomology_table_for_three_points() {
    let out = scratch("cohomology.json");
    let (code, report) = run(&["cohomology", "--n", "3", "--max-weight", "4"], &out);
    assert_eq!(code, 0);
    let dims: Vec<u64> = report.unwrap()["results"]["table"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| row["dims"]["0"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, [3, 1, 2, 3]);
}

#[test]
fn associator_report_has_errors_and_exact_oracle() {
    let out = scratch("associator.json");
    let (code, report) = run(
        &["associator", "--samples", "200000", "--seed", "42", "--nodes", "12"],
        &out,
    );
    let report = report.unwrap();
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["results"]["hexagon_solution"], "-1/24");
    assert!(report["results"]["coefficient"]["stderr"].as_f64().unwrap() > 0.0);
    assert_eq!(report["results"]["weight_one"].as_array().unwrap().len(), 3);
}

#[test]
fn usage_errors_exit_with_two() {
    let out = scratch("usage.json");
    assert_eq!(run(&["sder", "--no-such-flag"], &out).0, 2);
    assert_eq!(run(&["flatness"], &out).0, 2, "missing seed");
    assert_eq!(run(&["sder", "--n", "0"], &out).0, 2);
    assert!(!out.exists());
}

#[test]
fn resource_limit_writes_a_partial_report() {
    let out = scratch("limited.json");
    let (code, report) = run(
        &["enumerate", "--n", "3", "--max-weight", "3", "--limit-graphs", "5"],
        &out,
    );
    let report = report.unwrap();
    assert_eq!(code, 3);
    assert_eq!(report["results"]["blocks"].as_array().unwrap().len(), 2);
    let last = report["checks"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(last["pass"], false);
    assert!(last["detail"]["error"].as_str().unwrap().contains("limit"));
}

#[test]
fn equal_seeds_give_identical_files() {
    let (a, b) = (scratch("det-a.json"), scratch("det-b.json"));
    let args = [
        "report",
        "--seed",
        "7",
        "--samples",
        "20000",
        "--configs",
        "1",
        "--nodes",
        "6",
        "--max-weight",
        "3",
    ];
    assert_eq!(run(&args, &a).0, 0);
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "2"]);
    assert_eq!(run(&threaded, &b).0, 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn config_file_values_apply_and_flags_win() {
    let cfg = scratch("run.cfg");
    std::fs::write(&cfg, "n = 2\nweight = 1\n").unwrap();
    let out = scratch("from-config.json");
    let (code, report) = run(&["enumerate", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!(code, 0);
    assert_eq!(report.unwrap()["results"]["count"], 1);
    let (_, report) = run(&["enumerate", "--config", cfg.to_str().unwrap(), "--n", "3"], &out);
    assert_eq!(report.unwrap()["results"]["count"], 3);
}
