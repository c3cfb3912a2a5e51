use std::process::Command;

use seqclass_cli::run_from_args;
use serde_json::Value;

fn run(args: &[&str]) -> seqclass_cli::Outcome {
    run_from_args(std::iter::once("seqclass").chain(args.iter().copied()))
}

fn binary() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_seqclass"));
    cmd.env_remove("SEQCLASS_SEED");
    cmd
}

#[test]
fn states_two_qubit_mixed_is_maximally_mixed() {
    let out = run(&["states", "--label", "01"]);
    assert_eq!(out.code, 0);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["basis"], "schur");
    assert_eq!(v["dim"], 4);
    let entries = v["entries"].as_array().unwrap();
    for i in 0..4 {
        let re = entries[i * 4 + i][0].as_f64().unwrap();
        assert!((re - 0.25).abs() < 1e-15, "diagonal {i}: {re}");
    }
}

#[test]
fn states_three_qubit_symmetric_is_scaled_projector() {
    let out = run(&["states", "--label", "000", "--basis", "computational"]);
    assert_eq!(out.code, 0);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let diag: f64 = (0..8).map(|i| v["entries"][i * 9][0].as_f64().unwrap()).sum();
    assert!((diag - 1.0).abs() < 1e-14);
    assert!((v["entries"][0][0].as_f64().unwrap() - 0.25).abs() < 1e-15);
}

#[test]
fn bad_label_exits_two() {
    let out = run(&["states", "--label", "9"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("unknown hypothesis"));
    let status = binary().args(["states", "--label", "9"]).output().unwrap();
    assert_eq!(status.status.code(), Some(2));
}

#[test]
fn unknown_command_prints_usage() {
    let out = run(&["frobnicate"]);
    assert_ne!(out.code, 0);
    assert!(out.stderr.contains("Usage"));
}

#[test]
fn out_of_range_parameters_exit_two() {
    assert_eq!(run(&["povm", "--kind", "weak", "--alpha", "0.8", "--beta", "0.5"]).code, 2);
    assert_eq!(run(&["povm", "--kind", "mirror", "--a", "1.5"]).code, 2);
    assert_eq!(run(&["tradeoff", "--n-points", "1"]).code, 2);
}

#[test]
fn povm_reports_pass() {
    for args in [
        vec!["povm", "--kind", "two-qubit"],
        vec!["povm", "--kind", "three-qubit"],
        vec!["povm", "--kind", "weak", "--alpha", "0.4", "--beta", "0.2"],
        vec!["povm", "--kind", "second", "--alpha", "0.9", "--beta", "0.05", "--outcome", "plus"],
        vec!["povm", "--kind", "mirror", "--a", "0.3", "--basis", "computational"],
    ] {
        let out = run(&args);
        assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["report"]["passed"], true, "{args:?}");
    }
}

#[test]
fn csv_outputs_carry_schema_line() {
    for args in [
        vec!["tradeoff"],
        vec!["figure1", "--panels"],
        vec!["figure2", "--n-points", "5"],
        vec!["states", "--label", "00", "--format", "csv"],
    ] {
        let out = run(&args);
        assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
        assert!(out.stdout.starts_with("# schema=1\n"), "{args:?}");
    }
}

#[test]
fn tradeoff_rows_match_checkpoints() {
    let out = run(&["tradeoff", "--n-points", "101"]);
    let rows: Vec<Vec<f64>> =
        out.stdout.lines().skip(2).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 101);
    assert_eq!(rows[0][0], 0.5);
    assert!((rows[0][1] - 5.0 / 12.0).abs() < 1e-15);
    assert_eq!(rows[100][0], 0.625);
    assert!((rows[100][1] - 19.0 / 48.0).abs() < 1e-12);
    assert!(rows.windows(2).all(|w| w[1][0] > w[0][0]));
}

#[test]
fn tradeoff_json_matches_csv() {
    let csv = run(&["tradeoff", "--n-points", "7"]).stdout;
    let json: Value = serde_json::from_str(&run(&["tradeoff", "--n-points", "7", "--format", "json"]).stdout).unwrap();
    assert_eq!(json["schema"], 1);
    for (line, row) in csv.lines().skip(2).zip(json["rows"].as_array().unwrap()) {
        let p2: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(p2, row["p_second"].as_f64().unwrap());
    }
}

#[test]
fn figure1_needs_a_point() {
    assert_eq!(run(&["figure1"]).code, 2);
    let out = run(&["figure1", "--alpha", "1", "--beta", "0", "--format", "json"]);
    assert_eq!(out.code, 0);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
}

#[test]
fn figure1_projective_corner_omits_vanishing_element() {
    let out = run(&["figure1", "--alpha", "1", "--beta", "0", "--outcome", "minus"]);
    let line = out.stdout.lines().find(|l| l.contains("pi_001")).unwrap();
    assert!(line.ends_with(",true"), "{line}");
    assert!(line.contains(",,"), "angle should be empty: {line}");
}

#[test]
fn simulate_is_deterministic_and_reads_seed_from_env() {
    let a = run(&["simulate", "--alpha", "0.5", "--beta", "0.2", "--n", "20000", "--seed", "9"]);
    let b = run(&["simulate", "--alpha", "0.5", "--beta", "0.2", "--n", "20000", "--seed", "9"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let env = binary()
        .args(["simulate", "--alpha", "0.5", "--beta", "0.2", "--n", "20000"])
        .env("SEQCLASS_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(env.stdout).unwrap(), a.stdout);
}

#[test]
fn figure2_overlay_is_reproducible() {
    let args = ["figure2", "--n-points", "3", "--mc-n", "5000", "--seed", "3", "--format", "json"];
    let a = run(&args);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, run(&args).stdout);
    let v: Value = serde_json::from_str(&a.stdout).unwrap();
    assert!(v["rows"][0]["p1_hat"].is_number());
}

#[test]
fn verify_passes_and_reports_checkpoints() {
    let out = run(&["verify", "--profile", "quick"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    let fractions: Vec<&str> =
        v["checks"].as_array().unwrap().iter().filter_map(|c| c["expected"]["fraction"].as_str()).collect();
    for f in ["5/8", "5/12", "19/48", "7/12"] {
        assert!(fractions.contains(&f), "missing {f}");
    }
    let five_twelfths = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "three_qubit_optimum").unwrap();
    assert_eq!(five_twelfths["expected"]["decimal"], "0.416666666666667");
}

#[test]
fn verify_with_monte_carlo_gates() {
    let out = run(&["verify", "--profile", "quick", "--with-mc", "--n", "100000", "--seed", "42"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let mc = v["checks"].as_array().unwrap().iter().filter(|c| c["group"] == "monte_carlo").count();
    assert_eq!(mc, 6);
}

#[test]
fn injected_fault_fails_verify() {
    let out = run(&["verify", "--profile", "quick", "--inject-fault", "three_qubit_optimum"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("FAILED three_qubit_optimum"));
    let status = binary().args(["verify", "--inject-fault", "curve_endpoint"]).output().unwrap();
    assert_eq!(status.status.code(), Some(1));
    assert_eq!(run(&["verify", "--inject-fault", "no_such_check"]).code, 2);
}

#[test]
fn schur_dump_is_json() {
    let out = run(&["schur", "--n", "2"]);
    assert_eq!(out.code, 0);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(v.is_object());
    assert_eq!(run(&["schur", "--n", "4"]).code, 2);
}
