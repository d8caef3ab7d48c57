use std::path::Path;
use std::process::{Command, Output};

use icb_core::coeffring::Poly;
use icb_core::fixtures::{compare_vectors, HALF_ALPHA, HALF_V};
use icb_core::ramified::RamifiedSolution;
use serde_json::Value;

fn icb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icb")).args(args).env_remove("ICB_PRECISION").output().expect("spawn icb")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn half_rank_solution_matches_printed_vectors() {
    let out = icb(&["solve-ramified", "--r", "1", "--lambda-vec", "1,0", "--beta", "b", "--c0-mode", "preset:ex36", "--order", "3"]);
    let sol = RamifiedSolution::from_json(&json(&out)).unwrap();
    let alpha = Poly::parse(&sol.params, HALF_ALPHA).unwrap();
    assert_eq!(compare_vectors(&sol, HALF_V, &alpha).unwrap(), Vec::<String>::new());
}

#[test]
fn documented_invocation_runs() {
    let v = json(&icb(&["solve-ramified", "--r", "1", "--lambda-vec", "1,0", "--beta", "4nu", "--c0-mode", "preset:ex36", "--order", "3"]));
    assert_eq!(v["kind"], "ramified");
    assert_eq!(v["v"].as_array().unwrap().len(), 4);
}

#[test]
fn fixtures_suite_passes() {
    let out = icb(&["fixtures", "run", "--suite", "paper"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["passed"], v["total"]);
}

#[test]
fn exit_codes() {
    let bad_flag = icb(&["solve-ramified", "--bogus"]);
    assert_eq!(bad_flag.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_flag.stderr).contains("Usage"));
    assert_eq!(icb(&["tau-p3", "--theta1", "0.3", "--theta2", "0.1", "--nu", "0.2", "--s", "1", "--t", "2", "--prec", "32"]).status.code(), Some(2));
    assert_eq!(icb(&["fixtures", "run", "--suite", "other"]).status.code(), Some(2));
    assert_eq!(icb(&["solve-ramified", "--r", "1", "--lambda-vec", "1,0", "--beta", "b+", "--order", "1"]).status.code(), Some(2));

    // ⟨Δ'|L_1 is undefined for Δ' ≠ 0: a domain error
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("s.json");
    let s = sol.to_str().unwrap();
    let solved = icb(&["solve-ramified", "--r", "2", "--lambda-vec", "0,1,0", "--beta", "0,0,b", "--c0-mode", "preset:ex38", "--order", "2", "--params", "P", "--out", s]);
    assert!(solved.status.success());
    let out = icb(&["block", "--solution", s, "--delta-prime", "P"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.lines().count(), 1, "{err}");
}

#[test]
fn precision_resolution() {
    let args = ["tau-p2", "--theta", "0.3", "--nu", "0.2", "--s", "0.5", "--t", "20"];
    assert_eq!(json(&icb(&args))["precision"], 128);
    let env = Command::new(env!("CARGO_BIN_EXE_icb")).args(args).env("ICB_PRECISION", "96").output().unwrap();
    assert_eq!(json(&env)["precision"], 96);
    let mut flagged = args.to_vec();
    flagged.extend(["--prec", "160"]);
    let both = Command::new(env!("CARGO_BIN_EXE_icb")).args(&flagged).env("ICB_PRECISION", "96").output().unwrap();
    assert_eq!(json(&both)["precision"], 160);
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    full.extend(["--out", &p]);
    let out = icb(&full);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    std::fs::read(&path).unwrap()
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("sol.json");
    let sol_s = sol.to_str().unwrap().to_string();
    let cases: Vec<Vec<&str>> = vec![
        vec!["solve-rank-r", "--r", "2", "--lambda", "l0,l1,l2", "--beta-r", "b", "--delta", "D", "--rho", "rho", "--order", "2"],
        vec!["solve-ramified", "--r", "1", "--lambda-vec", "1,0", "--beta", "b", "--c0-mode", "preset:ex36", "--order", "3", "--params", "P"],
        vec!["singular-solve", "--p", "1", "--q", "2"],
        vec!["singular-vector", "--p", "2", "--q", "2"],
        vec!["tau-p3", "--theta1", "0.3", "--theta2", "0.1", "--nu", "0.25", "--s", "0.5", "--t", "-40"],
        vec!["tau-p2", "--theta", "0.3", "--nu", "0.2", "--s", "0.5", "--t", "30", "--branch-k", "1"],
        vec!["check-ode", "p2", "--theta", "0.3", "--nu", "0.2", "--s", "0.4", "--t-list", "30,40", "--mode-factor", "adjusted"],
        vec!["fixtures", "run", "--suite", "paper"],
    ];
    for (k, args) in cases.iter().enumerate() {
        let a = run_to(dir.path(), &format!("a{k}"), args);
        let b = run_to(dir.path(), &format!("b{k}"), args);
        assert_eq!(a, b, "{args:?}");
    }
    run_to(dir.path(), "unused", &["solve-ramified", "--r", "1", "--lambda-vec", "1,0", "--beta", "b", "--c0-mode", "preset:ex36", "--order", "3", "--params", "P"]);
    std::fs::copy(dir.path().join("unused"), &sol).unwrap();
    let a = run_to(dir.path(), "ba", &["block", "--solution", &sol_s, "--delta-prime", "P"]);
    let b = run_to(dir.path(), "bb", &["block", "--solution", &sol_s, "--delta-prime", "P"]);
    assert_eq!(a, b);
}

#[test]
fn sequential_and_parallel_agree() {
    let args = ["check-ode", "p3", "--theta1", "0.3", "--theta2", "0.1", "--nu", "0.25", "--s", "0.5", "--t-list", "-30,-40", "--mode-factor", "adjusted"];
    let par = icb(&args);
    let mut seq_args = args.to_vec();
    seq_args.push("--sequential");
    let seq = icb(&seq_args);
    assert_eq!(json(&par), json(&seq));
}

#[test]
fn check_ode_report_shape() {
    let v = json(&icb(&["check-ode", "p2", "--theta", "0.3", "--nu", "0.2", "--s", "0.4", "--t-list", "30,40", "--mode-factor", "adjusted"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for r in rows {
        for key in ["t", "tau", "h", "residual", "relative_residual"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
        let rel: f64 = r["relative_residual"].as_str().unwrap().parse().unwrap();
        assert!(rel < 1e-5, "{rel}");
    }
}

#[test]
fn text_format_and_singular_solve() {
    let out = icb(&["singular-solve", "--p", "1", "--q", "2", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("(p,q) = (1,2): 2 solutions"), "{text}");
    let v = json(&icb(&["singular-solve", "--p", "2", "--q", "1"]));
    assert_eq!(v["count"], v["expected"]);
}
