use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn problem(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(name)
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hkcalc")).args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, stdout)
}

fn column(report: &Value, key: &str) -> Vec<String> {
    report["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r[key].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn quartic_series() {
    let p = problem("quartic.hk");
    let (code, r, _) = run(&["series", p.to_str().unwrap(), "--nmax", "2"]);
    assert_eq!(code, 0);
    assert_eq!(column(&r, "e"), ["1", "339", "43017"]);
    assert_eq!(r["ring"]["dim"], 3);
    assert_eq!(r["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn determinantal_series() {
    let p = problem("determinantal.hk");
    let (code, r, _) = run(&["series", p.to_str().unwrap(), "--nmax", "2"]);
    assert_eq!(code, 0);
    assert_eq!(column(&r, "e"), ["1", "123", "10467"]);
}

#[test]
fn regular_ring_series() {
    let p = scratch("regular.hk", "ring p=3 vars=[x,y]\n");
    let (code, r, _) = run(&["series", p.to_str().unwrap(), "--nmax", "3"]);
    assert_eq!(code, 0);
    assert_eq!(column(&r, "e"), ["1", "9", "81", "729"]);
}

#[test]
fn verify_declared_form() {
    let p = problem("quartic.hk");
    let (code, r, _) = run(&["verify", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["analysis"]["all_pass"], true);

    let (code, r, _) = run(&["verify", p.to_str().unwrap(), "--closed-form", "3 * 125^n - 2 * 3^n"]);
    assert_eq!(code, 1);
    assert_eq!(r["analysis"]["all_pass"], false);
    assert_eq!(r["error"]["kind"], "verification_failed");
}

#[test]
fn check_determinantal() {
    let p = problem("determinantal.hk");
    let (code, r, _) = run(&["check", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["d"], 4);
    assert_eq!(r["results"]["m_primary"], true);
    assert_eq!(r["results"]["homogeneous"], true);
}

#[test]
fn fit_on_exact_data() {
    let p = scratch(
        "synthetic.hk",
        "ring p=2 vars=[x,y,z]\ndata E = [7, 36, 208, 1344]\n",
    );
    let (code, r, _) = run(&["fit", p.to_str().unwrap(), "--data", "E", "--nmax", "3", "--d", "3"]);
    assert_eq!(code, 0);
    let fit = &r["analysis"]["fit"];
    assert_eq!(fit["alpha"], "2");
    assert_eq!(fit["beta"], "5");
    assert!(fit["residuals"].as_array().unwrap().iter().all(|x| x["exact"] == "0"));
}

#[test]
fn residual_bound_flags() {
    let p = problem("determinantal.hk");
    let (code, r, _) = run(&[
        "fit",
        p.to_str().unwrap(),
        "--data",
        "E",
        "--nmax",
        "3",
        "--alpha",
        "13/8",
        "--beta",
        "-1/4",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["analysis"]["residual_bound"]["c_min"], "5/24");
}

#[test]
fn tor_and_delta() {
    let p = problem("quartic.hk");
    let (code, r, _) = run(&["tor", p.to_str().unwrap(), "--module", "T", "--nmax", "2"]);
    assert_eq!(code, 0);
    assert_eq!(column(&r, "tor"), ["1", "75", "1900"]);

    let p = problem("plane.hk");
    let (code, r, _) = run(&["delta", p.to_str().unwrap(), "--module", "J", "--nmax", "2"]);
    assert_eq!(code, 0);
    assert_eq!(column(&r, "delta"), ["1", "1", "1"]);
}

#[test]
fn gb_of_ideal() {
    let p = problem("plane.hk");
    let (code, r, _) = run(&["gb", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["colength"], "1");
    assert_eq!(r["results"]["krull_dimension"], 0);
}

#[test]
fn non_prime_characteristic() {
    let p = scratch("p6.hk", "ring p=6 vars=[x,y]\n");
    let (code, r, _) = run(&["series", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(r["error"]["kind"], "non_prime_characteristic");
    assert_eq!(r["error"]["line"], 1);
}

#[test]
fn unknown_reference() {
    let p = problem("plane.hk");
    let (code, r, _) = run(&["series", p.to_str().unwrap(), "--module", "Nope"]);
    assert_eq!(code, 1);
    assert_eq!(r["error"]["kind"], "unknown_reference");
}

#[test]
fn not_m_primary() {
    let p = scratch("line.hk", "ring p=3 vars=[x,y]\nideal I = [x]\n");
    let (code, r, _) = run(&["series", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(r["error"]["kind"], "not_m_primary");
}

#[test]
fn budget_exceeded_keeps_partial_results() {
    let p = problem("determinantal.hk");
    let (code, r, _) = run(&["series", p.to_str().unwrap(), "--budget-pairs", "5"]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "budget_exceeded");
    assert_eq!(column(&r, "e"), ["1"]);
    assert!(!r["diagnostics"]["failures"].as_array().unwrap().is_empty());
}

#[test]
fn usage_error_exits_one() {
    let (code, r, _) = run(&["series", "--bogus"]);
    assert_eq!(code, 1);
    assert_eq!(r["error"]["kind"], "usage");
}

#[test]
fn deterministic_without_timing() {
    let p = problem("quartic.hk");
    let args = ["series", p.to_str().unwrap(), "--nmax", "2", "--no-timing"];
    let (_, a, ta) = run(&args);
    let (_, _, tb) = run(&args);
    assert_eq!(ta, tb);
    assert!(a.get("timing").is_none());
    let (_, with, _) = run(&args[..4]);
    assert!(with["timing"]["elapsed_ms"].is_number());
}

#[test]
fn echoed_input_reparses_to_same_results() {
    let p = problem("plane.hk");
    let (_, r, _) = run(&["series", p.to_str().unwrap(), "--nmax", "2", "--no-timing"]);
    let echo = scratch("echo.hk", r["input"].as_str().unwrap());
    let (code, again, _) = run(&["series", echo.to_str().unwrap(), "--nmax", "2", "--no-timing"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"], again["results"]);
    assert_eq!(r["input"], again["input"]);
}

#[test]
fn json_file_matches_stdout() {
    let p = problem("quartic.hk");
    let out = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli-tests/report.json");
    std::fs::create_dir_all(out.parent().unwrap()).unwrap();
    let (code, _, stdout) = run(&["series", p.to_str().unwrap(), "--no-timing", "--json", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), stdout);
}
