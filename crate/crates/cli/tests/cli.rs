use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_powerspec"))
        .args(args)
        .output()
        .expect("spawn powerspec")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).expect("valid json")
}

#[test]
fn charpoly_k2() {
    let v = json(&["--graph", "path:2", "--format", "json", "charpoly", "--k", "3"]);
    assert_eq!(v["k"], 3);
    assert_eq!(v["mu0"], "3");
    let factors = v["factors"].as_array().unwrap();
    assert_eq!(factors.len(), 1);
    assert_eq!(factors[0]["mu"], "3");
    assert_eq!(factors[0]["sigma_sq"].as_f64(), Some(1.0));
    assert_eq!(v["text"], "λ^3 (λ^3 − 1)^3");
}

#[test]
fn beta_triangle_text() {
    let o = run(&["--graph", "cycle:3", "beta"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("(λ^2 − 1) (λ^2 − 4)^(1/2)"), "{}", stdout(&o));
}

#[test]
fn walks_inline_graph() {
    let v = json(&["--graph", "3 3\n0 1\n1 2\n2 0", "--format", "json", "walks", "--length", "3", "--kind", "closed"]);
    assert_eq!(v[0]["value"], "6");
}

#[test]
fn matching_triangle() {
    let v = json(&["--graph", "cycle:3", "--format", "json", "matching", "--method", "signed-mean"]);
    assert_eq!(v["text"], "λ^3 - 3λ");
}

#[test]
fn json_is_deterministic() {
    let args = ["--graph", "cycle:4", "--format", "json", "charpoly", "--k", "3"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn verify_quick_succeeds() {
    let o = run(&["verify", "--scope", "quick"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn corrupted_verify_fails() {
    let o = run(&["--graph", "path:2", "verify", "--only-graph", "--corrupt-dk"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn amgm_triangle_strict() {
    let v = json(&["--graph", "cycle:3", "--format", "json", "amgm", "--at", "3"]);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["equality"], false);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["charpoly", "--k", "3"]).status.code(), Some(2));
}

#[test]
fn computation_errors_exit_1() {
    assert_eq!(run(&["--graph", "2 1\n0 0", "beta"]).status.code(), Some(1));
    assert_eq!(run(&["--graph", "path:2", "charpoly", "--k", "1"]).status.code(), Some(1));
}
