use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn sicaut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sicaut"))
        .args(args)
        .env_remove("SICAUT_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn smallest_sic_builds_and_passes() {
    let out = sicaut(&["sic", "build", "--had", "sylvester:1", "--ring", "gf:3", "--json"]);
    assert_eq!(code(&out), 0);
    let doc = json_of(&out);
    assert_eq!(doc["d"], 2);
    assert_eq!(doc["verdict"]["pass"], true);
    assert_eq!(doc["verdict"]["a"], serde_json::json!([0, 0]));
    assert_eq!(doc["verdict"]["b"], serde_json::json!([1, 0]));
    // x_11 = (1 + z, 1) with 1 + z = -1 - 2i = 2 + i mod 3
    assert_eq!(doc["vectors"][0], serde_json::json!([[2, 1], [1, 0]]));
}

#[test]
fn build_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hoggar.json");
    let p = path.to_str().unwrap();
    let out = sicaut(&["sic", "build", "--had", "sylvester:3", "--ring", "gauss", "--out", p]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&sicaut(&["sic", "verify", p])), 0);

    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    doc["vectors"][5][0] = serde_json::json!([7, 0]);
    fs::write(&path, doc.to_string()).unwrap();
    let out = sicaut(&["sic", "verify", p, "--json"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json_of(&out)["pass"], false);
}

#[test]
fn sandwich_report_is_exact_and_reproducible() {
    let args = ["sandwich", "--had", "sylvester:3", "--ring", "gauss", "--json"];
    let a = sicaut(&args);
    let b = sicaut(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let doc = json_of(&a);
    assert_eq!(doc["indices"], serde_json::json!([36, 2, 120]));
    assert_eq!(doc["groups"]["strong_tilde"]["order"], "92897280");
    assert_eq!(doc["groups"]["iota_weak_H"]["order"], "10752");
    assert_eq!(doc["totally_asymmetric"], false);
}

#[test]
fn scan_lists_replayable_recipes() {
    let out = sicaut(&["sic", "scan", "--prime", "3", "--max", "50", "--json"]);
    assert_eq!(code(&out), 0);
    let doc = json_of(&out);
    let dims: Vec<u64> = doc["dimensions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["d"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, vec![2, 8, 20, 32, 44]);
    for e in doc["dimensions"].as_array().unwrap() {
        let recipe = e["recipe"].as_str().unwrap();
        let check = sicaut(&["hadamard", "check", "--had", recipe, "--mod", "0"]);
        assert_eq!(code(&check), 0, "{recipe}");
    }
}

#[test]
fn generated_matrix_files_feed_other_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.had");
    let p = path.to_str().unwrap();
    let out = sicaut(&["hadamard", "gen", "kron", "sylvester:1", "sylvester:2", "--out", p]);
    assert_eq!(code(&out), 0);
    let out = sicaut(&["aut", "hadamard", "--had", p, "--strength", "weak", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["order"], "10752");
}

#[test]
fn failing_modular_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.had");
    fs::write(&path, "++\n++\n").unwrap();
    let out = sicaut(&["hadamard", "check", "--had", path.to_str().unwrap(), "--mod", "3"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn budget_exhaustion_exits_three() {
    let out = Command::new(env!("CARGO_BIN_EXE_sicaut"))
        .args(["aut", "tilde", "--had", "sylvester:3"])
        .env("SICAUT_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&sicaut(&["frobnicate"])), 2);
    assert_eq!(code(&sicaut(&["sic", "build", "--had", "sylvester:1", "--ring", "gf:5"])), 2);
    assert_eq!(code(&sicaut(&["sic", "build", "--had", "sylvester:2", "--ring", "gf:3"])), 2);
    assert_eq!(code(&sicaut(&["sic", "verify", "/nonexistent/sic.json"])), 2);
    assert_eq!(code(&sicaut(&["aut", "tilde", "--had", "sylvester:1", "--budget", "0"])), 2);
}

#[test]
fn witness_check_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    // row swap of sylvester(1): H' = [[1, -1], [1, 1]] with column 1 negated
    fs::write(
        &good,
        r#"{"pi": [1, 0], "sigma": [0, 1], "row_signs": [1, 1], "col_signs": [1, 1]}"#,
    )
    .unwrap();
    let h2 = dir.path().join("h2.had");
    fs::write(&h2, "+-\n++\n").unwrap();
    let args = |w: &str| {
        vec![
            "witness".to_string(),
            "check".into(),
            "--had".into(),
            "sylvester:1".into(),
            "--had2".into(),
            h2.to_str().unwrap().into(),
            "--witness".into(),
            w.into(),
            "--ring".into(),
            "gf:3".into(),
        ]
    };
    let run = |w: &str| {
        Command::new(env!("CARGO_BIN_EXE_sicaut"))
            .args(args(w))
            .output()
            .unwrap()
    };
    assert_eq!(code(&run(good.to_str().unwrap())), 0);
    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"pi": [1, 0], "sigma": [0, 1], "row_signs": [1, -1], "col_signs": [1, 1]}"#,
    )
    .unwrap();
    let out = run(bad.to_str().unwrap());
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("entry"));
}

#[test]
fn primes_for_dimension() {
    let out = sicaut(&["sic", "primes", "--dim", "36", "--json"]);
    assert_eq!(json_of(&out)["primes"], serde_json::json!([7]));
    let out = sicaut(&["sic", "primes", "--dim", "8", "--bound", "20", "--json"]);
    let doc = json_of(&out);
    assert_eq!(doc["all"], true);
    assert_eq!(doc["primes"], serde_json::json!([3, 7, 11, 19]));
}
