use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jacobson_core::generate::gen_example_3_6;
use jacobson_core::jacobson::Quadruple;
use jacobson_core::Matrix;
use serde_json::Value;
use tempfile::TempDir;

fn jacobson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jacobson")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn write_json<T: serde::Serialize>(dir: &TempDir, name: &str, value: &T) -> PathBuf {
    write(dir, name, &serde_json::to_string(value).unwrap())
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn matrix_at(v: &Value) -> Matrix {
    serde_json::from_value(v.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn drazin_of_examples() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (Matrix::identity(2), Matrix::identity(2), 0),
        (Matrix::from_ints(&[[0, 1], [0, 0]]), Matrix::zeros(2, 2), 2),
        (Matrix::from_ints(&[[1, 1], [1, 0]]), Matrix::from_ints(&[[0, 1], [1, -1]]), 0),
        (Matrix::from_ints(&[[1, 0], [0, 0]]), Matrix::from_ints(&[[1, 0], [0, 0]]), 1),
    ];
    for (i, (a, expected, index)) in cases.into_iter().enumerate() {
        let path = write_json(&dir, &format!("m{i}.json"), &a);
        let out = jacobson(&["drazin", "--input", path_str(&path)]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let v = stdout_json(&out);
        assert_eq!(matrix_at(&v["dinv"]), expected);
        assert_eq!(v["index"], index);
    }
}

#[test]
fn group_transfer_on_worked_example() {
    let dir = TempDir::new().unwrap();
    let path = write_json(&dir, "q.json", &gen_example_3_6());
    let out = jacobson(&["transfer", "--input", path_str(&path), "--mode", "group"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["agrees"], true);
    assert!(matrix_at(&v["beta_drazin"]["dinv"]).is_identity());
}

#[test]
fn zero_quadruple_gives_identity_pair() {
    let dir = TempDir::new().unwrap();
    let path = write_json(&dir, "zero.json", &Quadruple::zero(3));
    for mode in ["gdrazin", "drazin", "group"] {
        let out = jacobson(&["transfer", "--input", path_str(&path), "--mode", mode]);
        assert_eq!(out.status.code(), Some(0), "mode {mode}");
        let v = stdout_json(&out);
        assert!(matrix_at(&v["beta_drazin"]["dinv"]).is_identity());
        assert_eq!(v["alpha_index"], 0);
    }
}

#[test]
fn violated_conditions_exit_with_usage_error() {
    let dir = TempDir::new().unwrap();
    let q = Quadruple::new(
        Matrix::from_ints(&[[1, 2], [3, 4]]),
        Matrix::from_ints(&[[0, 1], [1, 1]]),
        Matrix::from_ints(&[[2, 0], [1, 3]]),
        Matrix::from_ints(&[[1, -1], [2, 0]]),
    )
    .unwrap();
    let path = write_json(&dir, "bad.json", &q);
    let out = jacobson(&["transfer", "--input", path_str(&path)]);
    assert_eq!(out.status.code(), Some(2));

    let out = jacobson(&["check-conditions", "--input", path_str(&path)]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["all_hold"], false);
}

#[test]
fn triple_input_lifts_with_d_equal_a() {
    let dir = TempDir::new().unwrap();
    let q = gen_example_3_6();
    let triple = serde_json::json!({ "a": q.a, "b": q.b, "c": q.c });
    let path = write_json(&dir, "triple.json", &triple);
    let out = jacobson(&["check-conditions", "--input", path_str(&path)]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["all_hold"], true);
}

#[test]
fn verify_classic_corpus() {
    let out = jacobson(&["verify", "--family", "classic", "--size", "3", "--count", "100", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["total"], 100);
    assert_eq!(v["passed"], 100);
    assert!(String::from_utf8_lossy(&out.stderr).contains("100/100 passed"));
}

#[test]
fn verify_worked_example_reports_index_pair() {
    let out = jacobson(&["verify", "--family", "example_3_6"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["index_pairs"], serde_json::json!([[0, 0]]));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(jacobson(&["verify", "--count", "0"]).status.code(), Some(2));
    assert_eq!(jacobson(&["verify", "--size", "0"]).status.code(), Some(2));
    assert_eq!(jacobson(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(jacobson(&["drazin", "--input", "/nonexistent/m.json"]).status.code(), Some(2));

    let dir = TempDir::new().unwrap();
    let malformed = [
        "not json",
        r#"{"rows":2,"cols":2,"entries":[[["1","0"]]]}"#,
        r#"{"rows":1,"cols":1,"entries":[[["1/0","0"]]]}"#,
        r#"{"rows":1,"cols":2,"entries":[[["1","0"],["1.5","0"]]]}"#,
    ];
    for (i, text) in malformed.iter().enumerate() {
        let path = write(&dir, &format!("bad{i}.json"), text);
        assert_eq!(jacobson(&["drazin", "--input", path_str(&path)]).status.code(), Some(2), "{text}");
    }

    let nonsquare = write(&dir, "rect.json", r#"{"rows":1,"cols":2,"entries":[[["1","0"],["2","0"]]]}"#);
    assert_eq!(jacobson(&["drazin", "--input", path_str(&nonsquare)]).status.code(), Some(2));
}

#[test]
fn gen_then_verify_file() {
    let dir = TempDir::new().unwrap();
    let corpus = dir.path().join("corpus.json");
    let out = jacobson(&[
        "gen", "--family", "cor22", "--size", "4", "--count", "8", "--seed", "3", "--output", path_str(&corpus),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&corpus).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["instances"].as_array().unwrap().len(), 8);

    let again = dir.path().join("again.json");
    jacobson(&[
        "gen", "--family", "cor22", "--size", "4", "--count", "8", "--seed", "3", "--output", path_str(&again),
    ]);
    assert_eq!(std::fs::read_to_string(&again).unwrap(), text, "generation is deterministic");

    let out = jacobson(&["verify", "--input", path_str(&corpus)]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["passed"], 8);
}

#[test]
fn power_subcommand() {
    let dir = TempDir::new().unwrap();
    let q = gen_example_3_6();
    let path = write_json(&dir, "q.json", &q);
    let out = jacobson(&["power", "--input", path_str(&path), "--n", "1"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let back: Quadruple = serde_json::from_value(v["quadruple"].clone()).unwrap();
    assert_eq!(back, q);

    let out = jacobson(&["power", "--input", path_str(&path), "--n", "3"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let p: Quadruple = serde_json::from_value(v["quadruple"].clone()).unwrap();
    assert_eq!(p.beta(), q.beta().pow(3).unwrap());
    assert_eq!(v["transfer"]["agrees"], true);

    assert_eq!(jacobson(&["power", "--input", path_str(&path), "--n", "0"]).status.code(), Some(2));
}

#[test]
fn pretty_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let a = Matrix::from_ints(&[[2, 0, 0], [0, 0, 1], [0, 0, 0]]);
    let path = write_json(&dir, "a.json", &a);
    let compact = jacobson(&["drazin", "--input", path_str(&path)]);
    let pretty = jacobson(&["--pretty", "drazin", "--input", path_str(&path)]);
    assert!(String::from_utf8_lossy(&pretty.stdout).contains('\n'));
    assert_eq!(stdout_json(&compact), stdout_json(&pretty));
    let dinv = matrix_at(&stdout_json(&compact)["dinv"]);
    let written = write_json(&dir, "dinv.json", &dinv);
    let out = jacobson(&["drazin", "--input", path_str(&written)]);
    assert!(out.status.success());
    assert_eq!(matrix_at(&stdout_json(&out)["dinv"]), &(&a * &a) * &dinv);
}
