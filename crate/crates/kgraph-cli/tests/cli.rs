//! End-to-end tests of the kgraph binary: exit codes 0/1/2/3, JSON reports on
//! stdout, summaries on stderr.

use std::path::{Path, PathBuf};
use std::process::Command;

use kgraph::generators;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kgraph"))
}

struct Run {
    code: i32,
    stdout: Value,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = bin().args(args).output().expect("binary runs");
    let stdout = if out.stdout.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&out.stdout).expect("stdout is JSON")
    };
    Run {
        code: out.status.code().expect("exit code"),
        stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn write_instance(dir: &Path, name: &str, instance: &kgraph::Instance) -> PathBuf {
    let path = dir.join(name);
    instance.save(&path).expect("instance writes");
    path
}

#[test]
fn validate_torus_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(dir.path(), "torus.json", &generators::torus());
    let r = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert_eq!(r.stdout["status"], "pass");
    assert_eq!(r.stdout["complete"], true);
    assert_eq!(r.stdout["associative"], true);
}

#[test]
fn validate_incomplete_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut torus = generators::torus();
    torus.squares.clear();
    let path = write_instance(dir.path(), "bad.json", &torus);
    let r = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout["status"], "fail");
    assert_eq!(r.stdout["complete"], false);
}

#[test]
fn analyze_torus_exits_one_with_periodicity_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(dir.path(), "torus.json", &generators::torus());
    let r = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(r.code, 1, "stderr: {}", r.stderr);
    assert_eq!(r.stdout["simplicity"]["status"], "fails");
    assert_eq!(
        r.stdout["simplicity"]["witness"]["kind"],
        "periodicity"
    );
    assert!(r.stderr.contains("not simple"));
}

#[test]
fn analyze_with_tiny_path_bound_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let a = generators::loops_1graph("a", 2);
    let b = generators::loops_1graph("b", 2);
    let free = generators::product_of_1graphs(&[&a, &b]).unwrap();
    let path = write_instance(dir.path(), "free.json", &free);
    let r = run(&[
        "analyze",
        path.to_str().unwrap(),
        "--pair-bound",
        "1,1",
        "--path-bound",
        "0,0",
    ]);
    assert_eq!(r.code, 2, "stderr: {}", r.stderr);
    assert_eq!(r.stdout["simplicity"]["status"], "inconclusive");
}

#[test]
fn analyze_free_instance_holds() {
    let dir = tempfile::tempdir().unwrap();
    let a = generators::loops_1graph("a", 2);
    let b = generators::loops_1graph("b", 2);
    let free = generators::product_of_1graphs(&[&a, &b]).unwrap();
    let path = write_instance(dir.path(), "free.json", &free);
    let r = run(&[
        "analyze",
        path.to_str().unwrap(),
        "--pair-bound",
        "2,2",
        "--path-bound",
        "4,4",
        "--n-bound",
        "4,4",
    ]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert_eq!(r.stdout["simplicity"]["status"], "holds");
}

#[test]
fn equiv_decides_and_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(dir.path(), "torus.json", &generators::torus());
    let p = path.to_str().unwrap();
    let r = run(&["equiv", p, "--x", "f,g", "--y", "g,f", "--witness"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout["equivalent"], true);
    assert_eq!(r.stdout["witness"]["verified"], true);
    assert_eq!(r.stdout["witness"]["paths"].as_array().unwrap().len(), 2);

    let r = run(&["equiv", p, "--x", "f", "--y", "g"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout["equivalent"], false);
}

#[test]
fn normalize_prints_the_cube_json_contract() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(dir.path(), "torus.json", &generators::torus());
    let r = run(&["normalize", path.to_str().unwrap(), "--path", "f,g"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout["degree"], serde_json::json!([1, 1]));
    assert_eq!(r.stdout["vertices"]["(0,0)"], "v");
    assert_eq!(r.stdout["vertices"]["(1,1)"], "v");
    assert_eq!(r.stdout["edges"]["(0,0)+v_1"], "f");
    assert_eq!(r.stdout["edges"]["(0,1)+v_1"], "f");
    assert_eq!(r.stdout["edges"]["(0,0)+v_2"], "g");
}

#[test]
fn enumerate_counts_torus_square() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(dir.path(), "torus.json", &generators::torus());
    let r = run(&[
        "enumerate",
        path.to_str().unwrap(),
        "--vertex",
        "v",
        "--degree",
        "1,1",
    ]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout["count"], 1);
}

#[test]
fn skeleton_and_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(dir.path(), "torus.json", &generators::torus());
    let r = run(&["skeleton", path.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout["k"], 2);
    assert_eq!(r.stdout["vertices"], serde_json::json!(["<v>"]));

    let r = run(&["verify-roundtrip", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert_eq!(r.stdout["status"], "pass");
}

#[test]
fn gen_roundtrips_through_validate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("omega.json");
    let r = run(&["gen", "omega", "--degree", "2,2", "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    let r = run(&["validate", out.to_str().unwrap()]);
    assert_eq!(r.code, 0);

    let out2 = dir.path().join("prod.json");
    let r = run(&[
        "gen", "product", "--factor", "loops:2", "--factor", "cycle:3", "--out",
        out2.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0);
    let r = run(&["validate", out2.to_str().unwrap()]);
    assert_eq!(r.code, 0);

    let out3 = dir.path().join("rand.json");
    let r = run(&["gen", "random", "--k", "2", "--seed", "5", "--out", out3.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    let r = run(&["analyze", out3.to_str().unwrap()]);
    assert!(
        [0, 1, 2].contains(&r.code),
        "analysis of a valid instance never input-errors"
    );

    let r = run(&["gen", "prw", "--modulus", "2", "--target", "0"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout["k"], 2);
    assert_eq!(r.stdout["vertices"].as_array().unwrap().len(), 4);
    assert!(r.stdout["verification"]["bijectivity"].is_array());
}

#[test]
fn input_errors_exit_three() {
    // unknown subcommand
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage") ||
            String::from_utf8_lossy(&out.stderr).contains("usage"));

    // missing file
    let r = run(&["validate", "/nonexistent/instance.json"]);
    assert_eq!(r.code, 3);
    assert_eq!(r.stdout["status"], "error");

    // schema violation
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"k": 2, "vertices": ["v"], "edges": [{"id": "f"}]}"#).unwrap();
    let r = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(r.code, 3);

    // non-composable path is an input error
    let torus = write_instance(dir.path(), "torus.json", &generators::torus());
    let r = run(&[
        "normalize",
        torus.to_str().unwrap(),
        "--path",
        "f,doesnotexist",
    ]);
    assert_eq!(r.code, 3);
}

#[test]
fn budget_exhaustion_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let a = generators::loops_1graph("a", 2);
    let b = generators::loops_1graph("b", 2);
    let free = generators::product_of_1graphs(&[&a, &b]).unwrap();
    let path = write_instance(dir.path(), "free.json", &free);
    let r = run(&[
        "enumerate",
        path.to_str().unwrap(),
        "--degree",
        "4,4",
        "--budget",
        "10",
    ]);
    assert_eq!(r.code, 2, "budget exhaustion is inconclusive");
    assert_eq!(r.stdout["status"], "inconclusive");
}
