use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lrmr(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrmr")).args(args).current_dir(dir).env_remove("MPC_TRACE").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice::<Value>(&out.stdout).unwrap()["report"].clone()
}

/// Path a-b-c with w(ab) = 3 and w(bc) = 2.
const P3: &str = "3 2\n0 1 3\n1 2 2\n";

#[test]
fn generate_graph_with_linear_edge_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = lrmr(dir.path(), &["generate", "graph", "--n", "4", "--c", "0", "--out", "g"]);
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("g")).unwrap();
    assert!(text.starts_with("4 4\n"));
    assert_eq!(text.lines().count(), 5);
    assert_eq!(stdout(&out).trim().len(), 64);
}

#[test]
fn generate_single_full_set() {
    let dir = tempfile::tempdir().unwrap();
    let out = lrmr(
        dir.path(),
        &["generate", "setcover", "--n", "1", "--m", "3", "--density", "1", "--weights", "5,5", "--out", "s"],
    );
    assert!(out.status.success());
    assert_eq!(fs::read_to_string(dir.path().join("s")).unwrap(), "1 3\n5 3 0 1 2\n");
}

#[test]
fn generate_is_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["generate", "graph", "--n", "50", "--c", "0.3", "--weights", "1,10", "--seed", "9", "--out"];
    let a = lrmr(dir.path(), &[&args[..], &["a"]].concat());
    let b = lrmr(dir.path(), &[&args[..], &["b"]].concat());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(fs::read(dir.path().join("a")).unwrap(), fs::read(dir.path().join("b")).unwrap());
}

#[test]
fn run_matching_on_path() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p3.graph"), P3).unwrap();
    let out = lrmr(dir.path(), &["run", "match-2", "p3.graph", "--mu", "0.2", "--seed", "1"]);
    assert!(out.status.success());
    let rep = report(&out);
    assert_eq!(rep["objective"]["exact"], "3");
    assert_eq!(rep["objective"]["decimal"], "3.000000");
    assert_eq!(rep["verdict"], "feasible");
    assert_eq!(rep["config"]["seed"], 1);
    let trace: Value = serde_json::from_slice::<Value>(&out.stdout).unwrap()["trace"].clone();
    assert_eq!(trace["schema"], 1);
}

#[test]
fn run_tiny_set_cover_takes_one_iteration() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("tiny.sc"), "3 3\n1 2 0 1\n1 2 1 2\n3 2 0 2\n").unwrap();
    let out = lrmr(dir.path(), &["run", "sc-f", "tiny.sc", "--oracle"]);
    assert!(out.status.success());
    let rep = report(&out);
    assert_eq!(rep["iterations"], 1);
    assert_eq!(rep["oracle"]["exact"], "2");
    assert_eq!(rep["within_factor"], true);
}

#[test]
fn run_colouring_of_edgeless_graph() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("e.graph"), "5 0\n").unwrap();
    let out = lrmr(dir.path(), &["run", "colour-v", "e.graph", "--solution-out", "c"]);
    assert!(out.status.success());
    assert_eq!(report(&out)["objective"]["exact"], "1");
    assert!(fs::read_to_string(dir.path().join("c")).unwrap().starts_with("colouring vertex\n"));
}

#[test]
fn verify_path_matching_against_oracle() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p3.graph"), P3).unwrap();
    fs::write(dir.path().join("m"), "matching\n0\n").unwrap();
    let out = lrmr(dir.path(), &["verify", "match-2", "p3.graph", "m", "--against-oracle"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("ratio: 1 (1.000000) <= 2 (2.000000)"), "{text}");
    assert!(text.ends_with("PASS\n"));
}

#[test]
fn verify_rejects_empty_cover() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("s"), "1 3\n5 3 0 1 2\n").unwrap();
    fs::write(dir.path().join("c"), "cover\n").unwrap();
    let out = lrmr(dir.path(), &["verify", "sc-f", "s", "c"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("infeasible: 3 elements uncovered"));
    assert!(text.ends_with("FAIL\n"));
}

#[test]
fn verify_oversized_instance_is_validity_only() {
    let dir = tempfile::tempdir().unwrap();
    lrmr(dir.path(), &["generate", "graph", "--n", "40", "--c", "0.2", "--out", "g"]);
    let out = lrmr(dir.path(), &["verify", "match-2", "g", "--against-oracle"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("oracle: TooLarge"), "{text}");
    assert!(text.ends_with("PASS\n"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p3.graph"), P3).unwrap();
    fs::write(dir.path().join("unc.sc"), "1 2\n1 1 0\n").unwrap();
    assert_eq!(lrmr(dir.path(), &["run", "sc-f", "unc.sc"]).status.code(), Some(3));
    let exhausted = lrmr(dir.path(), &["run", "match-2", "p3.graph", "--budget", "4", "--retries", "1"]);
    assert_eq!(exhausted.status.code(), Some(2));
    let trace = &serde_json::from_slice::<Value>(&exhausted.stdout).unwrap()["trace"];
    assert_eq!(trace["attempts"].as_array().unwrap().len(), 2);
    assert_eq!(lrmr(dir.path(), &["run", "bmatch", "p3.graph", "--b", "2"]).status.code(), Some(1));
    assert_eq!(lrmr(dir.path(), &["run", "match-2", "p3.graph", "--epsilon", "1/10"]).status.code(), Some(1));
    assert_eq!(lrmr(dir.path(), &["run", "nope", "p3.graph"]).status.code(), Some(1));
}

#[test]
fn list_names_every_algorithm() {
    let out = lrmr(Path::new("."), &["--list"]);
    let text = stdout(&out);
    let names: Vec<&str> = text.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(
        names,
        ["sc-f", "vc-2", "match-2", "bmatch", "mis-simple", "mis-fast", "clique", "sc-lnD", "colour-v", "colour-e"]
    );
    assert!(text.contains("(3 - 2/max(2,b) + 2eps)"));
}

#[test]
fn bench_emits_one_row_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p3.graph"), P3).unwrap();
    let out = lrmr(dir.path(), &["bench", "match-2", "p3.graph", "--seeds", "4", "--seed", "10"]);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "seed,rounds,peak_memory,objective,ratio");
    assert_eq!(rows.len(), 5);
    assert!(rows[1].starts_with("10,"));
    assert!(rows[1].ends_with(",3,1.000000"));
}

#[test]
fn trace_level_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p3.graph"), P3).unwrap();
    let run = |level: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_lrmr"))
            .args(["run", "match-2", "p3.graph"])
            .current_dir(dir.path())
            .env("MPC_TRACE", level)
            .output()
            .unwrap();
        serde_json::from_slice::<Value>(&out.stdout).unwrap()["report"]["config"]["trace"].clone()
    };
    assert_eq!(run("verbose"), "verbose");
    assert_eq!(run("off"), "off");
}
