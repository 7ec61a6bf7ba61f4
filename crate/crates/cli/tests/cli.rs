use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn arborflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arborflow"))
        .args(args)
        .env_remove("ARBORFLOW_SEED")
        .env_remove("ARBORFLOW_PRIME")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_tree(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

const SAMPLE_TREE: &str = "9\n1 2\n1 3\n1 4\n4 7\n4 8\n4 9\n2 5\n2 6\n";

#[test]
fn gen_tree_edge_and_determinism() {
    let o = arborflow(&["gen-tree", "--n", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "2\n1 2\n");

    let a = arborflow(&["gen-tree", "--n", "12", "--seed", "7"]);
    let b = arborflow(&["gen-tree", "--n", "12", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 12);
}

#[test]
fn gen_tree_prufer_star_and_out_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("star.txt");
    let o = arborflow(&["gen-tree", "--prufer", "1,1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(out).unwrap(), "4\n1 2\n1 3\n1 4\n");
}

#[test]
fn gen_tree_rejects_both_sources() {
    let o = arborflow(&["gen-tree", "--n", "3", "--prufer", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_gp_all_small_trees() {
    let o = arborflow(&["verify", "gp", "--all-n", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "arborflow/1");
    assert_eq!(v["ok"], true);
    // 1 + 3 + 16 + 125 + 1296 labelled trees
    assert_eq!(v["trees"], 1441);
}

#[test]
fn verify_sum_on_class_all_small_trees() {
    let o = arborflow(&["verify", "sum-on-class", "--all-n", "5"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_identities_on_sample_tree() {
    let dir = TempDir::new().unwrap();
    let t = write_tree(dir.path(), "sample.txt", SAMPLE_TREE);
    for target in ["q", "emmanuel", "indep", "ck", "qsum", "nip"] {
        let o = arborflow(&["verify", target, "--tree", t.to_str().unwrap(), "--trials", "5"]);
        assert_eq!(o.status.code(), Some(0), "{target}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn verify_lifting_small() {
    let o = arborflow(&["verify", "lifting", "--all-n", "4"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn corrupted_checks_fail_with_witness() {
    let dir = TempDir::new().unwrap();
    let t = write_tree(dir.path(), "sample.txt", SAMPLE_TREE);
    for target in ["gp", "nip", "emmanuel"] {
        let o = arborflow(&["verify", target, "--tree", t.to_str().unwrap(), "--trials", "3", "--corrupt"]);
        assert_eq!(o.status.code(), Some(1), "{target}");
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["ok"], false);
        assert!(v["results"][0]["witness"].is_string(), "{target}");
    }
}

#[test]
fn seed_and_prime_come_from_environment() {
    let dir = TempDir::new().unwrap();
    let t = write_tree(dir.path(), "sample.txt", SAMPLE_TREE);
    let o = Command::new(env!("CARGO_BIN_EXE_arborflow"))
        .args(["verify", "emmanuel", "--tree", t.to_str().unwrap(), "--trials", "2"])
        .env("ARBORFLOW_SEED", "99")
        .env("ARBORFLOW_PRIME", "1000003")
        .output()
        .unwrap();
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 99);
    assert_eq!(v["prime"], 1000003);

    let o = arborflow(&["verify", "emmanuel", "--tree", t.to_str().unwrap(), "--prime", "1000004"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn route_map_dot_for_single_edge() {
    let dir = TempDir::new().unwrap();
    let t = write_tree(dir.path(), "edge.txt", "2\n1 2\n");
    let o = arborflow(&["dump", "route-map-dot", "--tree", t.to_str().unwrap(), "--arrowflow", "1>2,2>1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 18);
    assert_eq!(dot.matches("style=dashed").count(), 2);
}

#[test]
fn route_map_dot_rejects_non_unital_arrowflow() {
    let dir = TempDir::new().unwrap();
    let t = write_tree(dir.path(), "path.txt", "3\n1 2\n2 3\n");
    let o = arborflow(&["dump", "route-map-dot", "--tree", t.to_str().unwrap(), "--arrowflow", "1>2,1>2,2>3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("zero-sum"));
}

#[test]
fn catalysts_json_for_single_edge() {
    let dir = TempDir::new().unwrap();
    let t = write_tree(dir.path(), "edge.txt", "2\n1 2\n");
    let o = arborflow(&["dump", "catalysts-json", "--tree", t.to_str().unwrap()]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 1);
    let rec = &v["catalysts"][0];
    assert_eq!(rec["sigma"], serde_json::json!([2, 1]));
    assert_eq!(rec["sign"], -1);
}

#[test]
fn dumps_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let t = write_tree(dir.path(), "sample.txt", SAMPLE_TREE);
    let small = write_tree(dir.path(), "small.txt", "4\n1 2\n2 3\n2 4\n");
    let runs = [
        vec!["dump", "route-map-dot", "--tree", t.to_str().unwrap(), "--arrowflow", "1>2,2>1,3>1,4>1,8>4,4>7,4>9,6>2,2>5"],
        vec!["dump", "catalysts-json", "--tree", small.to_str().unwrap()],
        vec!["dump", "arrowflow-classes-json", "--tree", small.to_str().unwrap()],
    ];
    for args in runs {
        let a = arborflow(&args);
        let b = arborflow(&args);
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = write_tree(dir.path(), "bad.txt", "3\n1 2\n1 2\n");
    let o = arborflow(&["verify", "gp", "--tree", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = arborflow(&["verify", "gp", "--tree", dir.path().join("missing").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = arborflow(&["verify", "gp", "--all-n", "40"]);
    assert_eq!(o.status.code(), Some(2));
    let o = arborflow(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn class_dump_sums() {
    let dir = TempDir::new().unwrap();
    let t = write_tree(dir.path(), "small.txt", "4\n1 2\n2 3\n2 4\n");
    let o = arborflow(&["dump", "arrowflow-classes-json", "--tree", t.to_str().unwrap()]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let classes = v["classes"].as_array().unwrap();
    let mut unital = 0;
    for c in classes {
        let s = c["signed_sum"].as_i64().unwrap();
        if c["classification"] == "unital" {
            unital += 1;
            assert_eq!(s, -1);
        } else {
            assert_eq!(s, 0);
        }
    }
    assert_eq!(unital, 3 * 4);
    // catalysts are counted by the permanent of the distance matrix
    let d = [[0u64, 1, 2, 2], [1, 0, 1, 1], [2, 1, 0, 2], [2, 1, 2, 0]];
    let mut perm = 0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for e in 0..4 {
                    let p = [a, b, c, e];
                    let distinct = (0..4).all(|i| (0..i).all(|j| p[i] != p[j]));
                    if distinct {
                        perm += (0..4).map(|i| d[i][p[i]]).product::<u64>();
                    }
                }
            }
        }
    }
    let total: u64 = classes.iter().map(|c| c["class_size"].as_u64().unwrap()).sum();
    assert_eq!(total, perm);
}

#[test]
fn gen_tree_needs_two_vertices() {
    assert_eq!(arborflow(&["gen-tree", "--n", "1"]).status.code(), Some(2));
}
