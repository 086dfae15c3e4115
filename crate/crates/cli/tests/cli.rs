use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sparse2dc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparse2dc")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const C5: &str = "5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n";
const PETERSEN_G6: &str = "IheA@GUAo\n";

#[test]
fn mad_and_potentials() {
    let dir = tempfile::tempdir().unwrap();
    let c5 = write(dir.path(), "c5.txt", C5);
    let out = sparse2dc(&["mad", "--input", &c5]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], "2");
    assert_eq!(String::from_utf8_lossy(&out.stderr).trim(), "mad = 2");

    let out = sparse2dc(&["rho", "--input", &c5, "--set", "0,1"]);
    let v = json(&out);
    assert_eq!(v["value"], 9 * 2 - 7);
    assert_eq!(v["params"], serde_json::json!([9, 7]));

    // Growing {0,1} only adds vertices worth 9 and edges worth 7.
    let out = sparse2dc(&["rho-star", "--input", &c5, "--set", "0,1"]);
    assert_eq!(json(&out)["value"], 10);
}

#[test]
fn chi2_reads_graph6_and_reports_budget() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "petersen.g6", PETERSEN_G6);
    let out = sparse2dc(&["chi2", "--input", &p, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], 10);
    assert!(out.stderr.is_empty());

    let out = sparse2dc(&["color", "--input", &p, "--k", "9", "--budget", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["colorable"], Value::Null);
}

#[test]
fn color_and_constructive() {
    let dir = tempfile::tempdir().unwrap();
    let c5 = write(dir.path(), "c5.txt", C5);
    let out = sparse2dc(&["color", "--input", &c5, "--k", "4"]);
    assert_eq!(json(&out)["colorable"], false);
    let out = sparse2dc(&["color", "--input", &c5, "--constructive"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["colors_used"], 5);

    // Constructive coloring refuses graphs outside its scope.
    let p = write(dir.path(), "petersen.g6", PETERSEN_G6);
    assert_eq!(sparse2dc(&["color", "--input", &p, "--constructive"]).status.code(), Some(2));
}

#[test]
fn verify_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = sparse2dc(&["gen", "--family", "spider", "--count", "1", "--seed", "4", "--out", dir.path().to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let records = json(&out);
    let g6 = records[0]["graph6"].as_str().unwrap();
    let spider = write(dir.path(), "spider.g6", g6);
    let v = json(&sparse2dc(&["verify", "--input", &spider]));
    assert_eq!(v["verdict"], "confirmed");
    assert_eq!(v["chi2_upper"], 8);

    let p = write(dir.path(), "petersen.g6", PETERSEN_G6);
    let v = json(&sparse2dc(&["verify", "--input", &p]));
    assert_eq!((v["verdict"].as_str(), v["hypotheses"].as_bool()), (Some("silent"), Some(false)));
}

#[test]
fn gen_is_reproducible_and_persists() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("corpus");
    let args = ["gen", "--family", "tight", "--count", "3", "--seed", "9", "--json"];
    let a = sparse2dc(&args);
    let b = sparse2dc(&[&args[..], &["--out", out_dir.to_str().unwrap()]].concat());
    assert_eq!(a.stdout, b.stdout);
    let records = json(&a);
    for r in records.as_array().unwrap() {
        let stem = format!("tight-9-{:05}", r["provenance"]["index"].as_u64().unwrap());
        let g6 = fs::read_to_string(out_dir.join(format!("{stem}.g6"))).unwrap();
        assert_eq!(g6.trim(), r["graph6"]);
        assert!(out_dir.join(format!("{stem}.json")).exists());
        assert_eq!(r["max_degree"], 7);
    }
}

#[test]
fn find_config_and_discharge() {
    let dir = tempfile::tempdir().unwrap();
    // Two 7-vertices joined by seven 4-paths.
    let mut edges = Vec::new();
    let mut next = 2;
    for _ in 0..7 {
        let run: Vec<usize> = std::iter::once(0).chain(next..next + 4).chain(std::iter::once(1)).collect();
        edges.extend(run.windows(2).map(|w| format!("{} {}", w[0], w[1])));
        next += 4;
    }
    let text = format!("{next} {}\n{}\n", edges.len(), edges.join("\n"));
    let p = write(dir.path(), "bundle.txt", &text);
    assert_eq!(json(&sparse2dc(&["find-config", "--input", &p]))["kind"], "FourPlusPath");
    let out = sparse2dc(&["find-config", "--input", &p, "--disable", "FourPlusPath"]);
    assert_eq!(json(&out)["kind"], "CountingPair");
    let out = sparse2dc(&["find-config", "--input", &p, "--disable", "FourPlusPath,CountingPair"]);
    assert_eq!(json(&out), Value::Null);
    assert_eq!(sparse2dc(&["find-config", "--input", &p, "--disable", "Nope"]).status.code(), Some(2));

    let out = sparse2dc(&["discharge", "--input", &p]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["sum_halves"], v["report"]["expected_halves"]);
    assert_eq!(v["ledger"]["sum_halves"], 2 * (14 * 35 - 18 * 30));
}

#[test]
fn hunt_mutant_exits_with_violation() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("findings");
    let out = sparse2dc(&[
        "hunt", "--count", "7", "--seed", "2", "--out", out_dir.to_str().unwrap(), "--disable", "FourPlusPath,CountingPair", "--json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    let hit = r["findings"].as_array().unwrap().iter().find(|f| f["property"] == "coverage").unwrap();
    let stem = hit["stem"].as_str().unwrap();
    let g6 = out_dir.join(format!("{stem}.g6"));
    // The replay command reproduces the missing configuration.
    let replay: Vec<String> = hit["replay"].as_str().unwrap().split_whitespace().skip(1).map(String::from).collect();
    let replay: Vec<String> = replay.into_iter().map(|a| if a.ends_with(".g6") { g6.to_str().unwrap().to_string() } else { a }).collect();
    let args: Vec<&str> = replay.iter().map(String::as_str).collect();
    assert_eq!(json(&sparse2dc(&args)), Value::Null);

    let out = sparse2dc(&["hunt", "--count", "7", "--out", out_dir.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "3 2\n0 1\n");
    assert_eq!(sparse2dc(&["mad", "--input", &bad]).status.code(), Some(2));
    assert_eq!(sparse2dc(&["mad", "--input", "/nonexistent/graph"]).status.code(), Some(2));
    let c5 = write(dir.path(), "c5.txt", C5);
    assert_eq!(sparse2dc(&["rho", "--input", &c5, "--set", "9"]).status.code(), Some(2));
    assert_eq!(sparse2dc(&["discharge", "--input", &c5, "--shift", "nope=1"]).status.code(), Some(2));
}
