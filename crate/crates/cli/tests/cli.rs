use std::process::{Command, Output};

use serde_json::Value;

fn pairwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pairwalk")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = pairwalk(&full);
    let v: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (v, out.status.code().unwrap())
}

fn spectrum_pairs(v: &Value) -> Vec<(String, u64)> {
    v["result"]["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["value"].as_str().unwrap().to_string(), e["multiplicity"].as_u64().unwrap()))
        .collect()
}

#[test]
fn spectra() {
    let (v, code) = json(&["spectrum", "K 4", "--laplacian"]);
    assert_eq!(code, 0);
    assert_eq!(spectrum_pairs(&v), [("0".into(), 1), ("4".into(), 3)]);
    let (v, _) = json(&["spectrum", "P 2", "--adjacency"]);
    assert_eq!(spectrum_pairs(&v), [("-1".into(), 1), ("1".into(), 1)]);
    let (v, _) = json(&["spectrum", "C 4", "--laplacian"]);
    assert_eq!(spectrum_pairs(&v), [("0".into(), 1), ("2".into(), 2), ("4".into(), 1)]);
}

#[test]
fn certificates() {
    let (v, code) = json(&["certify", "C 4", "pair-lpst", "0-1", "2-3"]);
    assert_eq!((code, v["result"]["tau0"].as_str()), (0, Some("pi/2")));
    let (v, code) = json(&["certify", "P 2", "pst", "0", "1", "--verify"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["phase"]["exact"], "-i");
    let (v, code) = json(&["certify", "K 5", "pst", "0", "1"]);
    assert_eq!((code, v["result"]["exists"].as_bool()), (1, Some(false)));
    let (v, code) = json(&["certify", "C 6", "periodic", "0-3"]);
    assert_eq!(code, 0, "{v}");
}

#[test]
fn tensor_and_cover() {
    let (v, code) =
        json(&["tensor", "--pst", "K 3", "P 2", "--pairs", "0-1", "0-1", "--pst-pair", "1", "0", "--solve", "--verify"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["t"], "pi/2");
    let (v, code) = json(&["cover", "K 4", "K 4", "--mode", "cor", "--pair", "0-1", "--at", "1/2pi", "--verify"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["holds"], true);
    let (_, code) = json(&["tensor", "--pairpst", "K 4", "C 4", "--vertex", "0", "--pairs", "0-1", "2-3", "--at", "1/2pi"]);
    assert_eq!(code, 0);
    let (_, code) = json(&["tensor", "--swap", "K 4", "P 2", "--pairs", "0-1", "--pst-pair", "0", "1", "--at", "pi/3"]);
    assert_eq!(code, 1);
    // H = K 3 has no PST: the hypothesis fails, a negative answer
    let out = pairwalk(&["tensor", "--pst", "K 3", "K 3", "--pairs", "0-1", "0-1", "--pst-pair", "0", "1", "--solve"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_finds_the_peak() {
    let dir = std::env::temp_dir().join(format!("pairwalk-sweep-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("c4.csv");
    let out = pairwalk(&["sweep", "C 4", "0-1", "2-3", "--from", "0", "--to", "pi", "--steps", "721", "--csv", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let rows: Vec<(f64, f64)> = std::fs::read_to_string(&csv)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let (t, f) = l.split_once(',').unwrap();
            (t.parse().unwrap(), f.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 721);
    let best = rows.iter().copied().fold((0.0, -1.0), |a, b| if b.1 > a.1 { b } else { a });
    assert!((best.0 - std::f64::consts::FRAC_PI_2).abs() < 1e-9 && (best.1 - 1.0).abs() < 1e-9, "{best:?}");
    std::fs::remove_dir_all(dir).unwrap();

    assert_eq!(pairwalk(&["sweep", "C 4", "0-1", "2-3", "--steps", "1"]).status.code(), Some(2));
    let (v, code) = json(&["sweep", "C 4", "0-1", "2-3", "--from", "0", "--to", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["times"].as_array().unwrap().len(), 1);
}

#[test]
fn parse_errors_report_the_column() {
    let out = pairwalk(&["spectrum", "tensor(K 3 P 2)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column 12"));
    assert_eq!(pairwalk(&["certify", "K 4", "pst", "0", "9"]).status.code(), Some(2));
    assert_eq!(pairwalk(&["bogus"]).status.code(), Some(2));
}

#[test]
fn report_round_trips() {
    let (v, _) = json(&["certify", "P 2", "pst", "0", "1"]);
    for key in ["command", "inputs", "result", "warnings", "wall_time_ms", "exit_code"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let text = serde_json::to_string(&v).unwrap();
    assert_eq!(serde_json::from_str::<Value>(&text).unwrap(), v);
    assert_eq!(v["command"], "--json certify P 2 pst 0 1");
}

#[test]
fn tolerance_from_environment() {
    let run = |tol: &str| {
        Command::new(env!("CARGO_BIN_EXE_pairwalk"))
            .args(["certify", "P 2", "pst", "0", "1"])
            .env("PAIRWALK_TOL", tol)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run("1e-6"), Some(0));
    assert_eq!(run("abc"), Some(2));
    assert_eq!(run("-1"), Some(2));
}

#[test]
fn examples_suite() {
    let (v, code) = json(&["examples"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["cases"].as_array().unwrap().len(), 14);
    assert!(v["result"]["failures"].as_array().unwrap().is_empty());
    let (v, code) = json(&["examples", "--self-test"]);
    assert_eq!(code, 1);
    assert!(v["result"]["cases"].as_array().unwrap().iter().all(|c| c["pass"] == false));
    let (v, code) = json(&["examples", "--min-n", "3", "--max-n", "2"]);
    assert_eq!(code, 0);
    assert!(v["result"]["cases"].as_array().unwrap().is_empty());
}
