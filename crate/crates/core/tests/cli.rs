use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgame"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn classical_chicken() {
    let r = json(&qgame(&["classical", &data("chicken.toml")]));
    let labels: Vec<&str> = r["pure_nash"].as_array().unwrap().iter().map(|e| e["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["(H,D)", "(D,H)"]);
    assert_eq!(r["mixed_nash"]["kind"], "equilibrium");
    assert!((num(&r["mixed_nash"]["profile"]["p"]) - 7.0 / 12.0).abs() < 1e-15);
    assert!((num(&r["mixed_nash"]["profile"]["q"]) - 7.0 / 12.0).abs() < 1e-15);
    assert!((num(&r["mixed_payoffs"][0]) - 6.25).abs() < 1e-12);
}

#[test]
fn three_by_three_payoffs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(
        &path,
        "[game]\nname = \"bad\"\npayoffs_A = [[1, 2, 3], [4, 5, 6], [7, 8, 9]]\npayoffs_B = [[1, 2], [3, 4]]\n",
    )
    .unwrap();
    let out = qgame(&["classical", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("payoffs_A") && err.contains("line 3"), "{err}");
}

#[test]
fn missing_field_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing.toml");
    std::fs::write(&path, "[game]\nname = \"m\"\npayoffs_A = [[1, 2], [3, 4]]\n").unwrap();
    let out = qgame(&["classical", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("payoffs_B"));
}

#[test]
fn unreadable_file_exit_2() {
    let out = qgame(&["classical", "/nonexistent/game.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn payoff_hawk_hawk() {
    let r = json(&qgame(&[
        "payoff",
        &data("chicken.toml"),
        "--gamma",
        "0",
        "--ua",
        "angles:0,0,0",
        "--ub",
        "angles:0,0,0",
    ]));
    assert!((num(&r["payoff_a"]) + 25.0).abs() < 1e-12);
    assert!((num(&r["payoff_b"]) + 25.0).abs() < 1e-12);
    assert!(num(&r["discrepancy"]) <= 1e-10);
    assert_eq!(r["form_a"].as_array().unwrap().len(), 4);
}

#[test]
fn payoff_case3_difference() {
    let r = json(&qgame(&[
        "payoff",
        &data("chicken.toml"),
        "--gamma",
        "pi/2",
        "--ua",
        "angles:0,0,0",
        "--ub",
        "vector:0,0,1,0",
    ]));
    assert!((num(&r["difference"]) + 50.0).abs() < 1e-10);
}

#[test]
fn malformed_vector_names_length() {
    let out = qgame(&["payoff", &data("chicken.toml"), "--ua", "vector:1,0,0", "--ub", "angles:0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exactly 4"));
}

#[test]
fn missing_gamma_exit_2() {
    let out = qgame(&["payoff", &data("matching_pennies.toml"), "--ua", "angles:0,0,0", "--ub", "angles:0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gamma_out_of_range_exit_2() {
    let out = qgame(&["payoff", &data("chicken.toml"), "--gamma", "2", "--ua", "angles:0,0,0", "--ub", "angles:0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn find_ne_chicken_unentangled() {
    let r = json(&qgame(&["find-ne", &data("chicken.toml"), "--random-starts", "2"]));
    assert_eq!(r["search_failed"], false);
    let embedded: Vec<&Value> = r["equilibria"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["method"] == "classical_embedding" && e["certificate"]["mu_a"]["support"].as_array().unwrap().len() == 1)
        .collect();
    assert_eq!(embedded.len(), 2);
    for e in embedded {
        assert!(num(&e["certificate"]["gap_a"]) <= 1e-9 && num(&e["certificate"]["gap_b"]) <= 1e-9);
        assert_eq!(e["certificate"]["verdict"], "certified");
    }
}

#[test]
fn find_ne_chicken_maximal() {
    let r = json(&qgame(&["find-ne", &data("chicken.toml"), "--gamma", "pi/2", "--random-starts", "2"]));
    let eqs = r["equilibria"].as_array().unwrap();
    assert!(eqs.iter().any(|e| num(&e["certificate"]["gap_a"]).max(num(&e["certificate"]["gap_b"])) <= 1e-3));
}

#[test]
fn find_ne_is_byte_identical_across_runs_and_thread_counts() {
    let args = ["find-ne", &data("stag_hunt.toml"), "--gamma", "0.9", "--seed", "17"];
    let a = qgame(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_qgame"))
        .args(args)
        .env("QGAME_THREADS", "1")
        .output()
        .unwrap();
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn case_study_single_points() {
    let r = json(&qgame(&["chicken-case-study", "--gamma", "0", "--phi", "pi"]));
    assert_eq!(r["points"], 1);
    assert!((num(&r["rows"][0]["difference"]) + 50.0).abs() < 1e-10);

    let r = json(&qgame(&["chicken-case-study", "--gamma", "pi/4", "--phi", "0"]));
    assert!(num(&r["rows"][0]["difference"]).abs() < 1e-10);
    assert_eq!(r["rows"][0]["case"], "case3_equality");
}

#[test]
fn case_study_default_sweep() {
    let r = json(&qgame(&["chicken-case-study"]));
    assert_eq!(r["points"], 2500);
    assert_eq!(r["rows"].as_array().unwrap().len(), 2500);
    assert!(num(&r["max_difference"]) <= 1e-10);
}

#[test]
fn case_study_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = qgame(&[
        "chicken-case-study",
        "--n-gamma",
        "3",
        "--n-phi",
        "4",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 12);
    for row in rows {
        let diff: f64 = row[9].parse().unwrap();
        assert!(diff <= 1e-10);
    }
}

#[test]
fn csv_rejected_for_non_sweeps() {
    let out = qgame(&["classical", &data("chicken.toml"), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn every_command_is_deterministic() {
    let runs: [&[&str]; 4] = [
        &["classical", &data("battle_of_the_sexes.toml")],
        &["payoff", &data("prisoners_dilemma.toml"), "--ua", "angles:1,2,3", "--ub", "vector:0.5,0.5,0.5,0.5", "--seed", "3"],
        &["find-ne", &data("prisoners_dilemma.toml"), "--seed", "3", "--random-starts", "3"],
        &["chicken-case-study", "--n-gamma", "7", "--n-phi", "5", "--seed", "3"],
    ];
    for args in runs {
        let a = qgame(args);
        let b = qgame(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn bad_thread_env_exit_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_qgame"))
        .args(["classical", &data("chicken.toml")])
        .env("QGAME_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
