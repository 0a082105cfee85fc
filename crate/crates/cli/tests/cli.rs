use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn tdq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tdq")).args(args).output().expect("spawn tdq")
}

fn stdout_json(args: &[&str]) -> Value {
    let out = tdq(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn constant_at_three_is_five_thirds() {
    let v = stdout_json(&["constant", "--p-limit", "3"]);
    assert_eq!(v["value"].as_f64().unwrap(), 5.0 / 3.0);
    assert_eq!(v["p_limit"], 3);
    assert_eq!(v["seed"], 42);
}

#[test]
fn constant_defaults_to_a_million() {
    let v = stdout_json(&["constant", "--format", "json"]);
    assert_eq!(v["p_limit"], 1_000_000);
    assert!((v["value"].as_f64().unwrap() - 1.4514765773965).abs() < 1e-10);
    assert!(v["tail_bound"].as_f64().unwrap() > 0.0);
}

#[test]
fn s_table_small() {
    let out = tdq(&["s-table", "--max", "9"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("d,s_brute,s_mult,phi,ratio_term"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    let ds: Vec<&str> = rows.iter().map(|r| r[0]).collect();
    let s: Vec<&str> = rows.iter().map(|r| r[1]).collect();
    assert_eq!(ds, ["1", "3", "5", "7", "9"]);
    assert_eq!(s, ["1", "4", "0", "8", "12"]);
    assert!(rows.iter().all(|r| r[1] == r[2]));

    let one = String::from_utf8(tdq(&["s-table", "--max", "1"]).stdout).unwrap();
    assert_eq!(one.lines().count(), 2);
}

#[test]
fn s_table_brute_limit() {
    let out = tdq(&["s-table", "--max", "2e5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = tdq(&["s-table", "--max", "2e5", "--skip-brute"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 100_001);
    assert!(text.lines().nth(1).unwrap().starts_with("1,,1,"));
}

#[test]
fn sum_small_n() {
    let v = stdout_json(&["sum", "--n", "8", "--z", "1"]);
    assert_eq!((v["m1"].as_u64(), v["m2"].as_u64(), v["q"].as_u64(), v["sum_tau"].as_u64()), (Some(2), Some(2), Some(1), Some(3)));
    for key in [
        "n", "pair_count", "sum_tau", "z", "m1", "m2", "q", "main_term", "ratio", "error_budget", "constant_p_limit", "constant_value",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let out = tdq(&["sum", "--n", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("minimum"));
}

#[test]
fn sum_accepts_scientific_notation() {
    let v = stdout_json(&["sum", "--n", "1e5", "--p-limit", "1e4"]);
    assert_eq!(v["n"], 100_000);
    assert_eq!(v["sum_tau"], 32721);
    assert_eq!(v["pair_count"], 3540);
    assert_eq!(tdq(&["sum", "--n", "1.5e5"]).status.code(), Some(2));
}

#[test]
fn sum_csv_has_schema_columns() {
    let out = tdq(&["sum", "--n", "13", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "n,pair_count,sum_tau,z,m1,m2,q,main_term,ratio,error_budget,constant_p_limit,constant_value"
    );
    assert!(text.lines().nth(1).unwrap().starts_with("13,3,11,"));
}

#[test]
fn decompose_rows() {
    let out = tdq(&["decompose", "--n", "8", "--z", "3", "--z", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "n,z,m1,m2,q,s\n8,1,2,2,1,3\n8,3,4,0,1,3\n");
    assert_eq!(tdq(&["decompose", "--n", "8", "--z", "4"]).status.code(), Some(2));
}

#[test]
fn pairs_budget() {
    let v = stdout_json(&["pairs", "--n", "1e6"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["pair_count"], 23578);
    let out = tdq(&["pairs", "--n", "1e6", "--k", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], false);
    assert_eq!(stdout_json(&["pairs", "--n", "1e4", "--k", "inf"])["pass"], true);
}

#[test]
fn expsum_verify_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = tdq(&["expsum", "verify", "--d-max", "3000", "--samples", "300", "--seed", "7", "--out", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stderr).contains("C_est"));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().next().unwrap(), "e1,e2,h1,h2,d,omega,re,im,magnitude,normalizer,ratio,implied_C");
    assert_eq!(text.lines().count(), 301);
    let meta: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("a.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 7);
    assert_eq!(meta["pass"], true);

    let other = tdq(&["expsum", "verify", "--samples", "300", "--seed", "8"]);
    assert_ne!(other.stdout, fs::read(&a).unwrap());
}

#[test]
fn expsum_verify_json_and_empty() {
    let v = stdout_json(&["expsum", "verify", "--samples", "0", "--format", "json"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 0);
    let v = stdout_json(&["--seed", "5", "expsum", "verify", "--samples", "20", "--format", "json"]);
    assert_eq!(v["seed"], 5);
    let c = v["c_est"].as_f64().unwrap();
    let max = v["rows"].as_array().unwrap().iter().map(|r| r["implied_C"].as_f64().unwrap()).fold(0.0, f64::max);
    assert_eq!(c, max);
    assert_eq!(tdq(&["expsum", "verify", "--d-max", "20000"]).status.code(), Some(2));
}

#[test]
fn floats_round_trip_through_text() {
    let text = String::from_utf8(tdq(&["sum", "--n", "1000"]).stdout).unwrap();
    let line = text.lines().find(|l| l.contains("\"ratio\"")).unwrap();
    let literal = line.split(':').nth(1).unwrap().trim().trim_end_matches(',');
    let ratio: f64 = literal.parse().unwrap();
    assert_eq!(format!("{ratio:.16e}"), literal);
    let mantissa = literal.split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
}

#[test]
fn io_failure_exit_code() {
    let out = tdq(&["constant", "--p-limit", "3", "--out", "/nonexistent-dir/x.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sieve_limit_too_small_is_a_usage_error() {
    assert_eq!(tdq(&["sum", "--n", "1e6", "--sieve-limit", "100"]).status.code(), Some(2));
}
