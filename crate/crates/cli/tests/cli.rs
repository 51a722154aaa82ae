use std::process::{Command, Output};

use cusp_census::compositions::{binomial, CountTable};
use cusp_census::BigCount;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cusp-census")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json_lines(args: &[&str]) -> Vec<serde_json::Map<String, Value>> {
    stdout(args).lines().map(|l| serde_json::from_str::<Value>(l).unwrap().as_object().unwrap().clone()).collect()
}

#[test]
fn count_t7_depth1() {
    let rows = json_lines(&["count", "--t", "7", "--D", "1", "--format", "json-lines"]);
    let counts: Vec<&str> = rows.iter().map(|r| r["count"].as_str().unwrap()).collect();
    assert_eq!(counts, ["1", "21", "35", "7"]);
    assert!(rows.iter().all(|r| r["schema"] == "cusp-census/v1/count" && r["D"] == 1 && r["source"] == "dp"));
}

#[test]
fn oracle_matches_dp() {
    let dp = stdout(&["count", "--t-max", "9", "--D", "2", "--format", "csv"]);
    let oracle = stdout(&["count", "--t-max", "9", "--D", "2", "--format", "csv", "--source", "oracle"]);
    assert_eq!(dp.replace(",dp", ""), oracle.replace(",oracle", ""));
}

#[test]
fn alpha_golden_ratio() {
    let rows = json_lines(&["alpha", "--D", "2", "--digits", "12", "--format", "json-lines"]);
    assert_eq!(rows[0]["value"], "1.618033988749");
    assert_eq!(rows[0]["lo"], "1.618033988749");
    assert_eq!(rows[0]["hi"], "1.618033988750");
    assert_eq!(rows[0]["digits"], 12);
}

#[test]
fn constants_bracket_float_values() {
    let rows = json_lines(&["constants", "--D", "2", "--n", "1", "--digits", "10", "--format", "json-lines"]);
    let get = |name: &str| -> f64 {
        rows.iter().find(|r| r["name"] == name).unwrap()["value"].as_str().unwrap().parse().unwrap()
    };
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    // d_2 = (phi - 1) / (2 + 3 (phi - 2))
    let d = (phi - 1.0) / (2.0 + 3.0 * (phi - 2.0));
    assert!((get("d") - d).abs() < 2e-10);
    assert!((get("two_excursion_limit") - d * d / (phi * phi * (phi - 1.0))).abs() < 2e-10);
    assert_eq!(get("depth_one_limit"), 0.5);
}

#[test]
fn table1_rows() {
    let out = stdout(&["table1", "--t", "20", "--D", "2", "--n", "1", "--format", "csv"]);
    let mut r = csv::Reader::from_reader(out.as_bytes());
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(&rows[0][5], "524288");
    assert_eq!(&rows[1][5], "10946");
    assert_eq!(&rows[3][5], "190");
    assert_eq!(rows.len(), 5);
}

#[test]
fn bounds_sandwich_counts() {
    for r in json_lines(&["bounds", "--t-max", "40", "--D", "3", "--format", "json-lines"]) {
        let c: f64 = r["count"].as_str().unwrap().parse().unwrap();
        let lo: f64 = r["lower"].as_str().unwrap().parse().unwrap();
        let hi: f64 = r["upper"].as_str().unwrap().parse().unwrap();
        assert!(lo <= c && c <= hi, "{r:?}");
    }
}

#[test]
fn verify_all_passes() {
    let out = run(&["verify", "--suite", "all", "--oracle-max-t", "16", "--format", "json-lines"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 20);
    assert!(!text.contains("\"fail\""));
}

#[test]
fn verify_failure_exits_one() {
    let out = run(&["verify", "--suite", "thm34", "--tolerance", "1e-6"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL thm34"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["count", "--t", "7"][..],
        &["count", "--t", "7", "--D", "0"],
        &["count", "--t", "7", "--t-max", "9", "--D", "1"],
        &["alpha", "--D", "1"],
        &["verify", "--suite", "nope"],
        &["count", "--t", "19", "--D", "1", "--source", "oracle"],
        &["enumerate", "--t", "40"],
        &["frobnicate"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = run(&["count", "--t", "7", "--D", "zero"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--D"));
}

#[test]
fn output_is_deterministic() {
    let args = ["count", "--t-max", "30", "--D", "2", "--format", "json-lines"];
    let a = stdout(&args);
    let b = stdout(&[&args[..], &["--threads", "1"]].concat());
    assert_eq!(a, b);
    assert_eq!(a, stdout(&args));
}

#[test]
fn counts_round_trip() {
    let table = CountTable::new();
    let out = stdout(&["count", "--t", "300", "--D", "1", "--format", "csv"]);
    let mut r = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(r.headers().unwrap(), vec!["t", "D", "n", "count", "source"]);
    for rec in r.records().map(Result::unwrap) {
        let n: usize = rec[2].parse().unwrap();
        let c: BigCount = rec[3].parse().unwrap();
        assert_eq!(c, binomial(300, 2 * n));
        assert_eq!(c, table.exact_excursions(300, n, 1));
    }
    for row in json_lines(&["count", "--t", "300", "--D", "4", "--format", "json-lines"]) {
        let n = row["n"].as_u64().unwrap() as usize;
        let c: BigCount = row["count"].as_str().unwrap().parse().unwrap();
        assert_eq!(c, table.exact_excursions(300, n, 4));
    }
}

#[test]
fn cumulative_counts_sum() {
    let rows = json_lines(&["count", "--t", "6", "--D", "1", "--cumulative", "--format", "json-lines"]);
    // sum over t <= 6 of C(t, 2n)
    let expect = [6u64, 1 + 3 + 6 + 10 + 15, 1 + 5 + 15, 1];
    let got: Vec<u64> = rows.iter().map(|r| r["count"].as_str().unwrap().parse().unwrap()).collect();
    assert_eq!(got, expect);
}

#[test]
fn enumerate_words() {
    let out = stdout(&["enumerate", "--t", "3", "--words", "--format", "csv"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "index,composition,eps,word");
    assert_eq!(lines.len(), 5);
    assert!(lines[4].starts_with("3,(3),\"(+1,+1,+1)\",a b a b a b a b^-1 a b^-1 a b^-1"));
    let filtered = stdout(&["enumerate", "--t", "5", "--n", "1", "--D", "2", "--format", "csv"]);
    // compositions of 5 with one part > 2: (3,1,1) x3, (3,2) x2, (4,1) x2, (5)
    assert_eq!(filtered.lines().count() - 1, 8);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("cusp-census-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c.csv");
    let out = run(&["count", "--t", "7", "--D", "1", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&["count", "--t", "7", "--D", "1", "--format", "csv"]));
    std::fs::remove_dir_all(&dir).unwrap();
}
