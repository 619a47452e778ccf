mod common;

use std::process::{Command, Output};

use common::data;

fn leveling(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leveling"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn solve_is_reproducible() {
    let file = path("disjointable.json");
    let args = ["solve", file.as_str(), "--seed", "7", "--L", "200"];
    let a = leveling(&args);
    let b = leveling(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("Z=200 (unused)"));
    assert!(text.contains("DHNN-SA"));
    assert!(text.contains("e3 0.000"));
}

#[test]
fn solve_levels_the_disjointable_instance() {
    let file = path("disjointable.json");
    let level = (0..10)
        .filter(|seed| {
            let out = leveling(&["solve", &file, "--seed", &seed.to_string(), "--L", "200"]);
            let text = stdout(&out);
            let row = text.lines().find(|l| l.starts_with("DHNN-SA")).unwrap();
            row.trim_end().ends_with("0.00")
        })
        .count();
    assert!(level > 5, "{level}/10");
}

#[test]
fn solve_day_columns_sum_to_total_demand() {
    let out = leveling(&[
        "solve",
        &path("three_jobs.json"),
        "--seed",
        "1",
        "--L",
        "100",
    ]);
    let text = stdout(&out);
    let row = text.lines().find(|l| l.starts_with("DHNN-SA")).unwrap();
    let loads: Vec<u64> = row
        .split_whitespace()
        .skip(1)
        .take(8)
        .map(|t| t.parse().unwrap())
        .collect();
    assert_eq!(loads.len(), 8);
    let flags = text.lines().find(|l| l.starts_with("flags")).unwrap();
    if flags.contains("durations_match=yes") {
        assert_eq!(loads.iter().sum::<u64>(), 2 * 2 + 2 + 2);
    }
}

#[test]
fn solve_writes_trace_csv() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let out = leveling(&[
        "solve",
        &path("three_jobs.json"),
        "--L",
        "10",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(trace).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("outer,temperature,step,energy,best_energy,accepted")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 880);
    let fields: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(fields.len(), 6);
    // at least nine significant digits in the mantissa
    let mantissa = fields[3].split('e').next().unwrap();
    assert!(mantissa.chars().filter(char::is_ascii_digit).count() >= 9);
}

#[test]
fn invalid_flags_fail() {
    let file = path("disjointable.json");
    let out = leveling(&["solve", &file, "--a", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    let out = leveling(&["solve", &file, "--Estop", "200"]);
    assert_eq!(out.status.code(), Some(1));
    let out = leveling(&["solve", &file, "--init", "sideways"]);
    assert_eq!(out.status.code(), Some(1));
    let out = leveling(&["solve", "no-such-file.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn batch_rows_and_averages() {
    let file = path("disjointable.json");
    let out = leveling(&["batch", &file, "--trials", "5", "--L", "200", "--jobs", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| l.chars().next().is_some_and(|c| c.is_ascii_digit()))
        .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    let avg: Vec<f64> = text
        .lines()
        .find(|l| l.starts_with("Avg"))
        .unwrap()
        .split_whitespace()
        .skip(1)
        .map(|t| t.parse().unwrap())
        .collect();
    let mean = |col: usize| rows.iter().map(|r| r[col]).sum::<f64>() / 5.0;
    assert!((avg[0] - mean(2)).abs() < 0.5);
    assert!((avg[1] - mean(3)).abs() < 0.01);
    assert!((avg[2] - mean(4)).abs() < 0.01);
    // earliest-start baseline puts both jobs on days 1-2: variance 1.00
    assert!(avg[2] <= 1.0);

    let single = leveling(&["batch", &file, "--trials", "1", "--L", "50"]);
    let text = stdout(&single);
    let body: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(body.len(), 2);
    let tail = |l: &str| {
        l.split_whitespace()
            .rev()
            .take(2)
            .collect::<Vec<_>>()
            .join(" ")
    };
    assert_eq!(tail(body[0]), tail(body[1]));
}

#[test]
fn batch_timing_columns_on_request() {
    let file = path("disjointable.json");
    let out = leveling(&["batch", &file, "--trials", "2", "--L", "20", "--timing"]);
    assert!(stdout(&out).contains("Time(s)"));
    let out = leveling(&["batch", &file, "--trials", "2", "--L", "20"]);
    assert!(!stdout(&out).contains("Time(s)"));
}

#[test]
fn oracle_reports() {
    let out = leveling(&["oracle", &path("disjointable.json")]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("optimal_variance 0.00, feasible 9"));

    let out = leveling(&["oracle", &path("single.json")]);
    assert!(stdout(&out).contains("feasible 5"));

    let out = leveling(&[
        "oracle",
        &path("strict_infeasible.json"),
        "--mode",
        "strict",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("infeasible"));

    let out = leveling(&["oracle", &path("strict_infeasible.json"), "--mode", "paper"]);
    assert!(out.status.success());
}

#[test]
fn check_diagnostics() {
    let out = leveling(&["check", &path("disjointable.json")]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "OK\n");

    let out = leveling(&["check", &path("cycle.json")]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("precedence cycle"));

    let out = leveling(&["check", &path("strict_infeasible.json")]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("strict precedence may be unsatisfiable"));

    let out = leveling(&["check", &path("too_long.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds horizon"));
}
