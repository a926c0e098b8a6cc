use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_digitsum"))
        .args(args)
        .env_remove("DIGITSUM_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn scalar_commands() {
    assert_eq!(stdout(&["nu", "19", "--base", "2"]), "3\n");
    assert_eq!(stdout(&["nu", "2^64-1"]), "64\n");
    assert_eq!(stdout(&["sum", "12", "--base", "3"]), "24\n");
    assert_eq!(stdout(&["mean", "12"]), "5/3 (1.66666666667)\n");
    assert_eq!(stdout(&["dist", "dtv", "12"]), "1/12 (0.0833333333333)\n");
    assert_eq!(stdout(&["dist", "chi2", "12"]), "1/27 (0.037037037037)\n");
}

#[test]
fn density_ratio_approaches_one() {
    // C(20, 2) / (20²/2) = 19/20.
    assert!(stdout(&["density", "2^20", "-m", "2"]).ends_with("ratio  = 0.95\n"));
}

#[test]
fn pmf_routes_agree() {
    let a = stdout(&["pmf", "1000"]);
    assert_eq!(a, stdout(&["pmf", "1000", "--route", "pgf"]));
    assert_eq!(a, stdout(&["pmf", "1000", "--route", "brute"]));
    assert_eq!(stdout(&["pmf", "12"]), "0,1/12\n1,1/3\n2,5/12\n3,1/6\n");
}

#[test]
fn sweep_emits_csv() {
    let csv = stdout(&["dist", "dtv", "--range", "2..6"]);
    assert_eq!(csv, "n,value\n2,0\n3,0.166666666667\n4,0\n5,0.1\n");
}

#[test]
fn stein_and_krawtchouk() {
    let s = stdout(&["stein", "solve", "--lambda", "2", "--h", "1,0,0"]);
    assert!(s.contains("residual = 0\n"), "{s}");
    assert!(s.contains("increment bound holds"));
    assert!(stdout(&["stein", "dtv", "12"]).starts_with("stein estimate = 1/12"));
    assert!(stdout(&["krawtchouk", "parseval", "6", "--f", "1,-2,1"]).ends_with("equal\n"));
    assert!(stdout(&["krawtchouk", "chi2", "12"]).starts_with("chi2     = 1/27"));
}

#[test]
fn coding_systems() {
    let g = stdout(&["code", "gray", "10"]);
    assert!(g.starts_with("weight(10) = 4\n0,1/10\n"), "{g}");
    let bad = stdout(&["code", "custom", "4", "--weights", "0,1,2,3,4,5,6,7"]);
    assert!(bad.starts_with("halving identity fails"), "{bad}");
}

#[test]
fn figure_matches_fixture() {
    let fixture = include_str!("../../core/fixtures/figure13.csv");
    assert_eq!(stdout(&["figure", "13"]), fixture);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["nu"]).status.code(), Some(2));
    let out = run(&["dist", "dtv", "x"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
    assert_eq!(run(&["--precision", "10", "dist", "kl", "12"]).status.code(), Some(1));
    assert_eq!(run(&["nu", "0"]).status.code(), Some(0));
    assert_eq!(run(&["dist", "dtv", "0"]).status.code(), Some(1));
}
