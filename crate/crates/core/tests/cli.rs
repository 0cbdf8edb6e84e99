use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

fn splitfinder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_splitfinder"))
        .args(args)
        .env("SPLITFINDER_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn gen(dir: &TempDir, name: &str, family: &str, params: &[&str]) -> String {
    let out = path(dir, name);
    let mut args = vec!["gen", "--family", family, "--out", &out];
    for p in params {
        args.extend(["--param", p]);
    }
    let o = splitfinder(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    out
}

#[test]
fn gen_then_analyze_then_verify() {
    let dir = TempDir::new().unwrap();
    let inst = gen(&dir, "pent.instance.json", "convex_polygon", &["m=5", "balanced=false"]);
    let o = splitfinder(&["gen", "--family", "convex_polygon", "--param", "m=5", "--param", "balanced=false", "--out", &inst]);
    assert!(stdout(&o).starts_with("n=20 m_tests=5 digest="));

    let report = path(&dir, "pent.report.json");
    let o = splitfinder(&["analyze", "--in", &inst, "--out", &report]);
    assert!(o.status.success(), "{}", stderr(&o));
    let line = stdout(&o);
    assert!(line.contains("k_min=8 c=1/5 alpha_star=1/3 beta=1/5"), "{line}");

    let o = splitfinder(&["verify", "--in", &inst, "--report", &report]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")), "{}", stdout(&o));
}

#[test]
fn verify_rejects_a_report_for_another_instance() {
    let dir = TempDir::new().unwrap();
    let a = gen(&dir, "a.instance.json", "disjunction", &["d=3", "m=1"]);
    let b = gen(&dir, "b.instance.json", "disjunction", &["d=4", "m=1"]);
    let report = path(&dir, "a.report.json");
    assert!(splitfinder(&["analyze", "--in", &a, "--out", &report]).status.success());
    let o = splitfinder(&["verify", "--in", &b, "--report", &report]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("ERROR DigestMismatch"), "{}", stderr(&o));
}

#[test]
fn run_all_and_single() {
    let dir = TempDir::new().unwrap();
    let inst = gen(&dir, "d.instance.json", "disjunction", &["d=6", "m=2"]);
    let o = splitfinder(&["run", "--in", &inst, "--oracle", "all"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("identified=21/21 worst_case=5 average=94/21"), "{}", stdout(&o));

    let transcript = path(&dir, "one.transcript.json");
    let o = splitfinder(&["run", "--in", &inst, "--oracle", "nope", "--out", &transcript]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("ERROR UnknownHypothesis"), "{}", stderr(&o));
    assert!(!Path::new(&transcript).exists());
}

#[test]
fn optimal_and_its_cap() {
    let dir = TempDir::new().unwrap();
    let small = gen(&dir, "box.instance.json", "box_localization", &["r=2"]);
    let o = splitfinder(&["optimal", "--in", &small]);
    assert_eq!(stdout(&o).trim(), "optimal_worst_case=3");
    let big = gen(&dir, "pent.instance.json", "convex_polygon", &["m=5", "balanced=false"]);
    let o = splitfinder(&["optimal", "--in", &big]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("ERROR InstanceTooLarge"));
}

#[test]
fn entropy_values() {
    assert_eq!(stdout(&splitfinder(&["entropy", "--p", "1/2"])).trim(), "1.0");
    assert_eq!(stdout(&splitfinder(&["entropy", "--p", "1/5"])).trim(), "0.721928094887");
    assert_eq!(splitfinder(&["entropy", "--p", "3/2"]).status.code(), Some(2));
}

#[test]
fn interactive_session_over_pipes() {
    let dir = TempDir::new().unwrap();
    let inst = gen(&dir, "d.instance.json", "disjunction", &["d=3", "m=1"]);
    let mut child = Command::new(env!("CARGO_BIN_EXE_splitfinder"))
        .args(["interactive", "--in", &inst])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    // a noisy line first, then always "1"
    child.stdin.take().unwrap().write_all(b"maybe\n1\n1\n1\n1\n").unwrap();
    let o = child.wait_with_output().unwrap();
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    assert!(text.contains("RETRY expected 0 or 1"), "{text}");
    assert!(text.lines().any(|l| l.starts_with("IDENTIFIED ")), "{text}");
}

#[test]
fn interactive_channel_closed() {
    let dir = TempDir::new().unwrap();
    let inst = gen(&dir, "d.instance.json", "disjunction", &["d=3", "m=1"]);
    let mut child = Command::new(env!("CARGO_BIN_EXE_splitfinder"))
        .args(["interactive", "--in", &inst])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    drop(child.stdin.take());
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("ERROR ChannelClosed"), "{}", stderr(&o));
}

#[test]
fn sweep_writes_one_row_per_grid_point() {
    let dir = TempDir::new().unwrap();
    let csv = path(&dir, "sweep.csv");
    let o = splitfinder(&["sweep", "--family", "disjunction", "--param", "m=1", "--grid", "d=2,3,4", "--out", &csv]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("instance,n,k_min,c,alpha_star"));
}

#[test]
fn usage_errors_exit_2() {
    let o = splitfinder(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("ERROR Usage:"));
    let o = splitfinder(&["gen", "--family", "no_such_family", "--out", "/nonexistent/x"]);
    assert_eq!(o.status.code(), Some(2));
    let o = splitfinder(&["analyze", "--in", "/nonexistent/x.instance.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(splitfinder(&["--help"]).status.success());
}

#[test]
fn limit_above_maximum_exits_3() {
    let dir = TempDir::new().unwrap();
    let inst = gen(&dir, "d.instance.json", "disjunction", &["d=3", "m=1"]);
    let o = splitfinder(&["analyze", "--in", &inst, "--limit", "31"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("ERROR LimitTooLarge"));
}
