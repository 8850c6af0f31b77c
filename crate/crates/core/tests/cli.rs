use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use latinwalk::fixtures;
use latinwalk::format::{parse_grids, parse_sequence, square_to_json, square_to_text};
use latinwalk::oracle::build_state_graph;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_latinwalk"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn gen_order_one() {
    let o = run(&["gen", "1", "--samples", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n 1\n0\nn 1\n0\n");
}

#[test]
fn gen_json_is_deterministic_and_valid() {
    let args = [
        "gen",
        "4",
        "--seed",
        "7",
        "--samples",
        "3",
        "--format",
        "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let grids = parse_grids(&stdout(&a)).unwrap();
    assert_eq!(grids.len(), 3);
    assert!(grids.iter().all(|g| g.order() == 4 && g.is_proper()));
    assert!(latinwalk::format::parse_states(&stdout(&a)).is_ok());
}

#[test]
fn gen_flag_errors() {
    for args in [
        &["gen", "0"][..],
        &["gen", "3", "--samples", "0"],
        &["gen", "3", "--chains", "0"],
        &["gen", "3", "--thin", "0"],
        &["gen", "x"],
        &["gen", "3", "--format", "xml"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
        assert_eq!(
            String::from_utf8_lossy(&o.stderr).trim().lines().count(),
            1,
            "{args:?}"
        );
    }
}

#[test]
fn verify_reports() {
    let dir = tempfile::tempdir().unwrap();
    let ex = write(
        dir.path(),
        "ex.txt",
        &square_to_text(&fixtures::improper_four()),
    );
    let o = run(&["verify", &ex]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "valid improper\n");

    let bad = write(dir.path(), "bad.txt", "n 3\n0 1 2\n1 2 0\n2 0 0\n");
    let o = run(&["verify", &bad]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(
        out.contains("invalid: row 2") && out.contains("invalid: column 2"),
        "{out}"
    );

    let junk = write(dir.path(), "junk.txt", "hello\n");
    assert_eq!(run(&["verify", &junk]).status.code(), Some(1));
    assert_eq!(run(&["verify", "/nonexistent/file"]).status.code(), Some(1));
}

#[test]
fn gen_output_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["gen", "5", "--seed", "3", "--samples", "4", "--chains", "2"]);
    let f = write(dir.path(), "gen.txt", &stdout(&o));
    let v = run(&["verify", &f]);
    assert!(v.status.success());
    assert_eq!(
        stdout(&v),
        "1: valid proper\n2: valid proper\n3: valid proper\n4: valid proper\n"
    );
}

#[test]
fn path_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "a.txt", "n 3\n0 1 2\n1 2 0\n2 0 1\n");
    let o = run(&["path", &f, &f, "--verify"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n 3\n0 1 2\n1 2 0\n2 0 1\nOK 0 16\n");
}

#[test]
fn path_example_is_one_move() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(
        dir.path(),
        "a.txt",
        &square_to_text(&fixtures::improper_four()),
    );
    let b = write(
        dir.path(),
        "b.txt",
        &square_to_text(&fixtures::resolved_four()),
    );
    let o = run(&["path", &a, &b, "--verify"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.ends_with("OK 1 54\n"), "{out}");
    let seq = parse_sequence(&out).unwrap();
    assert_eq!(seq.len(), 1);
    assert_eq!(seq.end().to_grid(), fixtures::resolved_four());
}

#[test]
fn path_between_generated_squares() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(
        dir.path(),
        "a.txt",
        &stdout(&run(&["gen", "5", "--seed", "10"])),
    );
    let b = write(
        dir.path(),
        "b.txt",
        &stdout(&run(&["gen", "5", "--seed", "11"])),
    );
    let o = run(&["path", &a, &b, "--verify"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let last = out.lines().last().unwrap();
    let fields: Vec<&str> = last.split(' ').collect();
    assert_eq!(fields[0], "OK");
    assert!(fields[1].parse::<usize>().unwrap() <= 128);
    assert_eq!(fields[2], "128");
    let seq = parse_sequence(&out).unwrap();
    assert_eq!(
        seq.end(),
        &latinwalk::format::parse_state(&std::fs::read_to_string(&b).unwrap()).unwrap()
    );
}

#[test]
fn path_errors() {
    let dir = tempfile::tempdir().unwrap();
    let three = write(dir.path(), "3.txt", "n 3\n0 1 2\n1 2 0\n2 0 1\n");
    let two = write(dir.path(), "2.txt", "n 2\n0 1\n1 0\n");
    let bad = write(dir.path(), "bad.txt", "n 2\n0 0\n1 0\n");
    assert_eq!(run(&["path", &three, &two]).status.code(), Some(1));
    assert_eq!(run(&["path", &three, &bad]).status.code(), Some(1));
    assert_eq!(
        run(&["path", &three, "/nonexistent"]).status.code(),
        Some(1)
    );
}

#[test]
fn enumerate_and_graph() {
    assert_eq!(stdout(&run(&["enumerate", "4", "--count-only"])), "576\n");
    let all = stdout(&run(&["enumerate", "3"]));
    assert_eq!(parse_grids(&all).unwrap().len(), 12);
    assert_eq!(run(&["enumerate", "6"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate", "0"]).status.code(), Some(2));

    let g2 = stdout(&run(&["graph", "2"]));
    assert_eq!(
        g2.lines().next().unwrap(),
        "2 proper, 0 improper, connected, diameter 1"
    );
    let g3 = stdout(&run(&["graph", "3"]));
    assert!(g3.contains(", connected, diameter "));
    assert!(g3.ends_with("satisfied: yes\n"));
    assert_eq!(run(&["graph", "5"]).status.code(), Some(2));
    assert_eq!(run(&["graph", "1"]).status.code(), Some(2));
}

#[test]
fn enumerate_with_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c3.txt");
    let c = cache.to_str().unwrap();
    let first = stdout(&run(&["enumerate", "3", "--cache", c]));
    assert!(cache.exists());
    assert_eq!(stdout(&run(&["enumerate", "3", "--cache", c])), first);
    assert_eq!(
        stdout(&run(&["enumerate", "3", "--count-only", "--cache", c])),
        "12\n"
    );
}

#[test]
fn uniformity_pipeline() {
    let gen = run(&["gen", "3", "--seed", "1", "--samples", "12000"]);
    assert!(gen.status.success());
    let mut child = bin()
        .args(["uniformity", "3", "--input", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&gen.stdout).unwrap();
    let o = child.wait_with_output().unwrap();
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["categories"], 12);
    assert_eq!(report["samples"], 12000);
    assert_eq!(report["dof"], 11);
    assert_eq!(report["pass"], true);
    assert!(o.status.success());
}

#[test]
fn uniformity_default_run_order_three() {
    let o = run(&["uniformity", "3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(
        run(&["uniformity", "5", "--mode", "exact"]).status.code(),
        Some(2)
    );
}

#[test]
fn uniformity_rejects_a_biased_input() {
    let dir = tempfile::tempdir().unwrap();
    let one = square_to_text(&fixtures::resolved_four());
    let f = write(dir.path(), "same.txt", &one.repeat(100));
    let o = run(&["uniformity", "4", "--mode", "cells", "--input", &f]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["pass"], false);
}

#[test]
fn formats_round_trip_over_order_three_graph() {
    let g = build_state_graph(3).unwrap();
    for v in &g.vertices {
        let grid = v.to_grid();
        for text in [square_to_text(&grid), square_to_json(&grid)] {
            let back = latinwalk::format::parse_state(&text).unwrap();
            assert_eq!(&back, v);
        }
    }
}
