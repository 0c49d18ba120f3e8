//! End-to-end behaviour of the command line.

use std::path::Path;
use std::process::{Command, Stdio};

use grope::format::{parse_stream, ParsedDiagram};
use grope::SpaceRecord;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = grope::run(std::iter::once("grope").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn group(args: &[&str]) -> SpaceRecord {
    let (code, out, err) = run(&[&["group", "--no-cache"], args].concat());
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn without_timing(s: &str) -> String {
    s.lines().filter(|l| !l.contains("wall_time_ms")).collect::<Vec<_>>().join("\n")
}

#[test]
fn group_examples() {
    let r = group(&["--space", "AI", "--degree", "2"]);
    assert_eq!((r.group.rank, r.group.torsion.clone()), (1, vec![]));
    let r = group(&["--space", "AI", "--degree", "2", "--mod-loops", "1"]);
    assert_eq!((r.group.rank, r.group.torsion.clone()), (0, vec![2]));
    let r = group(&["--space", "Bg", "--degree", "2"]);
    assert_eq!((r.group.rank, r.group.torsion.clone()), (0, vec![2]));
    assert_eq!(r.grading, "grope");
    let r = group(&["--space", "A", "--degree", "1", "--framed"]);
    assert_eq!((r.group.rank, r.label.as_str()), (1, "A_1"));
    let r = group(&["--space", "A", "--degree", "3", "--presentation", "ihx"]);
    assert_eq!(r.group.rank, 1);
    assert!(r.relation_counts.contains_key("IHX"));
}

#[test]
fn enumerate_streams_parseable_diagrams() {
    let (code, out, _) = run(&["enumerate", "--space", "B", "--grading", "vassiliev", "--degree", "2"]);
    assert_eq!(code, 0);
    let ds = parse_stream(&out).unwrap();
    assert_eq!(ds.len(), 6);
    assert!(ds.iter().all(|d| matches!(d, ParsedDiagram::Open(_))));
    let (code, out, _) = run(&["enumerate", "--space", "A", "--degree", "1"]);
    assert_eq!(code, 0);
    assert!(parse_stream(&out).unwrap().iter().all(|d| matches!(d, ParsedDiagram::Closed(_))));
    let (_, out, _) = run(&["enumerate", "--space", "AI", "--degree", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let ai2 = group(&["--space", "AI", "--degree", "2"]);
    let dec = ai2.relation_counts["DECOMPOSABLE"];
    assert_eq!(v.as_array().unwrap().len(), ai2.basis_size - dec);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["enumerate", "--space", "B", "--degree", "1"]).0, 2);
    assert_eq!(run(&["group", "--space", "AI", "--degree", "2", "--unknown"]).0, 2);
    assert_eq!(run(&["group", "--space", "AI"]).0, 2);
    assert_eq!(run(&["group", "--space", "Q", "--degree", "2"]).0, 2);
    assert_eq!(run(&["group", "--space", "A", "--degree", "2", "--workers", "0"]).0, 2);
    assert_eq!(run(&["knot", "/nonexistent/corpus.txt"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn resource_cap_exits_3() {
    let (code, _, err) = run(&["group", "--no-cache", "--space", "A", "--degree", "5", "--max-classes", "50"]);
    assert_eq!(code, 3, "{err}");
    assert_eq!(run(&["enumerate", "--space", "Bv", "--degree", "6", "--max-classes", "10"]).0, 3);
}

#[test]
fn output_independent_of_workers_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = |w: &'static str| ["group", "--space", "AI", "--degree", "2..4", "--mod-loops", "1", "--workers", w];
    let (_, cold, _) = run(&[&args("1")[..], &["--cache-dir", cache]].concat());
    assert!(Path::new(cache).join("AI").is_dir());
    let (_, warm, _) = run(&[&args("3")[..], &["--cache-dir", cache]].concat());
    let (_, none, _) = run(&[&args("2")[..], &["--no-cache"]].concat());
    assert_eq!(cold, warm);
    assert_eq!(without_timing(&cold), without_timing(&none));
    let recs: Vec<SpaceRecord> = serde_json::from_str(&cold).unwrap();
    assert_eq!(recs.iter().map(|r| r.label.as_str()).collect::<Vec<_>>(), ["A^I_2[1]", "A^I_3[1]", "A^I_4[1]"]);

    let e = |w: &'static str| run(&["enumerate", "--space", "Bg", "--degree", "2..5", "--workers", w]).1;
    assert_eq!(e("1"), e("4"));
}

#[test]
fn dry_run_prints_the_plan_only() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    let c = cache.to_str().unwrap();
    let (code, out, _) = run(&["group", "--space", "AI", "--degree", "2..3", "--cache-dir", c, "--dry-run"]);
    assert_eq!(code, 0);
    assert!(out.contains("command: group"));
    assert_eq!(out.lines().filter(|l| l.starts_with("task: A^I_")).count(), 2);
    assert!(out.contains("(miss)"));
    assert!(!cache.exists());
    for cmd in [&["enumerate", "--space", "A", "--degree", "9"][..], &["verify-table"], &["knot", "nowhere.txt"]] {
        let (code, out, _) = run(&[cmd, &["--dry-run"]].concat());
        assert_eq!(code, 0);
        assert!(out.starts_with("command: "));
    }
}

#[test]
fn knot_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("knots.txt");
    std::fs::write(&p, "unknot:\ntrefoil: O1+ U2+ O3+ U1+ O2+ U3+\nfigure-eight: O1- U2+ O3+ U1- O4- U3+ O2+ U4-\n")
        .unwrap();
    let (code, out, _) = run(&["knot", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out, "name,c2,v3,arf\nunknot,0,0,0\ntrefoil,1,1,1\nfigure-eight,-1,0,1\n");
    std::fs::write(&p, "ok: O1+ U1+\nbad: O1+ U1-\n").unwrap();
    let (code, _, err) = run(&["knot", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn binary_reads_environment_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_grope"))
        .args(["group", "--space", "Bg", "--degree", "3", "--dry-run"])
        .env("GROPE_CACHE_DIR", dir.path())
        .env("GROPE_WORKERS", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("workers: 3"));
    assert!(text.contains(&format!("cache: {}", dir.path().display())));
    let status = Command::new(env!("CARGO_BIN_EXE_grope"))
        .args(["group", "--space", "Bg", "--degree", "1"])
        .env("GROPE_CACHE_DIR", dir.path())
        .stderr(Stdio::null())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}
