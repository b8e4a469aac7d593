use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn trinets(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trinets"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_extract_build_round_trip() {
    let dir = TempDir::new().unwrap();
    let (net, tnt, out) = (
        path(&dir, "n.enwk"),
        path(&dir, "n.tnt"),
        path(&dir, "out.enwk"),
    );
    for seed in ["1", "2", "3", "4"] {
        assert!(
            trinets(&["gen", "--leaves", "9", "--seed", seed, "-o", s(&net)])
                .status
                .success()
        );
        assert!(trinets(&["extract", s(&net), "-o", s(&tnt)])
            .status
            .success());
        assert!(trinets(&["build", s(&tnt), "-o", s(&out)]).status.success());
        let eq = trinets(&["eq", s(&net), s(&out)]);
        assert_eq!(eq.status.code(), Some(0), "seed {seed}");
    }
}

#[test]
fn extract_with_binets_writes_both() {
    let dir = TempDir::new().unwrap();
    let tnt = path(&dir, "t.tnt");
    assert!(trinets(&[
        "extract",
        &data("cut_set_example.enwk"),
        "--binets",
        "-o",
        s(&tnt)
    ])
    .status
    .success());
    // 10 trinets and 10 binets on 5 taxa
    assert_eq!(std::fs::read_to_string(&tnt).unwrap().lines().count(), 20);
    let out = path(&dir, "out.enwk");
    assert!(trinets(&["build", s(&tnt), "-o", s(&out)]).status.success());
    assert_eq!(
        trinets(&["eq", s(&out), &data("cut_set_example.enwk")])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn level3_pair_has_equal_trinets_but_is_distinct() {
    let cmp = trinets(&[
        "compare-trinets",
        &data("level3_n1.enwk"),
        &data("level3_n2.enwk"),
    ]);
    assert_eq!(cmp.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&cmp.stdout).starts_with("equal trinet sets"));
    assert_eq!(
        trinets(&["eq", &data("level3_n1.enwk"), &data("level3_n2.enwk")])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn compare_trinets_lists_differences() {
    let cmp = trinets(&[
        "compare-trinets",
        &data("level3_n1.enwk"),
        &data("cut_set_example.enwk"),
    ]);
    assert_eq!(cmp.status.code(), Some(1));
    let text = String::from_utf8_lossy(&cmp.stdout);
    assert!(text.starts_with("different trinet sets"));
    assert!(text.contains("only in"));
}

#[test]
fn bundled_trinet_file_builds_the_bundled_network() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "out.enwk");
    let build = trinets(&[
        "build",
        &data("cut_set_example.tnt"),
        "-o",
        s(&out),
        "--report",
    ]);
    assert!(build.status.success());
    let report = String::from_utf8_lossy(&build.stderr);
    assert!(report.contains("depth 0: taxa=5 A={c,d}"), "{report}");
    assert!(report.contains("generator=2c"), "{report}");
    assert_eq!(
        trinets(&["eq", s(&out), &data("cut_set_example.enwk")])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn build_is_byte_identical_across_runs() {
    let a = trinets(&["build", &data("cut_set_example.tnt")]);
    let b = trinets(&["build", &data("cut_set_example.tnt")]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn validate_reports_diagnostics() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        trinets(&["validate", &data("cut_set_example.enwk")])
            .status
            .code(),
        Some(0)
    );
    let bad = path(&dir, "bad.enwk");
    // root of outdegree 3
    std::fs::write(&bad, "(a,b,c);\n").unwrap();
    let v = trinets(&["validate", s(&bad)]);
    assert_eq!(v.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&v.stdout).contains("outdegree 3"));
    let hidden = path(&dir, "hidden.enwk");
    std::fs::write(&hidden, "((((a,b),c))#H1,#H1);\n").unwrap();
    let v = trinets(&["validate", s(&hidden)]);
    assert_eq!(v.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&v.stdout).contains("not recoverable"));
}

#[test]
fn parse_and_usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.enwk");
    std::fs::write(&bad, "((a,b),c;\n").unwrap();
    let out = trinets(&["eq", s(&bad), s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.enwk:1:"));
    let tnt = path(&dir, "bad.tnt");
    std::fs::write(&tnt, "# comment\n((a,b),c);\n((a,b),,c);\n").unwrap();
    let out = trinets(&["build", s(&tnt)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.tnt:3:"));
    assert_eq!(trinets(&["gen", "--leaves", "5"]).status.code(), Some(2));
    assert_eq!(trinets(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        trinets(&["validate", s(&path(&dir, "missing.enwk"))])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn gen_respects_level_and_seed() {
    let a = trinets(&["gen", "--leaves", "8", "--seed", "11", "--level", "0"]);
    let b = trinets(&["gen", "--leaves", "8", "--seed", "11", "--level", "0"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!String::from_utf8_lossy(&a.stdout).contains('#'));
    let env = Command::new(env!("CARGO_BIN_EXE_trinets"))
        .args(["gen", "--leaves", "8", "--level", "0"])
        .env("TRINETS_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
}
