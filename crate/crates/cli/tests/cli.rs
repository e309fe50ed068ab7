use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("thinlie-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thinlie")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn search_prints_count_and_emits_files() {
    let dir = scratch("search");
    let o = run(&["search", "--n", "3", "--level", "taut", "--stable", "--emit", dir.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("solutions=10\n"));
    assert_eq!(fs::read_dir(&dir).unwrap().count(), 10);

    let o = run(&["classify", dir.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("tables=10 classes=3\n"));
    assert_eq!(out.matches("nil2=4 toral=3").count(), 1);
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn search_limit_and_parallel() {
    let o = run(&["search", "--n", "3", "--limit", "5", "--stable"]);
    assert!(stdout(&o).ends_with("solutions=5\n"));
    let o = run(&["search", "--n", "3", "--parallel", "2", "--stable"]);
    assert!(stdout(&o).ends_with("solutions=2871\n"));
}

#[test]
fn check_simple_verdicts() {
    let o = run(&["check-simple", fixture("n1_4.txt").to_str().unwrap()]);
    assert_eq!(stdout(&o), "simple\n");
    let dir = scratch("abelian");
    let path = dir.join("ab.txt");
    fs::write(&path, "n = 2\n0 0 0\n0 0 0\n0 0 0\n").unwrap();
    let o = run(&["check-simple", path.to_str().unwrap(), "--seed", "9"]);
    assert_eq!(stdout(&o), "not-simple witness-dim=1\n");
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn count_and_fingerprint() {
    let f = fixture("n1_4.txt");
    let o = run(&["count", f.to_str().unwrap(), "--mode", "nilpotent2", "--oracle"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "nilpotent2=80\nnilpotent2-oracle=80\n");
    let o = run(&["fingerprint", fixture("fsl2.txt").to_str().unwrap()]);
    assert_eq!(stdout(&o), "dim=3 nil2=1 toral=2 derived=3 der=5\n");
}

#[test]
fn oracle_refuses_large_tables() {
    let o = run(&["count", fixture("m1.txt").to_str().unwrap(), "--mode", "toral", "--oracle"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn family_output_matches_reference() {
    let o = run(&["family", "--which", "N1", "--n", "4"]);
    let reference = fs::read_to_string(fixture("n1_4.txt")).unwrap();
    let strip = |s: &str| s.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&stdout(&o)), strip(&reference));
}

#[test]
fn verify_family_passes() {
    let o = run(&["verify-family", "--n", "4"]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn verify_fixture_exit_codes() {
    let o = run(&["verify-fixture", fixture("m3.txt").to_str().unwrap(), "--stable"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("nil2=23296"));

    let dir = scratch("verify");
    let asym = dir.join("asym.txt");
    fs::write(&asym, "n = 2\n0 1 0\n0 0 1\n0 1 0\n").unwrap();
    let o = run(&["verify-fixture", asym.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL symmetry"));

    let garbage = dir.join("garbage.txt");
    fs::write(&garbage, "n = 2\n0 2 0\n").unwrap();
    assert_eq!(run(&["verify-fixture", garbage.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["verify-fixture", dir.join("missing.txt").to_str().unwrap()]).status.code(), Some(2));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn stable_output_is_byte_identical() {
    let path = fixture("m2.txt");
    let args = ["verify-fixture", path.to_str().unwrap(), "--stable", "--seed", "5"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("elapsed"));
}
