use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn su_kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_su-kit"))
        .args(args)
        .env_remove("SU_KIT_CAP_UPSETS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const CHAIN2: &str = "frame chain2\npoints 2\nedge 0 1\nclosure\nend\n";
const FORK3: &str = "frame fork3\npoints 4\nedge 0 1\nedge 0 2\nedge 0 3\nclosure\nend\n";
const CHAIN2_P: &str = "frame c\npoints 2\nedge 0 1\nclosure\nval p 1\nend\n";

#[test]
fn medvedev_frame_satisfies_su2() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("medvedev3.kf");
    let o = su_kit(&["medvedev", "--size", "3", "--output", s(&path)]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("# pointmap 6 {1,2,3}"));
    let o = su_kit(&["su2", s(&path)]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "true\n"));
    let o = su_kit(&["uni", s(&path)]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "true\n"));
}

#[test]
fn fork_fails_su2_with_witness() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "fork3.kf", FORK3);
    let o = su_kit(&["su2", s(&f)]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o).lines().next(), Some("false"));
    let o = su_kit(&["validate", s(&f), "((~p -> q) & (~q -> p) -> r | s) -> (p -> r) | (q -> s)"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn validate_reports_countervaluation() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "chain2.kf", CHAIN2);
    let o = su_kit(&["validate", s(&f), "p | ~p"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "false\nrefuted at point 0\nval p 1\n");
    let o = su_kit(&["validate", s(&f), "~p | ~~p"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "true\n"));
}

#[test]
fn enumerate_three_points() {
    let o = su_kit(&["correspondence", "--enumerate", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "29 frames, 29 agree\n");
}

#[test]
fn random_correspondence_is_deterministic() {
    let args = ["correspondence", "--random", "20", "--points", "4-5", "--seed", "7", "--report"];
    let a = su_kit(&args);
    let b = su_kit(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert_eq!(out.lines().count(), 21);
    assert!(out.starts_with("sample0 su2="));
    assert!(out.ends_with("20 frames, 20 agree\n"));
}

#[test]
fn prove_statuses() {
    let o = su_kit(&["prove", "--logic", "ipc", "p, p -> q |- q"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "provable\n"));
    let o = su_kit(&["prove", "--logic", "ipc", "p | ~p"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (1, "unprovable\n"));
    let o = su_kit(&["prove", "--logic", "su", "--depth", "1", "p | ~p"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (2, "inconclusive\n"));
    let o = su_kit(&["prove", "--logic", "su", "--certificate", "(~p -> q | r) -> (~p -> q) | (~p -> r)"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("provable\ninstance "));
    assert!(out.contains("imp-r"));
}

#[test]
fn countermodel_statuses() {
    let o = su_kit(&["countermodel", "--max-points", "3", "p | ~p"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("points 2\n"));
    let o = su_kit(&["countermodel", "--max-points", "3", "~p | ~~p"]);
    assert_eq!(code(&o), 1);
    let o = su_kit(&["countermodel", "--max-points", "3", "(~p -> q | r) -> (~p -> q) | (~p -> r)"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (2, "no countermodel up to 3 points\n"));
}

#[test]
fn product_of_chains() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "chain2.kf", CHAIN2);
    let o = su_kit(&["product", s(&f), s(&f)]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("# pointmap 4 (0,0)\n"));
    assert!(out.contains("points 8\n"));
    let p = write(dir.path(), "product.kf", &out);
    assert_eq!(stdout(&su_kit(&["su2", s(&p)])), "true\n");
}

#[test]
fn dp_witness_renames_apart() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "c.km", CHAIN2_P);
    let o = su_kit(&["dp-witness", s(&m), s(&m), "p | ~p", "p | ~p", "--rename-apart"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("root 4 refutes p | ~p | (p2 | ~p2)\n"));
    assert!(out.contains("val p 1\nval p2 3\n"));
}

#[test]
fn dp_witness_rejects_non_refuting_model() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "c.km", CHAIN2_P);
    let o = su_kit(&["dp-witness", s(&m), s(&m), "~p | ~~p", "p | ~p"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).starts_with("error: precondition violated"));
}

#[test]
fn star_and_parse() {
    let o = su_kit(&["star", "--size", "4"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "true\n"));
    let o = su_kit(&["parse", "p&q->r|~s"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "p & q -> r | ~s\n"));
}

#[test]
fn input_errors_exit_three() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.kf", "frame x\npoints 2\nedge 0 5\nend\n");
    let open = write(dir.path(), "open.kf", "frame x\npoints 2\nedge 0 1\nend\n");
    let cases: Vec<Vec<&str>> = vec![
        vec!["su2", s(&bad)],
        vec!["su2", s(&open)],
        vec!["su2", "/nonexistent/frame.kf"],
        vec!["parse", "p &"],
        vec!["prove", "--logic", "cl", "p"],
        vec!["medvedev", "--size", "0"],
        vec!["correspondence", "--random", "3", "--points", "5-2"],
        vec!["correspondence"],
        vec!["no-such-command"],
    ];
    for args in cases {
        let o = su_kit(&args);
        assert_eq!(code(&o), 3, "{args:?}");
        assert!(stderr(&o).starts_with("error: "), "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty(), "{args:?}");
    }
    let o = su_kit(&["su2", s(&bad)]);
    assert!(stderr(&o).contains("bad.kf:3:"));
}

#[test]
fn upset_cap_from_environment() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "chain2.kf", CHAIN2);
    let run = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_su-kit"))
            .args(["validate", s(&f), "p"])
            .env("SU_KIT_CAP_UPSETS", cap)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("2")), 3);
    assert_eq!(code(&run("abc")), 3);
    assert_eq!(code(&run("3")), 1);
}
