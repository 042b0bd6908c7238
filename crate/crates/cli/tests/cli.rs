use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohoquant")).args(args).current_dir(dir).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["selftest", "--report", "self.art"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("selftest.fixtures: ok"));
    let o = run(dir.path(), &["inspect", "self.art"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn solve_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(d, &["assoc", "solve", "--order", "3", "-o", "phi.art"])), 0);
    assert_eq!(code(&run(d, &["assoc", "verify", "phi.art", "--order", "3"])), 0);
    assert_eq!(code(&run(d, &["twist", "solve", "--assoc", "phi.art", "--order", "3", "-o", "j.art"])), 0);
    let o = run(d, &["twist", "verify", "j.art"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(code(&run(d, &["rmatrix", "build", "--twist", "j.art", "-o", "r.art"])), 0);
    let o = run(d, &["rmatrix", "check", "r.art", "--twist", "j.art"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(code(&run(d, &["bialgebra", "example", "borel", "-o", "b.art"])), 0);
    assert_eq!(code(&run(d, &["bialgebra", "validate", "b.art"])), 0);
    let o = run(d, &["quantize", "--bialgebra", "b.art", "--twist", "j.art", "--hbar-order", "2", "--degree-cap", "2", "--report", "q.art"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let first = std::fs::read(d.join("j.art")).unwrap();
    assert_eq!(code(&run(d, &["twist", "solve", "--assoc", "phi.art", "--order", "3", "-o", "j2.art"])), 0);
    assert_eq!(first, std::fs::read(d.join("j2.art")).unwrap());
}

#[test]
fn wedge_h3_in_degree_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["cohomology", "report", "--complex", "wedge", "--h", "3", "--degree", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("dimension 0\n"), "{}", stdout(&o));
    let o = run(dir.path(), &["cohomology", "report", "--complex", "wedge", "--h", "3", "--degree", "2", "--expect", "1"]);
    assert_eq!(code(&o), 1);
    let o = run(dir.path(), &["cohomology", "report", "--complex", "cohoch", "--h", "2", "--degree", "1"]);
    assert!(stdout(&o).starts_with("dimension 1\n"), "{}", stdout(&o));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(d, &["frobnicate"])), 2);
    assert_eq!(code(&run(d, &["assoc", "solve", "--order", "3", "--bogus", "-o", "x"])), 2);
    assert_eq!(code(&run(d, &["assoc", "verify", "missing.art"])), 2);
    std::fs::write(d.join("bad.art"), "{\"kind\": ").unwrap();
    assert_eq!(code(&run(d, &["inspect", "bad.art"])), 2);
    assert_eq!(code(&run(d, &["assoc", "solve", "--order", "2", "-o", "phi.art"])), 0);
    let text = std::fs::read_to_string(d.join("phi.art")).unwrap().replace("1/24", "1/12");
    std::fs::write(d.join("tampered.art"), text).unwrap();
    assert_eq!(code(&run(d, &["assoc", "verify", "tampered.art"])), 2);
    assert_eq!(code(&run(d, &["twist", "verify", "phi.art"])), 2);
}

#[test]
fn residual_failures_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(d, &["assoc", "solve", "--order", "3", "--impose-alt-phi2", "-o", "phi.art"])), 1);
    let b = r#"{"bracket":[[0,1,1,"1/1"],[1,0,1,"-1/1"]],"cobracket":[[1,0,1,"1/1"]],"names":["H","E"]}"#;
    let v: serde_json::Value = serde_json::from_str(b).unwrap();
    let art = cohoquant::artifact::Artifact::new(cohoquant::artifact::Kind::Bialgebra, v);
    std::fs::write(d.join("b.art"), art.to_text()).unwrap();
    let o = run(d, &["bialgebra", "validate", "b.art"]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    assert!(stdout(&o).contains("FAILED"));
}
