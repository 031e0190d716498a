//! End-to-end runs of the command line binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_slimrect"))
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn")
}

fn write(dir: &tempfile::TempDir, name: &str, content: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, content).unwrap();
    p.to_string_lossy().into_owned()
}

const S1_RECIPE: &str =
    r#"{"base":[1,1],"steps":[{"op":"multifork","cell_peak":"g_1_1","k":1}]}"#;

#[test]
fn build_writes_lattice_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let recipe = write(&dir, "s1.json", S1_RECIPE);
    let out = dir.path().join("out.json");
    let r = run(&["build", &recipe, "-o", out.to_str().unwrap()]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let d = slimrect::io::lattice_from_json(&text).unwrap();
    assert_eq!(d.n(), 7);
    assert!(dir.path().join("out.snap0.json").exists());
    assert!(dir.path().join("out.snap1.json").exists());
}

#[test]
fn bad_recipe_step_exits_2_with_step_index() {
    let dir = tempfile::tempdir().unwrap();
    let recipe = write(
        &dir,
        "bad.json",
        r#"{"base":[1,1],"steps":[{"op":"multifork","cell_peak":"nope","k":1}]}"#,
    );
    let out = dir.path().join("out.json");
    let r = run(&["build", &recipe, "-o", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&r.stderr);
    assert!(stderr.contains("step 0"), "{stderr}");
}

#[test]
fn render_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let recipe = write(&dir, "s1.json", S1_RECIPE);
    let svg1 = dir.path().join("a.svg");
    let svg2 = dir.path().join("b.svg");
    assert!(run(&["render", &recipe, "-o", svg1.to_str().unwrap()])
        .status
        .success());
    assert!(run(&["render", &recipe, "-o", svg2.to_str().unwrap()])
        .status
        .success());
    let a = std::fs::read(&svg1).unwrap();
    let b = std::fs::read(&svg2).unwrap();
    assert_eq!(a, b);
    assert!(String::from_utf8_lossy(&a).contains("stroke-width=\"3.5\""));
}

#[test]
fn check_fails_on_corrupted_lattice() {
    let dir = tempfile::tempdir().unwrap();
    // crossing middle edges
    let bad = write(
        &dir,
        "bad.json",
        r#"{"vertices":[
            {"id":"0","p":"0","q":"0"},
            {"id":"a","p":"3","q":"1"},
            {"id":"b","p":"1","q":"3"},
            {"id":"c","p":"3","q":"5"},
            {"id":"d","p":"5","q":"3"},
            {"id":"t","p":"5","q":"5"}],
           "covers":[["0","a"],["0","b"],["a","c"],["b","d"],["c","t"],["d","t"]]}"#,
    );
    let r = run(&["check", &bad, "--suite", "structure"]);
    assert_eq!(r.status.code(), Some(2), "malformed diagram is an input error");
}

#[test]
fn check_suites_pass_on_recipe() {
    let dir = tempfile::tempdir().unwrap();
    let recipe = write(&dir, "s1.json", S1_RECIPE);
    for suite in ["structure", "lamps", "congruence", "quotient", "all"] {
        let r = run(&["check", &recipe, "--suite", suite]);
        assert!(
            r.status.success(),
            "suite {suite}: {}",
            String::from_utf8_lossy(&r.stdout)
        );
    }
}

#[test]
fn quotient_by_edge_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let recipe = write(&dir, "s1.json", S1_RECIPE);
    let out = dir.path().join("q.json");
    let r = run(&[
        "quotient",
        &recipe,
        "--edge",
        "s0_f1,g_1_1",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(r.status.success());
    assert!(String::from_utf8_lossy(&r.stderr).contains("c1-pass"));
    let d = slimrect::io::lattice_from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(d.n(), 4);
}

#[test]
fn conlat_agrees_both_ways() {
    let dir = tempfile::tempdir().unwrap();
    let recipe = write(&dir, "s1.json", S1_RECIPE);
    let r = run(&["conlat", &recipe, "--both"]);
    assert!(r.status.success());
    let stdout = String::from_utf8_lossy(&r.stdout);
    assert!(stdout.contains("\"con_size\": 5"), "{stdout}");
    assert!(stdout.contains("\"lamp_jir_agree\": true"), "{stdout}");
}

#[test]
fn thrust_and_brosum() {
    let dir = tempfile::tempdir().unwrap();
    let recipe = write(&dir, "s1.json", S1_RECIPE);
    let out = dir.path().join("t.json");
    let r = run(&[
        "thrust", &recipe, "--lamp", "s0_f1", "--k", "1", "-o",
        out.to_str().unwrap(),
    ]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let r = run(&[
        "brosum", &recipe, "--lamp", "s0_f1", "--k", "1", "-o",
        out.to_str().unwrap(),
    ]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let d = slimrect::io::lattice_from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(d.n() > 7);
}

#[test]
fn corpus_smoke() {
    let r = run(&[
        "corpus",
        "--max-steps",
        "1",
        "--max-k",
        "2",
        "--max-grid",
        "2",
        "--suite",
        "structure",
    ]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let stdout = String::from_utf8_lossy(&r.stdout);
    assert!(stdout.contains("0 failures"), "{stdout}");
    assert!(stdout.contains("distinct lamp posets"), "{stdout}");
}
