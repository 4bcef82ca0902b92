//! End-to-end runs of the built binary: output shapes, determinism and the
//! exit-code contract (0 expected outcome, 1 violated property, 2 tool error).

use std::path::PathBuf;
use std::process::{Command, Output};

fn cacti(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cacti")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn write_doc(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, text).expect("tmp dir is writable");
    path
}

fn corolla_doc() -> String {
    let c = cacti_core::cactus::Cactus::corolla(
        cacti_core::cactus::Variety::Cact,
        &[cacti_core::rational::qi(1), cacti_core::rational::q(1, 2)],
    )
    .unwrap();
    cacti_cli::doc::print(&c)
}

#[test]
fn homology_of_the_two_lobe_complex_is_the_circle() {
    let out = cacti(&["homology", "--target", "cact1", "--n", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "Betti: 1 1\nTorsion: none\n");
}

#[test]
fn verify_passes_on_free_gluing_and_expects_failure_on_normalized() {
    let out = cacti(&["verify", "--axiom", "assoc", "--variety", "cact", "--samples", "50", "--seed", "42"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("violations=0"));

    let out = cacti(&["verify", "--axiom", "assoc", "--variety", "cact1", "--samples", "20", "--seed", "42"]);
    assert!(out.status.success(), "expected-counterexample mode exits 0");
    assert!(stdout(&out).contains("counterexample"));
}

#[test]
fn every_command_is_deterministic_and_newline_terminated() {
    let doc = write_doc("det.json", &corolla_doc());
    let path = doc.to_str().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["enumerate", "--n", "3"],
        vec!["verify", "--axiom", "equiv", "--variety", "cacti", "--samples", "25", "--seed", "7"],
        vec!["homology", "--target", "ccd", "--n", "3"],
        vec!["convert", "--to", "ribbon", path],
        vec!["convert", "--to", "arcs", path],
        vec!["render", "--format", "tikz", path],
    ];
    for args in runs {
        let first = cacti(&args);
        let second = cacti(&args);
        assert!(first.status.success(), "{args:?}");
        let text = stdout(&first);
        assert_eq!(text, stdout(&second), "{args:?}");
        assert!(text.ends_with('\n'), "{args:?}");
        assert!(!text.ends_with("\n\n"), "{args:?}");
    }
}

#[test]
fn enumerate_counts_match_the_catalogue() {
    let out = cacti(&["enumerate", "--n", "3"]);
    let text = stdout(&out);
    assert!(text.starts_with("dim=0 count=6\ndim=1 count=18\ndim=2 count=12\ntotal=36\n"));
    assert_eq!(text.matches("type dim=1").count(), 18);

    let only = cacti(&["enumerate", "--n", "3", "--dim", "2"]);
    let only = stdout(&only);
    assert!(only.starts_with("dim=2 count=12\n"));
    assert_eq!(only.lines().count(), 13);
}

#[test]
fn compose_emits_a_canonical_document() {
    let a = write_doc("host.json", &corolla_doc());
    let single = cacti_core::cactus::Cactus::single(
        cacti_core::cactus::Variety::Cact,
        cacti_core::rational::qi(3),
        None,
    )
    .unwrap();
    let b = write_doc("guest.json", &cacti_cli::doc::print(&single));
    let out = cacti(&["compose", "--variety", "cact", "--i", "1", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    let c = cacti_cli::doc::parse(&text).expect("compose prints valid documents");
    assert_eq!(cacti_cli::doc::print(&c), text);
    assert_eq!(text, corolla_doc(), "a single lobe fills the slot it replaces");
}

#[test]
fn tool_errors_exit_with_code_two() {
    let out = cacti(&["verify", "--axiom", "assoc", "--variety", "cactus", "--samples", "1"]);
    assert_eq!(out.status.code(), Some(2));

    let out = cacti(&["convert", "--to", "chord", "/nonexistent.json"]);
    assert_eq!(out.status.code(), Some(2));

    let out = cacti(&["verify", "--axiom", "semidirect", "--variety", "cact1", "--samples", "1"]);
    assert_eq!(out.status.code(), Some(2), "the split applies to free varieties only");

    let out = cacti(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));

    let bad = write_doc("bad.json", &corolla_doc().replace("\"1/2\"", "\"0\""));
    let out = cacti(&["convert", "--to", "dualtree", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("tree") || err.contains("radii"), "{err}");
}

#[test]
fn fiber_counts_agree_for_a_stored_type_key() {
    let key = write_doc("key.txt", "2.1.2\n");
    let out = cacti(&["fiber", "--type", key.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("type=2.1.2 n=2 dim=1\n"));
    assert!(text.ends_with("match=yes\n"));
}
