mod common;

use std::path::Path;

use common::examples_dir;
use isgd::fixtures::{demo_structure, demo_table};
use isgd::io::{parse_action, parse_structure};
use isgd::run_cli;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("isgd").chain(args.iter().copied());
    let code = run_cli(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn example(name: &str) -> String {
    examples_dir().join(name).to_string_lossy().into_owned()
}

#[test]
fn shipped_structure_is_the_eight_arrow_table() {
    let text = std::fs::read_to_string(examples_dir().join("demo_s.isgd")).unwrap();
    assert_eq!(parse_structure(&text).unwrap().table, demo_table());
    let (code, out, _) = run(&["validate", &example("demo_s.isgd")]);
    assert_eq!(code, 0);
    assert!(out.contains("idempotents {a*a, aa*, b*b, bb*}"));
}

#[test]
fn shipped_actions_match_the_fixtures() {
    let cases = [
        ("demo_x.pact", isgd::fixtures::demo_x()),
        ("demo_x_as_printed.pact", isgd::fixtures::demo_x_as_printed()),
        ("demo_y.pact", isgd::fixtures::demo_y()),
        ("demo_restricted.pact", isgd::fixtures::demo_restricted()),
    ];
    for (file, fixture) in cases {
        let text = std::fs::read_to_string(examples_dir().join(file)).unwrap();
        assert_eq!(parse_action(&text, demo_structure()).unwrap(), fixture, "{file}");
    }
}

#[test]
fn validate_exit_codes() {
    let (code, out, _) = run(&["validate", &example("demo_x.pact"), &example("demo_y.pact")]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = run(&["validate", &example("demo_x_as_printed.pact")]);
    assert_eq!(code, 1);
    assert!(out.contains("theta(a) sends 1 to 4, not into X_a = {3}"), "{out}");
    let (code, _, err) = run(&["validate", "/nonexistent.pact"]);
    assert_eq!(code, 2);
    assert!(err.contains("nonexistent"));
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn parse_errors_exit_with_two_and_a_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.isgd");
    std::fs::write(&bad, "[objects]\nu v\n[arrows]\na : u -> v\n[mul]\na a = a\n").unwrap();
    let (code, _, err) = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains(":6:1:"), "{err}");
    assert!(err.contains("not a composable pair"));
}

#[test]
fn globalize_table_output() {
    let (code, out, _) = run(&["globalize", &example("demo_restricted.pact")]);
    assert_eq!(code, 0);
    assert!(out.contains("classes: 4"));
    assert!(out.contains("eta_a: c1->c2 c2->c3 c4->c1"), "{out}");
    assert!(out.contains("eta_b: c1->c1 c2->c2 c4->c4"));
    assert!(out.contains("E_b = {c1, c2, c4}"));
    assert!(out.contains("i: 1->c1 2->c2"));
    let (code, out, _) = run(&["globalize", &example("demo_x.pact"), "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph"));
    let (code, out, _) = run(&["globalize", &example("demo_x_as_printed.pact")]);
    assert_eq!(code, 1, "{out}");
}

#[test]
fn json_output_is_byte_stable() {
    let path = example("demo_x.pact");
    let (_, first, _) = run(&["globalize", &path, "--format", "json"]);
    let (_, second, _) = run(&["globalize", &path, "--format", "json"]);
    assert_eq!(first, second);
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["classes"].as_array().unwrap().len(), 5);
    assert_eq!(v["embedding"][3], serde_json::json!(["4", "c4"]));
}

#[test]
fn restrict_and_mediate() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(&["restrict", &example("demo_y.pact"), "--subset", "1,2"]);
    assert_eq!(code, 0);
    assert_eq!(out, std::fs::read_to_string(examples_dir().join("demo_restricted.pact")).unwrap());

    // Unknown points are input errors.
    let (code, _, _) = run(&["restrict", &example("demo_x.pact"), "--subset", "3,9"]);
    assert_eq!(code, 2);

    let (code, out, _) = run(&[
        "mediate",
        &example("demo_restricted.pact"),
        "--target",
        &example("demo_y.pact"),
        "--embedding",
        "1->1,2->2",
        "--strict",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("sigma: c1->1 c2->2 c3->3 c4->3"));
    assert!(out.contains("injective: false"));
    assert!(out.contains("fiber injectivity: ok"));
    assert!(out.contains("uniqueness confirmed"));

    // A rotated inclusion is still an S-function into a global action.
    let mediate = |embedding: &str| {
        run(&[
            "mediate",
            &example("demo_restricted.pact"),
            "--target",
            &example("demo_y.pact"),
            "--embedding",
            embedding,
        ])
    };
    let (code, out, _) = mediate("1->2,2->3");
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("sigma: c1->2 c2->3 c3->1 c4->1"), "{out}");
    let (code, _, _) = mediate("1->1,2->1");
    assert_eq!(code, 1);

    let dumped = dir.path().join("cat");
    let (code, out, _) = run(&["catalog", "--dump", dumped.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("demo: 2 objects, 8 arrows, 4 idempotents")));
    let (code, out, _) = run(&["validate", dumped.join("pair-groupoid-2-translation.pact").to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn check_and_sample() {
    let (code, out, _) = run(&["check", &example("demo_x.pact"), "--props"]);
    assert_eq!(code, 0);
    assert!(out.contains("P/E agreement: ok"));
    assert!(out.contains("derived propositions: ok"));
    let (code, out, _) = run(&["check", &example("demo_x_as_printed.pact")]);
    assert_eq!(code, 1);
    assert!(out.contains("P/E agreement: ok"));

    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(examples_dir().join("demo_s.isgd"), dir.path().join("demo_s.isgd")).unwrap();
    let (code, out, _) = run(&["sample", "demo", "--seed", "1", "--structure-path", "demo_s.isgd"]);
    assert_eq!(code, 0);
    assert_eq!(out, std::fs::read_to_string(examples_dir().join("demo_restricted.pact")).unwrap());
    let sampled = dir.path().join("s.pact");
    std::fs::write(&sampled, out).unwrap();
    let (code, _, _) = run(&["validate", sampled.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["sample", "nope"]);
    assert_eq!(code, 2);
    assert!(Path::new(&example("demo_s.isgd")).exists());
}
