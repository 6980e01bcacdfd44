use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_argonto"))
        .args(args)
        .env_remove("ARGONTO_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn accept_exits_zero_with_boolean_answer() {
    let o = run(&["accept", &corpus("av.onto"), "--assert", "LeaveCar(PS1)"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["answer"], true);
    let o = run(&["accept", &corpus("av.onto"), "--assert", "~LeaveCar(PS1)"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["answer"], false);
}

#[test]
fn inconsistent_check_exits_one() {
    assert_eq!(code(&run(&["check", &corpus("av.onto")])), 1);
    assert_eq!(code(&run(&["check", &corpus("complement.onto")])), 1);
    assert_eq!(code(&run(&["check", &corpus("abox_only.onto")])), 0);
    assert_eq!(code(&run(&["check", &corpus("empty.onto")])), 0);
}

#[test]
fn explain_of_rejected_assertion_exits_one() {
    let o = run(&["explain", &corpus("av.onto"), "--assert", "~LeaveCar(PS1)"]);
    assert_eq!(code(&o), 1);
    let o = run(&["explain", &corpus("av.onto"), "--assert", "Unheard(PS1)"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["check", "/nonexistent/file.onto"])), 2);
    assert_eq!(
        code(&run(&[
            "accept",
            &corpus("av.onto"),
            "--assert",
            "not a literal("
        ])),
        2
    );
    assert_eq!(
        code(&run(&["check", &corpus("av.onto"), "--priority", "p9<p1"])),
        2
    );
    assert_eq!(code(&run(&["bogus"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.onto");
    std::fs::write(&bad, "TBOX r1 strict Foo SUBSUMED_BY\n").unwrap();
    assert_eq!(code(&run(&["check", bad.to_str().unwrap()])), 2);
}

#[test]
fn budget_exhaustion_exits_three() {
    let o = Command::new(env!("CARGO_BIN_EXE_argonto"))
        .args(["arguments", &corpus("av.onto")])
        .env("ARGONTO_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    let o = run(&["arguments", &corpus("av.onto"), "--max-arguments", "2"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for cmd in ["arguments", "af", "extensions", "conclusions", "check"] {
        let a = run(&[cmd, &corpus("av.onto"), "--semantics", "pr"]);
        let b = run(&[cmd, &corpus("av.onto"), "--semantics", "pr"]);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}

#[test]
fn priority_flag_matches_edited_file() {
    let src = std::fs::read_to_string(corpus("av.onto")).unwrap();
    let edited = src.replace("PRIORITY p2 < p1", "PRIORITY p1 < p2");
    assert_ne!(src, edited);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("av_swapped.onto");
    std::fs::write(&path, edited).unwrap();

    let via_flag = run(&["af", &corpus("av.onto"), "--priority", "p1<p2"]);
    let via_file = run(&["af", path.to_str().unwrap()]);
    assert_eq!(code(&via_flag), 0);
    assert_eq!(via_flag.stdout, via_file.stdout);

    let o = run(&[
        "accept",
        &corpus("av.onto"),
        "--assert",
        "~LeaveCar(PS1)",
        "--priority",
        "p1<p2",
    ]);
    assert_eq!(json(&o)["answer"], true);
}

#[test]
fn emit_files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let theory = dir.path().join("theory.json");
    let args = dir.path().join("arguments.json");
    let af = dir.path().join("af.json");
    let o = run(&[
        "conclusions",
        &corpus("av.onto"),
        "--emit-theory",
        theory.to_str().unwrap(),
        "--emit-arguments",
        args.to_str().unwrap(),
        "--emit-af",
        af.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let read = |p: &PathBuf| -> serde_json::Value {
        serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
    };
    let t = read(&theory);
    let ids: Vec<&str> = t["rules"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["id"].as_str().unwrap())
        .collect();
    assert!(ids.contains(&"r10'"));
    assert_eq!(read(&args)["arguments"].as_array().unwrap().len(), 22);
    let af = read(&af);
    assert_eq!(af["arguments"].as_array().unwrap().len(), 22);
    assert_eq!(af["defeats"].as_array().unwrap().len(), 14);
}

#[test]
fn apx_format_lists_arguments_and_defeats() {
    let o = run(&["af", &corpus("av.onto"), "--format", "apx"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("arg(")).count(), 22);
    assert_eq!(text.lines().filter(|l| l.starts_with("att(")).count(), 14);
}

#[test]
fn empty_ontology_has_one_empty_preferred_extension() {
    let o = run(&["extensions", &corpus("empty.onto"), "--semantics", "pr"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["extensions"], serde_json::json!([[]]));
}

#[test]
fn text_format_is_readable() {
    let o = run(&["check", &corpus("av.onto"), "--format", "text"]);
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .starts_with("inconsistent"));
    let o = run(&[
        "explain",
        &corpus("av.onto"),
        "--assert",
        "LeaveCar(PS1)",
        "--format",
        "text",
    ]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("how:"), "{text}");
    assert!(text.contains("principle p1"), "{text}");
}

#[test]
fn well_defined_passes_on_corpus_and_fails_without_transposition() {
    assert_eq!(code(&run(&["well-defined", &corpus("av.onto")])), 0);
    assert_eq!(
        code(&run(&[
            "well-defined",
            &corpus("av.onto"),
            "--no-transpose"
        ])),
        1
    );
}

#[test]
fn instance_and_concept_queries() {
    let o = run(&["instance", &corpus("av.onto"), "PS1", "--class", "Driver"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["answer"], true);
    let o = run(&["concepts-of", &corpus("av.onto"), "PS1"]);
    let concepts = json(&o)["answer"].clone();
    assert!(
        concepts.as_array().unwrap().iter().any(|c| c == "Driver"),
        "{concepts}"
    );
    let o = run(&["instances-of", &corpus("av.onto"), "Driver"]);
    assert_eq!(json(&o)["answer"], serde_json::json!(["PS1"]));
}
