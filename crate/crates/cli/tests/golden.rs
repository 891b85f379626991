//! Exit codes and report contents for the example documents.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn example(name: &str) -> String {
    corpus().join("examples").join(name).display().to_string()
}

fn fixture(name: &str) -> String {
    corpus().join("fixtures").join(format!("{name}.json")).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unialg")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn report(out: &Output) -> Value {
    assert_eq!(code(out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn solve_meet_line() {
    let r = report(&run(&["solve", "--algebra", &example("s2.alg"), "--system", &example("meet.sys")]));
    assert_eq!(r["kind"], "report");
    assert_eq!(r["command"], "solve");
    assert_eq!(r["result"]["points"], serde_json::json!([[0, 0], [0, 1], [1, 1]]));
    assert_eq!(r["inputs"].as_array().unwrap().len(), 2);
}

#[test]
fn unify_a_z4_over_z2_is_all_false() {
    let r = report(&run(&["unify-a", "--c", &example("z4.alg"), "--b", &example("z2.alg")]));
    assert_eq!(r["result"]["holds"], serde_json::json!(vec![false; 7]));
    assert_eq!(r["result"]["agreement"], true);
}

#[test]
fn unify_b_with_named_signature() {
    let r = report(&run(&[
        "unify-b",
        "--signature",
        &example("group.sig"),
        "--a",
        &example("z2-named.alg"),
        "--c",
        &example("z2-over-z2.alg"),
        "--b",
        &example("z2-over-z2.alg"),
    ]));
    assert_eq!(r["result"]["holds"], serde_json::json!(vec![true; 7]));
    assert_eq!(r["result"]["remark"]["universal_equivalent"], true);
    assert_eq!(r["result"]["agreement"], true);
}

#[test]
fn malformed_system_is_a_schema_error() {
    let out = run(&["solve", "--algebra", &example("s2.alg"), "--system", &example("malformed.sys")]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("parse error"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
}

#[test]
fn bound_exceeded_exits_3() {
    let out = run(&["--max-universe", "3", "solve", "--algebra", &example("s2.alg"), "--system", &example("meet.sys")]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("exceeds the configured bound"));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let s2 = example("s2.alg");
    let meet = example("meet.sys");
    let cases: Vec<Vec<String>> = vec![
        vec!["frobnicate".into()],
        vec!["solve".into(), "--algebra".into(), s2.clone()],
        vec!["solve".into(), "--algebra".into(), dir.path().join("absent.alg").display().to_string(), "--system".into(), meet.clone()],
        // An algebra where a system belongs.
        vec!["solve".into(), "--algebra".into(), s2.clone(), "--system".into(), s2.clone()],
        vec![
            "solve".into(),
            "--algebra".into(),
            write(dir.path(), "v2.alg", &std::fs::read_to_string(&s2).unwrap().replace("\"version\": 1", "\"version\": 2")),
            "--system".into(),
            meet.clone(),
        ],
        vec!["solve".into(), "--algebra".into(), write(dir.path(), "junk.alg", "{ not json"), "--system".into(), meet.clone()],
        vec![
            "solve".into(),
            "--algebra".into(),
            write(dir.path(), "short.alg", &std::fs::read_to_string(&s2).unwrap().replace("[0, 0, 0, 1]", "[0, 0, 1]")),
            "--system".into(),
            meet.clone(),
        ],
        // Signature mismatch between the system and the algebra.
        vec!["solve".into(), "--algebra".into(), example("z4.alg"), "--system".into(), meet.clone()],
        vec!["unify-a".into(), "--c".into(), example("z4.alg"), "--b".into(), s2.clone()],
        vec!["atp".into(), "--algebra".into(), s2.clone(), "--tuple".into(), "0,7".into()],
        vec!["quotient".into(), "--algebra".into(), s2.clone(), "--pair".into(), "0".into()],
        // Signature referenced by name but never loaded.
        vec!["canonical-system".into(), "--algebra".into(), example("z2-named.alg")],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = run(&args);
        assert_eq!(code(&out), 2, "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn false_verdicts_exit_0() {
    let r = report(&run(&["embed", "--c", &example("z4.alg"), "--b", &example("z2.alg")]));
    assert_eq!(r["result"]["holds"], false);
    let r = report(&run(&[
        "radical-member",
        "--algebra",
        &example("s2.alg"),
        "--system",
        &example("meet.sys"),
        "--equation",
        "x = y",
    ]));
    assert_eq!(r["result"]["holds"], false);
    assert_eq!(r["result"]["counterexample"], serde_json::json!([0, 1]));
}

#[test]
fn empty_manifest_has_nothing_to_run() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "manifest.json", r#"{"kind": "manifest", "version": 1, "seed": 1, "fixtures": []}"#);
    let out = run(&["corpus-run", "--manifest", &m]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("nothing to run"));
}

#[test]
fn corrupted_or_missing_fixture_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let z2 = std::fs::read_to_string(fixture("Z2")).unwrap();
    // An operation table that is not closed.
    write(dir.path(), "bad.json", &z2.replace("\"inv\": [0, 1]", "\"inv\": [0, 5]"));
    let m = write(
        dir.path(),
        "manifest.json",
        r#"{"kind": "manifest", "version": 1, "seed": 1, "fixtures": ["bad.json"]}"#,
    );
    let out = run(&["corpus-run", "--manifest", &m]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    let m = write(
        dir.path(),
        "missing.json",
        r#"{"kind": "manifest", "version": 1, "seed": 1, "fixtures": ["nowhere.json"]}"#,
    );
    assert_eq!(code(&run(&["corpus-run", "--manifest", &m])), 2);
}

#[test]
fn emitted_documents_are_reingested() {
    let dir = tempfile::tempdir().unwrap();
    let z2 = example("z2.alg");
    // A whole report is accepted wherever an algebra is.
    let out = run(&["product", "--factor", &z2, "--factor", &z2]);
    let product = write(dir.path(), "product.json", &String::from_utf8(out.stdout).unwrap());
    let r = report(&run(&["homs", "--c", &product, "--b", &z2]));
    assert_eq!(r["result"]["count"], 4);
    // So is the bare algebra document inside it.
    let bare: Value = serde_json::from_str(&std::fs::read_to_string(&product).unwrap()).unwrap();
    let bare = write(dir.path(), "bare.json", &bare["result"]["algebra"].to_string());
    let r = report(&run(&["embed", "--c", &z2, "--b", &bare]));
    assert_eq!(r["result"]["holds"], true);
    // Systems echoed in a report solve to the same points.
    let r = report(&run(&["solve", "--algebra", &example("s2.alg"), "--system", &example("meet.sys")]));
    let sys = write(dir.path(), "echo.sys", &r["result"]["system"].to_string());
    let again = report(&run(&["solve", "--algebra", &example("s2.alg"), "--system", &sys]));
    assert_eq!(again["result"]["points"], r["result"]["points"]);
    // Canonical systems go through validation, the limit and the embedding.
    let out = run(&["canonical-system", "--algebra", &example("s2.alg")]);
    let cs = write(dir.path(), "cs.json", &String::from_utf8(out.stdout).unwrap());
    let v = report(&run(&["limit-validate", "--system", &cs]));
    assert_eq!(v["result"]["valid"], true);
    let system: Value = serde_json::from_str(&std::fs::read_to_string(&cs).unwrap()).unwrap();
    let bare_cs = write(dir.path(), "bare-cs.json", &system["result"]["system"].to_string());
    let l = report(&run(&["limit-build", "--system", &bare_cs]));
    assert_eq!(l["result"]["algebra"]["size"], 2);
    let e = report(&run(&["limit-embed", "--system", &cs, "--target", &example("s2.alg")]));
    assert_eq!(e["result"]["embedding"].as_array().unwrap().len(), 2);
}

#[test]
fn nested_array_terms_match_text() {
    let dir = tempfile::tempdir().unwrap();
    let arrays = write(
        dir.path(),
        "arrays.sys",
        r#"{"kind": "system", "version": 1, "vars": ["x", "y"],
            "equations": [{"lhs": ["meet", ["var", "x"], ["var", "y"]], "rhs": ["var", "x"]}]}"#,
    );
    let a = report(&run(&["solve", "--algebra", &example("s2.alg"), "--system", &arrays]));
    let t = report(&run(&["solve", "--algebra", &example("s2.alg"), "--system", &example("meet.sys")]));
    assert_eq!(a["result"], t["result"]);
    let r = report(&run(&["closure-query", "--presentation", &example("unary.pres"), "--equation", "f(f(f(x))) = f(x)"]));
    assert_eq!(r["result"]["holds"], true);
}

#[test]
fn every_command_is_deterministic() {
    let s2 = example("s2.alg");
    let z2 = example("z2.alg");
    let z4 = example("z4.alg");
    let class = example("meet-class.json");
    let meet = example("meet.sys");
    let sen = example("idempotent.sen");
    let qi = example("cancel.qi");
    let runs: Vec<Vec<&str>> = vec![
        vec!["coordinate", "--algebra", &s2, "--system", &meet],
        vec!["irreducible", "--algebra", &s2, "--system", &meet],
        vec!["decompose", "--algebra", &s2, "--system", &meet, "--reverse"],
        vec!["separates", "--class", &class, "--c", &s2],
        vec!["discriminates", "--class", &class, "--c", &s2],
        vec!["ucl-member", "--class", &class, "--c", &s2],
        vec!["sentence-check", "--algebra", &s2, "--sentence", &sen],
        vec!["qi-check", "--algebra", &s2, "--sentence", &qi],
        vec!["quotient", "--algebra", &z4, "--pair", "0,2"],
        vec!["filterproduct", "--factor", &z2, "--factor", &z4, "--generator", "0"],
        vec!["direct-limit", "--algebra", &z2, "--algebra", &z4, "--map", "0,2"],
        vec!["atp", "--algebra", &z4, "--tuple", "1,2"],
        vec!["unify-a", "--c", &z2, "--b", &z4, "--format", "text"],
    ];
    for args in runs {
        let first = run(&args);
        assert_eq!(code(&first), 0, "{args:?}: {}", stderr(&first));
        assert_eq!(first.stdout, run(&args).stdout, "{args:?}");
    }
}

#[test]
fn filterproduct_at_a_principal_ultrafilter_is_the_factor() {
    let r = report(&run(&["filterproduct", "--factor", &example("z2.alg"), "--factor", &example("z4.alg"), "--generator", "1"]));
    assert_eq!(r["result"]["ultrafilter"], true);
    assert_eq!(r["result"]["algebra"]["size"], 4);
}
