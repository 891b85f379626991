//! The nine acceptance criteria, one pass/fail line each.
//!
//! Criteria 1 to 8 run the suites in process against the standard corpus
//! and check their runtime limits. Criterion 9 runs the default manifest
//! through the binary twice and replays the exit-code goldens.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

use unialg::corpus::{coefficient_triples, Corpus, DEFAULT_SEED};
use unialg::suites::{
    agreement_suite, closure_suite, coefficient_suite, decomposition_suite, galois_suite, limit_suite, operator_suite,
    ucl_suite, SuiteConfig, SuiteOutcome,
};

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unialg")).args(args).output().expect("binary runs")
}

struct Line {
    criterion: usize,
    name: String,
    passed: bool,
    detail: String,
}

fn suite_line(o: &SuiteOutcome, limit: Duration) -> Line {
    let in_time = o.elapsed <= limit;
    let mut detail = format!(
        "{} checks, {} failed, {:.1}s of {}s",
        o.checks,
        o.failed,
        o.elapsed.as_secs_f64(),
        limit.as_secs()
    );
    if !o.notes.is_empty() {
        detail.push_str(&format!("; {}", o.notes.join("; ")));
    }
    for f in &o.failures {
        detail.push_str(&format!("\n      {f}"));
    }
    Line {
        criterion: o.criterion.expect("primary suite"),
        name: o.name.to_string(),
        passed: o.passed() && in_time,
        detail,
    }
}

fn determinism_line() -> Line {
    let manifest = corpus_dir().join("manifest.json").display().to_string();
    let start = Instant::now();
    let first = run(&["corpus-run", "--manifest", &manifest]);
    let second = run(&["corpus-run", "--manifest", &manifest]);
    let elapsed = start.elapsed();
    let mut problems = Vec::new();
    if first.status.code() != Some(0) || second.status.code() != Some(0) {
        problems.push(format!(
            "corpus-run exited {:?}, {:?}: {}",
            first.status.code(),
            second.status.code(),
            String::from_utf8_lossy(&first.stderr)
        ));
    }
    if first.stdout != second.stdout {
        problems.push("the two reports differ".to_string());
    }
    let report: Value = serde_json::from_slice(&first.stdout).unwrap_or(Value::Null);
    if report["result"]["passed"] != Value::Bool(true) {
        problems.push("the manifest report is not green".to_string());
    }

    let examples = corpus_dir().join("examples");
    let ex = |n: &str| examples.join(n).display().to_string();
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, r#"{"kind": "manifest", "version": 1, "seed": 1, "fixtures": []}"#).unwrap();
    let corrupt_fixture = dir.path().join("corrupt.json");
    std::fs::write(&corrupt_fixture, r#"{"kind": "algebra", "version": 1, "size": 2"#).unwrap();
    let corrupt = dir.path().join("corrupt-manifest.json");
    std::fs::write(&corrupt, r#"{"kind": "manifest", "version": 1, "seed": 1, "fixtures": ["corrupt.json"]}"#).unwrap();
    let goldens: Vec<(Vec<String>, i32)> = vec![
        (vec!["solve".into(), "--algebra".into(), ex("s2.alg"), "--system".into(), ex("meet.sys")], 0),
        (vec!["unify-a".into(), "--c".into(), ex("z4.alg"), "--b".into(), ex("z2.alg")], 0),
        (vec!["solve".into(), "--algebra".into(), ex("s2.alg"), "--system".into(), ex("malformed.sys")], 2),
        (
            vec!["--max-universe".into(), "2".into(), "solve".into(), "--algebra".into(), ex("s2.alg"), "--system".into(), ex("meet.sys")],
            3,
        ),
        (vec!["no-such-command".into()], 2),
        (vec!["corpus-run".into(), "--manifest".into(), empty.display().to_string()], 2),
        (vec!["corpus-run".into(), "--manifest".into(), corrupt.display().to_string()], 2),
    ];
    for (args, want) in &goldens {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let got = run(&a).status.code();
        if got != Some(*want) {
            problems.push(format!("{a:?} exited {got:?}, expected {want}"));
        }
    }
    let r: Value = serde_json::from_slice(&run(&["solve", "--algebra", &ex("s2.alg"), "--system", &ex("meet.sys")]).stdout)
        .unwrap_or(Value::Null);
    if r["result"]["points"] != serde_json::json!([[0, 0], [0, 1], [1, 1]]) {
        problems.push("solve example points".to_string());
    }

    let mut detail = format!(
        "{} report bytes twice, {} goldens, {:.1}s",
        first.stdout.len(),
        goldens.len(),
        elapsed.as_secs_f64()
    );
    for p in &problems {
        detail.push_str(&format!("\n      {p}"));
    }
    Line {
        criterion: 9,
        name: "cli-determinism".to_string(),
        passed: problems.is_empty(),
        detail,
    }
}

fn main() {
    let corpus = Corpus::standard(DEFAULT_SEED);
    let triples = coefficient_triples().unwrap();
    let cfg = SuiteConfig::new(DEFAULT_SEED);
    let secs = Duration::from_secs;

    let (galois, sets) = galois_suite(&corpus, &cfg).unwrap();
    let mut lines = vec![
        suite_line(&galois, secs(30)),
        suite_line(&decomposition_suite(&sets, &cfg).unwrap(), secs(30)),
        suite_line(&agreement_suite(&corpus, &cfg).unwrap(), secs(120)),
        suite_line(&coefficient_suite(&corpus, &triples, &cfg).unwrap(), secs(60)),
        suite_line(&limit_suite(&corpus, &triples, &cfg).unwrap(), secs(30)),
        suite_line(&closure_suite(&corpus, &cfg).unwrap(), secs(60)),
        suite_line(&ucl_suite(&corpus, &cfg).unwrap(), secs(60)),
        suite_line(&operator_suite(&corpus, &cfg).unwrap(), secs(30)),
    ];
    lines.push(determinism_line());

    for l in &lines {
        println!(
            "criterion {}: {} {} ({})",
            l.criterion,
            if l.passed { "PASS" } else { "FAIL" },
            l.name,
            l.detail
        );
    }
    let numbers: Vec<usize> = lines.iter().map(|l| l.criterion).collect();
    assert_eq!(numbers, (1..=9).collect::<Vec<_>>());
    let passed = lines.iter().filter(|l| l.passed).count();
    println!("acceptance: {passed}/{} criteria passed", lines.len());
    if passed != lines.len() {
        std::process::exit(1);
    }
}
