//! End-to-end checks of the command-line interface.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_eagerscope")
}

fn fixture(part: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(part)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn analyze_json(dir: &Path, extra: &[&str]) -> (PathBuf, Output) {
    let out = dir.join("report.json");
    let out_str = out.display().to_string();
    let mut args = vec![
        "analyze",
        "--tests",
        &*Box::leak(fixture("tests").into_boxed_str()),
        "--src",
        &*Box::leak(fixture("src").into_boxed_str()),
        "--out",
        &*Box::leak(out_str.into_boxed_str()),
    ];
    args.extend_from_slice(extra);
    let output = run(&args);
    (out, output)
}

#[test]
fn analyze_writes_schema_compatible_json() {
    let dir = tempfile::tempdir().unwrap();
    let (path, output) = analyze_json(dir.path(), &[]);
    assert!(output.status.success(), "{output:?}");
    let text = std::fs::read_to_string(&path).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["schema_version"], 1);
    for key in ["config_echo", "tests", "summary", "agreement"] {
        assert!(doc.get(key).is_some(), "missing key {key}");
    }
    let tests = doc["tests"].as_array().unwrap();
    assert_eq!(tests.len(), 10);
    let first = &tests[0];
    for key in ["file", "class", "method"] {
        assert!(first["id"].get(key).is_some(), "missing id key {key}");
    }
    let verdict = first["verdicts"].as_object().unwrap().values().next().unwrap();
    assert!(verdict.get("result").is_some());
    assert!(verdict.get("flags").is_some());
    // summary rows carry the documented fields
    let summary = doc["summary"].as_object().unwrap();
    for (_, row) in summary {
        for key in ["eager", "not_eager", "not_applicable", "pct_eager"] {
            assert!(row.get(key).is_some(), "missing summary key {key}");
        }
    }
    // agreement entries name both detectors
    let entry = &doc["agreement"].as_array().unwrap()[0];
    for key in ["a", "b", "kappa", "band", "n"] {
        assert!(entry.get(key).is_some(), "missing agreement key {key}");
    }
}

#[test]
fn selecting_one_detector_drops_the_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let (path, output) = analyze_json(dir.path(), &["--detectors", "heuristic"]);
    assert!(output.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["agreement"].as_array().unwrap().len(), 0);
    let verdicts = doc["tests"][0]["verdicts"].as_object().unwrap();
    assert_eq!(verdicts.len(), 1);
    assert!(verdicts.contains_key("heuristic"));
}

#[test]
fn csv_output_has_one_line_per_test_plus_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let output = run(&[
        "analyze",
        "--tests",
        &fixture("tests"),
        "--src",
        &fixture("src"),
        "--format",
        "csv",
        "--out",
        &out.display().to_string(),
    ]);
    assert!(output.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 11);
}

#[test]
fn empty_corpus_exits_with_warning_code() {
    let empty = tempfile::tempdir().unwrap();
    let output = run(&[
        "analyze",
        "--tests",
        &empty.path().display().to_string(),
    ]);
    assert_eq!(output.status.code(), Some(2), "{output:?}");
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("no test cases"), "{stderr}");
}

#[test]
fn missing_root_is_fatal() {
    let output = run(&["analyze", "--tests", "/nonexistent/never/here"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn unknown_detector_is_a_usage_error() {
    let output = run(&[
        "analyze",
        "--tests",
        &fixture("tests"),
        "--src",
        &fixture("src"),
        "--detectors",
        "DRX",
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("unknown detector"));
}

#[test]
fn parse_diagnostics_are_non_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let tests_dir = dir.path().join("tests");
    std::fs::create_dir(&tests_dir).unwrap();
    std::fs::write(
        tests_dir.join("GoodTest.java"),
        r#"
        import org.junit.Test;
        public class GoodTest {
            @Test
            public void testFine() { assertTrue(true); }
        }
        "#,
    )
    .unwrap();
    std::fs::write(tests_dir.join("Broken.java"), "class Broken { void m( {").unwrap();
    let output = run(&["analyze", "--tests", &tests_dir.display().to_string()]);
    assert!(output.status.success(), "{output:?}");
    assert!(String::from_utf8_lossy(&output.stderr).contains("syntax error"));
}

#[test]
fn agree_recomputes_the_matrix_from_saved_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let (report_path, output) = analyze_json(dir.path(), &[]);
    assert!(output.status.success());

    let agree_out = dir.path().join("agreement.json");
    let output = run(&[
        "agree",
        "--verdicts",
        &report_path.display().to_string(),
        "--out",
        &agree_out.display().to_string(),
    ]);
    assert!(output.status.success(), "{output:?}");
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&agree_out).unwrap()).unwrap();
    let entries = doc["agreement"].as_array().unwrap();
    // 7 detectors -> 21 pairs
    assert_eq!(entries.len(), 21);

    // the standalone command reproduces the analyze-time matrix
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(doc["agreement"], report["agreement"]);
}

#[test]
fn agree_rejects_non_report_input() {
    let dir = tempfile::tempdir().unwrap();
    let bogus = dir.path().join("bogus.json");
    std::fs::write(&bogus, "{\"not\": \"a report\"}").unwrap();
    let output = run(&["agree", "--verdicts", &bogus.display().to_string()]);
    assert_eq!(output.status.code(), Some(1));
}
