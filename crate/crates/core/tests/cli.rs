use std::path::Path;
use std::process::{Command, Output};

use gelfand_core::report::parse_spec;
use serde_json::{json, Value};

fn gelfand(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gelfand")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn criteria_on_z6_exits_zero_with_json() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "z6.json", &json!({"construct": "zmod", "n": 6}));
    let out = gelfand(&["criteria", &f, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rep: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["consistency"]["status"], "consistent");
}

#[test]
fn non_gelfand_ring_is_not_a_violation() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "z.json", &json!({"construct": "semilocal_pid", "ambient": "Z", "primes": [2, 3]}));
    let out = gelfand(&["pm", &f]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn corrupted_table_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    // 1 + 1 = 0 but 1 * 1 = 0 breaks the unit law
    let f = write(
        dir.path(),
        "bad.json",
        &json!({"construct": "finite_table", "size": 2, "add": [[0, 1], [1, 0]], "mul": [[0, 0], [0, 0]]}),
    );
    let out = gelfand(&["spectrum", &f]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn malformed_json_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("broken.json");
    std::fs::write(&p, "{\"construct\": \"zmod\",\n  \"n\": }").unwrap();
    let out = gelfand(&["spectrum", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("broken.json:2:"));
}

#[test]
fn corpus_of_zero_ring_passes() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "zero.json", &json!({"construct": "zmod", "n": 1}));
    let out = gelfand(&["verify", "--corpus", dir.path().to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let run: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(run["pass"], true);
}

#[test]
fn corpus_with_bad_entry_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "ok.json", &json!({"construct": "zmod", "n": 6}));
    write(dir.path(), "bad.json", &json!({"construct": "zmod", "n": 0}));
    let out = gelfand(&["verify", "--corpus", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn export_dot_writes_digraph() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "z.json", &json!({"construct": "semilocal_pid", "ambient": "Z", "primes": [2, 3]}));
    let out_path = dir.path().join("z.dot");
    let out = gelfand(&["export-dot", &f, "-o", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let dot = std::fs::read_to_string(out_path).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 2);
}

#[test]
fn spec_wrapper_round_trips() {
    let text = r#"{"label": "z12", "bound": 4, "ring": {"construct": "zmod", "n": 12}}"#;
    let spec = parse_spec(text, "inline").unwrap();
    assert_eq!(spec.label.as_deref(), Some("z12"));
    let again = parse_spec(&serde_json::to_string(&spec).unwrap(), "inline").unwrap();
    assert_eq!(serde_json::to_value(&spec).unwrap(), serde_json::to_value(&again).unwrap());
    assert!(parse_spec(r#"{"ring": {"construct": "zmod", "n": 2}, "extra": 1}"#, "inline").is_err());
}
