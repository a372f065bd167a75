//! Every JSON output of the binary validates against its shipped schema
//! in `docs/schemas/`, including the degenerate/outside variants that
//! exercise the nullable branches.

use std::fs;
use std::path::Path;
use std::process::Command;

use tempfile::TempDir;

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/schemas")
        .join(name);
    let text = fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("schema {} unreadable: {e}", path.display()));
    let value: serde_json::Value = serde_json::from_str(&text).expect("schema is JSON");
    jsonschema::validator_for(&value).expect("schema compiles")
}

/// Runs the binary and parses its stdout as JSON (the exit code is the
/// caller's business: degenerate runs still print a full report).
fn json_output(args: &[&str]) -> serde_json::Value {
    let out = Command::new(env!("CARGO_BIN_EXE_kuramoto"))
        .args(args)
        .output()
        .expect("binary launches");
    let stdout = String::from_utf8(out.stdout).expect("stdout is UTF-8");
    serde_json::from_str(&stdout).unwrap_or_else(|e| {
        panic!(
            "stdout of {args:?} is not JSON ({e}):\n{stdout}\nstderr: {}",
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn assert_valid(validator: &jsonschema::Validator, instance: &serde_json::Value, label: &str) {
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{label} violates its schema: {errors:?}");
}

fn write_input(dir: &TempDir, name: &str, content: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, content).expect("test input written");
    path.to_string_lossy().into_owned()
}

#[test]
fn index_reports_validate() {
    let dir = TempDir::new().unwrap();
    let validator = schema("index.json");
    let regular = write_input(&dir, "regular.txt", "0.1\n-0.4\n0.9\n");
    assert_valid(&validator, &json_output(&["index", &regular, "--format", "json"]), "regular θ");
    let vertex = write_input(&dir, "vertex.txt", "0\n1.5707963267948966\n1.5707963267948966\n");
    assert_valid(
        &validator,
        &json_output(&["index", &vertex, "--format", "json"]),
        "degenerate θ",
    );
}

#[test]
fn sync_reports_validate() {
    let dir = TempDir::new().unwrap();
    let validator = schema("sync.json");
    let cases = [
        ("inside.txt", "0.4\n-0.1\n-0.3\n", "synchronizable ω"),
        ("vertex.txt", "1\n1\n-2\n", "marginal ω"),
        ("outside.txt", "2\n0.5\n-2.5\n", "outside ω"),
    ];
    for (name, content, label) in cases {
        let file = write_input(&dir, name, content);
        assert_valid(&validator, &json_output(&["sync", &file, "--gamma", "1"]), label);
    }
}

#[test]
fn boundary_scan_tables_validate() {
    let validator = schema("boundary-scan.json");
    assert_valid(
        &validator,
        &json_output(&["boundary-scan", "--n", "3", "--samples", "6", "--format", "json"]),
        "polar scan",
    );
    assert_valid(
        &validator,
        &json_output(&[
            "boundary-scan", "--n", "5", "--samples", "4", "--seed", "9", "--format", "json",
        ]),
        "random-direction scan",
    );
}

#[test]
fn transition_tables_validate() {
    let validator = schema("transition.json");
    assert_valid(
        &validator,
        &json_output(&[
            "transition", "--n", "20", "--delta-grid", "0.5,2", "--samples", "50",
            "--seed", "1", "--format", "json",
        ]),
        "transition table",
    );
}

#[test]
fn extremes_tables_validate() {
    let validator = schema("extremes.json");
    assert_valid(
        &validator,
        &json_output(&["extremes", "--n", "2..8", "--format", "json"]),
        "extremes table",
    );
}

#[test]
fn integrate_summaries_validate() {
    let dir = TempDir::new().unwrap();
    let validator = schema("integrate.json");
    let inside = write_input(&dir, "inside.txt", "0.5\n-0.5\n");
    let traj = dir.path().join("traj.csv");
    assert_valid(
        &validator,
        &json_output(&[
            "integrate", &inside, "--gamma", "1", "--t-end", "10", "--format", "json",
            "--out", traj.to_str().unwrap(),
        ]),
        "locking run with trajectory dump",
    );
    let outside = write_input(&dir, "outside.txt", "2\n0\n-2\n");
    assert_valid(
        &validator,
        &json_output(&[
            "integrate", &outside, "--gamma", "1", "--t-end", "25", "--format", "json",
        ]),
        "drifting run",
    );
}
