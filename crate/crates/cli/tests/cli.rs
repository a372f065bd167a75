//! End-to-end checks of the `kuramoto` binary: documented examples, exit
//! codes, input handling, determinism of seeded commands, and output
//! routing.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn kuramoto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kuramoto"))
        .args(args)
        .output()
        .expect("binary launches")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("terminated normally")
}

fn write_input(dir: &TempDir, name: &str, content: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, content).expect("test input written");
    path.to_string_lossy().into_owned()
}

/// Data rows of a CSV output: everything except `#` comment lines.
fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            l.split(',')
                .map(|t| t.parse().unwrap_or(f64::NAN))
                .collect()
        })
        .collect()
}

#[test]
fn uniform_phase_has_index_zero() {
    let dir = TempDir::new().unwrap();
    let theta = write_input(&dir, "theta.txt", "0\n0\n0\n");
    let out = kuramoto(&["index", &theta]);
    assert!(exit_code(&out) == 0, "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("τ = Σ1/κᵢ = 1.000000"), "τ line missing in:\n{text}");
    assert!(text.contains("n₊ = 0, n₀ = 1, n₋ = 2"), "index line missing in:\n{text}");
    assert!(text.contains("agreement: exact"), "agreement line missing in:\n{text}");
}

#[test]
fn vertex_configuration_is_marginal_with_kernel_two() {
    let dir = TempDir::new().unwrap();
    let theta = write_input(&dir, "theta.txt", "0\n1.5707963267948966\n1.5707963267948966\n");
    let out = kuramoto(&["index", &theta]);
    assert!(exit_code(&out) == 2, "degeneracy must exit 2, stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("Marginal"), "formula route must report Marginal in:\n{text}");
    assert!(
        text.contains("eigenvalue oracle: n₊ = 0, n₀ = 2, n₋ = 1"),
        "oracle must see a two-dimensional kernel in:\n{text}"
    );
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = TempDir::new().unwrap();
    let theta = write_input(&dir, "theta.txt", "1.0\nbogus\n0.5\n");
    let out = kuramoto(&["index", &theta]);
    assert!(exit_code(&out) == 1, "parse failure must exit 1");
    let err = stderr_of(&out);
    assert!(err.contains("line 2"), "line number missing in: {err}");
}

#[test]
fn missing_file_is_an_input_error() {
    let out = kuramoto(&["index", "/nonexistent/theta.txt"]);
    assert!(exit_code(&out) == 1, "missing file must exit 1");
    assert!(stderr_of(&out).contains("cannot read"), "stderr: {}", stderr_of(&out));
}

#[test]
fn zero_frequency_synchronizes_trivially() {
    let dir = TempDir::new().unwrap();
    let omega = write_input(&dir, "omega.txt", "0\n0\n0\n");
    let out = kuramoto(&["sync", &omega, "--gamma", "1"]);
    assert!(exit_code(&out) == 0, "stderr: {}", stderr_of(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("JSON report");
    assert!(v["synchronizable"] == serde_json::json!(true), "got {v}");
    assert!(v["tau"] == serde_json::json!(1.0), "ω = 0 has τ = 1, got {v}");
}

#[test]
fn marginal_vertex_frequency_exits_two() {
    let dir = TempDir::new().unwrap();
    let omega = write_input(&dir, "omega.txt", "1\n1\n-2\n");
    let out = kuramoto(&["sync", &omega, "--gamma", "1"]);
    assert!(exit_code(&out) == 2, "marginal decision must exit 2");
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("JSON report");
    assert!(v["status"] == serde_json::json!("marginal"), "got {v}");
    assert!((v["tau"].as_f64().unwrap() - 2.0).abs() < 1e-9, "vertex has τ = 2, got {v}");
}

#[test]
fn beyond_the_boundary_is_not_synchronizable() {
    let dir = TempDir::new().unwrap();
    let c = 2.6 / 2.0f64.sqrt();
    let omega = write_input(&dir, "omega.json", &format!("[{c}, 0.0, {}]", -c));
    let out = kuramoto(&["sync", &omega, "--gamma", "1"]);
    assert!(exit_code(&out) == 0, "a clean negative decision exits 0");
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("JSON report");
    assert!(v["synchronizable"] == serde_json::json!(false), "got {v}");
    assert!(v["kappa"].is_null() && v["theta"].is_null(), "no solution fields, got {v}");
}

#[test]
fn nonzero_mean_is_projected_with_a_notice() {
    let dir = TempDir::new().unwrap();
    let omega = write_input(&dir, "omega.json", "[1.1, 0.1, -1.1]");
    let out = kuramoto(&["sync", &omega, "--gamma", "1"]);
    assert!(exit_code(&out) == 0, "stderr: {}", stderr_of(&out));
    assert!(
        stderr_of(&out).contains("removed mean"),
        "projection notice missing: {}",
        stderr_of(&out)
    );
}

#[test]
fn invalid_gamma_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let omega = write_input(&dir, "omega.txt", "0\n0\n0\n");
    let out = kuramoto(&["sync", &omega, "--gamma=-1"]);
    assert!(exit_code(&out) == 1, "γ ≤ 0 must exit 1");
    assert!(stderr_of(&out).contains("positive"), "stderr: {}", stderr_of(&out));
}

#[test]
fn polar_scan_covers_the_known_range() {
    let out = kuramoto(&["boundary-scan", "--n", "3", "--samples", "24"]);
    assert!(exit_code(&out) == 0, "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.starts_with("# columns:"), "header line missing:\n{text}");
    let rows = csv_rows(&text);
    assert!(rows.len() == 24, "expected 24 rays, got {}", rows.len());
    let root6 = 6.0f64.sqrt();
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for row in &rows {
        let s_star = *row.last().unwrap();
        assert!(
            (root6 - 1e-3..=2.4894).contains(&s_star),
            "crossing {s_star} outside the three-oscillator range"
        );
        min = min.min(s_star);
        max = max.max(s_star);
    }
    // 24 rays at 15° spacing hit both a flattest direction (0°) and a
    // vertex direction (90°).
    assert!((min - root6).abs() < 1e-3, "scan min {min} should be √6");
    assert!((max - 2.4893).abs() < 1e-3, "scan max {max} should be ≈ 2.4893");
}

#[test]
fn random_direction_scan_is_reproducible_and_bounded() {
    let args = ["boundary-scan", "--n", "4", "--samples", "8", "--seed", "5"];
    let first = kuramoto(&args);
    let second = kuramoto(&args);
    assert!(exit_code(&first) == 0, "stderr: {}", stderr_of(&first));
    assert!(first.stdout == second.stdout, "same seed must give identical bytes");
    for row in csv_rows(&stdout_of(&first)) {
        let s_star = *row.last().unwrap();
        assert!(
            (2.0f64.sqrt() * 2.0 - 1e-3..=4.0001).contains(&s_star),
            "N = 4 crossing {s_star} outside [inscribed radius, sphere bound]"
        );
    }
}

#[test]
fn transition_reruns_are_byte_identical() {
    let args = [
        "transition", "--n", "20", "--delta-grid", "0.5,2", "--samples", "100", "--seed", "3",
    ];
    let first = kuramoto(&args);
    let second = kuramoto(&args);
    assert!(exit_code(&first) == 0, "stderr: {}", stderr_of(&first));
    assert!(first.stdout == second.stdout, "same seed must give identical bytes");
    let rows = csv_rows(&stdout_of(&first));
    assert!(rows.len() == 2, "one row per δ, got {}", rows.len());
    let (p_low, p_high) = (rows[0][3], rows[1][3]);
    assert!(
        p_low < p_high,
        "shared draws make p̂ monotone in δ: {p_low} vs {p_high}"
    );
}

#[test]
fn extremes_flags_parity_and_known_values() {
    let out = kuramoto(&["extremes", "--n", "2..6"]);
    assert!(exit_code(&out) == 0, "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(data.len() == 5, "range 2..6 is inclusive, got {} rows", data.len());
    let row4 = data.iter().find(|l| l.starts_with("4,")).expect("N = 4 row");
    assert!(row4.contains(",exact,"), "even size is exact: {row4}");
    assert!(row4.contains("4,0.25,"), "γ_min(4) = 0.25: {row4}");
    assert!(row4.contains(",16.0,"), "‖ω_max(4)‖² = 16: {row4}");
    let row5 = data.iter().find(|l| l.starts_with("5,")).expect("N = 5 row");
    assert!(row5.contains(",conjectured,"), "odd size is conjectured: {row5}");
    assert!(row5.contains(",30.0,"), "‖ω_max(5)‖² = 30: {row5}");

    let listed = kuramoto(&["extremes", "--n", "3,5"]);
    let rows = csv_rows(&stdout_of(&listed));
    assert!(rows.len() == 2, "comma list selects exactly those sizes");

    let bad = kuramoto(&["extremes", "--n", "1..3"]);
    assert!(exit_code(&bad) == 1, "sizes below 2 must exit 1");
}

#[test]
fn integrate_locks_inside_and_drifts_outside() {
    let dir = TempDir::new().unwrap();
    let inside = write_input(&dir, "inside.txt", "0.5\n-0.5\n");
    let out = kuramoto(&["integrate", &inside, "--gamma", "1", "--t-end", "20"]);
    assert!(exit_code(&out) == 0, "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).contains("locked: yes"), "inside run:\n{}", stdout_of(&out));

    let c = 3.0 / 2.0f64.sqrt();
    let outside = write_input(&dir, "outside.json", &format!("[{c}, 0.0, {}]", -c));
    let out = kuramoto(&["integrate", &outside, "--gamma", "1", "--t-end", "30"]);
    assert!(exit_code(&out) == 0, "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).contains("locked: no"), "outside run:\n{}", stdout_of(&out));
}

#[test]
fn trajectory_dump_has_header_and_all_states() {
    let dir = TempDir::new().unwrap();
    let omega = write_input(&dir, "omega.txt", "0.3\n-0.3\n");
    let traj: PathBuf = dir.path().join("traj.csv");
    let out = kuramoto(&[
        "integrate", &omega, "--gamma", "1", "--dt", "0.01", "--t-end", "5",
        "--out", traj.to_str().unwrap(),
    ]);
    assert!(exit_code(&out) == 0, "stderr: {}", stderr_of(&out));
    let text = fs::read_to_string(&traj).expect("trajectory written");
    assert!(text.starts_with("# columns: t (time)"), "header missing:\n{text}");
    let rows = csv_rows(&text);
    assert!(rows.len() == 501, "5/0.01 steps plus t = 0, got {}", rows.len());
    assert!(rows.iter().all(|r| r.len() == 3), "t plus two phase columns");
    assert!(stdout_of(&out).contains("trajectory: 501 states"), "summary:\n{}", stdout_of(&out));
}

#[test]
fn out_flag_routes_tables_to_files() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("scan.csv");
    let out = kuramoto(&[
        "boundary-scan", "--n", "3", "--samples", "4", "--out", path.to_str().unwrap(),
    ]);
    assert!(exit_code(&out) == 0, "stderr: {}", stderr_of(&out));
    assert!(out.stdout.is_empty(), "table must go to the file, not stdout");
    let text = fs::read_to_string(&path).expect("file written");
    assert!(text.starts_with("# columns:"), "file content:\n{text}");
}

#[test]
fn help_exits_zero_and_unknown_input_exits_one() {
    assert!(exit_code(&kuramoto(&["--help"])) == 0, "--help is a success");
    assert!(exit_code(&kuramoto(&["frobnicate"])) == 1, "unknown subcommand is an input error");
    assert!(
        exit_code(&kuramoto(&["boundary-scan", "--n", "3", "--bogus"])) == 1,
        "unknown flag is an input error"
    );
}
