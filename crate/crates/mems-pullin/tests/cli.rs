//! End-to-end checks of the command-line interface: exit codes, the config
//! echo, format round trips, and determinism under the worker-count flag.

use std::process::{Command, Output};

use mems_pullin::report::Table;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mems-pullin"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

#[test]
fn classify_stable_point_exits_zero() {
    let out = run(&["classify", "--lambda", "0.03", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

    let text = stdout(&out);
    assert!(text.starts_with("lambda,alpha,outcome,t_touchdown\n"), "got: {text}");
    assert!(text.contains(",stable,"), "got: {text}");

    // Every run echoes its configuration to stderr before any work.
    assert!(stderr(&out).starts_with("config: {"), "stderr: {}", stderr(&out));
}

#[test]
fn missing_required_flag_exits_one() {
    let out = run(&["classify", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("pullin"));
}

#[test]
fn comma_grid_exits_one() {
    let out = run(&["pullin", "--alpha-grid", "0,0.5,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("expected numbers"), "stderr: {}", stderr(&out));
}

/// A single damping value past saturation has no threshold below the fold:
/// the run produces no points, so the whole command fails.
#[test]
fn saturated_point_exits_two() {
    let out = run(&["pullin", "--alpha", "2"]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));

    let text = stdout(&out);
    assert!(text.starts_with("alpha,lambda_d,half_width,method\n"));
    assert!(text.contains("# failed:") && text.contains("no touchdown bracket"), "got: {text}");
}

/// A grid straddling saturation resolves the low-damping points and reports
/// the rest as failures: partial results, exit code 3.
#[test]
fn partial_sweep_exits_three_and_round_trips() {
    let out = run(&["pullin", "--alpha-grid", "0:1.2:0.4"]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));

    let text = stdout(&out);
    let table = Table::from_csv(&text).expect("emitted CSV parses");
    assert_eq!(table.rows.len(), 2, "alpha 0 and 0.4 resolve");
    assert_eq!(table.notes.len(), 2, "alpha 0.8 and 1.2 fail");
    assert_eq!(table.to_csv(), text, "re-emission is byte-identical");
}

#[test]
fn out_file_carries_the_payload() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let out = run(&[
        "pullin",
        "--alpha-grid",
        "0:0.5:0.25",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).is_empty(), "payload goes to the file");

    let text = std::fs::read_to_string(&path).unwrap();
    let table = Table::from_csv(&text).expect("file parses");
    assert_eq!(table.rows.len(), 3);
    assert_eq!(table.to_csv(), text);
}

#[test]
fn json_report_has_config_results_stats() {
    let out = run(&["classify", "--lambda", "0.03", "--alpha", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));

    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    let object = value.as_object().expect("top-level object");
    for key in ["config", "results", "stats"] {
        assert!(object.contains_key(key), "missing {key}");
    }
    assert_eq!(value["config"]["command"], "classify");
    assert!(value["stats"]["failures"].as_array().unwrap().is_empty());
    assert!(value["stats"]["wall_ms"].is_number());
}

/// Worker count must not leak into the output: same bytes at 1 and 4 jobs.
#[test]
fn jobs_flag_is_deterministic() {
    let args = ["sweep", "--lambda-grid", "0.05:0.15:0.05", "--alpha-grid", "0:1:0.5"];
    let serial = run(&[&args[..], &["--jobs", "1"]].concat());
    let parallel = run(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(serial.status.code(), Some(0), "stderr: {}", stderr(&serial));
    assert_eq!(parallel.status.code(), Some(0));
    assert_eq!(serial.stdout, parallel.stdout, "row order depends on the worker count");
}

#[test]
fn residence_of_a_stable_point_exits_two() {
    let out = run(&["residence", "--lambda", "0.1", "--alpha", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("did not touch down"), "stderr: {}", stderr(&out));
}

#[test]
fn residence_without_a_saddle_exits_one() {
    let out = run(&["residence", "--lambda", "0.16", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("admits no saddle"), "stderr: {}", stderr(&out));
}
