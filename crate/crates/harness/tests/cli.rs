//! End-to-end checks of the `qcc` binary: subcommands, exit codes, report
//! bytes, and the seed-override environment variable.

use std::process::{Command, Output};

fn qcc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcc"))
        .args(args)
        .env_remove("QCC_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn list_names_every_protocol() {
    let output = qcc(&["list"]);
    assert!(output.status.success());
    let text = stdout(&output);
    for name in [
        "equality-fingerprint",
        "equality-shared-randomness",
        "epr-classical",
        "epr-quantum",
        "dj-telepathy",
        "dj-qubit",
        "dj-fake",
        "grover-schedule",
        "epr-restricted",
    ] {
        assert!(text.contains(name), "missing {name} in:\n{text}");
    }
}

#[test]
fn run_emits_csv_with_fixed_columns() {
    let output = qcc(&[
        "run",
        "epr-quantum",
        "--grid",
        "3x3",
        "--trials",
        "50",
        "--seed",
        "7",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "# protocol=epr-quantum seed=7 seed_source=cli trials=50 sigma=5"
    );
    assert_eq!(
        lines.next().unwrap(),
        "protocol,input_id,trials,estimate,std_err,exact,abs_err,bits_sent,qubits_sent,ebits,pass"
    );
    assert_eq!(lines.count(), 9);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "run",
        "equality-shared-randomness",
        "--exhaustive",
        "--n",
        "3",
        "--trials",
        "64",
        "--seed",
        "11",
        "--format",
        "json",
    ];
    let one = qcc(&args);
    let two = qcc(&args);
    assert!(one.status.success());
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn seed_env_var_overrides_and_is_recorded() {
    let output = Command::new(env!("CARGO_BIN_EXE_qcc"))
        .args([
            "run",
            "epr-classical",
            "--input",
            "0.2:0.7",
            "--trials",
            "10",
        ])
        .env("QCC_SEED", "123")
        .output()
        .expect("binary runs");
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.starts_with("# protocol=epr-classical seed=123 seed_source=env"));
}

#[test]
fn usage_errors_exit_with_two() {
    // unknown protocol
    let output = qcc(&["run", "no-such-protocol", "--input", "0:0", "--trials", "1"]);
    assert_eq!(output.status.code(), Some(2));
    // malformed subcommand
    let output = qcc(&["frobnicate"]);
    assert_eq!(output.status.code(), Some(2));
    // no input selection
    let output = qcc(&["run", "epr-classical"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn search_reports_the_restricted_task_violation() {
    let output = qcc(&["search", "epr-restricted"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("feasible over the local polytope: no"));
    assert!(text.contains("5/2"));
}

#[test]
fn search_finds_the_perfect_small_strategies() {
    let output = qcc(&["search", "dj", "--n", "4"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("perfect: true"), "{text}");
    assert!(text.contains("112/112"), "{text}");
}

#[test]
fn search_accepts_task_documents() {
    let dir = std::env::temp_dir().join("qcc-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("xor-match.json");
    std::fs::write(
        &path,
        r#"{
            "name": "xor-match",
            "x": ["0", "1"], "y": ["0", "1"], "a": ["0", "1"], "b": ["0", "1"],
            "allowed": [
                ["0", "0", "0", "0"], ["0", "1", "1", "1"],
                ["1", "0", "1", "1"], ["1", "1", "0", "0"]
            ],
            "distribution": "uniform-all"
        }"#,
    )
    .unwrap();
    let output = qcc(&["search", path.to_str().unwrap()]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("zero-communication optimum"));
}

#[test]
fn verify_search_suite_passes_quickly() {
    let output = qcc(&["verify", "search"]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("OK"));
}

#[test]
fn config_files_drive_runs() {
    let dir = std::env::temp_dir().join("qcc-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("experiment.json");
    std::fs::write(
        &path,
        r#"{
            "protocol": "dj-qubit",
            "inputs": "exhaustive",
            "trials": 2,
            "seed": 5,
            "params": {"k": 1}
        }"#,
    )
    .unwrap();
    let output = qcc(&["run", "--config", path.to_str().unwrap()]);
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let text = stdout(&output);
    assert!(text.contains("seed_source=config"));
    // 12 promise pairs at k = 1, plus header and column lines
    assert_eq!(text.lines().count(), 14);
}
