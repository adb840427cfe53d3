//! End-to-end checks of the `hsf-sim` binary: exit codes, report JSON,
//! deterministic dumps, and the generator/manifest round trip.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hsf_sim(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsf-sim"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write_bell(dir: &Path) -> String {
    let path = dir.join("bell.circ");
    fs::write(&path, "qubits 2\nh 0\ncnot 0 1\n").unwrap();
    path.display().to_string()
}

#[test]
fn run_bell_all_engines() {
    let dir = tempfile::tempdir().unwrap();
    let circ = write_bell(dir.path());
    let out = hsf_sim(
        &[
            "run",
            "--circuit",
            &circ,
            "--cut",
            "0",
            "--amps",
            "4",
            "--out",
            "report.json",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["engines"].as_array().unwrap().len(), 3);
    assert_eq!(report["deviation_ok"], true);
    assert_eq!(report["engines"][1]["n_p"], 2);
    assert_eq!(report["engines"][2]["n_p"], 2);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("max amplitude deviation"));
}

#[test]
fn config_errors_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let circ = write_bell(dir.path());

    let out = hsf_sim(
        &["run", "--circuit", &circ, "--cut", "0", "--engines", "warp"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(4));

    let out = hsf_sim(&["run", "--cut", "0"], dir.path());
    assert_eq!(out.status.code(), Some(4));

    // HSF without a cut position.
    let out = hsf_sim(
        &["run", "--circuit", &circ, "--engines", "hsf-joint"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(4));

    // Unknown flag goes through the same path.
    let out = hsf_sim(&["run", "--circuit", &circ, "--frobnicate"], dir.path());
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn all_engines_timed_out_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let circ = write_bell(dir.path());
    let out = hsf_sim(
        &[
            "run",
            "--circuit",
            &circ,
            "--cut",
            "0",
            "--amps",
            "4",
            "--timeout",
            "0",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(3),
        "stdout: {}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn deterministic_dumps_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.bin", "b.bin"] {
        let out = hsf_sim(
            &[
                "run",
                "--gen-qaoa",
                "4,4,0.8,0.3,5",
                "--engines",
                "hsf-joint",
                "--amps",
                "256",
                "--deterministic",
                "--dump-amplitudes",
                name,
            ],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0));
    }
    let a = fs::read(dir.path().join("a.bin")).unwrap();
    let b = fs::read(dir.path().join("b.bin")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn gen_qaoa_manifest_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = hsf_sim(
        &[
            "gen-qaoa",
            "--sizes",
            "5,5",
            "--p-inter",
            "0.3",
            "--seed",
            "9",
            "--out-circuit",
            "one.circ",
            "--out-manifest",
            "one.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let out = hsf_sim(
        &[
            "gen-qaoa",
            "--from-manifest",
            "one.json",
            "--out-circuit",
            "two.circ",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let one = fs::read_to_string(dir.path().join("one.circ")).unwrap();
    let two = fs::read_to_string(dir.path().join("two.circ")).unwrap();
    assert_eq!(one, two);
}

#[test]
fn plan_subcommand_reports_cascade_counts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cascade.circ");
    fs::write(&path, "qubits 4\nh 0\ncnot 0 1\ncnot 0 2\ncnot 0 3\n").unwrap();
    let out = hsf_sim(
        &[
            "plan",
            "--circuit",
            path.to_str().unwrap(),
            "--cut",
            "0",
            "--out",
            "plan.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("blocks+sep 1+0"), "stdout: {stdout}");
    assert!(stdout.contains("standard 8 (2^3)"), "stdout: {stdout}");
    assert!(stdout.contains("joint 2 (2^1)"), "stdout: {stdout}");
    let plan: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("plan.json")).unwrap()).unwrap();
    assert_eq!(plan["n_p_standard"], 8);
    assert_eq!(plan["n_p_joint"], 2);
}

#[test]
fn bench_writes_table_with_spread() {
    let dir = tempfile::tempdir().unwrap();
    let out = hsf_sim(
        &[
            "bench",
            "--sizes",
            "3,3",
            "--p-inter",
            "0.4",
            "--seeds",
            "1",
            "--repeats",
            "3",
            "--amps",
            "64",
            "--engines",
            "schrodinger,hsf-joint",
            "--out",
            "bench.json",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("bench.json")).unwrap()).unwrap();
    assert_eq!(table["repeats"], 3);
    let rows = table["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["engines"].as_array().unwrap().len(), 2);
    assert!(rows[0]["engines"][0]["full_std"].as_f64().unwrap() >= 0.0);
    assert!(rows[0]["max_deviation"].as_f64().unwrap() < 1e-10);
}
