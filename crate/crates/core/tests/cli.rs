//! End-to-end checks of the command-line runner: every bundled scenario
//! runs to exit 0 with byte-stable outputs, and the error paths map to
//! the documented exit codes.

use std::path::{Path, PathBuf};
use std::process::Command;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_branchlab"))
}

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(format!("{name}.json"))
}

fn run_into(name: &str, out_dir: &Path) -> std::process::Output {
    binary()
        .arg("run")
        .arg(scenario_path(name))
        .arg("--out-dir")
        .arg(out_dir)
        .output()
        .expect("runner executes")
}

#[test]
fn every_bundled_scenario_runs_clean_and_byte_stable() {
    let names: Vec<String> = branchlab::scenario::list_scenarios()
        .into_iter()
        .map(|s| s.name)
        .collect();
    assert!(names.len() >= 8);
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    for name in &names {
        let out = run_into(name, first.path());
        assert!(
            out.status.success(),
            "{name} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let again = run_into(name, second.path());
        assert!(again.status.success());
    }
    // identical bytes across the two runs, for every file written
    let mut compared = 0;
    for entry in std::fs::read_dir(first.path()).unwrap() {
        let path = entry.unwrap().path();
        let rel = path.file_name().unwrap();
        let a = std::fs::read(&path).unwrap();
        let b = std::fs::read(second.path().join(rel)).unwrap();
        assert_eq!(a, b, "output {rel:?} is not byte-stable");
        compared += 1;
    }
    assert!(compared >= names.len());
}

#[test]
fn malformed_scenario_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{definitely not json").unwrap();
    let out = binary().arg("run").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn missing_file_exits_2() {
    let out = binary()
        .arg("run")
        .arg("/nonexistent/scenario.json")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn capacity_refusal_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("huge.json");
    std::fs::write(
        &scenario,
        r#"{
            "name": "huge",
            "experiment": "evolve",
            "params": {
                "spec": {"variant": "weightless", "outcome_count": 4},
                "steps": 80,
                "capacity": 50
            }
        }"#,
    )
    .unwrap();
    let out = binary().arg("run").arg(&scenario).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn seed_flag_changes_generated_data_only() {
    let base_dir = tempfile::tempdir().unwrap();
    let reseeded_dir = tempfile::tempdir().unwrap();
    let base = run_into("pseudorandom_retention", base_dir.path());
    assert!(base.status.success());
    let out = binary()
        .arg("run")
        .arg(scenario_path("pseudorandom_retention"))
        .arg("--out-dir")
        .arg(reseeded_dir.path())
        .arg("--seed")
        .arg("99")
        .output()
        .unwrap();
    assert!(out.status.success());
    let a = std::fs::read(base_dir.path().join("pseudorandom_retention.json")).unwrap();
    let b = std::fs::read(reseeded_dir.path().join("pseudorandom_retention.json")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn run_without_outputs_prints_report() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("inline.json");
    std::fs::write(
        &scenario,
        r#"{
            "name": "inline",
            "experiment": "caring_weights",
            "params": {"tree": [[], [], []]}
        }"#,
    )
    .unwrap();
    let out = binary().arg("run").arg(&scenario).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("\"1/3\""));
}

#[test]
fn list_names_the_bundle() {
    let out = binary().arg("list").output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    for name in [
        "weightless_census_n100",
        "qualia_divergence_n100",
        "axiom_witnesses",
        "evolution_model_n20",
    ] {
        assert!(stdout.contains(name), "list output misses {name}");
    }
    assert!(stdout.lines().count() >= 8);
}

#[test]
fn describe_prints_schema_or_fails_on_unknown_kind() {
    let out = binary().arg("describe").arg("census").output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("tolerance"));
    assert!(stdout.contains("measure"));

    let out = binary().arg("describe").arg("bogus").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn headline_numbers_appear_in_reports() {
    let dir = tempfile::tempdir().unwrap();

    let out = run_into("timescale_radiation", dir.path());
    assert!(out.status.success());
    let report =
        std::fs::read_to_string(dir.path().join("timescale_radiation.json")).unwrap();
    assert!(report.contains("\"granularity\": 1"));
    assert!(report.contains("\"accept\": true"));
    assert!(report.contains("\"accept\": false"));

    let out = run_into("fair_coin_refutation", dir.path());
    assert!(out.status.success());
    let report =
        std::fs::read_to_string(dir.path().join("fair_coin_refutation.json")).unwrap();
    assert!(report.contains("\"verdict\": \"refuted\""));

    let out = run_into("evolution_model_n20", dir.path());
    assert!(out.status.success());
    let report =
        std::fs::read_to_string(dir.path().join("evolution_model_n20.json")).unwrap();
    assert!(report.contains("\"mind_ratio\": \"3486784401/1048576\""));

    let out = run_into("weightless_census_n100", dir.path());
    assert!(out.status.success());
    let csv =
        std::fs::read_to_string(dir.path().join("weightless_census_n100.csv")).unwrap();
    assert_eq!(csv.lines().count(), 102); // header + 101 classes
}
