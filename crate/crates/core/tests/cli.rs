use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ftsurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ftsurf"))
        .args(args)
        .env_remove("FTSURF_THREADS")
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn unknown_flag_is_a_usage_error_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    let r = ftsurf(&["memory", "--kind", "rotated", "--d", "3", "--bogus", "-o", path(&out)]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("--bogus"));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    assert_eq!(ftsurf(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ftsurf(&[]).status.code(), Some(2));
    assert_eq!(ftsurf(&["--help"]).status.code(), Some(0));
}

#[test]
fn domain_errors_are_json_on_stderr() {
    let r = ftsurf(&["layout", "--kind", "rotated", "--d", "4"]);
    assert_eq!(r.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&r.stderr).unwrap();
    assert_eq!(v["error"]["module"], "layout");
    assert!(!v["error"]["message"].as_str().unwrap().is_empty());

    let r = ftsurf(&["circuit", "--kind", "unrotated", "--d", "3", "--ordering", "ns"]);
    assert_eq!(r.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&r.stderr).unwrap();
    assert_eq!(v["error"]["module"], "circuit");
}

#[test]
fn verify_reports_rotated_collision_with_witness() {
    let r = ftsurf(&["verify-ft", "--kind", "rotated", "--d", "3", "--style", "czz", "--ordering", "ne", "--t", "1"]);
    assert_eq!(r.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["result"]["largest"], 0);
    assert_eq!(v["result"]["witness_replays"], true);
    assert!(v["result"]["report"]["witness"]["first"].is_array());
    assert_eq!(v["config"]["subcommand"], "verify-ft");
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 16);
}

#[test]
fn memory_is_independent_of_threads_and_replayable() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str| {
        [
            "memory", "--kind", "unrotated", "--d", "3", "--style", "czz", "--ordering", "24", "--p", "0.003",
            "--shots", "20000", "--seed", "7", "-o",
        ]
        .into_iter()
        .map(String::from)
        .chain([out.to_string()])
        .collect::<Vec<_>>()
    };
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let mut one: Vec<String> = vec!["--threads".into(), "1".into()];
    one.extend(args(path(&a)));
    let r = ftsurf(&one.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(r.status.code(), Some(0));
    let r = Command::new(env!("CARGO_BIN_EXE_ftsurf"))
        .args(args(path(&b)))
        .env("FTSURF_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(r.status.code(), Some(0));
    let first = fs::read_to_string(&a).unwrap();
    assert_eq!(first, fs::read_to_string(&b).unwrap());
    assert_eq!(first.lines().count(), 3);

    // re-running the sidecar rewrites the same bytes
    fs::remove_file(&a).unwrap();
    let sidecar = dir.path().join("a.csv.config.json");
    let r = ftsurf(&["--config", path(&sidecar)]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&a).unwrap(), first);
}

#[test]
fn sample_then_decode() {
    let dir = tempfile::tempdir().unwrap();
    let dem = dir.path().join("m.dem");
    let prefix = dir.path().join("shots");
    let r = ftsurf(&["dem", "--kind", "unrotated", "--d", "3", "--p", "0.004", "-o", path(&dem)]);
    assert_eq!(r.status.code(), Some(0));
    let r = ftsurf(&["sample", "--dem", path(&dem), "--shots", "500", "--seed", "3", "-o", path(&prefix)]);
    assert_eq!(r.status.code(), Some(0));
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("shots.json")).unwrap()).unwrap();
    assert_eq!(meta["shots"], 500);
    assert_eq!(fs::metadata(dir.path().join("shots.dets.b8")).unwrap().len(), 500 * 5);
    let r = ftsurf(&["decode", "--dem", path(&dem), "--shots", path(&prefix)]);
    assert_eq!(r.status.code(), Some(0));
    let stdout = String::from_utf8(r.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 502);
    assert!(stdout.lines().last().unwrap().starts_with("failures="));
}

#[test]
fn decomposed_dem_and_circuit_text() {
    let r = ftsurf(&["dem", "--kind", "rotated", "--d", "3", "--style", "cz", "--decompose"]);
    assert_eq!(r.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&r.stdout).contains("error("));
    let r = ftsurf(&["circuit", "--kind", "unrotated", "--d", "3", "--rounds", "2"]);
    assert_eq!(r.status.code(), Some(0));
    let text = String::from_utf8(r.stdout).unwrap();
    assert!(text.contains("CZZ ") && text.contains("DETECTOR"));
    ftsurf::circuit::Circuit::from_text(&text).unwrap();
}

#[test]
fn layout_json_lists_every_qubit() {
    let r = ftsurf(&["layout", "--kind", "unrotated", "--d", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["result"]["n_qubits"], 25);
    assert_eq!(v["result"]["coords"].as_array().unwrap().len(), 25);
    assert_eq!(v["result"]["stabilizers"].as_array().unwrap().len(), 12);
}
