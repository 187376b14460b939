use std::path::Path;
use std::process::{Command, Output};

fn qzeno(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qzeno"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr_record(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stderr).expect("stderr holds one JSON record")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

const SMALL: &str = "spin = \"1\"\nmodel = \"coherence\"\nalpha = 1\ndt = 0.001\nduration = 1\nstride = 100\nn_traj = 2\n";

#[test]
fn presets_are_listed() {
    let out = qzeno(&["presets"]);
    assert!(out.status.success());
    let names: Vec<String> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(names.len(), 8);
}

#[test]
fn simulate_writes_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", SMALL);
    let out_dir = dir.path().join("out");
    let out = qzeno(&["simulate", "--config", &cfg, "--out", out_dir.to_str().unwrap(), "--seed", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let listed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let files = listed["files"].as_array().unwrap();
    assert_eq!(files.len(), 2);
    let text = std::fs::read_to_string(files[0].as_str().unwrap()).unwrap();
    assert!(text.contains("\"seed\":4"));
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header.split(',').count(), 13);

    let analyzed = qzeno(&["analyze", "--input", files[0].as_str().unwrap(), "--input", files[1].as_str().unwrap()]);
    assert!(analyzed.status.success());
    let docs: serde_json::Value = serde_json::from_slice(&analyzed.stdout).unwrap();
    assert_eq!(docs[0]["summary"]["n_trajectories"], 2);
    assert_eq!(docs[0]["summary"]["residence"].as_array().unwrap().len(), 3);
}

#[test]
fn ensemble_honours_overrides_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", SMALL);
    let run = |threads: &str, sub: &str| {
        let out_dir = dir.path().join(sub);
        let out = qzeno(&[
            "ensemble", "--config", &cfg, "--set", "alpha=[0.5, 2]", "--threads", threads,
            "--out", out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let listed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        listed["files"].as_array().unwrap().len()
    };
    assert_eq!(run("1", "a"), 4);
    let csv = |sub: &str| {
        let text = std::fs::read_to_string(dir.path().join(sub).join("run_alpha2_ensemble.csv")).unwrap();
        text.lines().filter(|l| !l.starts_with('#')).map(String::from).collect::<Vec<_>>()
    };
    assert_eq!(run("3", "b"), 4);
    assert_eq!(csv("a"), csv("b"));
}

#[test]
fn config_errors_exit_with_code_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "spin = \"3/2\"\nmodel = \"components\"\nalpha = 1\n");
    let out = qzeno(&["simulate", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let rec = stderr_record(&out);
    assert_eq!(rec["error"], "config");
    assert!(rec["message"].as_str().unwrap().contains("line 2"));

    let out = qzeno(&["simulate", "--preset", "fig1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = qzeno(&["simulate"]);
    assert_eq!(out.status.code(), Some(1));
    let out = qzeno(&["analyze", "--input", "/nonexistent.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_record(&out)["error"], "file");
}

#[test]
fn numerical_failure_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    // A huge step drives the Euler scheme far outside the state space.
    let out = qzeno(&[
        "simulate", "--preset", "fig5", "--set", "alpha=30", "--set", "dt=0.5",
        "--set", "duration=50", "--set", "stride=1", "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stderr_record(&out)["error"], "numerical");
}

#[test]
fn validate_passes() {
    let out = qzeno(&["validate"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}
