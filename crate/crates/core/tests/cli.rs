use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cornergrowth"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cgm-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out).output().unwrap()
}

const CONFIG: &str = "experiment = \"coal_fast\"\nN = 200\ngrid = [0.3, 0.6]\nreplicas = 40\nmaster_seed = 5\n";

#[test]
fn simulate_is_reproducible_across_worker_counts() {
    let dir = scratch("repro");
    let cfg = dir.join("c.toml");
    fs::write(&cfg, CONFIG).unwrap();
    let a = run(&["simulate", "--config", cfg.to_str().unwrap(), "--workers", "1"], &dir.join("a"));
    let b = run(&["simulate", "--config", cfg.to_str().unwrap(), "--workers", "3"], &dir.join("b"));
    assert!(a.status.success() && b.status.success());
    let read = |d: &str| fs::read(dir.join(d).join("coal_fast.csv")).unwrap();
    assert_eq!(read("a"), read("b"));
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(dir.join("a/coal_fast.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"], CONFIG);
    assert_eq!(manifest["record_sha256"].as_array().unwrap().len(), 2);
    let summary: serde_json::Value = serde_json::from_slice(&fs::read(dir.join("a/coal_fast.summary.json")).unwrap()).unwrap();
    assert!(summary["checks"].as_array().unwrap().iter().all(|c| c["tolerance"].is_string()));
}

#[test]
fn hypothesis_violation_exits_one() {
    let dir = scratch("hyp");
    let out = run(&["simulate", "--experiment", "coal-fast", "--n", "1000", "--grid", "3.0"], &dir);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("r <= ((1-rho)^2 min rho^2) N^(1/3)"));
    let out = run(&["simulate", "--experiment", "exit-tail", "--rho", "1.5", "--n", "10", "--grid", "1"], &dir);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rho in (0,1)"));
}

#[test]
fn capacity_error_leaves_no_output() {
    let dir = scratch("cap");
    let out = run(&["simulate", "--experiment", "coal-slow", "--n", "100000000", "--grid", "0.1", "--replicas", "2"], &dir.join("x"));
    assert_eq!(out.status.code(), Some(3));
    assert!(!dir.join("x").exists());
}

#[test]
fn exact_verify_succeeds_and_plotdata_reads_csv() {
    let dir = scratch("verify");
    let out = run(&["verify", "--suite", "exact"], &dir);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(dir.join("verify.summary.json").exists());

    let sim = run(&["simulate", "--experiment", "exit-tail", "--n", "200", "--grid", "0.2,0.5,1", "--replicas", "50"], &dir);
    assert!(sim.status.success());
    let plots = dir.join("plots");
    let out = bin()
        .args(["plotdata", "--input"])
        .arg(dir.join("exit_tail.csv"))
        .arg("--out")
        .arg(&plots)
        .output()
        .unwrap();
    assert!(out.status.success());
    let body = fs::read_to_string(plots.join("exit_tail_r.dat")).unwrap();
    assert_eq!(body.lines().filter(|l| !l.starts_with('#')).count(), 3);
    assert!(plots.join("exit_tail_r_cubic.dat").exists());
}

#[test]
fn sweep_runs_every_table() {
    let dir = scratch("sweep");
    let cfg = dir.join("s.toml");
    fs::write(
        &cfg,
        "[[run]]\nexperiment = \"exit_tail\"\nN = 100\ngrid = [0.5]\nreplicas = 20\n\n\
         [[run]]\nexperiment = \"rw_bound\"\nalpha = 2.0\nbeta = 1.0\ngrid = [1, 5]\nreplicas = 100\n",
    )
    .unwrap();
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()], &dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 1 + 2);
}

#[test]
fn default_output_directory_from_environment() {
    let dir = scratch("env");
    let out = bin()
        .args(["simulate", "--experiment", "exit-tail", "--n", "50", "--grid", "0.5", "--replicas", "5"])
        .env("CGM_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.join("exit_tail.csv").exists());
}
