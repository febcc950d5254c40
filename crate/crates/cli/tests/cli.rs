use std::fs;
use std::process::{Command, Output};

fn spikelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spikelab")).args(args).output().expect("spawn spikelab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn theory_prints_phase_json() {
    let o = spikelab(&["theory", "--n", "100", "--p", "100", "--spikes", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["phase"]["tau"], 4.5);
    assert_eq!(v["regime"]["leading"], "supercritical");
}

#[test]
fn limitlaw_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gue.csv");
    let o = spikelab(&[
        "limitlaw",
        "--law",
        "tw_gue",
        "--from",
        "-2",
        "--to",
        "-1",
        "--step",
        "0.5",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,cdf");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("-2,0.41322414"));
}

#[test]
fn combinat_outputs() {
    let o = spikelab(&["combinat", "counts", "--n-max", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("n,k,m,count\n1,1,1,1\n"));

    let o = spikelab(&["combinat", "series", "--pi1", "3", "--gamma", "2", "--n-max", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\n3,189,4,47.25,3.9375"));

    let o = spikelab(&[
        "combinat",
        "moment",
        "--n",
        "2",
        "--p",
        "2",
        "--spikes",
        "2",
        "--law",
        "rademacher",
        "--field",
        "real",
        "--power",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"]["value"], "3");
    assert!(v["path_terms"].is_array());
}

#[test]
fn simulate_needs_a_seed() {
    let o = spikelab(&["simulate", "--n", "10", "--p", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("plan.toml");
    fs::write(&cfg, "n = 12\np = 24\nspikes = [3.0]\ntrials = 500\n").unwrap();
    let out = dir.path().join("run");
    let o = spikelab(&[
        "simulate",
        "--seed",
        "5",
        "--config",
        cfg.to_str().unwrap(),
        "--trials",
        "120",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = fs::read_to_string(out.join("results.csv")).unwrap();
    assert_eq!(rows.lines().count(), 121);
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["spec"]["n"], 12);
    assert_eq!(m["trials"], 120);
    assert_eq!(m["complete"], true);
}

#[test]
fn verify_exit_codes() {
    let o = spikelab(&["verify", "13"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("criterion 13 PASS"));
    assert_eq!(spikelab(&["verify", "16"]).status.code(), Some(2));
    assert_eq!(spikelab(&["verify", "x"]).status.code(), Some(2));
}

#[test]
fn bad_config_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("plan.toml");
    fs::write(&cfg, "n = 12\nbogus = 1\n").unwrap();
    let o = spikelab(&["theory", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
