//! Command-line contract: exit codes, manifest contents, config splicing,
//! and the gen/solve round trip.

use std::path::Path;
use std::process::{Command, Output};

fn tlad(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tlad"))
        .arg("--output-dir")
        .arg(dir)
        .args(args)
        .output()
        .expect("launch tlad")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("read {name}: {e}"))
}

#[test]
fn gen_solve_round_trip_on_clean_instance() {
    let dir = tempfile::tempdir().unwrap();
    let gen = tlad(
        dir.path(),
        &[
            "gen",
            "--n",
            "60",
            "--m",
            "3",
            "--outlier-fraction",
            "0",
            "--seed",
            "9",
        ],
    );
    assert_eq!(gen.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&gen.stdout).starts_with("gen:"));

    let instance = dir.path().join("instance.txt");
    let solve = tlad(
        dir.path(),
        &["solve", "--instance", instance.to_str().unwrap()],
    );
    assert_eq!(solve.status.code(), Some(0));
    let summary = String::from_utf8_lossy(&solve.stdout);
    assert!(summary.contains("certificate=valid"), "summary: {summary}");

    let solution = read(dir.path(), "solution.txt");
    let err_line = solution
        .lines()
        .find(|l| l.starts_with("err_l2_vs_embedded "))
        .expect("solution reports the error against the embedded x");
    let err: f64 = err_line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(
        err < 1e-8,
        "clean instance must be recovered exactly, err {err}"
    );
    assert!(solution.contains("certificate_valid true"));
}

#[test]
fn gen_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "gen",
        "--n",
        "40",
        "--m",
        "2",
        "--outlier-fraction",
        "0.2",
        "--noise",
        "gaussian",
        "--seed",
        "5",
        "--out",
        "a.txt",
    ];
    assert_eq!(tlad(dir.path(), &args).status.code(), Some(0));
    let mut again = args;
    again[args.len() - 1] = "b.txt";
    assert_eq!(tlad(dir.path(), &again).status.code(), Some(0));
    assert_eq!(read(dir.path(), "a.txt"), read(dir.path(), "b.txt"));

    let mut other_seed = args;
    other_seed[10] = "6";
    other_seed[args.len() - 1] = "c.txt";
    assert_eq!(tlad(dir.path(), &other_seed).status.code(), Some(0));
    assert_ne!(read(dir.path(), "a.txt"), read(dir.path(), "c.txt"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    // Parameter outside its domain.
    let bad_beta = tlad(
        dir.path(),
        &["weak-curve", "--beta", "1.5", "--trials", "5"],
    );
    assert_eq!(bad_beta.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&bad_beta.stderr).is_empty());
    // Unknown flag is rejected by the parser, with a message.
    let bad_flag = tlad(dir.path(), &["threshold", "--no-such-flag"]);
    assert_eq!(bad_flag.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&bad_flag.stderr).is_empty());
    // Unknown noise family.
    let bad_noise = tlad(
        dir.path(),
        &["gen", "--n", "20", "--m", "1", "--noise", "cauchy"],
    );
    assert_eq!(bad_noise.status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let missing = tlad(dir.path(), &["solve", "--instance", "no-such-file.txt"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&missing.stderr).is_empty());
}

#[test]
fn manifest_records_sorted_effective_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = tlad(
        dir.path(),
        &[
            "--threads",
            "2",
            "concentration",
            "--m",
            "3",
            "--n-grid",
            "50",
            "--trials",
            "4",
            "--seed",
            "11",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let manifest = read(dir.path(), "run-manifest.txt");
    for needle in [
        "m=3",
        "n-grid=50",
        "seed=11",
        "subcommand=concentration",
        "threads=2",
        "trials=4",
    ] {
        assert!(
            manifest.contains(needle),
            "manifest missing {needle}: {manifest}"
        );
    }
    let keys: Vec<&str> = manifest
        .lines()
        .map(|l| l.split('=').next().unwrap())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted, "manifest keys must be sorted");
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# comment line\ntrials=7\nm=2\nbeta=0.1\nn-grid=40\nseed=3\n",
    )
    .unwrap();

    let from_cfg = tlad(
        dir.path(),
        &["--config", cfg.to_str().unwrap(), "weak-curve"],
    );
    assert_eq!(from_cfg.status.code(), Some(0));
    let manifest = read(dir.path(), "run-manifest.txt");
    assert!(
        manifest.contains("trials=7"),
        "config value not applied: {manifest}"
    );

    let overridden = tlad(
        dir.path(),
        &[
            "--config",
            cfg.to_str().unwrap(),
            "weak-curve",
            "--trials",
            "13",
        ],
    );
    assert_eq!(overridden.status.code(), Some(0));
    let manifest = read(dir.path(), "run-manifest.txt");
    assert!(
        manifest.contains("trials=13"),
        "explicit flag must win: {manifest}"
    );
}

#[test]
fn config_cannot_nest_or_malform() {
    let dir = tempfile::tempdir().unwrap();
    let nested = dir.path().join("nested.cfg");
    std::fs::write(&nested, "config=other.cfg\n").unwrap();
    let out = tlad(
        dir.path(),
        &["--config", nested.to_str().unwrap(), "threshold"],
    );
    assert_eq!(out.status.code(), Some(2));

    let malformed = dir.path().join("bad.cfg");
    std::fs::write(&malformed, "just-a-word\n").unwrap();
    let out = tlad(
        dir.path(),
        &["--config", malformed.to_str().unwrap(), "threshold"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn data_goes_to_files_and_stdout_carries_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = tlad(
        dir.path(),
        &[
            "threshold",
            "--m-min",
            "1",
            "--m-max",
            "2",
            "--svg",
            "curve.svg",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.trim().lines().count(), 1, "stdout: {stdout}");
    assert!(dir.path().join("threshold.csv").exists());
    let svg = read(dir.path(), "curve.svg");
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("polyline"));
}
