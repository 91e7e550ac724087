//! Exit-code and input-validation behavior of the `atomkit` binary:
//! 0 on success, 1 on input errors, 2 on mathematical gate refusals.

use assert_cmd::Command;
use predicates::prelude::*;

fn atomkit() -> Command {
    Command::cargo_bin("atomkit").unwrap()
}

#[test]
fn help_exits_zero() {
    atomkit()
        .arg("--help")
        .assert()
        .code(0)
        .stdout(predicate::str::contains("expdecomp"));
}

#[test]
fn unknown_flag_is_an_input_error() {
    atomkit().args(["gabor", "--frobnicate"]).assert().code(1);
}

#[test]
fn missing_subcommand_is_an_input_error() {
    atomkit().assert().code(1);
}

#[test]
fn config_without_schema_version_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    std::fs::write(&cfg, "[gabor]\nl = 64\n").unwrap();
    atomkit()
        .args(["gabor", "--config", cfg.to_str().unwrap()])
        .args(["--out", tmp.path().join("out").to_str().unwrap()])
        .assert()
        .code(1)
        .stderr(predicate::str::contains("schema_version"));
}

#[test]
fn malformed_config_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    std::fs::write(&cfg, "schema_version = 1\n[gabor]\nnot_a_field = 3\n").unwrap();
    atomkit()
        .args(["gabor", "--config", cfg.to_str().unwrap()])
        .args(["--out", tmp.path().join("out").to_str().unwrap()])
        .assert()
        .code(1);
}

#[test]
fn rank_deficient_disc_system_trips_the_gate() {
    let tmp = tempfile::tempdir().unwrap();
    atomkit()
        .args(["disc", "--depth", "1", "--degree", "64"])
        .args(["--out", tmp.path().join("out").to_str().unwrap()])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("condition"));
}

#[test]
fn expansive_perturbation_trips_the_gate() {
    let tmp = tempfile::tempdir().unwrap();
    atomkit()
        .args(["perturb", "--mode", "atoms", "--scale", "1000000"])
        .args(["--out", tmp.path().join("out").to_str().unwrap()])
        .assert()
        .code(2);
}

#[test]
fn invalid_gabor_lattice_is_an_input_error() {
    let tmp = tempfile::tempdir().unwrap();
    atomkit()
        .args(["gabor", "--l", "64", "--a", "5", "--b", "4"])
        .args(["--out", tmp.path().join("out").to_str().unwrap()])
        .assert()
        .code(1);
}

#[test]
fn subcommands_run_clean_on_defaults() {
    let tmp = tempfile::tempdir().unwrap();
    for (sub, extra) in [
        ("diagnose", vec!["--space", "counterexample"]),
        ("disc", vec!["--depth", "3", "--degree", "16"]),
    ] {
        let out = tmp.path().join(sub);
        let mut cmd = atomkit();
        cmd.arg(sub).args(extra).args(["--out", out.to_str().unwrap()]);
        cmd.assert().code(0);
        assert!(out.join("report.json").is_file());
    }
}
