//! Black-box tests of the installed binary: subcommands, exit codes, and
//! output determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dipolariton"))
}

fn repo_path(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn sweep_writes_csv_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("a.csv");
    let out2 = dir.path().join("b.csv");
    let cfg = repo_path("configs/default.cfg");
    let cfg_s = cfg.to_str().unwrap();

    for out in [&out1, &out2] {
        let o = run(&[
            "sweep",
            "--config",
            cfg_s,
            "--out",
            out.to_str().unwrap(),
            "--effective",
        ]);
        assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("# dipolariton sweep"));
    assert!(text.contains("# mode: effective"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 802);
}

#[test]
fn sweep_defaults_to_hermitian_mode() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("default.csv");
    let o = run(&[
        "sweep",
        "--config",
        repo_path("configs/default.cfg").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# mode: hermitian"));
}

#[test]
fn labeling_flag_changes_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("energy.csv");
    let o = run(&[
        "sweep",
        "--out",
        out.to_str().unwrap(),
        "--labeling",
        "energy",
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(header.contains("E_MP_meV"));
    assert!(!header.contains("tr_"));
    assert!(!header.contains("tracking_overlap"));
}

#[test]
fn resonance_prints_both_routes() {
    let o = run(&[
        "resonance",
        "--config",
        repo_path("configs/default.cfg").to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("closed form: F* = -5.75"));
    assert!(text.contains("numeric:"));
    assert!(text.contains("min gap"));
}

#[test]
fn eigen_dumps_branches() {
    let o = run(&["eigen", "--f", "-5.75", "--effective"]);
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    for needle in ["LP:", "MP:", "UP:", "fractions", "residual", "regime"] {
        assert!(text.contains(needle), "missing {needle} in:\n{text}");
    }
}

#[test]
fn validate_passes_on_shipped_configs() {
    for cfg in ["configs/default.cfg", "configs/detuned_cavity.cfg"] {
        let o = run(&["validate", "--config", repo_path(cfg).to_str().unwrap()]);
        assert!(o.status.success(), "{cfg} failed validate");
        let text = String::from_utf8(o.stdout).unwrap();
        assert!(text.contains("all 8 checks passed"), "{text}");
        assert!(!text.contains("FAIL"));
    }
}

#[test]
fn usage_errors_exit_1() {
    let o = run(&["sweep", "--labeling", "sideways"]);
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["no-such-subcommand"]);
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["sweep", "--config", "/nonexistent/path.cfg"]);
    assert_eq!(o.status.code(), Some(1));

    // conflicting mode flags
    let o = run(&["sweep", "--hermitian", "--effective"]);
    assert_eq!(o.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "J_meV = -1\n").unwrap();
    let o = run(&["sweep", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}
