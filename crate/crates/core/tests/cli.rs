//! Command-line behaviour: exit codes, config precedence and reproducible
//! output files.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn satd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_satd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    fs::read(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn unknown_sweep_lists_valid_names() {
    let out = satd(&["sweep", "fig8"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    for name in [
        "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "figA1", "figA2",
    ] {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn invalid_values_exit_2_and_name_the_key() {
    let out = satd(&["gate", "--x", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("drive.x"));
    let out = satd(&["gate", "--eps", "-1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("noise.eps"));
    assert_eq!(satd(&["gate", "--gate", "hadamard"]).status.code(), Some(2));
    assert_eq!(satd(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_3() {
    // One step per interval cannot reach this tolerance.
    let out = satd(&["gate", "--tol", "1e-300"]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn help_states_units() {
    for sub in ["gate", "pulses", "sweep"] {
        let out = satd(&[sub, "--help"]);
        assert_eq!(out.status.code(), Some(0));
        let text = String::from_utf8_lossy(&out.stdout);
        assert!(
            text.contains("MHz") && text.contains("ns") && text.contains("1/μs"),
            "{text}"
        );
    }
}

#[test]
fn sweep_output_is_byte_identical_across_worker_counts() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, jobs) in [(&a, "1"), (&b, "3")] {
        let out = satd(&[
            "sweep",
            "fig4",
            "--grid",
            "5",
            "--jobs",
            jobs,
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    for name in [
        "fig4_delta_cut.csv",
        "fig4_delta_cut.json",
        "fig4_eps_cut.csv",
        "fig4_eps_cut.json",
    ] {
        assert_eq!(read(a.path(), name), read(b.path(), name), "{name}");
    }
    let runtime = String::from_utf8(read(a.path(), "fig4_delta_cut_runtime.csv")).unwrap();
    assert!(runtime.starts_with("row,runtime_s\n"));
}

#[test]
fn config_file_is_overridden_by_flags_and_snapshotted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "[drive]\neta = 3.0\nx = 4.0\n[grids]\nfig3_eta = [1.0, 2.0, 3.0]\nfig3_x = [2.0]\nseries_points = 11\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = satd(&[
        "sweep",
        "fig3",
        "--config",
        cfg.to_str().unwrap(),
        "--x",
        "3",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let meta: serde_json::Value =
        serde_json::from_slice(&read(&out_dir, "fig3_gz_peak.json")).unwrap();
    assert_eq!(meta["config"]["drive"]["eta"], 3.0);
    assert_eq!(meta["config"]["drive"]["x"], 3.0);
    assert_eq!(meta["axes"]["eta"], serde_json::json!([1.0, 2.0, 3.0]));
    assert_eq!(meta["sweep_id"], "fig3_gz_peak");
    assert!(meta["version"].is_string());
    let csv = String::from_utf8(read(&out_dir, "fig3_energy_series.csv")).unwrap();
    assert_eq!(csv.lines().count(), 12);
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[drive]\nomega0 = 3.0\n").unwrap();
    let out = satd(&["gate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("omega0"));
}

#[test]
fn gate_command_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = satd(&[
        "gate",
        "--gate",
        "cs",
        "--eta",
        "2",
        "--json",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["gate"], "cs");
    assert!(v["fidelity"].as_f64().unwrap() > 0.99);
    assert!(dir.path().join("gate_cs.json").exists());
}

#[test]
fn custom_gate_and_decoherence() {
    let out = satd(&[
        "gate",
        "--gate",
        "custom",
        "--axis",
        "x",
        "--gamma-g",
        "1.0",
        "--kappa2",
        "0.01",
        "--json",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["gate"], "ux");
    let f = v["state_avg_fidelity"].as_f64().unwrap();
    assert!(f < 1.0 && f > 0.99);
}

#[test]
fn pulses_and_sigma_range() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = satd(&[
        "pulses",
        "--gate",
        "not",
        "--points",
        "21",
        "--sigma-ns",
        "5",
        "--out",
        d,
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = String::from_utf8(read(dir.path(), "pulses.csv")).unwrap();
    assert_eq!(csv.lines().count(), 22);
    assert!(csv.starts_with("t_us,delta,omega_r,phi,theta,"));
    let out = satd(&["sweep", "figA1", "--sigma-ns", "0:4:2", "--out", d]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let meta: serde_json::Value =
        serde_json::from_slice(&read(dir.path(), "figA1_phase_smoothing.json")).unwrap();
    assert_eq!(meta["axes"]["sigma_ns"], serde_json::json!([0.0, 2.0, 4.0]));
    assert_eq!(
        satd(&["sweep", "fig2", "--sigma-ns", "0:4:2"])
            .status
            .code(),
        Some(2)
    );
}
