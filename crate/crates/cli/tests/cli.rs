//! End-to-end tests of the `dephase` binary: file outputs, byte stability,
//! and exit codes.

use std::path::Path;
use std::process::Command;

fn dephase() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dephase"))
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

#[test]
fn tcrit_prints_json_with_the_reference_value() {
    let out = dephase()
        .args(["tcrit", "--kappa", "1e-3", "--werner-c", "0.2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let theta = v["theta_crit"].as_f64().unwrap();
    assert!((theta - 0.1345).abs() / 0.1345 < 0.01, "{theta}");
}

#[test]
fn tcrit_rejects_bad_purity_with_exit_code_2() {
    let out = dephase()
        .args(["tcrit", "--kappa", "1e-3", "--werner-c", "1.5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tcrit_unreachable_threshold_is_a_numerical_failure() {
    // c so close to 1 that the threshold drops below 8 kappa Shi(1/theta)
    // at the hot end of the bisection bracket: the root lies outside.
    let out = dephase()
        .args(["tcrit", "--kappa", "1e-3", "--werner-c", "0.99999999"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn phase_diagram_writes_stable_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("pd");
    let run = || {
        let out = dephase()
            .args([
                "phase-diagram",
                "--kappa",
                "1e-3",
                "--werner-c",
                "0.2",
                "--theta-min",
                "0.05",
                "--theta-max",
                "0.3",
                "--theta-steps",
                "10",
                "--tau-min",
                "0",
                "--tau-max",
                "50",
                "--tau-steps",
                "12",
                "--overlay-dec",
                "--out",
            ])
            .arg(&prefix)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        read(&prefix.with_extension("csv"))
    };
    let first = run();
    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(lines.len(), 1 + 10 * 12, "header plus one row per grid point");
    assert_eq!(
        lines[0],
        "theta,tau,s_value,e_value,s_threshold,e_threshold,verdict,label"
    );
    assert!(!first.contains('\r'));
    // tau = 0 row is separable with zero kernels.
    assert!(lines[1].ends_with(",0,separable"));

    // Byte-stable across runs.
    let second = run();
    assert_eq!(first, second);

    let meta = read(Path::new(&format!("{}_meta.json", prefix.display())));
    let v: serde_json::Value = serde_json::from_str(&meta).unwrap();
    assert_eq!(v["rows"], serde_json::json!(120));
    assert_eq!(v["command"], serde_json::json!("phase-diagram"));

    let curves = read(Path::new(&format!("{}_curves.csv", prefix.display())));
    assert!(curves.starts_with("theta,tau_dec\n"));
    assert_eq!(curves.lines().count(), 1 + 10);

    let script = read(&prefix.with_extension("gp"));
    assert!(script.contains("set palette defined (0 'blue', 1 'red', 2 'white')"));
    assert!(script.contains("pd.csv"));
}

#[test]
fn phase_diagram_rejects_unordered_ranges() {
    let dir = tempfile::tempdir().unwrap();
    let out = dephase()
        .args([
            "phase-diagram",
            "--werner-c",
            "0.2",
            "--theta-min",
            "0.3",
            "--theta-max",
            "0.05",
            "--out",
        ])
        .arg(dir.path().join("x"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn state_file_and_werner_flags_are_exclusive() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("state.json");
    std::fs::write(
        &state,
        r#"{"rho11":0.25,"rho22":0.25,"rho33":0.25,"rho44":0.25,"rho14":[0.1,0.05],"rho23":[0.0,0.0]}"#,
    )
    .unwrap();
    // Both flags: clap usage error (exit 2).
    let out = dephase()
        .args(["concurrence", "--werner-c", "0.5", "--state"])
        .arg(&state)
        .args(["--out"])
        .arg(dir.path().join("c"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // State file alone works.
    let out = dephase()
        .args(["concurrence", "--state"])
        .arg(&state)
        .args(["--theta-steps", "2", "--tau-max", "10", "--tau-steps", "20", "--out"])
        .arg(dir.path().join("c"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(&dir.path().join("c").with_extension("csv"));
    assert_eq!(csv.lines().count(), 1 + 2 * 20);
    assert!(csv.starts_with("theta,tau,concurrence,decoherence_mag\n"));
}

#[test]
fn invalid_state_file_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("bad.json");
    // Trace is 0.9: rejected by validation inside deserialization.
    std::fs::write(
        &state,
        r#"{"rho11":0.2,"rho22":0.25,"rho33":0.25,"rho44":0.2,"rho14":[0,0],"rho23":[0,0]}"#,
    )
    .unwrap();
    let out = dephase()
        .args(["concurrence", "--state"])
        .arg(&state)
        .args(["--out"])
        .arg(dir.path().join("c"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_check_reports_consistency() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("oracle.json");
    std::fs::write(
        &cfg,
        r#"{
            "modes": [{"omega": 0.7, "g2": 5e-4}],
            "n_fock": 25,
            "theta": 0.3,
            "x0": {"rho11": 0.15, "rho22": 0.35, "rho33": 0.35, "rho44": 0.15,
                   "rho14": [0.1, 0.0], "rho23": [-0.3, 0.0]}
        }"#,
    )
    .unwrap();
    let report_path = dir.path().join("report.json");
    let out = dephase()
        .args(["oracle-check", "--config"])
        .arg(&cfg)
        .args(["--tau-max", "4", "--tau-steps", "3", "--out"])
        .arg(&report_path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&read(&report_path)).unwrap();
    assert_eq!(report["summary"]["peres_consistent"], serde_json::json!(true));
    let max_err = report["summary"]["max_coherence_abs_error"].as_f64().unwrap();
    assert!(max_err < 1e-6, "{max_err}");
    assert_eq!(report["samples"].as_array().unwrap().len(), 3);
    // Single-mode config has no environment pair.
    assert!(report["samples"][0]["pt_min"]["env_pair"].is_null());
}

#[test]
fn oracle_check_rejects_insufficient_truncation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("oracle.json");
    std::fs::write(
        &cfg,
        r#"{
            "modes": [{"omega": 0.7, "g2": 5e-4}],
            "n_fock": 4,
            "theta": 0.9,
            "x0": {"rho11": 0.25, "rho22": 0.25, "rho33": 0.25, "rho44": 0.25,
                   "rho14": [0.0, 0.0], "rho23": [0.1, 0.0]}
        }"#,
    )
    .unwrap();
    let out = dephase()
        .args(["oracle-check", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dilation_demo_reports_both_spectra() {
    let out = dephase()
        .args(["dilation-demo", "--p", "0.5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let det = v["pure_dilation"]["pt_determinant"].as_f64().unwrap();
    assert!((det - (-1.0 / 64.0)).abs() < 1e-12);
    let closed = v["pure_dilation"]["pt_determinant_closed_form"].as_f64().unwrap();
    assert!((det - closed).abs() < 1e-12);
    let mixed_min = v["mixed_dilation"]["pt_min_eigenvalue"].as_f64().unwrap();
    assert!(mixed_min >= -1e-12);
}

#[test]
fn curves_subcommand_emits_both_columns() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("cv");
    let out = dephase()
        .args([
            "curves",
            "--kappa",
            "1e-3",
            "--werner-c",
            "0.2",
            "--theta-min",
            "0.2",
            "--theta-max",
            "0.3",
            "--theta-steps",
            "3",
            "--out",
        ])
        .arg(&prefix)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(Path::new(&format!("{}_curves.csv", prefix.display())));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "theta,tau_dec,tau_sd");
    assert_eq!(lines.len(), 4);
    // c = 0.2 never entangles: the sudden-death field stays empty.
    for line in &lines[1..] {
        assert!(line.ends_with(','), "{line}");
    }
}
