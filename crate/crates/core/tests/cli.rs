// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

use std::process::{Command, Output};

fn stagger(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stagger-dd"))
        .args(args)
        .env_remove("STAGGER_DD_DEVICE")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fitted_khz(dir: &std::path::Path) -> f64 {
    let fits = std::fs::read_to_string(dir.join("fits.csv")).unwrap();
    fits.lines().nth(1).unwrap().split(',').nth(3).unwrap().parse().unwrap()
}

#[test]
fn zz_calc_from_hamiltonian_parameters() {
    let o = stagger(&["zz-calc", "--j", "1.93e-3", "--d0", "0.34", "--d1", "0.34", "--detuning", "0.09"]);
    assert!(o.status.success());
    let khz: f64 = stdout(&o).split_whitespace().next().unwrap().parse().unwrap();
    // within 1% of the tabulated 46.79 kHz
    assert!((khz - 46.79).abs() / 46.79 < 0.01, "{khz}");
}

#[test]
fn zz_calc_for_device_pair() {
    let o = stagger(&["zz-calc", "--pair", "13,14"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("tabulated 103.04"));
    let o = stagger(&["zz-calc", "--pair", "11,13"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn ramsey_without_detuning_is_rejected() {
    let o = stagger(&["run", "ramsey"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--detuning"));
}

#[test]
fn verify_passes() {
    let o = stagger(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(stagger(&["run", "bogus"]).status.code(), Some(1));
    assert_eq!(stagger(&["run", "idle-idle"]).status.code(), Some(1));
    assert_eq!(stagger(&["run", "idle-idle", "--seed", "1", "--mode", "sideways"]).status.code(), Some(1));
    assert_eq!(stagger(&["--device", "/nonexistent.toml", "verify"]).status.code(), Some(1));
    assert_eq!(stagger(&["--help"]).status.code(), Some(0));
}

#[test]
fn ramsey_run_writes_outputs_and_refuses_overwrite() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r");
    let out = out.to_str().unwrap();
    let args = [
        "run", "ramsey", "--detuning", "300", "--delays", "0:40000:500", "--relaxation", "off", "--output-dir", out,
    ];
    let o = stagger(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    // staggered DD removes the ZZ shift, leaving the frame detuning
    assert!((fitted_khz(&dir.path().join("r")) - 300.0).abs() < 0.1);

    let bare = dir.path().join("bare");
    let mut no_dd = args.to_vec();
    no_dd[9] = bare.to_str().unwrap();
    no_dd.extend(["--mode", "none"]);
    assert!(stagger(&no_dd).status.success());
    // spectator in |0>: detuning minus the 103.04 kHz ZZ of (13,14)
    assert!((fitted_khz(&bare) - 196.96).abs() < 0.1);

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["tool"], "stagger-dd");
    assert_eq!(manifest["config"]["detuning"], 300.0);

    assert_eq!(stagger(&args).status.code(), Some(1));
    let mut forced = args.to_vec();
    forced.push("--force");
    assert!(stagger(&forced).status.success());
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "detuning = 50.0\ndelays = \"0:20000:2000\"\nrelaxation = \"off\"\n").unwrap();
    let out = dir.path().join("o");
    let o = stagger(&[
        "run",
        "ramsey",
        "--config",
        cfg.to_str().unwrap(),
        "--detuning",
        "80",
        "--output-dir",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["detuning"], 80.0);
    assert_eq!(manifest["config"]["delays"].as_array().unwrap().len(), 11);

    std::fs::write(&cfg, "detuning = 50.0\nunknown_key = 1\n").unwrap();
    let o = stagger(&["run", "ramsey", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn pass_inserts_dd_into_text_circuit() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("c.txt");
    std::fs::write(
        &src,
        "qubits q11,q14\nsx q11\nbarrier q11,q14\ndelay(1280) q11\ndelay(1280) q14\nbarrier q11,q14\n",
    )
    .unwrap();
    let o = stagger(&["pass", src.to_str().unwrap(), "--sequence", "x2", "--mode", "standard"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("xp q11")).count(), 2);
    assert_eq!(text.lines().filter(|l| l.starts_with("xp q14")).count(), 2);
}
