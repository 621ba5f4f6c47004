//! End-to-end checks of the binary: determinism, presets, exit codes.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cavity-repeater"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn sweep_preset_is_byte_deterministic() {
    let first = run(&["sweep", "--preset", "fig2"]);
    let second = run(&["sweep", "--preset", "fig2"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let text = String::from_utf8(first.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "delta_p_over_kappa,|r|,|n|,|r0|,|r|^2+|n|^2"
    );
    assert_eq!(text.lines().count(), 402);
}

#[test]
fn sweep_flags_override_presets() {
    let out = run(&[
        "sweep",
        "--preset",
        "fig7a",
        "--range",
        "-0.01:0.01:5",
        "--set",
        "g_over_kappa=9.79",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.starts_with("delta_p_over_kappa,F_cpf,F_pcg\n"));
}

#[test]
fn generic_sweep_without_preset() {
    let out = run(&[
        "sweep",
        "--quantity",
        "gate_efficiencies",
        "--axis",
        "g_over_kappa",
        "--range",
        "1:10:19",
        "--set",
        "gamma_over_kappa=0.0566",
        "--set",
        "delta_p_over_kappa=0.0566",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("g_over_kappa,eta_cpf,eta_pcg\n"));
    assert_eq!(text.lines().count(), 20);
}

#[test]
fn sweep_writes_files() {
    let dir = std::env::temp_dir().join("cavity_repeater_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fig3.csv");
    let out = run(&["sweep", "--preset", "fig3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("delta_p_over_kappa,theta0/pi,theta/pi,dtheta/pi\n"));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn config_file_plus_overrides() {
    let dir = std::env::temp_dir().join("cavity_repeater_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.conf");
    std::fs::write(
        &path,
        "# local sweep\nquantity = distribution_fidelities\naxis = delta_p\n\
         range = -0.05:0.05:9\ng_over_kappa = 2.0283\n",
    )
    .unwrap();
    let out = run(&[
        "sweep",
        "--config",
        path.to_str().unwrap(),
        "--set",
        "gamma_over_kappa=0.0566",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("delta_p_over_kappa,F_mh,F_mv,F_s\n"));
    assert_eq!(text.lines().count(), 10);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn bad_configuration_exits_two() {
    for args in [
        vec!["sweep", "--preset", "fig99"],
        vec!["sweep", "--quantity", "nonsense", "--axis", "delta_p", "--range", "0:1:5"],
        vec!["sweep", "--quantity", "phase_shifts", "--axis", "delta_p", "--range", "1:0:5"],
        vec!["sweep", "--quantity", "phase_shifts", "--axis", "delta_p"],
        vec!["sweep", "--preset", "fig2", "--set", "not_a_key=1"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn list_presets_names_everything() {
    let out = run(&["sweep", "--list-presets"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["fig2", "fig3", "fig7a", "fig7b", "fig8", "fig9", "fig10", "fibercavity"] {
        assert!(text.lines().any(|l| l == name));
    }
}

#[test]
fn accept_reports_every_check() {
    let out = run(&["accept"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for id in 1..=10 {
        assert!(
            text.contains(&format!("{id:>2}. ")),
            "missing check {id} in report:\n{text}"
        );
    }
    // The report and the exit code must agree.
    let clean = text.lines().all(|l| !l.starts_with("[FAIL]"));
    assert_eq!(out.status.code(), Some(if clean { 0 } else { 1 }));
}

#[test]
fn accept_json_is_machine_readable() {
    let out = run(&["accept", "--json"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["total"], 10);
    assert_eq!(doc["checks"].as_array().unwrap().len(), 10);
    let all_pass = doc["all_pass"].as_bool().unwrap();
    assert_eq!(out.status.code(), Some(if all_pass { 0 } else { 1 }));
}
