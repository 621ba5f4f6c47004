//! The photon–ensemble controlled-phase-flip gate: ideal action on a sample
//! input, then fidelity and efficiency at realistic operating points.
//!
//! Run: cargo run -p cavity-repeater --example cpf_gate

use cavity_repeater::cavity::{reflection, CavityParams, ReflectionCoefficients};
use cavity_repeater::gates::{cpf, gate_metrics};
use cavity_repeater::qstate::{QState, SubsystemKind};
use num_complex::Complex64;

fn main() {
    let half = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let input = QState::init_register(&[
        ("p", SubsystemKind::Polarization, (half, half)),
        ("E_A", SubsystemKind::Ensemble, (half, half)),
    ])
    .unwrap();

    println!("input (photon ⊗ ensemble, both in the plus state):");
    print!("{}", input.to_debug_string());
    println!();

    let out = cpf(&input, "p", "E_A", &ReflectionCoefficients::ideal()).unwrap();
    println!("after the ideal gate only |h G> flips sign:");
    print!("{}", out.to_debug_string());
    println!();

    println!(
        "{:>9}  {:>12}  {:>9}  {:>9}",
        "g/kappa", "dp", "F_cpf", "eta_cpf"
    );
    let gamma = 0.0566;
    for (g, dp, label) in [
        (4.0566, 0.0, "0"),
        (4.0566, 0.5 * gamma, "gamma/2"),
        (4.0566, gamma, "gamma"),
        (2.0283, 0.5 * gamma, "gamma/2"),
        (9.79, 0.5 * gamma, "gamma/2"),
    ] {
        let params = CavityParams::from_ratios(g, gamma).unwrap();
        let coeffs = reflection(&params, dp).unwrap();
        let m = gate_metrics(&coeffs);
        println!("{:>9.4}  {:>12}  {:>9.4}  {:>9.4}", g, label, m.f_cpf, m.eta_cpf);
    }
    println!();

    // The closed forms match the state-vector run exactly.
    let params = CavityParams::from_ratios(4.0566, gamma).unwrap();
    let coeffs = reflection(&params, 0.5 * gamma).unwrap();
    let realistic = cpf(&input, "p", "E_A", &coeffs).unwrap();
    let fidelity = out.fidelity(&realistic).unwrap();
    println!("simulated fidelity at g/kappa = 4.0566, dp = gamma/2: {fidelity:.6}");
    println!("closed form                                        : {:.6}", gate_metrics(&coeffs).f_cpf);
    println!("simulated efficiency (surviving norm)              : {:.6}", realistic.norm_sq());
}
