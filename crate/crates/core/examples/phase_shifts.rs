//! Phase shifts picked up on reflection: θ (ensemble excited), θ₀ (ensemble
//! in the ground state) and their gap Δθ, which carries the gate.
//!
//! Run: cargo run -p cavity-repeater --example phase_shifts

use cavity_repeater::cavity::{phase_profile, CavityParams};

fn main() {
    let params = CavityParams::from_ratios(4.0566, 0.0566).unwrap();
    let grid: Vec<f64> = (0..=24).map(|i| -0.6 + 0.05 * i as f64).collect();
    let points = phase_profile(&params, &grid).unwrap();

    println!("g/kappa = 4.0566, gamma/kappa = 0.0566");
    println!();
    println!(
        "{:>10}  {:>10}  {:>10}  {:>10}",
        "dp/kappa", "theta0/pi", "theta/pi", "dtheta/pi"
    );
    for p in &points {
        println!(
            "{:>10.2}  {:>10.5}  {:>10.5}  {:>10.5}",
            p.delta_p,
            p.theta0 / std::f64::consts::PI,
            p.theta / std::f64::consts::PI,
            p.dtheta / std::f64::consts::PI
        );
    }
    println!();
    println!("on resonance the gap is the full π needed for a phase-flip gate;");
    println!("it falls off smoothly as the photon detunes from the cavity line.");
}
