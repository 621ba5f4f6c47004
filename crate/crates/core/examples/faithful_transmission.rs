//! Noise-immune single-photon transmission: encode into time-bin/spatial
//! labels, hit the photon with arbitrary collective noise, decode, and watch
//! the polarization come back exactly while the noise lands on the ports.
//!
//! Run: cargo run -p cavity-repeater --example faithful_transmission

use cavity_repeater::qstate::{Basis, QState, SubsystemKind};
use cavity_repeater::transmission::{apply_channel, decode, encode, ChannelNoise};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() {
    let input = QState::init_register(&[(
        "p",
        SubsystemKind::Polarization,
        (c(0.6, 0.0), c(0.0, 0.8)),
    )])
    .unwrap();
    println!("input photon:");
    print!("{}", input.to_debug_string());
    println!();

    let encoded = encode(&input, "p").unwrap();
    println!("encoded (all light h-polarized, information in path ⊗ bin):");
    print!("{}", encoded.to_debug_string());
    println!();

    let noises = [
        ("identity", ChannelNoise::identity()),
        ("full flip", ChannelNoise::new(c(0.0, 0.0), c(1.0, 0.0)).unwrap()),
        ("balanced", ChannelNoise::new(c(0.5, 0.5), c(0.5, -0.5)).unwrap()),
        ("skewed", ChannelNoise::new(c(0.6, 0.0), c(0.0, 0.8)).unwrap()),
    ];
    println!(
        "{:>10}  {:>20}  {:>9}  {:>9}",
        "noise", "pol fidelity vs input", "P(port 1)", "P(port 2)"
    );
    for (name, noise) in &noises {
        let received = decode(&apply_channel(&encoded, "p", noise).unwrap(), "p").unwrap();
        let (pol, _) = received.factor_out(&["p.port"]).unwrap();
        let f = pol.fidelity(&input).unwrap();
        let ports = received.measure("p.port", Basis::Computational).unwrap();
        println!(
            "{:>10}  {:>20.12}  {:>9.4}  {:>9.4}",
            name, f, ports[0].probability, ports[1].probability
        );
    }
    println!();
    println!("the polarization is restored bit-exactly for every channel; only");
    println!("which output port fires depends on the noise parameters.");
}
