//! Entanglement swapping at the middle node: the feed-forward table with two
//! parity checks, and the single-check variant that replaces the second check
//! with direct ensemble readout.
//!
//! Run: cargo run -p cavity-repeater --example entanglement_swapping

use cavity_repeater::cavity::{reflection, CavityParams, ReflectionCoefficients};
use cavity_repeater::protocol::{
    psi_minus, psi_plus, swap_one_pcg, swap_two_pcg, Parity,
};

fn click(p: Parity) -> char {
    p.click()
}

fn main() {
    let ab1 = psi_minus("E_A", "E_B1").unwrap();
    let b2c = psi_plus("E_B2", "E_C").unwrap();
    let target = psi_plus("E_A", "E_C").unwrap();

    println!("two parity checks, ideal coefficients:");
    println!(
        "{:>4} {:>4}  {:>10}  {:>12}  {:>9}",
        "P1", "P2", "correction", "probability", "fidelity"
    );
    for rec in swap_two_pcg(&ab1, &b2c, &ReflectionCoefficients::ideal()).unwrap() {
        println!(
            "{:>4} {:>4}  {:>10}  {:>12.4}  {:>9.6}",
            click(rec.p1),
            click(rec.p2),
            rec.correction.to_string(),
            rec.probability,
            rec.final_state.fidelity(&target).unwrap()
        );
    }
    println!();

    let params = CavityParams::from_ratios(2.0283, 0.0566).unwrap();
    let coeffs = reflection(&params, 0.5 * 0.0566).unwrap();
    println!("one parity check + ensemble readout, g/kappa = 2.0283, dp = gamma/2:");
    println!(
        "{:>4} {:>4}  {:>8}  {:>10}  {:>12}  {:>9}",
        "P1", "P2", "readout", "correction", "probability", "fidelity"
    );
    let records = swap_one_pcg(&ab1, &b2c, &coeffs).unwrap();
    let mut eta = 0.0;
    for rec in &records {
        let (m1, m2) = rec.middle.clone().unwrap();
        println!(
            "{:>4} {:>4}  {:>8}  {:>10}  {:>12.6}  {:>9.6}",
            click(rec.p1),
            click(rec.p2),
            format!("{m1},{m2}"),
            rec.correction.to_string(),
            rec.probability,
            rec.final_state.fidelity(&target).unwrap()
        );
        eta += rec.probability;
    }
    println!();
    println!("heralding probability: {eta:.6}");
    println!("odd (v-click) branches connect the end nodes exactly; the even");
    println!("branches inherit the parity-check fidelity.");
}
