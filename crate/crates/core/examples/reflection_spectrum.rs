//! Reflection and noise coefficients of the single-sided cavity across the
//! photon detuning, for the strong-coupling working point.
//!
//! Run: cargo run -p cavity-repeater --example reflection_spectrum

use cavity_repeater::cavity::{reflection, CavityParams};

fn main() {
    let params = CavityParams::from_ratios(4.0566, 0.0566).unwrap();
    println!("single-sided cavity, g/kappa = 4.0566, gamma/kappa = 0.0566, Delta = 0");
    println!();
    println!(
        "{:>10}  {:>9}  {:>9}  {:>9}  {:>14}",
        "dp/kappa", "|r|", "|n|", "|r0|", "|r|^2+|n|^2"
    );
    for i in 0..=20 {
        let delta_p = -1.0 + 0.1 * i as f64;
        let c = reflection(&params, delta_p).unwrap();
        println!(
            "{:>10.2}  {:>9.6}  {:>9.6}  {:>9.6}  {:>14.12}",
            delta_p,
            c.r.norm(),
            c.n.norm(),
            c.r0.norm(),
            c.r.norm_sqr() + c.n.norm_sqr()
        );
    }
    println!();

    // Occupied-cavity reflection vs coupling at three detunings.
    println!(
        "{:>9}  {:>12}  {:>14}  {:>12}",
        "g/kappa", "|r| (dp=0)", "|r| (dp=g/2)", "|r| (dp=g)"
    );
    let gamma = 0.0566;
    for i in 0..=9 {
        let g = 1.0 + i as f64;
        let params = CavityParams::from_ratios(g, gamma).unwrap();
        let at = |dp: f64| reflection(&params, dp).unwrap().r.norm();
        println!(
            "{:>9.2}  {:>12.6}  {:>14.6}  {:>12.6}",
            g,
            at(0.0),
            at(0.5 * gamma),
            at(gamma)
        );
    }
    println!();
    println!("on resonance the occupied cavity reflects with");
    let c = reflection(&params, 0.0).unwrap();
    println!("  r  = {:+.6} {:+.6}i   (≈ +1)", c.r.re, c.r.im);
    println!("  r0 = {:+.6} {:+.6}i   (= −1 exactly)", c.r0.re, c.r0.im);
}
