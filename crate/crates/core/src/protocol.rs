//! End-to-end repeater procedures: heralded entanglement distribution onto
//! two remote ensembles, and entanglement swapping at a middle node.
//!
//! Distribution sends the two photons of a Bell pair through the noise-immune
//! transmission chain, runs a CPF gate sandwiched between Hadamards at each
//! node, and measures both photons.  Every click pattern heralds the same
//! entangled ensemble pair up to a local bit flip, so no classical
//! communication is needed beyond the local feed-forward.
//!
//! Swapping consumes two entangled pairs `(E_A, E_B1)` and `(E_B2, E_C)`.
//! The two-PCG variant applies a parity check, Hadamards on the middle
//! ensembles and a second parity check; the one-PCG variant replaces the
//! second check with direct measurements of the middle ensembles.  Either
//! way the click record selects one feed-forward operator on `E_A`:
//!
//! | first | second | correction |
//! |-------|--------|------------|
//! |  v    |  h     | σ_I        |
//! |  v    |  v     | σ_z        |
//! |  h    |  v     | σ_y        |
//! |  h    |  h     | σ_x        |

use num_complex::Complex64;

use crate::cavity::ReflectionCoefficients;
use crate::error::{Error, Result};
use crate::gates::{cpf, pcg};
use crate::qstate::{
    hadamard, Basis, HeraldedOutcome, Pauli, QState, Subsystem, SubsystemKind,
};

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Closed-form figures of merit of the distribution process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionMetrics {
    /// Branch fidelity when Bob's `h` detector fires (Alice heralded `h`).
    pub f_mh: f64,
    /// Branch fidelity when Bob's `v` detector fires.
    pub f_mv: f64,
    /// Total heralding probability of the distribution.
    pub eta_m: f64,
    /// Heralding probability of one Alice-click branch (`eta_m / 2`).
    pub eta_m_h: f64,
}

/// Evaluate the printed closed forms.
///
/// `F_mh = 2|r·r0 − 1|² / (|r0² − 1|² + |r² − 1|² + 2|r·r0 − 1|²)`,
/// `F_mv = ½|r² + r0² + 2|² / (|r0² + 1|² + |r² + 1|² + 2|r·r0 + 1|²)`,
/// `η_m^h = (|r0²|² + |r²|² + 2|r·r0|² + 4)/16`, `η_m = 2·η_m^h`.
pub fn distribution_metrics(coeffs: &ReflectionCoefficients) -> DistributionMetrics {
    let one = Complex64::new(1.0, 0.0);
    let r = coeffs.r;
    let r0 = coeffs.r0;
    let rr0 = r * r0;
    let r2 = r * r;
    let r02 = r0 * r0;

    let f_mh = 2.0 * (rr0 - one).norm_sqr()
        / ((r02 - one).norm_sqr() + (r2 - one).norm_sqr() + 2.0 * (rr0 - one).norm_sqr());
    let f_mv = 0.5 * (r2 + r02 + 2.0 * one).norm_sqr()
        / ((r02 + one).norm_sqr() + (r2 + one).norm_sqr() + 2.0 * (rr0 + one).norm_sqr());
    let eta_m_h =
        (r02.norm_sqr() + r2.norm_sqr() + 2.0 * rr0.norm_sqr() + 4.0) / 16.0;
    DistributionMetrics { f_mh, f_mv, eta_m: 2.0 * eta_m_h, eta_m_h }
}

/// `(|GS⟩ + |SG⟩)/√2` — the target of both distribution and swapping.
pub fn psi_plus(label_a: &str, label_b: &str) -> Result<QState> {
    ensemble_bell(label_a, label_b, 1.0)
}

/// `(|GS⟩ − |SG⟩)/√2` — the first-pair convention consumed by swapping.
/// A σ_z on the first ensemble maps a distribution output onto it.
pub fn psi_minus(label_a: &str, label_b: &str) -> Result<QState> {
    ensemble_bell(label_a, label_b, -1.0)
}

fn ensemble_bell(label_a: &str, label_b: &str, sign: f64) -> Result<QState> {
    QState::from_amplitudes(
        vec![
            Subsystem::new(label_a, SubsystemKind::Ensemble),
            Subsystem::new(label_b, SubsystemKind::Ensemble),
        ],
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(SQRT_HALF, 0.0),
            Complex64::new(sign * SQRT_HALF, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    )
}

/// Heralded entanglement distribution onto `E_A` and `E_B`.
///
/// Runs the two-photon front end through the given channels, then at each
/// node applies Hadamard → CPF → Hadamard to the local photon and measures
/// its polarization.  All four click patterns are enumerated; `v` clicks are
/// followed by the local bit flip, so every returned state targets
/// `(|GS⟩+|SG⟩)/√2`.  Output ports only decide which detector arm fires and
/// are factored away.
///
/// Outcome labels are `"hh"`, `"hv"`, `"vh"`, `"vv"` (Alice then Bob) and
/// probabilities are absolute — they sum to the heralding efficiency, 1 in
/// the ideal limit.
pub fn distribute(
    coeffs_a: &ReflectionCoefficients,
    coeffs_b: &ReflectionCoefficients,
    noise_a: &crate::transmission::ChannelNoise,
    noise_b: &crate::transmission::ChannelNoise,
) -> Result<Vec<HeraldedOutcome>> {
    let half = Complex64::new(SQRT_HALF, 0.0);
    let photons = crate::transmission::distribute_pair(noise_a, noise_b)?;
    let ensembles = QState::init_register(&[
        ("E_A", SubsystemKind::Ensemble, (half, half)),
        ("E_B", SubsystemKind::Ensemble, (half, half)),
    ])?;
    let mut s = photons.tensor(&ensembles)?;

    // Alice's node.
    s = s.apply_1q("a", &hadamard())?;
    s = cpf(&s, "a", "E_A", coeffs_a)?;
    s = s.apply_1q("a", &hadamard())?;
    let alice_survival = s.norm_sq();
    let alice_outcomes = s.measure("a", Basis::Computational)?;

    let mut results = Vec::with_capacity(4);
    for alice in &alice_outcomes {
        if alice.probability <= 0.0 {
            continue;
        }
        // Bob's node, conditioned on Alice's record.
        let mut t = alice.collapsed.apply_1q("b", &hadamard())?;
        t = cpf(&t, "b", "E_B", coeffs_b)?;
        t = t.apply_1q("b", &hadamard())?;
        let bob_survival = t.norm_sq();
        let bob_outcomes = t.measure("b", Basis::Computational)?;
        for bob in &bob_outcomes {
            if bob.probability <= 0.0 {
                continue;
            }
            let mut u = bob
                .collapsed
                .remove_definite("a")?
                .remove_definite("b")?;
            if alice.outcome == "v" {
                u = u.apply_1q("E_A", &Pauli::X.matrix())?;
            }
            if bob.outcome == "v" {
                u = u.apply_1q("E_B", &Pauli::X.matrix())?;
            }
            let (ensemble_state, _ports) = u.factor_out(&["a.port", "b.port"])?;
            results.push(HeraldedOutcome {
                outcome: format!("{}{}", alice.outcome, bob.outcome),
                probability: alice.probability * alice_survival
                    * bob.probability
                    * bob_survival,
                collapsed: ensemble_state.normalized()?,
                correction: None,
            });
        }
    }
    Ok(results)
}

/// Parity outcome of one check, reported as the detector click it produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Detector click heralding this parity: `h` for even, `v` for odd.
    pub fn click(self) -> char {
        match self {
            Parity::Even => 'h',
            Parity::Odd => 'v',
        }
    }
}

/// Feed-forward operator on `E_A` for a pair of parity records.
pub fn table1_correction(p1: Parity, p2: Parity) -> Pauli {
    match (p1, p2) {
        (Parity::Odd, Parity::Even) => Pauli::I,
        (Parity::Odd, Parity::Odd) => Pauli::Z,
        (Parity::Even, Parity::Odd) => Pauli::Y,
        (Parity::Even, Parity::Even) => Pauli::X,
    }
}

/// One heralded branch of an entanglement-swapping run.
#[derive(Debug, Clone)]
pub struct SwapRecord {
    /// Parity of the first check.
    pub p1: Parity,
    /// Parity of the second check (measured, or reconstructed from the
    /// middle-ensemble readout in the one-PCG variant).
    pub p2: Parity,
    /// Middle-ensemble readout of the one-PCG variant (`G`/`S` for each).
    pub middle: Option<(String, String)>,
    /// The Table-1 operator that was applied to `E_A`.
    pub correction: Pauli,
    /// Absolute probability of this branch (they sum to the swap's heralding
    /// probability).
    pub probability: f64,
    /// Corrected state over `(E_A, E_C)`.
    pub final_state: QState,
}

fn swap_labels<'a>(
    state_ab1: &'a QState,
    state_b2c: &'a QState,
) -> Result<(&'a str, &'a str, &'a str, &'a str)> {
    for (name, s) in [("first", state_ab1), ("second", state_b2c)] {
        if s.num_subsystems() != 2
            || s.subsystems().iter().any(|x| x.kind != SubsystemKind::Ensemble)
        {
            return Err(Error::RegisterMismatch(format!(
                "{name} swap input must hold exactly two ensembles"
            )));
        }
    }
    Ok((
        &state_ab1.subsystems()[0].label,
        &state_ab1.subsystems()[1].label,
        &state_b2c.subsystems()[0].label,
        &state_b2c.subsystems()[1].label,
    ))
}

/// Entanglement swapping with two parity checks at the middle node.
///
/// All four `(p1, p2)` branches are returned with the Table-1 correction
/// already applied to `E_A` and the middle ensembles factored out of
/// `final_state`.  With realistic coefficients the even branches of the
/// second check leave residual middle-ensemble entanglement that a pure
/// state cannot shed; those branches surface `Error::NotSeparable` — use
/// [`swap_one_pcg`] (or [`swap_two_pcg_efficiency`] for the heralding
/// probability alone) in that regime.
pub fn swap_two_pcg(
    state_ab1: &QState,
    state_b2c: &QState,
    coeffs: &ReflectionCoefficients,
) -> Result<Vec<SwapRecord>> {
    let (label_a, label_b1, label_b2, _) = swap_labels(state_ab1, state_b2c)?;
    let joint = state_ab1.tensor(state_b2c)?;
    let first = pcg(&joint, label_b1, label_b2, coeffs)?;

    let mut records = Vec::with_capacity(4);
    for (p1, branch) in [(Parity::Odd, &first.odd), (Parity::Even, &first.even)] {
        if branch.probability <= 0.0 {
            continue;
        }
        let mut s = branch.collapsed.apply_1q(label_b1, &hadamard())?;
        s = s.apply_1q(label_b2, &hadamard())?;
        let second = pcg(&s, label_b1, label_b2, coeffs)?;
        for (p2, sub) in [(Parity::Odd, &second.odd), (Parity::Even, &second.even)] {
            if sub.probability <= 0.0 {
                continue;
            }
            let (end_nodes, _middle) =
                sub.collapsed.factor_out(&[label_b1, label_b2])?;
            let correction = table1_correction(p1, p2);
            let final_state =
                end_nodes.normalized()?.apply_1q(label_a, &correction.matrix())?;
            records.push(SwapRecord {
                p1,
                p2,
                middle: None,
                correction,
                probability: branch.probability * sub.probability,
                final_state,
            });
        }
    }
    Ok(records)
}

/// Total heralding probability of the two-check swap (both photons detected),
/// available even where the per-branch states cannot be purified.
pub fn swap_two_pcg_efficiency(
    state_ab1: &QState,
    state_b2c: &QState,
    coeffs: &ReflectionCoefficients,
) -> Result<f64> {
    let (_, label_b1, label_b2, _) = swap_labels(state_ab1, state_b2c)?;
    let joint = state_ab1.tensor(state_b2c)?;
    let first = pcg(&joint, label_b1, label_b2, coeffs)?;
    let mut total = 0.0;
    for branch in [&first.odd, &first.even] {
        if branch.probability <= 0.0 {
            continue;
        }
        let mut s = branch.collapsed.apply_1q(label_b1, &hadamard())?;
        s = s.apply_1q(label_b2, &hadamard())?;
        let second = pcg(&s, label_b1, label_b2, coeffs)?;
        total += branch.probability * (second.odd.probability + second.even.probability);
    }
    Ok(total)
}

/// Entanglement swapping with a single parity check followed by direct
/// readout of both middle ensembles.
///
/// The second parity is reconstructed from the readout (equal bits ↔ even),
/// so the Table-1 correction applies unchanged.  Up to eight branches are
/// returned; zero-probability branches are omitted.  For any coefficients the
/// odd-parity branches are exact and the even-parity branches carry the
/// parity-check fidelity, so the swap inherits the gate's figures of merit.
pub fn swap_one_pcg(
    state_ab1: &QState,
    state_b2c: &QState,
    coeffs: &ReflectionCoefficients,
) -> Result<Vec<SwapRecord>> {
    let (label_a, label_b1, label_b2, _) = swap_labels(state_ab1, state_b2c)?;
    let joint = state_ab1.tensor(state_b2c)?;
    let first = pcg(&joint, label_b1, label_b2, coeffs)?;

    let mut records = Vec::with_capacity(8);
    for (p1, branch) in [(Parity::Odd, &first.odd), (Parity::Even, &first.even)] {
        if branch.probability <= 0.0 {
            continue;
        }
        let mut s = branch.collapsed.apply_1q(label_b1, &hadamard())?;
        s = s.apply_1q(label_b2, &hadamard())?;
        for m1 in s.measure(label_b1, Basis::Computational)? {
            if m1.probability <= 0.0 {
                continue;
            }
            for m2 in m1.collapsed.measure(label_b2, Basis::Computational)? {
                if m2.probability <= 0.0 {
                    continue;
                }
                let end_nodes = m2
                    .collapsed
                    .remove_definite(label_b1)?
                    .remove_definite(label_b2)?;
                let p2 = if m1.outcome == m2.outcome { Parity::Even } else { Parity::Odd };
                let correction = table1_correction(p1, p2);
                let final_state =
                    end_nodes.normalized()?.apply_1q(label_a, &correction.matrix())?;
                records.push(SwapRecord {
                    p1,
                    p2,
                    middle: Some((m1.outcome.clone(), m2.outcome.clone())),
                    correction,
                    probability: branch.probability * m1.probability * m2.probability,
                    final_state,
                });
            }
        }
    }
    Ok(records)
}
