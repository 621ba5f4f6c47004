//! Self-check suite: every headline number and structural guarantee of the
//! model, runnable as `cavity-repeater accept` or through the `acceptance`
//! integration test target.
//!
//! Checks 1–5 pin the quoted operating points (gate fidelities and
//! efficiencies, distribution figures).  Checks 6–10 are structural: energy
//! conservation, ideal-limit exactness, collective-noise immunity,
//! closed-form/simulation agreement, and amplitude-level agreement with the
//! brute-force dense-matrix engine.
//!
//! Quoted four-digit values are held to ±5e-4; cross-checks to 1e-10;
//! bookkeeping identities to 1e-12.

use std::time::Instant;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::cavity::{reflection, CavityParams, ReflectionCoefficients};
use crate::error::Result;
use crate::gates::{cpf, gate_metrics, pcg};
use crate::protocol::{
    distribute, distribution_metrics, psi_minus, psi_plus, swap_one_pcg, swap_two_pcg,
    swap_two_pcg_efficiency, table1_correction, Parity,
};
use crate::qstate::{hadamard, pauli_x, QState, Subsystem, SubsystemKind};
use crate::reference::{
    append_op, controlled_op, decoder_op, encoder_op, keep_slot_op, reflection_op, site_op,
    DMatrix,
};
use crate::sweep::{swap_heralding_probability, DEFAULT_GAMMA_OVER_KAPPA, DEFAULT_G_OVER_KAPPA};
use crate::tol;
use crate::transmission::{apply_channel, decode, encode, ChannelNoise};

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Outcome of one acceptance check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    /// Measured-vs-expected lines (and informational notes).
    pub details: Vec<String>,
    pub millis: u128,
}

/// Accumulator handed to each check body.
#[derive(Debug, Default)]
pub struct Check {
    pass: bool,
    details: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Self { pass: true, details: Vec::new() }
    }

    pub fn info(&mut self, line: impl Into<String>) {
        self.details.push(format!("note: {}", line.into()));
    }

    pub fn close(&mut self, what: &str, measured: f64, expected: f64, tolerance: f64) {
        let ok = (measured - expected).abs() <= tolerance;
        self.record(ok, format!("{what} = {measured:.6} expected {expected:.6} +/- {tolerance:.1e}"));
    }

    pub fn at_least(&mut self, what: &str, measured: f64, floor: f64) {
        self.record(measured >= floor, format!("{what} = {measured:.6} floor {floor:.6}"));
    }

    pub fn at_most(&mut self, what: &str, measured: f64, ceiling: f64) {
        self.record(measured <= ceiling, format!("{what} = {measured:.3e} ceiling {ceiling:.1e}"));
    }

    fn record(&mut self, ok: bool, line: String) {
        if !ok {
            self.pass = false;
        }
        self.details.push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }
}

fn run_check(
    id: usize,
    name: &'static str,
    body: impl FnOnce(&mut Check) -> Result<()>,
) -> CheckResult {
    let start = Instant::now();
    let mut check = Check::new();
    if let Err(e) = body(&mut check) {
        check.pass = false;
        check.details.push(format!("FAIL error: {e}"));
    }
    CheckResult {
        id,
        name,
        pass: check.pass,
        details: check.details,
        millis: start.elapsed().as_millis(),
    }
}

fn coeffs_at(g: f64, gamma: f64, delta_p: f64) -> Result<ReflectionCoefficients> {
    reflection(&CavityParams::from_ratios(g, gamma)?, delta_p)
}

/// Check 1: CPF fidelity at the quoted detunings.
pub fn check_cpf_fidelity() -> CheckResult {
    run_check(1, "CPF fidelity at the quoted operating points", |c| {
        let half = gate_metrics(&coeffs_at(4.0566, 0.0566, 0.5 * 0.0566)?);
        c.close("F_cpf(delta_p = gamma/2)", half.f_cpf, 0.9974, tol::QUOTED_TOL);
        let full = gate_metrics(&coeffs_at(4.0566, 0.0566, 0.0566)?);
        c.close("F_cpf(delta_p = gamma)", full.f_cpf, 0.9906, tol::QUOTED_TOL);
        Ok(())
    })
}

/// Check 2: parity-check fidelity at the quoted couplings.
pub fn check_pcg_fidelity() -> CheckResult {
    run_check(2, "PCG fidelity at the quoted couplings", |c| {
        let low = gate_metrics(&coeffs_at(2.0283, 0.0566, 0.5 * 0.0566)?);
        c.close("F_pcg(g/kappa = 2.0283)", low.f_pcg, 0.9944, tol::QUOTED_TOL);
        let high = gate_metrics(&coeffs_at(4.0566, 0.0566, 0.5 * 0.0566)?);
        c.close("F_pcg(g/kappa = 4.0566)", high.f_pcg, 0.9938, tol::QUOTED_TOL);
        Ok(())
    })
}

/// Check 3: gate efficiency floors over the half-linewidth window and the
/// full-linewidth point values.
pub fn check_gate_efficiencies() -> CheckResult {
    run_check(3, "gate efficiency floors and quoted points", |c| {
        let mut min_eta_cpf = f64::INFINITY;
        let mut min_eta_pcg = f64::INFINITY;
        for i in 0..=154 {
            let g = 2.0283 + (10.0 - 2.0283) * i as f64 / 154.0;
            for j in 0..=20 {
                let delta_p = -0.0283 + 0.0566 * j as f64 / 20.0;
                let m = gate_metrics(&coeffs_at(g, 0.0566, delta_p)?);
                min_eta_cpf = min_eta_cpf.min(m.eta_cpf);
                min_eta_pcg = min_eta_pcg.min(m.eta_pcg);
            }
        }
        c.at_least(
            "min eta_cpf (g/kappa >= 2.0283, |delta_p| <= gamma/2)",
            min_eta_cpf,
            0.9966 - tol::QUOTED_TOL,
        );
        c.at_least(
            "min eta_pcg (g/kappa >= 2.0283, |delta_p| <= gamma/2)",
            min_eta_pcg,
            0.9932 - tol::QUOTED_TOL,
        );
        let at_gamma = gate_metrics(&coeffs_at(4.0566, 0.0566, 0.0566)?);
        c.close("eta_cpf(delta_p = gamma)", at_gamma.eta_cpf, 0.9991, tol::QUOTED_TOL);
        c.close("eta_pcg(delta_p = gamma)", at_gamma.eta_pcg, 0.9983, tol::QUOTED_TOL);
        Ok(())
    })
}

/// Check 4: distribution/swapping fidelity floor over the full |δ′| ≤ γ
/// window at the experimental working point.
pub fn check_distribution_fidelity_floor() -> CheckResult {
    run_check(4, "distribution fidelity floor over |delta_p| <= gamma", |c| {
        let g = DEFAULT_G_OVER_KAPPA;
        let gamma = DEFAULT_GAMMA_OVER_KAPPA;
        let mut min_full = f64::INFINITY;
        let mut min_half = f64::INFINITY;
        for i in 0..=80 {
            let delta_p = -gamma + 2.0 * gamma * i as f64 / 80.0;
            let coeffs = coeffs_at(g, gamma, delta_p)?;
            let d = distribution_metrics(&coeffs);
            let m = gate_metrics(&coeffs);
            let worst = d.f_mh.min(d.f_mv).min(m.f_pcg);
            min_full = min_full.min(worst);
            if delta_p.abs() <= 0.5 * gamma + 1e-12 {
                min_half = min_half.min(worst);
            }
        }
        c.at_least(
            "min(F_mh, F_mv, F_pcg) over |delta_p| <= gamma",
            min_full,
            0.9936 - tol::QUOTED_TOL,
        );
        c.info(format!(
            "over the inner window |delta_p| <= gamma/2 the same minimum is {min_half:.6}, \
             which clears the 0.9936 floor; the full-window minimum sits at |delta_p| = gamma \
             where the empty-cavity phase error enters twice"
        ));
        Ok(())
    })
}

/// Check 5: every efficiency above 0.9931 for g/κ > 2.0283 at δ′ = γ.
pub fn check_efficiency_floors() -> CheckResult {
    run_check(5, "protocol efficiencies above 0.9931 for g/kappa > 2.0283", |c| {
        let mut min_eta = f64::INFINITY;
        let mut worst: (&str, f64) = ("", f64::INFINITY);
        for i in 0..=119 {
            let g = 2.0283 + (10.0 - 2.0283) * i as f64 / 119.0;
            let coeffs = coeffs_at(g, 0.0566, 0.0566)?;
            let m = gate_metrics(&coeffs);
            let d = distribution_metrics(&coeffs);
            let eta_s = swap_heralding_probability(&coeffs)?;
            for (name, v) in [
                ("eta_cpf", m.eta_cpf),
                ("eta_pcg", m.eta_pcg),
                ("eta_m", d.eta_m),
                ("eta_s", eta_s),
            ] {
                if v < min_eta {
                    min_eta = v;
                    worst = (name, g);
                }
            }
        }
        c.at_least("min(eta_cpf, eta_pcg, eta_m, eta_s)", min_eta, 0.9931);
        c.info(format!("minimum attained by {} at g/kappa = {:.4}", worst.0, worst.1));
        let edge = coeffs_at(2.0283, 0.0566, 0.0566)?;
        let ab1 = psi_minus("E_A", "E_B1")?;
        let b2c = psi_plus("E_B2", "E_C")?;
        c.info(format!(
            "swap heralding side by side at g/kappa = 2.0283: one check {:.6}, two checks {:.6}",
            swap_heralding_probability(&edge)?,
            swap_two_pcg_efficiency(&ab1, &b2c, &edge)?,
        ));
        Ok(())
    })
}

/// Check 6: energy conservation over randomized parameters.
pub fn check_energy_conservation() -> CheckResult {
    run_check(6, "energy conservation over 10^4 randomized points", |c| {
        let mut rng = StdRng::seed_from_u64(0x0566);
        let mut max_energy_dev = 0.0f64;
        let mut max_r0_dev = 0.0f64;
        for _ in 0..10_000 {
            let params = CavityParams::new(
                rng.gen_range(0.0..10.0),
                1.0,
                rng.gen_range(0.0..1.0),
                rng.gen_range(-5.0..5.0),
            )?;
            let coeffs = reflection(&params, rng.gen_range(-10.0..10.0))?;
            max_energy_dev = max_energy_dev
                .max((coeffs.r.norm_sqr() + coeffs.n.norm_sqr() - 1.0).abs());
            max_r0_dev = max_r0_dev.max((coeffs.r0.norm() - 1.0).abs());
        }
        c.at_most("max | |r|^2 + |n|^2 - 1 |", max_energy_dev, tol::NORM_TOL);
        c.at_most("max | |r0| - 1 |", max_r0_dev, tol::NORM_TOL);
        Ok(())
    })
}

/// Check 7: ideal-limit exactness of every printed gate and protocol state.
pub fn check_ideal_limit() -> CheckResult {
    run_check(7, "ideal-limit reproduction of the printed states", |c| {
        let ideal = ReflectionCoefficients::ideal();
        let z = |re: f64| Complex64::new(re, 0.0);

        // CPF action on a generic product input.
        let (mu, nu, mu_p, nu_p) = (0.6, 0.8, 0.28, 0.96);
        let input = QState::init_register(&[
            ("p", SubsystemKind::Polarization, (z(mu), z(nu))),
            ("E_A", SubsystemKind::Ensemble, (z(mu_p), z(nu_p))),
        ])?;
        let out = cpf(&input, "p", "E_A", &ideal)?;
        let expected = QState::from_amplitudes(
            input.subsystems().to_vec(),
            vec![z(-mu * mu_p), z(mu * nu_p), z(nu * mu_p), z(nu * nu_p)],
        )?;
        c.close("CPF output fidelity", out.fidelity(&expected)?, 1.0, tol::NORM_TOL);

        // PCG branches on a generic product input.
        let (ma, na, mb, nb) = (0.6, 0.8, 0.28, 0.96);
        let ensembles = QState::init_register(&[
            ("E_A", SubsystemKind::Ensemble, (z(ma), z(na))),
            ("E_B", SubsystemKind::Ensemble, (z(mb), z(nb))),
        ])?;
        let branches = pcg(&ensembles, "E_A", "E_B", &ideal)?;
        let even_expected = QState::from_amplitudes(
            ensembles.subsystems().to_vec(),
            vec![z(-ma * mb), z(0.0), z(0.0), z(na * nb)],
        )?;
        let odd_expected = QState::from_amplitudes(
            ensembles.subsystems().to_vec(),
            vec![z(0.0), z(-ma * nb), z(na * mb), z(0.0)],
        )?;
        c.close(
            "PCG even-branch fidelity",
            branches.even.collapsed.fidelity(&even_expected)?,
            1.0,
            tol::NORM_TOL,
        );
        c.close(
            "PCG odd-branch fidelity",
            branches.odd.collapsed.fidelity(&odd_expected)?,
            1.0,
            tol::NORM_TOL,
        );
        c.close(
            "PCG branch probabilities sum",
            branches.even.probability + branches.odd.probability,
            1.0,
            tol::NORM_TOL,
        );

        // Distribution: every click pattern heralds the target pair.
        let noise = ChannelNoise::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8))?;
        let outcomes = distribute(&ideal, &ideal, &noise, &ChannelNoise::identity())?;
        let target = psi_plus("E_A", "E_B")?;
        let mut total = 0.0;
        let mut min_fidelity = f64::INFINITY;
        for o in &outcomes {
            min_fidelity = min_fidelity.min(o.collapsed.fidelity(&target)?);
            total += o.probability;
        }
        c.close("distribution worst branch fidelity", min_fidelity, 1.0, tol::NORM_TOL);
        c.close("distribution total probability", total, 1.0, tol::NORM_TOL);

        // Swapping: intermediate four-party state, disentangled state, and
        // every feed-forward branch.
        let ab1 = psi_minus("E_A", "E_B1")?;
        let b2c = psi_plus("E_B2", "E_C")?;
        let joint = ab1.tensor(&b2c)?;
        let first = pcg(&joint, "E_B1", "E_B2", &ideal)?;
        let mut ghz_amps = vec![z(0.0); 16];
        ghz_amps[0b1010] = z(SQRT_HALF);
        ghz_amps[0b0101] = z(SQRT_HALF);
        let ghz = QState::from_amplitudes(joint.subsystems().to_vec(), ghz_amps)?;
        c.close(
            "four-party state after odd parity",
            first.odd.collapsed.fidelity(&ghz)?,
            1.0,
            tol::NORM_TOL,
        );

        let mut rotated = first.odd.collapsed.apply_1q("E_B1", &hadamard())?;
        rotated = rotated.apply_1q("E_B2", &hadamard())?;
        let second = pcg(&rotated, "E_B1", "E_B2", &ideal)?;
        let mut disentangled_amps = vec![z(0.0); 16];
        for (b1, b2) in [(0usize, 0usize), (1, 1)] {
            disentangled_amps[(1 << 3) | (b1 << 2) | (b2 << 1)] = z(0.5); // S . . G
            disentangled_amps[(b1 << 2) | (b2 << 1) | 1] = z(0.5); // G . . S
        }
        let disentangled =
            QState::from_amplitudes(joint.subsystems().to_vec(), disentangled_amps)?;
        c.close(
            "middle ensembles decoupled after even parity",
            second.even.collapsed.fidelity(&disentangled)?,
            1.0,
            tol::NORM_TOL,
        );

        let records = swap_two_pcg(&ab1, &b2c, &ideal)?;
        let target_ac = psi_plus("E_A", "E_C")?;
        let mut min_swap = f64::INFINITY;
        for rec in &records {
            min_swap = min_swap.min(rec.final_state.fidelity(&target_ac)?);
            if rec.correction != table1_correction(rec.p1, rec.p2) {
                c.at_least("feed-forward table agreement", 0.0, 1.0);
            }
        }
        c.close("worst feed-forward branch fidelity", min_swap, 1.0, tol::NORM_TOL);
        c.close(
            "feed-forward branch count",
            records.len() as f64,
            4.0,
            0.0,
        );
        Ok(())
    })
}

/// Check 8: collective-noise immunity of transmission and distribution.
pub fn check_noise_immunity() -> CheckResult {
    run_check(8, "collective-noise immunity", |c| {
        let mut rng = StdRng::seed_from_u64(0x2015);
        let mut worst_roundtrip = f64::INFINITY;
        for _ in 0..1000 {
            let input_pair = random_qubit(&mut rng);
            let input = QState::init_register(&[(
                "p",
                SubsystemKind::Polarization,
                input_pair,
            )])?;
            let noise = random_noise(&mut rng)?;
            let sent = apply_channel(&encode(&input, "p")?, "p", &noise)?;
            let received = decode(&sent, "p")?;
            let (pol, _port) = received.factor_out(&["p.port"])?;
            worst_roundtrip = worst_roundtrip.min(pol.fidelity(&input)?);
        }
        c.close("worst decoded polarization fidelity", worst_roundtrip, 1.0, tol::CROSS_CHECK_TOL);

        let coeffs = coeffs_at(2.0283, 0.0566, 0.0283)?;
        let baseline =
            distribute(&coeffs, &coeffs, &ChannelNoise::identity(), &ChannelNoise::identity())?;
        let mut max_fidelity_dev = 0.0f64;
        let mut max_probability_dev = 0.0f64;
        for _ in 0..25 {
            let outcomes =
                distribute(&coeffs, &coeffs, &random_noise(&mut rng)?, &random_noise(&mut rng)?)?;
            for (b, o) in baseline.iter().zip(&outcomes) {
                max_fidelity_dev =
                    max_fidelity_dev.max((b.collapsed.fidelity(&o.collapsed)? - 1.0).abs());
                max_probability_dev =
                    max_probability_dev.max((b.probability - o.probability).abs());
            }
        }
        c.at_most("max ensemble-state dependence on noise", max_fidelity_dev, tol::NORM_TOL);
        c.at_most("max branch-probability dependence on noise", max_probability_dev, tol::NORM_TOL);
        Ok(())
    })
}

/// Check 9: closed forms agree with simulation on randomized parameters.
pub fn check_closed_forms_vs_simulation() -> CheckResult {
    run_check(9, "closed forms vs simulation on 10^3 randomized points", |c| {
        let mut rng = StdRng::seed_from_u64(0x53);
        let half = Complex64::new(SQRT_HALF, 0.0);
        let mut max_dev = 0.0f64;
        for _ in 0..1000 {
            let g = rng.gen_range(0.5..10.0);
            let gamma = rng.gen_range(0.01..1.0);
            let delta_p = rng.gen_range(-2.0..2.0);
            let coeffs = coeffs_at(g, gamma, delta_p)?;
            let m = gate_metrics(&coeffs);

            let pair = QState::init_register(&[
                ("p", SubsystemKind::Polarization, (half, half)),
                ("E_A", SubsystemKind::Ensemble, (half, half)),
            ])?;
            let ideal_out = cpf(&pair, "p", "E_A", &ReflectionCoefficients::ideal())?;
            let real_out = cpf(&pair, "p", "E_A", &coeffs)?;
            max_dev = max_dev.max((ideal_out.fidelity(&real_out)? - m.f_cpf).abs());
            max_dev = max_dev.max((real_out.norm_sq() - m.eta_cpf).abs());

            let ensembles = QState::init_register(&[
                ("E_A", SubsystemKind::Ensemble, (half, half)),
                ("E_B", SubsystemKind::Ensemble, (half, half)),
            ])?;
            let ideal_pcg = pcg(&ensembles, "E_A", "E_B", &ReflectionCoefficients::ideal())?;
            let real_pcg = pcg(&ensembles, "E_A", "E_B", &coeffs)?;
            max_dev = max_dev.max(
                (ideal_pcg.even.collapsed.fidelity(&real_pcg.even.collapsed)? - m.f_pcg).abs(),
            );
            max_dev = max_dev.max(
                (ideal_pcg.odd.collapsed.fidelity(&real_pcg.odd.collapsed)? - m.f_pcg_v).abs(),
            );
            max_dev = max_dev
                .max((real_pcg.even.probability + real_pcg.odd.probability - m.eta_pcg).abs());

            let d = distribution_metrics(&coeffs);
            let outcomes = distribute(
                &coeffs,
                &coeffs,
                &ChannelNoise::identity(),
                &ChannelNoise::identity(),
            )?;
            let target = psi_plus("E_A", "E_B")?;
            let mut p_alice_h = 0.0;
            let mut p_total = 0.0;
            for o in &outcomes {
                let f = o.collapsed.fidelity(&target)?;
                let expected = match o.outcome.as_str() {
                    "hh" | "vv" => d.f_mh,
                    _ => d.f_mv,
                };
                max_dev = max_dev.max((f - expected).abs());
                if o.outcome.starts_with('h') {
                    p_alice_h += o.probability;
                }
                p_total += o.probability;
            }
            max_dev = max_dev.max((p_alice_h - d.eta_m_h).abs());
            max_dev = max_dev.max((p_total - d.eta_m).abs());
        }
        c.at_most("max |closed form - simulation|", max_dev, tol::CROSS_CHECK_TOL);
        Ok(())
    })
}

/// Check 10: composite pipelines agree with the dense-matrix engine.
pub fn check_oracle_equivalence() -> CheckResult {
    run_check(10, "amplitude agreement with the dense-matrix engine", |c| {
        let mut rng = StdRng::seed_from_u64(0x1560);
        let mut max_dev = 0.0f64;
        for _ in 0..40 {
            let g = rng.gen_range(0.5..8.0);
            let gamma = rng.gen_range(0.01..0.8);
            let delta_p = rng.gen_range(-1.0..1.0);
            let coeffs = coeffs_at(g, gamma, delta_p)?;
            max_dev = max_dev.max(cpf_pipeline_deviation(&mut rng, &coeffs)?);
            max_dev = max_dev.max(pcg_pipeline_deviation(&mut rng, &coeffs)?);
            max_dev = max_dev.max(transmission_pipeline_deviation(&mut rng)?);
            max_dev = max_dev.max(swap_pipeline_deviation(&coeffs)?);
        }
        c.at_most("max amplitude deviation", max_dev, tol::CROSS_CHECK_TOL);
        Ok(())
    })
}

fn amp_deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn random_qubit(rng: &mut StdRng) -> (Complex64, Complex64) {
    let raw = [
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
    ];
    let norm = (raw[0].norm_sqr() + raw[1].norm_sqr()).sqrt().max(1e-6);
    (raw[0] / norm, raw[1] / norm)
}

fn random_noise(rng: &mut StdRng) -> Result<ChannelNoise> {
    let (delta, eta) = random_qubit(rng);
    ChannelNoise::new(delta, eta)
}

fn random_state(rng: &mut StdRng, subsystems: Vec<Subsystem>) -> Result<QState> {
    let dim = 1usize << subsystems.len();
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt().max(1e-6);
    for a in &mut amps {
        *a /= norm;
    }
    QState::from_amplitudes(subsystems, amps)
}

/// CPF on a three-subsystem register vs the explicit diagonal matrix.
fn cpf_pipeline_deviation(rng: &mut StdRng, coeffs: &ReflectionCoefficients) -> Result<f64> {
    let subs = vec![
        Subsystem::new("p", SubsystemKind::Polarization),
        Subsystem::new("E", SubsystemKind::Ensemble),
        Subsystem::new("spectator", SubsystemKind::Ensemble),
    ];
    let state = random_state(rng, subs)?;
    let lib = cpf(&state, "p", "E", coeffs)?;
    let matrix = reflection_op(3, 0, 1, coeffs.r, coeffs.r0);
    Ok(amp_deviation(lib.amps(), &matrix.apply(state.amps())))
}

/// Full PCG pipeline (ancilla injection through detection) vs explicit
/// matrices, branch by branch.
fn pcg_pipeline_deviation(rng: &mut StdRng, coeffs: &ReflectionCoefficients) -> Result<f64> {
    let subs = vec![
        Subsystem::new("E_A", SubsystemKind::Ensemble),
        Subsystem::new("E_B", SubsystemKind::Ensemble),
        Subsystem::new("spectator", SubsystemKind::Ensemble),
    ];
    let state = random_state(rng, subs)?;
    let branches = pcg(&state, "E_A", "E_B", coeffs)?;

    // Photon slot is appended at index 3 of a four-subsystem register.
    let inject = append_op(3, &[Complex64::new(SQRT_HALF, 0.0), Complex64::new(SQRT_HALF, 0.0)]);
    let reflect_a = reflection_op(4, 3, 0, coeffs.r, coeffs.r0);
    let flip = site_op(4, 3, &pauli_x());
    let reflect_b = reflection_op(4, 3, 1, coeffs.r, coeffs.r0);
    let rotate = site_op(4, 3, &hadamard());
    let chain = rotate
        .matmul(&flip.matmul(&reflect_b).matmul(&flip))
        .matmul(&reflect_a)
        .matmul(&inject);

    let mut max_dev = 0.0f64;
    for (bit, outcome) in [(0usize, &branches.even), (1usize, &branches.odd)] {
        let projected = keep_slot_op(4, 3, bit).matmul(&chain).apply(state.amps());
        let scale = outcome.probability.sqrt();
        let lib: Vec<Complex64> =
            outcome.collapsed.amps().iter().map(|a| a * scale).collect();
        max_dev = max_dev.max(amp_deviation(&lib, &projected));
    }
    Ok(max_dev)
}

/// Encode → collective noise → decode vs the explicit matrix chain, with a
/// spectator ensemble entangled with the photon.
fn transmission_pipeline_deviation(rng: &mut StdRng) -> Result<f64> {
    let subs = vec![
        Subsystem::new("p", SubsystemKind::Polarization),
        Subsystem::new("mem", SubsystemKind::Ensemble),
    ];
    let state = random_state(rng, subs)?;
    let noise = random_noise(rng)?;

    let lib = decode(&apply_channel(&encode(&state, "p")?, "p", &noise)?, "p")?;

    // Register grows to (p, mem, p.path, p.bin) then shrinks to (p, mem, port).
    let chain = decoder_op(4, 0, 2, 3)
        .matmul(&site_op(4, 0, &noise.unitary()))
        .matmul(&encoder_op(2, 0));
    Ok(amp_deviation(lib.amps(), &chain.apply(state.amps())))
}

/// One-check swap on the standard inputs vs the explicit matrix pipeline for
/// every heralded branch (five subsystems including the ancilla).
fn swap_pipeline_deviation(coeffs: &ReflectionCoefficients) -> Result<f64> {
    let ab1 = psi_minus("E_A", "E_B1")?;
    let b2c = psi_plus("E_B2", "E_C")?;
    let joint = ab1.tensor(&b2c)?;
    let records = swap_one_pcg(&ab1, &b2c, coeffs)?;

    // Register (E_A, E_B1, E_B2, E_C, photon); the parity check acts on
    // slots 1 and 2.
    let inject = append_op(4, &[Complex64::new(SQRT_HALF, 0.0), Complex64::new(SQRT_HALF, 0.0)]);
    let reflect_b1 = reflection_op(5, 4, 1, coeffs.r, coeffs.r0);
    let flip = site_op(5, 4, &pauli_x());
    let reflect_b2 = reflection_op(5, 4, 2, coeffs.r, coeffs.r0);
    let rotate_photon = site_op(5, 4, &hadamard());
    let chain = rotate_photon
        .matmul(&flip.matmul(&reflect_b2).matmul(&flip))
        .matmul(&reflect_b1)
        .matmul(&inject);

    let mut max_dev = 0.0f64;
    for rec in &records {
        let click_bit = match rec.p1 {
            Parity::Even => 0usize,
            Parity::Odd => 1usize,
        };
        let (m1, m2) = rec.middle.as_ref().expect("one-check records carry the readout");
        let bit_of = |name: &str| usize::from(name == "S");

        let mut v = keep_slot_op(5, 4, click_bit).matmul(&chain).apply(joint.amps());
        v = site_op(4, 2, &hadamard()).apply(&site_op(4, 1, &hadamard()).apply(&v));
        v = keep_slot_op(4, 1, bit_of(m1)).apply(&v);
        v = keep_slot_op(3, 1, bit_of(m2)).apply(&v);
        v = site_op(2, 0, &rec.correction.matrix()).apply(&v);

        let scale = rec.probability.sqrt();
        let lib: Vec<Complex64> = rec.final_state.amps().iter().map(|a| a * scale).collect();
        max_dev = max_dev.max(amp_deviation(&lib, &v));
    }
    Ok(max_dev)
}

/// Distribution core on four subsystems (no output ports) vs explicit
/// matrices: exposed for the oracle-equivalence integration tests.  Alice's
/// chain acts on the full register (a, b, E_A, E_B); Bob's chain acts on the
/// reduced register (b, E_A, E_B) left after Alice's photon is detected.
pub fn distribution_core_matrices(
    coeffs: &ReflectionCoefficients,
) -> (DMatrix, DMatrix) {
    let h_a = site_op(4, 0, &hadamard());
    let alice = h_a.matmul(&reflection_op(4, 0, 2, coeffs.r, coeffs.r0)).matmul(&h_a);
    let h_b = site_op(3, 0, &hadamard());
    let bob = h_b.matmul(&reflection_op(3, 0, 2, coeffs.r, coeffs.r0)).matmul(&h_b);
    (alice, bob)
}

/// Controlled bit flip used by the reference construction of the Bell source.
pub fn bell_source_matrix() -> DMatrix {
    let h_a = site_op(2, 0, &hadamard());
    let cnot = controlled_op(2, 0, 1, 1, &pauli_x());
    let flip_b = site_op(2, 1, &pauli_x());
    flip_b.matmul(&cnot).matmul(&h_a)
}

/// Run all ten checks in order.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        check_cpf_fidelity(),
        check_pcg_fidelity(),
        check_gate_efficiencies(),
        check_distribution_fidelity_floor(),
        check_efficiency_floors(),
        check_energy_conservation(),
        check_ideal_limit(),
        check_noise_immunity(),
        check_closed_forms_vs_simulation(),
        check_oracle_equivalence(),
    ]
}

/// Human-readable report: one headline line per check plus detail lines.
pub fn report(results: &[CheckResult]) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    for r in results {
        let _ = writeln!(
            out,
            "[{}] {:>2}. {} ({} ms)",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.millis
        );
        for d in &r.details {
            let _ = writeln!(out, "         {d}");
        }
    }
    let passed = results.iter().filter(|r| r.pass).count();
    let total_ms: u128 = results.iter().map(|r| r.millis).sum();
    let _ = writeln!(out, "{passed}/{} checks passed in {total_ms} ms", results.len());
    out
}

pub fn all_pass(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.pass)
}
