//! Amplitude-level agreement between the state-vector engine and the
//! brute-force dense-matrix engine on registers of up to five subsystems.

use cavity_repeater::acceptance::{bell_source_matrix, distribution_core_matrices};
use cavity_repeater::cavity::{reflection, CavityParams};
use cavity_repeater::gates::cpf;
use cavity_repeater::qstate::{
    hadamard, pauli_x, Basis, Mat2, QState, Subsystem, SubsystemKind,
};
use cavity_repeater::reference::{controlled_op, keep_slot_op, reflection_op, site_op, DMatrix};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const TOL: f64 = 1e-10;

fn random_complex(rng: &mut StdRng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_state(rng: &mut StdRng, subsystems: Vec<Subsystem>) -> QState {
    let dim = 1usize << subsystems.len();
    let mut amps: Vec<Complex64> = (0..dim).map(|_| random_complex(rng)).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt().max(1e-3);
    for a in &mut amps {
        *a /= norm;
    }
    QState::from_amplitudes(subsystems, amps).unwrap()
}

fn random_unitary(rng: &mut StdRng) -> Mat2 {
    let a = random_complex(rng);
    let b = random_complex(rng);
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt().max(1e-3);
    let (a, b) = (a / norm, b / norm);
    [[a, -b.conj()], [b, a.conj()]]
}

fn max_deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Random sequences of unitaries, controlled unitaries and cavity
/// reflections, replayed through explicit matrices.
#[test]
fn random_composite_circuits_match_the_matrix_engine() {
    let mut rng = StdRng::seed_from_u64(41);
    for _ in 0..60 {
        let n = rng.gen_range(2..=5usize);
        let subsystems: Vec<Subsystem> = (0..n)
            .map(|i| {
                let kind = if i % 2 == 0 {
                    SubsystemKind::Polarization
                } else {
                    SubsystemKind::Ensemble
                };
                Subsystem::new(&format!("q{i}"), kind)
            })
            .collect();
        let labels: Vec<String> =
            subsystems.iter().map(|s| s.label.clone()).collect();
        let mut state = random_state(&mut rng, subsystems);
        let mut matrix = DMatrix::identity(1 << n);
        let initial = state.amps().to_vec();

        for _ in 0..12 {
            match rng.gen_range(0..3) {
                0 => {
                    let slot = rng.gen_range(0..n);
                    let u = random_unitary(&mut rng);
                    state = state.apply_1q(&labels[slot], &u).unwrap();
                    matrix = site_op(n, slot, &u).matmul(&matrix);
                }
                1 => {
                    let control = rng.gen_range(0..n);
                    let mut target = rng.gen_range(0..n);
                    while target == control {
                        target = rng.gen_range(0..n);
                    }
                    let bit = rng.gen_range(0..2usize);
                    let u = random_unitary(&mut rng);
                    let value = state.subsystems()[control].values[bit].clone();
                    state = state
                        .apply_controlled(&labels[control], &value, &labels[target], &u)
                        .unwrap();
                    matrix = controlled_op(n, control, bit, target, &u).matmul(&matrix);
                }
                _ => {
                    // Pick a (polarization, ensemble) pair; even slots are
                    // polarizations by construction.
                    let pol = 2 * rng.gen_range(0..n.div_ceil(2));
                    let ens = 1 + 2 * rng.gen_range(0..n / 2);
                    let params = CavityParams::from_ratios(
                        rng.gen_range(0.5..6.0),
                        rng.gen_range(0.01..0.5),
                    )
                    .unwrap();
                    let coeffs = reflection(&params, rng.gen_range(-1.0..1.0)).unwrap();
                    state = state
                        .apply_reflection(&labels[pol], &labels[ens], &coeffs)
                        .unwrap();
                    matrix = reflection_op(n, pol, ens, coeffs.r, coeffs.r0).matmul(&matrix);
                }
            }
        }
        let expected = matrix.apply(&initial);
        assert!(max_deviation(state.amps(), &expected) <= TOL);
    }
}

/// The four-subsystem distribution core (Bell source, both nodes' gate
/// chains, both photon detections and the conditional flips) replayed as one
/// matrix pipeline per click pattern.
#[test]
fn distribution_core_matches_the_matrix_engine() {
    let mut rng = StdRng::seed_from_u64(42);
    let half = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    for _ in 0..25 {
        let params =
            CavityParams::from_ratios(rng.gen_range(0.5..6.0), rng.gen_range(0.01..0.5))
                .unwrap();
        let coeffs = reflection(&params, rng.gen_range(-1.0..1.0)).unwrap();

        // Library path: explicit ops on the four-subsystem register.
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let mut s = QState::init_register(&[
            ("a", SubsystemKind::Polarization, (one, zero)),
            ("b", SubsystemKind::Polarization, (one, zero)),
            ("E_A", SubsystemKind::Ensemble, (half, half)),
            ("E_B", SubsystemKind::Ensemble, (half, half)),
        ])
        .unwrap();
        s = s.apply_1q("a", &hadamard()).unwrap();
        s = s.apply_controlled("a", "v", "b", &pauli_x()).unwrap();
        s = s.apply_1q("b", &pauli_x()).unwrap();
        s = s.apply_1q("a", &hadamard()).unwrap();
        s = cpf(&s, "a", "E_A", &coeffs).unwrap();
        s = s.apply_1q("a", &hadamard()).unwrap();
        let alice_norm = s.norm_sq();

        // Matrix path for the same evolution.
        let bell = bell_source_matrix().kron(&DMatrix::identity(4));
        let (alice, bob) = distribution_core_matrices(&coeffs);
        let pre_alice_click = alice.matmul(&bell);

        let mut start = vec![zero; 16];
        // |hh⟩ ⊗ (plus ⊗ plus) on the ensembles.
        for ea in 0..2 {
            for eb in 0..2 {
                start[(ea << 1) | eb] = half * half;
            }
        }

        for alice_outcome in s.measure("a", Basis::Computational).unwrap() {
            if alice_outcome.probability <= 0.0 {
                continue;
            }
            let alice_bit = usize::from(alice_outcome.outcome == "v");
            let mut t = alice_outcome.collapsed.apply_1q("b", &hadamard()).unwrap();
            t = cpf(&t, "b", "E_B", &coeffs).unwrap();
            t = t.apply_1q("b", &hadamard()).unwrap();
            let bob_norm = t.norm_sq();
            for bob_outcome in t.measure("b", Basis::Computational).unwrap() {
                if bob_outcome.probability <= 0.0 {
                    continue;
                }
                let bob_bit = usize::from(bob_outcome.outcome == "v");
                let collapsed = bob_outcome
                    .collapsed
                    .remove_definite("a")
                    .unwrap()
                    .remove_definite("b")
                    .unwrap();
                let weight = (alice_outcome.probability * alice_norm
                    * bob_outcome.probability
                    * bob_norm)
                    .sqrt();
                let lib: Vec<Complex64> =
                    collapsed.amps().iter().map(|a| a * weight).collect();

                let after_alice =
                    keep_slot_op(4, 0, alice_bit).matmul(&pre_alice_click).apply(&start);
                let branch =
                    keep_slot_op(3, 0, bob_bit).matmul(&bob).apply(&after_alice);
                assert!(max_deviation(&lib, &branch) <= TOL);
            }
        }
    }
}
