//! Polarization-error-free single-photon transmission.
//!
//! The encoder (PBS + half-wave plate + beam splitter) moves the photon's
//! polarization information into time-bin and spatial labels so that every
//! branch travels `h`-polarized:
//!
//! `μ|h⟩ + ν|v⟩  →  (1/√2)|h⟩ ⊗ (ν|u_l⟩ + ν|d_l⟩ + μ|u_s⟩ − μ|d_s⟩)`.
//!
//! Both time bins are close enough to see the same fiber fluctuation, modelled
//! as one polarization unitary per channel.  After a π shifter on the `d` arm,
//! the decoder (BS → HWP → PBS → HWP) restores the original polarization
//! exactly and pushes the noise parameters into the output-port amplitudes:
//! the photon leaves as `(μ|h⟩ + ν|v⟩) ⊗ (δ|1⟩ + η|2⟩)` at a deterministic
//! time slot, for any channel noise.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qstate::{hadamard, pauli_x, pauli_z, Mat2, QState, Subsystem, SubsystemKind};
use crate::tol;

/// Collective polarization noise of one fiber channel, acting as
/// `U|h⟩ = δ|h⟩ + η|v⟩` on every branch of the encoded photon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelNoise {
    pub delta: Complex64,
    pub eta: Complex64,
}

impl ChannelNoise {
    pub fn new(delta: Complex64, eta: Complex64) -> Result<Self> {
        let norm = delta.norm_sqr() + eta.norm_sqr();
        if !norm.is_finite() {
            return Err(Error::NonFinite("channel noise amplitudes".to_string()));
        }
        if (norm - 1.0).abs() > tol::NORM_TOL {
            return Err(Error::InvalidParams(format!(
                "|delta|^2 + |eta|^2 = {norm}, expected 1"
            )));
        }
        Ok(Self { delta, eta })
    }

    /// The noiseless channel.
    pub fn identity() -> Self {
        Self { delta: Complex64::new(1.0, 0.0), eta: Complex64::new(0.0, 0.0) }
    }

    /// Canonical SU(2) completion of the specified `|h⟩` action:
    /// `U|v⟩ = −η*|h⟩ + δ*|v⟩`.  Only the `|h⟩` column is ever exercised by
    /// encoded light.
    pub fn unitary(&self) -> Mat2 {
        [[self.delta, -self.eta.conj()], [self.eta, self.delta.conj()]]
    }
}

fn path_label(photon: &str) -> String {
    format!("{photon}.path")
}

fn bin_label(photon: &str) -> String {
    format!("{photon}.bin")
}

fn port_label(photon: &str) -> String {
    format!("{photon}.port")
}

/// Encode one photon for noise-immune transmission, appending a spatial
/// (`u`/`d`) and a time-bin (`l`/`s`) subsystem to the register.
pub fn encode(state: &QState, photon: &str) -> Result<QState> {
    let sub = state.subsystem(photon)?;
    if sub.kind != SubsystemKind::Polarization {
        return Err(Error::KindMismatch {
            label: photon.to_string(),
            expected: SubsystemKind::Polarization.name(),
            found: sub.kind.name(),
        });
    }
    let path = path_label(photon);
    let bin = bin_label(photon);
    for label in [&path, &bin] {
        if state.subsystems().iter().any(|s| &s.label == label) {
            return Err(Error::LabelExists(label.clone()));
        }
    }

    // Fresh subsystems in u/l; the polarization-conditioned optics below move
    // the information into them.
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let fresh = QState::init_register(&[
        (path.as_str(), SubsystemKind::Spatial, (one, zero)),
        (bin.as_str(), SubsystemKind::TimeBin, (one, zero)),
    ])?;
    let mut s = state.tensor(&fresh)?;

    // PBS: the v component takes the long path (bin l), h stays short (s).
    s = s.apply_controlled(photon, "h", &bin, &pauli_x())?;
    // HWP in the long arm rotates v → h, so all light leaves h-polarized.
    s = s.apply_controlled(&bin, "l", photon, &pauli_x())?;
    // The two bins enter the BS from opposite inputs; the Hadamard then gives
    // u+d to the long bin and u−d to the short one.
    s = s.apply_controlled(&bin, "s", &path, &pauli_x())?;
    s = s.apply_1q(&path, &hadamard())?;
    Ok(s)
}

/// Apply one channel's collective noise to a photon (encoded or not): the
/// same polarization unitary hits every time bin and spatial arm.
pub fn apply_channel(state: &QState, photon: &str, noise: &ChannelNoise) -> Result<QState> {
    let sub = state.subsystem(photon)?;
    if sub.kind != SubsystemKind::Polarization {
        return Err(Error::KindMismatch {
            label: photon.to_string(),
            expected: SubsystemKind::Polarization.name(),
            found: sub.kind.name(),
        });
    }
    state.apply_1q(photon, &noise.unitary())
}

/// Decode a channel-noised encoded photon.
///
/// Applies the π shifter on the `d` arm, recombines the paths on a beam
/// splitter (the `l`/`s` bins recombine to a deterministic arrival and the
/// time-bin subsystem is retired), undoes the polarization flip and sorts the
/// noise amplitudes onto the output ports: the result is
/// `(μ|h⟩+ν|v⟩) ⊗ (δ|{photon}1⟩ + η|{photon}2⟩)` with the spatial subsystem
/// relabelled `{photon}.port`.
///
/// Inputs outside the image of `apply_channel ∘ encode` are rejected when the
/// recombination leaks weight into the dark outputs.
pub fn decode(state: &QState, photon: &str) -> Result<QState> {
    let path = path_label(photon);
    let bin = bin_label(photon);
    for label in [&path, &bin] {
        if !state.subsystems().iter().any(|s| &s.label == label) {
            return Err(Error::UnknownLabel(label.clone()));
        }
    }

    // π phase shifter on the d arm, then the recombining beam splitter.
    let mut s = state.apply_1q(&path, &pauli_z())?;
    s = s.apply_1q(&path, &hadamard())?;

    // The long-encoder branch now sits entirely in (d, l) and the short one in
    // (u, s); anything else is leakage from a malformed input.
    let (kept, leaked) = retire_bin(&s, &path, &bin)?;
    if leaked > tol::LEAKAGE_TOL * state.norm_sq().max(1e-300) {
        return Err(Error::DecodeLeakage(leaked));
    }
    let mut s = kept;

    // HWP in the u arm.
    s = s.apply_controlled(&path, "u", photon, &pauli_x())?;
    // PBS sorts (arm, polarization) onto the output ports: port flips exactly
    // when the photon is h-polarized.
    s = s.apply_controlled(photon, "h", &path, &pauli_x())?;
    // Final HWP on port 1.
    s = s.apply_controlled(&path, "u", photon, &pauli_x())?;

    // Relabel the spatial subsystem as the decoder's output port.
    let subsystems: Vec<Subsystem> = s
        .subsystems()
        .iter()
        .map(|sub| {
            if sub.label == path {
                Subsystem::with_values(
                    &port_label(photon),
                    SubsystemKind::Spatial,
                    &format!("{photon}1"),
                    &format!("{photon}2"),
                )
            } else {
                sub.clone()
            }
        })
        .collect();
    QState::from_amplitudes(subsystems, s.amps().to_vec())
}

/// Drop the time-bin subsystem given the post-BS correlation (d ↔ l, u ↔ s),
/// returning the reduced state and the leaked weight.
fn retire_bin(state: &QState, path: &str, bin: &str) -> Result<(QState, f64)> {
    let n = state.num_subsystems();
    let path_pos = state.subsystems().iter().position(|s| s.label == path).unwrap();
    let bin_pos = state.subsystems().iter().position(|s| s.label == bin).unwrap();
    let path_shift = n - 1 - path_pos;
    let bin_shift = n - 1 - bin_pos;

    let mut subsystems = state.subsystems().to_vec();
    subsystems.remove(bin_pos);
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << (n - 1)];
    let mut leaked = 0.0f64;
    for (idx, amp) in state.amps().iter().enumerate() {
        let path_bit = (idx >> path_shift) & 1; // u = 0, d = 1
        let bin_bit = (idx >> bin_shift) & 1; // l = 0, s = 1
        // Valid combinations: (d, l) and (u, s).
        if path_bit + bin_bit == 1 {
            // Remove the bin bit from the index.
            let high = idx >> (bin_shift + 1);
            let low = idx & ((1 << bin_shift) - 1);
            amps[(high << bin_shift) | low] = *amp;
        } else {
            leaked += amp.norm_sqr();
        }
    }
    Ok((QState::from_amplitudes(subsystems, amps)?, leaked))
}

/// Build the two-photon Bell state `(|h⟩_a|v⟩_b + |v⟩_a|h⟩_b)/√2`, encode both
/// photons, send them through independent noisy channels and decode them.
///
/// The four-subsystem output factorizes as
/// `|Ψ⁺⟩_ab ⊗ (δ_a|a1⟩ + η_a|a2⟩) ⊗ (δ_b|b1⟩ + η_b|b2⟩)`: the polarization
/// entanglement survives any collective noise, which only weights the ports.
pub fn distribute_pair(noise_a: &ChannelNoise, noise_b: &ChannelNoise) -> Result<QState> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut s = QState::init_register(&[
        ("a", SubsystemKind::Polarization, (one, zero)),
        ("b", SubsystemKind::Polarization, (one, zero)),
    ])?;
    // |hh⟩ → (|hh⟩+|vv⟩)/√2 → |Ψ⁺⟩.
    s = s.apply_1q("a", &hadamard())?;
    s = s.apply_controlled("a", "v", "b", &pauli_x())?;
    s = s.apply_1q("b", &pauli_x())?;

    s = encode(&s, "a")?;
    s = encode(&s, "b")?;
    s = apply_channel(&s, "a", noise_a)?;
    s = apply_channel(&s, "b", noise_b)?;
    s = decode(&s, "a")?;
    s = decode(&s, "b")?;
    Ok(s)
}
