//! Dense state-vector engine over labelled two-level subsystems.
//!
//! A register holds an ordered list of subsystems — photon polarization
//! (`h`/`v`), spatial arm (`u`/`d` or output ports), time bin (`l`/`s`),
//! ensemble memory (`G`/`S`) — and a complex amplitude vector of length
//! `2^n`.  Subsystem 0 is the most significant bit of the basis index and the
//! first-listed value (`h`, `u`, `l`, `G`) maps to bit 0.
//!
//! States are immutable values: every operation returns a new state.  The
//! squared norm may drop below one; the deficit is the accumulated heralded
//! loss (a photon scattered out of the reflected mode), never renormalized
//! away silently.  Probabilities reported by [`QState::measure`] are relative
//! to the current squared norm and always sum to one.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::cavity::ReflectionCoefficients;
use crate::error::{Error, Result};
use crate::tol;

/// 2×2 complex matrix in row-major order.
pub type Mat2 = [[Complex64; 2]; 2];

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub fn identity() -> Mat2 {
    [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ]
}

pub fn hadamard() -> Mat2 {
    [
        [Complex64::new(SQRT_HALF, 0.0), Complex64::new(SQRT_HALF, 0.0)],
        [Complex64::new(SQRT_HALF, 0.0), Complex64::new(-SQRT_HALF, 0.0)],
    ]
}

pub fn pauli_x() -> Mat2 {
    [
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    ]
}

pub fn pauli_z() -> Mat2 {
    [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
    ]
}

/// Feed-forward correction operators on an ensemble qubit.
///
/// `Y` is the real convention `|G⟩⟨S| − |S⟩⟨G|` (a π rotation, not the
/// imaginary Pauli matrix); fidelities are insensitive to the difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> Mat2 {
        match self {
            Pauli::I => identity(),
            Pauli::X => pauli_x(),
            Pauli::Y => [
                [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
                [Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0)],
            ],
            Pauli::Z => pauli_z(),
        }
    }
}

impl std::fmt::Display for Pauli {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Pauli::I => "sigma_I",
            Pauli::X => "sigma_x",
            Pauli::Y => "sigma_y",
            Pauli::Z => "sigma_z",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsystemKind {
    Polarization,
    Spatial,
    TimeBin,
    Ensemble,
}

impl SubsystemKind {
    pub fn name(self) -> &'static str {
        match self {
            SubsystemKind::Polarization => "polarization",
            SubsystemKind::Spatial => "spatial",
            SubsystemKind::TimeBin => "timebin",
            SubsystemKind::Ensemble => "ensemble",
        }
    }

    /// Default basis value names; the first maps to bit 0.
    pub fn default_values(self) -> [&'static str; 2] {
        match self {
            SubsystemKind::Polarization => ["h", "v"],
            SubsystemKind::Spatial => ["u", "d"],
            SubsystemKind::TimeBin => ["l", "s"],
            SubsystemKind::Ensemble => ["G", "S"],
        }
    }
}

/// One labelled two-level subsystem of a register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subsystem {
    pub label: String,
    pub kind: SubsystemKind,
    /// Basis value names for bit 0 and bit 1.
    pub values: [String; 2],
}

impl Subsystem {
    pub fn new(label: &str, kind: SubsystemKind) -> Self {
        let [v0, v1] = kind.default_values();
        Self { label: label.to_string(), kind, values: [v0.to_string(), v1.to_string()] }
    }

    pub fn with_values(label: &str, kind: SubsystemKind, v0: &str, v1: &str) -> Self {
        Self { label: label.to_string(), kind, values: [v0.to_string(), v1.to_string()] }
    }
}

/// Result of projecting one subsystem onto a basis state.
#[derive(Debug, Clone)]
pub struct HeraldedOutcome {
    /// Name of the measured basis state (e.g. `h`, or `h+v` in the rotated basis).
    pub outcome: String,
    /// Probability of this outcome.  For [`QState::measure`] it is relative to
    /// the pre-measurement squared norm; heralded protocol operations document
    /// their own (absolute) convention.
    pub probability: f64,
    /// Renormalized post-measurement state (meaningful when `probability > 0`).
    pub collapsed: QState,
    /// Feed-forward operator this outcome requires, if any.
    pub correction: Option<(Pauli, String)>,
}

/// Measurement basis for a single subsystem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// The subsystem's own basis (`h`/`v`, `G`/`S`, ...).
    Computational,
    /// The Hadamard-rotated basis `(|0⟩ ± |1⟩)/√2`.
    Conjugate,
}

/// Immutable register state: labelled subsystems plus a dense amplitude
/// vector, possibly sub-normalized by heralded loss.
#[derive(Debug, Clone, PartialEq)]
pub struct QState {
    subsystems: Vec<Subsystem>,
    amps: Vec<Complex64>,
    norm_sq: f64,
}

fn check_unitary(u: &Mat2) -> Result<()> {
    // u†u = I within tolerance.
    let mut max_dev: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let s: Complex64 = u.iter().map(|row| row[i].conj() * row[j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            max_dev = max_dev.max((s - target).norm());
        }
    }
    if max_dev > tol::UNITARITY_TOL {
        return Err(Error::NonUnitary(max_dev));
    }
    Ok(())
}

impl QState {
    /// Tensor product of normalized single-subsystem states.
    ///
    /// Each entry gives a label, a kind and the `(bit-0, bit-1)` amplitude
    /// pair, which must be normalized.
    pub fn init_register(spec: &[(&str, SubsystemKind, (Complex64, Complex64))]) -> Result<Self> {
        let mut subsystems = Vec::with_capacity(spec.len());
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for &(label, kind, (a0, a1)) in spec {
            if subsystems.iter().any(|s: &Subsystem| s.label == label) {
                return Err(Error::DuplicateLabel(label.to_string()));
            }
            let pair_norm = a0.norm_sqr() + a1.norm_sqr();
            if !pair_norm.is_finite() || (pair_norm - 1.0).abs() > tol::NORM_TOL {
                return Err(Error::UnnormalizedPair { label: label.to_string(), norm_sq: pair_norm });
            }
            subsystems.push(Subsystem::new(label, kind));
            let mut next = Vec::with_capacity(amps.len() * 2);
            for amp in &amps {
                next.push(amp * a0);
                next.push(amp * a1);
            }
            amps = next;
        }
        Ok(Self::assemble(subsystems, amps))
    }

    /// Build a register directly from its amplitude vector
    /// (`amps.len() == 2^subsystems.len()`, squared norm at most 1).
    pub fn from_amplitudes(subsystems: Vec<Subsystem>, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << subsystems.len() {
            return Err(Error::RegisterMismatch(format!(
                "{} amplitudes for {} subsystems",
                amps.len(),
                subsystems.len()
            )));
        }
        for i in 0..subsystems.len() {
            for j in (i + 1)..subsystems.len() {
                if subsystems[i].label == subsystems[j].label {
                    return Err(Error::DuplicateLabel(subsystems[i].label.clone()));
                }
            }
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() || norm_sq > 1.0 + tol::NORM_TOL {
            return Err(Error::RegisterMismatch(format!("squared norm {norm_sq} exceeds 1")));
        }
        Ok(Self::assemble(subsystems, amps))
    }

    fn assemble(subsystems: Vec<Subsystem>, amps: Vec<Complex64>) -> Self {
        let norm_sq = amps.iter().map(|a| a.norm_sqr()).sum();
        Self { subsystems, amps, norm_sq }
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// Cached squared norm; 1 for freshly prepared states, lower once
    /// heralded loss has occurred.
    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    pub fn num_subsystems(&self) -> usize {
        self.subsystems.len()
    }

    fn position(&self, label: &str) -> Result<usize> {
        self.subsystems
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn subsystem(&self, label: &str) -> Result<&Subsystem> {
        Ok(&self.subsystems[self.position(label)?])
    }

    /// Bit shift of subsystem `pos`: subsystem 0 is the most significant bit.
    fn shift(&self, pos: usize) -> usize {
        self.subsystems.len() - 1 - pos
    }

    /// Apply a 2×2 unitary to one subsystem.  Loss never enters here; the
    /// matrix is rejected unless it is unitary to within `UNITARITY_TOL`.
    pub fn apply_1q(&self, target: &str, u: &Mat2) -> Result<Self> {
        check_unitary(u)?;
        Ok(self.apply_1q_unchecked(self.position(target)?, u))
    }

    fn apply_1q_unchecked(&self, pos: usize, m: &Mat2) -> Self {
        let shift = self.shift(pos);
        let bit = 1usize << shift;
        let mut amps = self.amps.clone();
        for idx in 0..amps.len() {
            if idx & bit == 0 {
                let a0 = amps[idx];
                let a1 = amps[idx | bit];
                amps[idx] = m[0][0] * a0 + m[0][1] * a1;
                amps[idx | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Self::assemble(self.subsystems.clone(), amps)
    }

    /// Apply a 2×2 unitary to `target` only on branches where `control` is in
    /// the basis state named `control_value`.
    pub fn apply_controlled(
        &self,
        control: &str,
        control_value: &str,
        target: &str,
        u: &Mat2,
    ) -> Result<Self> {
        check_unitary(u)?;
        let cpos = self.position(control)?;
        let tpos = self.position(target)?;
        if cpos == tpos {
            return Err(Error::RegisterMismatch("control equals target".to_string()));
        }
        let csub = &self.subsystems[cpos];
        let cbit_value = csub
            .values
            .iter()
            .position(|v| v == control_value)
            .ok_or_else(|| Error::UnknownLabel(format!("{control}={control_value}")))?;
        let cbit = 1usize << self.shift(cpos);
        let tbit = 1usize << self.shift(tpos);
        let mut amps = self.amps.clone();
        for idx in 0..amps.len() {
            let control_active = ((idx & cbit != 0) as usize) == cbit_value;
            if control_active && idx & tbit == 0 {
                let a0 = amps[idx];
                let a1 = amps[idx | tbit];
                amps[idx] = u[0][0] * a0 + u[0][1] * a1;
                amps[idx | tbit] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        Ok(Self::assemble(self.subsystems.clone(), amps))
    }

    /// Reflect the photon's `h` component off the cavity holding `ensemble`:
    /// `|h⟩|G⟩ → r0|h⟩|G⟩`, `|h⟩|S⟩ → r|h⟩|S⟩`, `|v⟩` untouched.
    ///
    /// This is the one non-unitary primitive: with realistic coefficients the
    /// squared norm drops and the deficit is the heralded photon loss.
    pub fn apply_reflection(
        &self,
        photon: &str,
        ensemble: &str,
        coeffs: &ReflectionCoefficients,
    ) -> Result<Self> {
        let ppos = self.position(photon)?;
        let epos = self.position(ensemble)?;
        let psub = &self.subsystems[ppos];
        if psub.kind != SubsystemKind::Polarization {
            return Err(Error::KindMismatch {
                label: photon.to_string(),
                expected: SubsystemKind::Polarization.name(),
                found: psub.kind.name(),
            });
        }
        let esub = &self.subsystems[epos];
        if esub.kind != SubsystemKind::Ensemble {
            return Err(Error::KindMismatch {
                label: ensemble.to_string(),
                expected: SubsystemKind::Ensemble.name(),
                found: esub.kind.name(),
            });
        }
        let pbit = 1usize << self.shift(ppos);
        let ebit = 1usize << self.shift(epos);
        let mut amps = self.amps.clone();
        for (idx, amp) in amps.iter_mut().enumerate() {
            if idx & pbit == 0 {
                // h-polarized component enters the cavity.
                *amp *= if idx & ebit == 0 { coeffs.r0 } else { coeffs.r };
            }
        }
        Ok(Self::assemble(self.subsystems.clone(), amps))
    }

    /// Project one subsystem onto a basis; both outcomes are returned with
    /// probabilities relative to the current squared norm (they sum to 1).
    pub fn measure(&self, target: &str, basis: Basis) -> Result<Vec<HeraldedOutcome>> {
        if self.norm_sq < 1e-300 {
            return Err(Error::ZeroNormState);
        }
        match basis {
            Basis::Computational => self.measure_computational(target),
            Basis::Conjugate => {
                let h = hadamard();
                let rotated = self.apply_1q(target, &h)?;
                let sub = self.subsystem(target)?;
                let names = [
                    format!("{}+{}", sub.values[0], sub.values[1]),
                    format!("{}-{}", sub.values[0], sub.values[1]),
                ];
                let mut outcomes = rotated.measure_computational(target)?;
                for (outcome, name) in outcomes.iter_mut().zip(names) {
                    outcome.outcome = name;
                    if outcome.probability > 0.0 {
                        outcome.collapsed = outcome.collapsed.apply_1q(target, &h)?;
                    }
                }
                Ok(outcomes)
            }
        }
    }

    fn measure_computational(&self, target: &str) -> Result<Vec<HeraldedOutcome>> {
        let pos = self.position(target)?;
        let bit = 1usize << self.shift(pos);
        let sub = &self.subsystems[pos];
        let mut branch_norm = [0.0f64; 2];
        for (idx, amp) in self.amps.iter().enumerate() {
            branch_norm[((idx & bit) != 0) as usize] += amp.norm_sqr();
        }
        let mut outcomes = Vec::with_capacity(2);
        for (value, &weight) in branch_norm.iter().enumerate() {
            let probability = weight / self.norm_sq;
            let mut amps = self.amps.clone();
            for (idx, amp) in amps.iter_mut().enumerate() {
                if (((idx & bit) != 0) as usize) != value {
                    *amp = Complex64::new(0.0, 0.0);
                } else if weight > 0.0 {
                    *amp /= Complex64::new(weight.sqrt(), 0.0);
                }
            }
            outcomes.push(HeraldedOutcome {
                outcome: sub.values[value].clone(),
                probability,
                collapsed: Self::assemble(self.subsystems.clone(), amps),
                correction: None,
            });
        }
        Ok(outcomes)
    }

    /// `|⟨a|b⟩|²` after renormalizing both states.  Registers must carry the
    /// same labels in the same order.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        if self.subsystems.len() != other.subsystems.len()
            || self
                .subsystems
                .iter()
                .zip(&other.subsystems)
                .any(|(a, b)| a.label != b.label)
        {
            return Err(Error::RegisterMismatch(format!(
                "[{}] vs [{}]",
                self.subsystems.iter().map(|s| s.label.as_str()).collect::<Vec<_>>().join(", "),
                other.subsystems.iter().map(|s| s.label.as_str()).collect::<Vec<_>>().join(", ")
            )));
        }
        if self.norm_sq < 1e-300 || other.norm_sq < 1e-300 {
            return Err(Error::ZeroNormState);
        }
        let overlap: Complex64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(overlap.norm_sqr() / (self.norm_sq * other.norm_sq))
    }

    /// Concatenate two registers into their tensor product.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        for s in &other.subsystems {
            if self.subsystems.iter().any(|t| t.label == s.label) {
                return Err(Error::DuplicateLabel(s.label.clone()));
            }
        }
        let mut subsystems = self.subsystems.clone();
        subsystems.extend(other.subsystems.iter().cloned());
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(Self::assemble(subsystems, amps))
    }

    /// Renormalize to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        if self.norm_sq < 1e-300 {
            return Err(Error::ZeroNormState);
        }
        let scale = Complex64::new(1.0 / self.norm_sq.sqrt(), 0.0);
        let amps = self.amps.iter().map(|a| a * scale).collect();
        Ok(Self::assemble(self.subsystems.clone(), amps))
    }

    /// Drop a subsystem that is in a definite computational basis state
    /// (e.g. after a measurement collapse), keeping the overall norm.
    pub fn remove_definite(&self, label: &str) -> Result<Self> {
        let pos = self.position(label)?;
        let bit = 1usize << self.shift(pos);
        let mut branch_norm = [0.0f64; 2];
        for (idx, amp) in self.amps.iter().enumerate() {
            branch_norm[((idx & bit) != 0) as usize] += amp.norm_sqr();
        }
        let total = branch_norm[0] + branch_norm[1];
        let keep = if branch_norm[1] <= tol::NORM_TOL * total.max(1e-300) {
            0
        } else if branch_norm[0] <= tol::NORM_TOL * total.max(1e-300) {
            1
        } else {
            return Err(Error::NotDefinite(label.to_string()));
        };
        let mut subsystems = self.subsystems.clone();
        subsystems.remove(pos);
        let mut amps = Vec::with_capacity(self.amps.len() / 2);
        for (idx, amp) in self.amps.iter().enumerate() {
            if (((idx & bit) != 0) as usize) == keep {
                amps.push(*amp);
            }
        }
        Ok(Self::assemble(subsystems, amps))
    }

    /// Split a product state across a cut: returns `(rest, factored)` where
    /// `factored` is the normalized state of the listed subsystems and `rest`
    /// keeps the overall norm.  Fails if the state is entangled across the cut
    /// (residual above `CROSS_CHECK_TOL`).  The split fixes global phases only
    /// up to a shared factor.
    pub fn factor_out(&self, labels: &[&str]) -> Result<(Self, Self)> {
        let mut cut_positions = Vec::with_capacity(labels.len());
        for label in labels {
            cut_positions.push(self.position(label)?);
        }
        let n = self.subsystems.len();
        let rest_positions: Vec<usize> =
            (0..n).filter(|p| !cut_positions.contains(p)).collect();
        let cut_dim = 1usize << cut_positions.len();
        let rest_dim = 1usize << rest_positions.len();

        // Matrix m[i][j]: i runs over the cut subsystems, j over the rest.
        let mut m = vec![vec![Complex64::new(0.0, 0.0); rest_dim]; cut_dim];
        for (idx, amp) in self.amps.iter().enumerate() {
            let mut i = 0usize;
            for &p in &cut_positions {
                i = (i << 1) | ((idx >> self.shift(p)) & 1);
            }
            let mut j = 0usize;
            for &p in &rest_positions {
                j = (j << 1) | ((idx >> self.shift(p)) & 1);
            }
            m[i][j] = *amp;
        }

        let total_norm_sq: f64 = self.norm_sq;
        if total_norm_sq < 1e-300 {
            return Err(Error::ZeroNormState);
        }
        // Rank-1 split: use the dominant cut row as the rest vector.
        let (i_star, _) = m
            .iter()
            .enumerate()
            .map(|(i, row)| (i, row.iter().map(|a| a.norm_sqr()).sum::<f64>()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty");
        let row_norm = m[i_star].iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let w: Vec<Complex64> = m[i_star].iter().map(|a| a / row_norm).collect();
        let u: Vec<Complex64> = m
            .iter()
            .map(|row| row.iter().zip(&w).map(|(a, wj)| a * wj.conj()).sum())
            .collect();
        let mut residual_sq = 0.0;
        for (i, row) in m.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                residual_sq += (a - u[i] * w[j]).norm_sqr();
            }
        }
        if residual_sq.sqrt() > tol::CROSS_CHECK_TOL * total_norm_sq.sqrt() {
            return Err(Error::NotSeparable(residual_sq.sqrt()));
        }

        let u_norm = u.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let factored_subs: Vec<Subsystem> =
            cut_positions.iter().map(|&p| self.subsystems[p].clone()).collect();
        let rest_subs: Vec<Subsystem> =
            rest_positions.iter().map(|&p| self.subsystems[p].clone()).collect();
        let factored = Self::assemble(factored_subs, u.iter().map(|a| a / u_norm).collect());
        let rest = Self::assemble(rest_subs, w.iter().map(|a| a * u_norm).collect());
        Ok((rest, factored))
    }

    /// Sample one branch from a heralded outcome set, weighted by
    /// probability.  Deterministic evolution stays in `measure`; Monte-Carlo
    /// runs are this thin layer plus a seeded generator owned by the caller.
    pub fn sample_outcome<'a, R: rand::Rng>(
        outcomes: &'a [HeraldedOutcome],
        rng: &mut R,
    ) -> &'a HeraldedOutcome {
        let total: f64 = outcomes.iter().map(|o| o.probability).sum();
        let mut draw = rng.gen_range(0.0..total.max(f64::MIN_POSITIVE));
        for outcome in outcomes {
            if draw < outcome.probability {
                return outcome;
            }
            draw -= outcome.probability;
        }
        outcomes.last().expect("non-empty outcome set")
    }

    /// Text dump: one line per basis state, amplitudes at 17 significant
    /// digits, in register order.
    pub fn to_debug_string(&self) -> String {
        let mut out = String::new();
        for (idx, amp) in self.amps.iter().enumerate() {
            let ket: Vec<&str> = self
                .subsystems
                .iter()
                .enumerate()
                .map(|(pos, sub)| sub.values[(idx >> self.shift(pos)) & 1].as_str())
                .collect();
            let _ = writeln!(out, "|{}> {:.16e} {:.16e}", ket.join(" "), amp.re, amp.im);
        }
        out
    }
}
