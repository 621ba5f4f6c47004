//! Steady-state input–output reflection of a single photon off a single-sided
//! cavity coupled to an atomic ensemble.
//!
//! With the ensemble holding one collective spin-wave excitation (state `S`)
//! the photon sees the coupled atom–cavity system and is reflected with the
//! complex coefficient `r`; part of the amplitude is scattered into the noise
//! channel with coefficient `n`.  With the ensemble in its collective ground
//! state `G` the cavity is effectively empty and the photon is reflected with
//! the pure phase `r0`.  In the strong-coupling regime `g² ≫ κγ/4` and near
//! resonance, `r ≈ +1` while `r0 ≈ −1`: the relative π phase shift is what
//! every gate in this crate is built from.
//!
//! Conventions: the photon–cavity detuning is `δ′ = ω − ω_c`, the
//! cavity–dipole detuning is `Δ = ω₀ − ω_c`, so the photon–dipole detuning
//! entering the susceptibility is `Δ′ = δ′ − Δ`.  All rates are in units of
//! the cavity decay rate κ.
//!
//! The steady-state formulas assume a photon much narrower than the cavity
//! line; they are evaluated as given at any detuning, and judging where that
//! assumption physically holds is left to the caller.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Physical rates of one cavity–ensemble node.
///
/// `kappa` is the reference unit; the figures of merit only depend on the
/// ratios `g/κ`, `γ/κ`, `Δ/κ` and `δ′/κ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    /// Collective coupling strength between the spin wave and the cavity mode.
    pub g: f64,
    /// Cavity field decay rate.
    pub kappa: f64,
    /// Atomic spontaneous emission rate.
    pub gamma: f64,
    /// Cavity–dipole detuning Δ = ω₀ − ω_c.
    pub delta_cd: f64,
}

impl CavityParams {
    pub fn new(g: f64, kappa: f64, gamma: f64, delta_cd: f64) -> Result<Self> {
        for (name, v) in [("g", g), ("kappa", kappa), ("gamma", gamma), ("delta_cd", delta_cd)] {
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("{name} = {v}")));
            }
        }
        if kappa <= 0.0 {
            return Err(Error::InvalidParams(format!("kappa = {kappa} must be > 0")));
        }
        if gamma < 0.0 {
            return Err(Error::InvalidParams(format!("gamma = {gamma} must be >= 0")));
        }
        if g < 0.0 {
            return Err(Error::InvalidParams(format!("g = {g} must be >= 0")));
        }
        Ok(Self { g, kappa, gamma, delta_cd })
    }

    /// Node with `kappa = 1`, cavity resonant with the dipole (`Δ = 0`).
    pub fn from_ratios(g_over_kappa: f64, gamma_over_kappa: f64) -> Result<Self> {
        Self::new(g_over_kappa, 1.0, gamma_over_kappa, 0.0)
    }
}

/// Complex reflection data of one node at one photon detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionCoefficients {
    /// Reflection off the occupied cavity (ensemble in `S`).
    pub r: Complex64,
    /// Reflection off the empty cavity (ensemble in `G`); a pure phase.
    pub r0: Complex64,
    /// Amplitude scattered out of the reflected mode (occupied cavity).
    pub n: Complex64,
    /// `arg(r)` in (−π, π].
    pub theta: f64,
    /// `arg(r0)` in (−π, π].
    pub theta0: f64,
    /// `|θ₀ − θ|` folded into [0, π].
    pub dtheta: f64,
}

impl ReflectionCoefficients {
    /// Build from the two reflection amplitudes, deriving phases and the
    /// leftover noise weight `|n|² = max(0, 1 − |r|²)`.
    pub fn from_r_r0(r: Complex64, r0: Complex64) -> Self {
        let n = Complex64::new((1.0 - r.norm_sqr()).max(0.0).sqrt(), 0.0);
        let theta = r.arg();
        let theta0 = r0.arg();
        Self { r, r0, n, theta, theta0, dtheta: fold_phase_gap(theta0, theta) }
    }

    /// Lossless strong-coupling limit: `r = +1`, `r0 = −1`.
    pub fn ideal() -> Self {
        Self::from_r_r0(Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0))
    }
}

/// `|a − b|` wrapped to [0, π].
fn fold_phase_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d > std::f64::consts::PI { 2.0 * std::f64::consts::PI - d } else { d }
}

/// Evaluate the reflection and noise coefficients at photon–cavity detuning
/// `delta_p = ω − ω_c`.
///
/// The occupied-cavity coefficient is
/// `r = [(δ′ − iκ/2)(Δ′ + iγ/2) − g²] / [(δ′ + iκ/2)(Δ′ + iγ/2) − g²]`
/// with `n = ig√(κγ)` over the same denominator, and the empty cavity gives
/// the pure phase `r0 = (δ′ − iκ/2)/(δ′ + iκ/2)`.  Energy is conserved:
/// `|r|² + |n|² = 1` identically, and `|r0| = 1`.
pub fn reflection(params: &CavityParams, delta_p: f64) -> Result<ReflectionCoefficients> {
    if !delta_p.is_finite() {
        return Err(Error::NonFinite(format!("delta_p = {delta_p}")));
    }
    let CavityParams { g, kappa, gamma, delta_cd } = *params;
    let dp = Complex64::new(delta_p, 0.0);
    let half_kappa = Complex64::new(0.0, kappa / 2.0);
    // Photon–dipole detuning.
    let susceptibility = Complex64::new(delta_p - delta_cd, gamma / 2.0);
    let g2 = Complex64::new(g * g, 0.0);

    let denom = (dp + half_kappa) * susceptibility - g2;
    let r = ((dp - half_kappa) * susceptibility - g2) / denom;
    let n = Complex64::new(0.0, g * (kappa * gamma).sqrt()) / denom;
    let r0 = (dp - half_kappa) / (dp + half_kappa);

    let theta = r.arg();
    let theta0 = r0.arg();
    Ok(ReflectionCoefficients { r, r0, n, theta, theta0, dtheta: fold_phase_gap(theta0, theta) })
}

/// One row of a phase-shift profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub delta_p: f64,
    pub theta0: f64,
    pub theta: f64,
    pub dtheta: f64,
}

/// Phase shifts θ₀, θ and their gap Δθ over a grid of photon detunings.
pub fn phase_profile(params: &CavityParams, grid: &[f64]) -> Result<Vec<PhasePoint>> {
    grid.iter()
        .map(|&delta_p| {
            let c = reflection(params, delta_p)?;
            Ok(PhasePoint { delta_p, theta0: c.theta0, theta: c.theta, dtheta: c.dtheta })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const G_STRONG: f64 = 4.0566;
    const GAMMA: f64 = 0.0566;

    fn strong() -> CavityParams {
        CavityParams::from_ratios(G_STRONG, GAMMA).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(CavityParams::new(1.0, 0.0, 0.1, 0.0).is_err());
        assert!(CavityParams::new(-1.0, 1.0, 0.1, 0.0).is_err());
        assert!(CavityParams::new(1.0, 1.0, -0.1, 0.0).is_err());
        assert!(CavityParams::new(f64::NAN, 1.0, 0.1, 0.0).is_err());
        assert!(reflection(&strong(), f64::INFINITY).is_err());
    }

    #[test]
    fn g_zero_reduces_to_empty_cavity() {
        let params = CavityParams::from_ratios(0.0, GAMMA).unwrap();
        for delta_p in [-2.0, -0.3, 0.0, 0.17, 5.0] {
            let c = reflection(&params, delta_p).unwrap();
            assert!((c.r - c.r0).norm() < 1e-14);
            assert!(c.n.norm() < 1e-14);
        }
    }

    #[test]
    fn resonant_occupied_reflection_matches_direct_evaluation() {
        // Independent evaluation of the zero-detuning formula
        // r(0) = (g² − κγ/4)/(g² + κγ/4), real.
        let g2 = G_STRONG * G_STRONG;
        let expected = (g2 - GAMMA / 4.0) / (g2 + GAMMA / 4.0);
        let c = reflection(&strong(), 0.0).unwrap();
        assert!((c.r.re - expected).abs() < 1e-14);
        assert!(c.r.im.abs() < 1e-14);
        assert!((c.r.re - 0.998282).abs() < 1e-6);
    }

    #[test]
    fn resonant_empty_cavity_is_minus_one() {
        let c = reflection(&strong(), 0.0).unwrap();
        assert!((c.r0 - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn half_kappa_empty_cavity_is_minus_i() {
        // Hand division: (1 − i)/(1 + i) = −i.
        let c = reflection(&strong(), 0.5).unwrap();
        assert!((c.r0 - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn phase_gap_is_pi_on_resonance() {
        let points = phase_profile(&strong(), &[0.0]).unwrap();
        assert!((points[0].dtheta - PI).abs() < 2e-3);
        assert!((points[0].theta0.abs() - PI).abs() < 1e-12);
        assert!(points[0].theta.abs() < 2e-3);
    }

    #[test]
    fn far_detuned_photon_sees_no_cavity() {
        let points = phase_profile(&strong(), &[100.0]).unwrap();
        assert!(points[0].theta0.abs() < 0.02);
        assert!(points[0].theta.abs() < 0.02);
        assert!(points[0].dtheta < 0.02);
    }

    #[test]
    fn phase_gap_decreases_with_detuning() {
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        let points = phase_profile(&strong(), &grid).unwrap();
        for pair in points.windows(2) {
            assert!(
                pair[1].dtheta < pair[0].dtheta + 1e-12,
                "dtheta not decreasing at delta_p = {}",
                pair[1].delta_p
            );
        }
    }

    #[test]
    fn energy_conservation_on_a_grid() {
        let params = CavityParams::new(2.7, 1.0, 0.31, 0.4).unwrap();
        for i in 0..200 {
            let delta_p = -10.0 + 20.0 * i as f64 / 199.0;
            let c = reflection(&params, delta_p).unwrap();
            assert!((c.r.norm_sqr() + c.n.norm_sqr() - 1.0).abs() < 1e-12);
            assert!((c.r0.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn detuning_symmetry_conjugates_coefficients() {
        let params = strong();
        for delta_p in [0.03, 0.4, 1.7, 9.0] {
            let plus = reflection(&params, delta_p).unwrap();
            let minus = reflection(&params, -delta_p).unwrap();
            assert!((minus.r - plus.r.conj()).norm() < 1e-12);
            assert!((minus.r0 - plus.r0.conj()).norm() < 1e-12);
        }
    }
}
