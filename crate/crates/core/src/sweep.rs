//! Parameter sweeps over photon detuning or coupling strength, emitting
//! deterministic CSV tables.
//!
//! A sweep is described by a [`SweepSpec`]: which quantity family to
//! tabulate, which axis to scan, the grid, and the held-constant ratios.
//! Specs come from key/value config files (see `presets/*.conf`), from the
//! named presets compiled into the binary, or directly from code.  Identical
//! specs produce byte-identical CSV: floats are printed with 17 significant
//! digits and rows follow the axis order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::cavity::{reflection, CavityParams, ReflectionCoefficients};
use crate::error::{Error, Result};
use crate::gates::gate_metrics;
use crate::protocol::{
    distribution_metrics, psi_minus, psi_plus, swap_one_pcg, Parity,
};

/// Default coupling ratio: the trapped-ensemble experiment's
/// (g, κ, γ) = 2π×(215, 53, 3) MHz working point.
pub const DEFAULT_G_OVER_KAPPA: f64 = 215.0 / 53.0;
/// Default atomic decay ratio at the same working point.
pub const DEFAULT_GAMMA_OVER_KAPPA: f64 = 3.0 / 53.0;

/// Which column family a sweep tabulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    ReflectionMagnitudes,
    PhaseShifts,
    GateFidelities,
    GateEfficiencies,
    DistributionFidelities,
    DistributionEfficiencies,
}

impl Quantity {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "reflection_magnitudes" => Ok(Self::ReflectionMagnitudes),
            "phase_shifts" => Ok(Self::PhaseShifts),
            "gate_fidelities" => Ok(Self::GateFidelities),
            "gate_efficiencies" => Ok(Self::GateEfficiencies),
            "distribution_fidelities" => Ok(Self::DistributionFidelities),
            "distribution_efficiencies" => Ok(Self::DistributionEfficiencies),
            other => Err(Error::InvalidSweep(format!("unknown quantity `{other}`"))),
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Self::ReflectionMagnitudes => &["|r|", "|n|", "|r0|", "|r|^2+|n|^2"],
            Self::PhaseShifts => &["theta0/pi", "theta/pi", "dtheta/pi"],
            Self::GateFidelities => &["F_cpf", "F_pcg"],
            Self::GateEfficiencies => &["eta_cpf", "eta_pcg"],
            Self::DistributionFidelities => &["F_mh", "F_mv", "F_s"],
            Self::DistributionEfficiencies => &["eta_m", "eta_s"],
        }
    }
}

/// The swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Photon–cavity detuning δ′/κ.
    DeltaP,
    /// Coupling ratio g/κ.
    GOverKappa,
}

impl Axis {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "delta_p" => Ok(Self::DeltaP),
            "g_over_kappa" => Ok(Self::GOverKappa),
            other => Err(Error::InvalidSweep(format!("unknown axis `{other}`"))),
        }
    }

    pub fn column(self) -> &'static str {
        match self {
            Self::DeltaP => "delta_p_over_kappa",
            Self::GOverKappa => "g_over_kappa",
        }
    }
}

/// Full description of one sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub quantity: Quantity,
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    /// g/κ held constant when the axis is `delta_p`.
    pub g_over_kappa: f64,
    /// γ/κ, always held constant.
    pub gamma_over_kappa: f64,
    /// Cavity–dipole detuning Δ/κ, default 0.
    pub delta_over_kappa: f64,
    /// δ′/κ held constant when the axis is `g_over_kappa`.
    pub delta_p_over_kappa: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidSweep(format!("steps = {} (need >= 2)", self.steps)));
        }
        if self.start >= self.stop {
            return Err(Error::InvalidSweep(format!(
                "range start {} must be below stop {}",
                self.start, self.stop
            )));
        }
        for (name, v) in [
            ("start", self.start),
            ("stop", self.stop),
            ("g_over_kappa", self.g_over_kappa),
            ("gamma_over_kappa", self.gamma_over_kappa),
            ("delta_over_kappa", self.delta_over_kappa),
            ("delta_p_over_kappa", self.delta_p_over_kappa),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidSweep(format!("{name} is not finite")));
            }
        }
        Ok(())
    }

    pub fn header(&self) -> Vec<String> {
        let mut header = vec![self.axis.column().to_string()];
        header.extend(self.quantity.columns().iter().map(|c| c.to_string()));
        header
    }
}

/// Tabulated sweep output.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepTable {
    /// Render as CSV with 17-significant-digit floats; byte-identical for
    /// identical specs.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// Evaluate one grid point's columns.
fn columns_at(quantity: Quantity, coeffs: &ReflectionCoefficients) -> Result<Vec<f64>> {
    use std::f64::consts::PI;
    Ok(match quantity {
        Quantity::ReflectionMagnitudes => {
            let r = coeffs.r.norm();
            let n = coeffs.n.norm();
            vec![r, n, coeffs.r0.norm(), r * r + n * n]
        }
        Quantity::PhaseShifts => {
            vec![coeffs.theta0 / PI, coeffs.theta / PI, coeffs.dtheta / PI]
        }
        Quantity::GateFidelities => {
            let m = gate_metrics(coeffs);
            vec![m.f_cpf, m.f_pcg]
        }
        Quantity::GateEfficiencies => {
            let m = gate_metrics(coeffs);
            vec![m.eta_cpf, m.eta_pcg]
        }
        Quantity::DistributionFidelities => {
            let m = distribution_metrics(coeffs);
            vec![m.f_mh, m.f_mv, swap_even_branch_fidelity(coeffs)?]
        }
        Quantity::DistributionEfficiencies => {
            let m = distribution_metrics(coeffs);
            vec![m.eta_m, swap_heralding_probability(coeffs)?]
        }
    })
}

/// Fidelity of the even-parity swap branch against the target pair,
/// simulated with the one-check variant on the standard inputs.
pub fn swap_even_branch_fidelity(coeffs: &ReflectionCoefficients) -> Result<f64> {
    let records = standard_swap(coeffs)?;
    let target = psi_plus("E_A", "E_C")?;
    let rec = records
        .iter()
        .find(|r| r.p1 == Parity::Even)
        .expect("even branch always has weight for the standard inputs");
    rec.final_state.fidelity(&target)
}

/// Total heralding probability of the one-check swap on the standard inputs.
pub fn swap_heralding_probability(coeffs: &ReflectionCoefficients) -> Result<f64> {
    Ok(standard_swap(coeffs)?.iter().map(|r| r.probability).sum())
}

fn standard_swap(coeffs: &ReflectionCoefficients) -> Result<Vec<crate::protocol::SwapRecord>> {
    let ab1 = psi_minus("E_A", "E_B1")?;
    let b2c = psi_plus("E_B2", "E_C")?;
    swap_one_pcg(&ab1, &b2c, coeffs)
}

/// Run a sweep; one row per grid point, in axis order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let mut rows = Vec::with_capacity(spec.steps);
    for i in 0..spec.steps {
        let x = spec.start + (spec.stop - spec.start) * i as f64 / (spec.steps - 1) as f64;
        let (g, delta_p) = match spec.axis {
            Axis::DeltaP => (spec.g_over_kappa, x),
            Axis::GOverKappa => (x, spec.delta_p_over_kappa),
        };
        let params = CavityParams::new(g, 1.0, spec.gamma_over_kappa, spec.delta_over_kappa)?;
        let coeffs = reflection(&params, delta_p)?;
        let mut row = vec![x];
        row.extend(columns_at(spec.quantity, &coeffs)?);
        rows.push(row);
    }
    Ok(SweepTable { header: spec.header(), rows })
}

/// Names of the presets compiled into the library (the same files live under
/// `presets/`).
pub fn preset_names() -> &'static [&'static str] {
    &["fig2", "fig3", "fig7a", "fig7b", "fig8", "fig9", "fig10", "fibercavity"]
}

/// Source text of a named preset.
pub fn preset_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig2" => include_str!("../../../presets/fig2.conf"),
        "fig3" => include_str!("../../../presets/fig3.conf"),
        "fig7a" => include_str!("../../../presets/fig7a.conf"),
        "fig7b" => include_str!("../../../presets/fig7b.conf"),
        "fig8" => include_str!("../../../presets/fig8.conf"),
        "fig9" => include_str!("../../../presets/fig9.conf"),
        "fig10" => include_str!("../../../presets/fig10.conf"),
        "fibercavity" => include_str!("../../../presets/fibercavity.conf"),
        _ => return None,
    })
}

/// Load a named preset into a spec.
pub fn load_preset(name: &str) -> Result<SweepSpec> {
    let text = preset_text(name).ok_or_else(|| {
        Error::InvalidSweep(format!(
            "unknown preset `{name}` (available: {})",
            preset_names().join(", ")
        ))
    })?;
    parse_config(text)?.build()
}

/// Partially specified sweep, merged from config files and flag overrides.
#[derive(Debug, Clone, Default)]
pub struct SweepConfig {
    pub quantity: Option<Quantity>,
    pub axis: Option<Axis>,
    pub range: Option<(f64, f64, usize)>,
    pub settings: BTreeMap<String, f64>,
}

impl SweepConfig {
    /// Apply `other` on top of `self`.
    pub fn merge(mut self, other: SweepConfig) -> Self {
        if other.quantity.is_some() {
            self.quantity = other.quantity;
        }
        if other.axis.is_some() {
            self.axis = other.axis;
        }
        if other.range.is_some() {
            self.range = other.range;
        }
        self.settings.extend(other.settings);
        self
    }

    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        match key {
            "g_over_kappa" | "gamma_over_kappa" | "delta_over_kappa"
            | "delta_p_over_kappa" => {
                self.settings.insert(key.to_string(), value);
                Ok(())
            }
            other => Err(Error::InvalidSweep(format!("unknown setting `{other}`"))),
        }
    }

    pub fn build(self) -> Result<SweepSpec> {
        let quantity = self
            .quantity
            .ok_or_else(|| Error::InvalidSweep("missing `quantity`".to_string()))?;
        let axis = self.axis.ok_or_else(|| Error::InvalidSweep("missing `axis`".to_string()))?;
        let (start, stop, steps) = self
            .range
            .ok_or_else(|| Error::InvalidSweep("missing `range`".to_string()))?;
        let get = |key: &str, default: f64| *self.settings.get(key).unwrap_or(&default);
        let spec = SweepSpec {
            quantity,
            axis,
            start,
            stop,
            steps,
            g_over_kappa: get("g_over_kappa", DEFAULT_G_OVER_KAPPA),
            gamma_over_kappa: get("gamma_over_kappa", DEFAULT_GAMMA_OVER_KAPPA),
            delta_over_kappa: get("delta_over_kappa", 0.0),
            delta_p_over_kappa: get("delta_p_over_kappa", DEFAULT_GAMMA_OVER_KAPPA),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Parse a `key = value` config file (`#` starts a comment).
///
/// Keys: `quantity`, `axis`, `range` (`start:stop:steps`), and the ratio
/// settings `g_over_kappa`, `gamma_over_kappa`, `delta_over_kappa`,
/// `delta_p_over_kappa`.
pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let mut config = SweepConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidSweep(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "quantity" => config.quantity = Some(Quantity::parse(value)?),
            "axis" => config.axis = Some(Axis::parse(value)?),
            "range" => config.range = Some(parse_range(value)?),
            _ => {
                let parsed: f64 = value.parse().map_err(|_| {
                    Error::InvalidSweep(format!("line {}: bad number `{value}`", lineno + 1))
                })?;
                config.set(key, parsed).map_err(|_| {
                    Error::InvalidSweep(format!("line {}: unknown key `{key}`", lineno + 1))
                })?;
            }
        }
    }
    Ok(config)
}

/// Parse `start:stop:steps`.
pub fn parse_range(s: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidSweep(format!("range `{s}` must be start:stop:steps")));
    }
    let start: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::InvalidSweep(format!("bad range start `{}`", parts[0])))?;
    let stop: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| Error::InvalidSweep(format!("bad range stop `{}`", parts[1])))?;
    let steps: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| Error::InvalidSweep(format!("bad range steps `{}`", parts[2])))?;
    Ok((start, stop, steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol;

    #[test]
    fn fig2_preset_surfaces_the_module_invariants() {
        let spec = load_preset("fig2").unwrap();
        let table = run_sweep(&spec).unwrap();
        assert_eq!(table.header[3], "|r0|");
        assert_eq!(table.header[4], "|r|^2+|n|^2");
        for row in &table.rows {
            assert!((row[3] - 1.0).abs() < tol::NORM_TOL);
            assert!((row[4] - 1.0).abs() < tol::NORM_TOL);
        }
    }

    #[test]
    fn fig7a_preset_honours_the_quoted_fidelity_floor() {
        let spec = load_preset("fig7a").unwrap();
        assert!((spec.g_over_kappa - 4.0566).abs() < 1e-12);
        let table = run_sweep(&spec).unwrap();
        let gamma = spec.gamma_over_kappa;
        let min_inner = table
            .rows
            .iter()
            .filter(|row| row[0].abs() <= 0.5 * gamma + 1e-15)
            .map(|row| row[1])
            .fold(f64::INFINITY, f64::min);
        assert!(min_inner >= 0.9974 - tol::QUOTED_TOL);
    }

    #[test]
    fn fig8_preset_honours_the_quoted_efficiency_floors() {
        let spec = load_preset("fig8").unwrap();
        let table = run_sweep(&spec).unwrap();
        for row in table.rows.iter().filter(|row| row[0] >= 2.0283) {
            assert!(row[1] >= 0.9966 - tol::QUOTED_TOL, "eta_cpf dipped to {}", row[1]);
            assert!(row[2] >= 0.9932 - tol::QUOTED_TOL, "eta_pcg dipped to {}", row[2]);
        }
    }

    #[test]
    fn csv_is_deterministic_and_fixed_width() {
        let spec = load_preset("fig3").unwrap();
        let a = run_sweep(&spec).unwrap().to_csv();
        let b = run_sweep(&spec).unwrap().to_csv();
        assert_eq!(a, b);
        assert!(a.starts_with("delta_p_over_kappa,theta0/pi,theta/pi,dtheta/pi\n"));
    }

    #[test]
    fn config_round_trip_with_overrides() {
        let base = parse_config(
            "quantity = gate_fidelities\naxis = delta_p\nrange = -1:1:11\n# comment\n",
        )
        .unwrap();
        let mut overrides = SweepConfig::default();
        overrides.set("g_over_kappa", 2.0283).unwrap();
        let spec = base.merge(overrides).build().unwrap();
        assert_eq!(spec.steps, 11);
        assert!((spec.g_over_kappa - 2.0283).abs() < 1e-15);
        assert!((spec.gamma_over_kappa - DEFAULT_GAMMA_OVER_KAPPA).abs() < 1e-15);
    }

    #[test]
    fn bad_configs_are_rejected() {
        assert!(parse_config("quantity = nonsense\n").is_err());
        assert!(parse_config("range = 1:2\n").is_err());
        assert!(parse_config("quantity = phase_shifts\naxis = delta_p\nrange = 1:0:5\n")
            .unwrap()
            .build()
            .is_err());
        assert!(parse_config("quantity = phase_shifts\naxis = delta_p\nrange = 0:1:1\n")
            .unwrap()
            .build()
            .is_err());
        assert!(load_preset("fig99").is_err());
    }

    #[test]
    fn every_preset_parses_and_runs() {
        for name in preset_names() {
            let spec = load_preset(name).unwrap();
            let table = run_sweep(&spec).unwrap();
            assert_eq!(table.rows.len(), spec.steps, "preset {name}");
        }
    }
}
