//! Numerical model of a heralded quantum repeater built from atomic ensembles
//! trapped in single-sided optical cavities.
//!
//! The library is organised around the physical layers of the repeater:
//!
//! - [`cavity`] — steady-state reflection of a single photon off a
//!   single-sided cavity holding an atomic ensemble: complex reflection and
//!   noise coefficients and the phase shifts they imprint.
//! - [`qstate`] — a small dense state-vector engine over labelled two-level
//!   subsystems (photon polarization, spatial arm, time bin, ensemble memory)
//!   with unitaries, non-unitary heralded reflection, and projective
//!   measurement.
//! - [`gates`] — the two composite gates: the photon–ensemble
//!   controlled-phase-flip (CPF) gate and the two-ensemble parity-check gate
//!   (PCG), plus their closed-form fidelity/efficiency metrics.
//! - [`transmission`] — polarization-error-free single-photon transmission:
//!   encoder, collective channel noise, π shifter, decoder, and the two-photon
//!   distribution front end.
//! - [`protocol`] — heralded entanglement distribution onto two remote
//!   ensembles and entanglement swapping at a middle node (two-PCG and
//!   one-PCG variants with feed-forward corrections).
//! - [`reference`] — an independent brute-force dense-matrix engine used to
//!   cross-check every composite pipeline amplitude by amplitude.
//! - [`sweep`] — parameter sweeps over detuning or coupling producing
//!   deterministic CSV tables, with the figure presets shipped in `presets/`.
//! - [`acceptance`] — the self-check suite behind `cavity-repeater accept`.
//!
//! All rates are expressed as ratios to the cavity decay rate κ; κ = 1 is the
//! numeric reference throughout.
//!
//! ```
//! use cavity_repeater::cavity::{CavityParams, reflection};
//!
//! let params = CavityParams::from_ratios(4.0566, 0.0566).unwrap();
//! let coeffs = reflection(&params, 0.0).unwrap();
//! // On resonance the empty cavity reflects with a π phase shift while the
//! // occupied cavity reflects almost perfectly in phase.
//! assert!((coeffs.r0.re + 1.0).abs() < 1e-12);
//! assert!((coeffs.r.re - 0.998282).abs() < 1e-6);
//! ```

pub mod acceptance;
pub mod cavity;
pub mod error;
pub mod gates;
pub mod protocol;
pub mod qstate;
pub mod reference;
pub mod sweep;
pub mod tol;
pub mod transmission;

pub use cavity::{CavityParams, PhasePoint, ReflectionCoefficients};
pub use error::{Error, Result};
pub use gates::GateMetrics;
pub use protocol::{DistributionMetrics, SwapRecord};
pub use qstate::{HeraldedOutcome, QState, Subsystem, SubsystemKind};
pub use transmission::ChannelNoise;
