//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid cavity parameters: {0}")]
    InvalidParams(String),

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("subsystem `{0}` already exists on this register")]
    LabelExists(String),

    #[error("initial amplitude pair for `{label}` has squared norm {norm_sq}, expected 1")]
    UnnormalizedPair { label: String, norm_sq: f64 },

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NonUnitary(f64),

    #[error("subsystem `{label}` has kind {found}, expected {expected}")]
    KindMismatch {
        label: String,
        expected: &'static str,
        found: &'static str,
    },

    #[error("cannot measure a zero-norm state")]
    ZeroNormState,

    #[error("registers do not match: {0}")]
    RegisterMismatch(String),

    #[error("subsystem `{0}` is not in a definite basis state")]
    NotDefinite(String),

    #[error("state does not factorize across the requested cut (residual {0:.3e})")]
    NotSeparable(f64),

    #[error("decoder input is not a channel-noised encoder output (leaked weight {0:.3e})")]
    DecodeLeakage(f64),

    #[error("invalid sweep configuration: {0}")]
    InvalidSweep(String),
}
