//! Every numeric tolerance used by the crate, in one place.

/// Exact bookkeeping: norms, probability sums, energy conservation, ideal-limit
/// state reproduction.
pub const NORM_TOL: f64 = 1e-12;

/// Unitarity check on 2×2 matrices fed to `apply_1q`.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Closed-form vs simulation cross-checks and brute-force oracle agreement.
pub const CROSS_CHECK_TOL: f64 = 1e-10;

/// Leakage allowed in the decoder recombination before the input is rejected.
pub const LEAKAGE_TOL: f64 = 1e-10;

/// Tolerance on four-digit quoted values (rounding of the reported numbers).
pub const QUOTED_TOL: f64 = 5e-4;
