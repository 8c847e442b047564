//! Numerical tolerances shared by every module.

/// Point equality on S³ and SO(3).
pub const EPS: f64 = 1e-9;

/// Allowed deviation of a renormalized unit quaternion from norm one.
pub const UNIT_EPS: f64 = 1e-12;

/// Norm below which a random 4-vector is resampled instead of normalized.
pub const UNDERFLOW_NORM: f64 = 1e-8;

/// Default pass threshold for the axiom suites (matched-pair distance).
pub const AXIOM_TOL: f64 = 1e-6;

/// Images closer than this are treated as a degenerate canonicalization.
pub const TIE_BAND: f64 = 10.0 * EPS;

/// Sample points with two G-images closer than this are rejected.
pub const GENERIC_SEPARATION: f64 = 100.0 * EPS;

/// Real-part preservation threshold for the suspension check.
pub const RE_PRESERVATION_TOL: f64 = 1e-12;

/// Residual bound for sampled solutions of `q x q⁻¹ = -x`.
pub const ANTIPODAL_TOL: f64 = 1e-9;

/// Accepted deviation from unit norm for command-line points before rejection.
pub const INPUT_NORM_TOL: f64 = 1e-3;
