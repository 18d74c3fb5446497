//! Numerical thresholds shared across the crate.

/// Relative magnitude below which a quaternion or pivot counts as zero.
pub const EPS_ZERO: f64 = 1e-13;

/// Absolute bound on the imaginary part of a cross ratio for a principal net.
pub const PRINCIPAL: f64 = 1e-9;

/// Relative residual accepted for a cross-ratio factorization `q = a_m / b_n`.
pub const FACTOR: f64 = 1e-8;

/// Minimal gap `|1 - lambda a_m|`, `|1 - lambda b_n|` before a frame is declared singular.
pub const LAMBDA_MARGIN: f64 = 1e-9;

/// Closure residual at which integration of a difference system is rejected.
pub const CLOSURE: f64 = 1e-8;

/// Relative singular-value threshold for co-sphericity rank tests.
pub const SPHERE_RANK: f64 = 1e-8;

/// Distance below which a point counts as lying on the boundary sphere.
pub const BOUNDARY: f64 = 1e-9;
