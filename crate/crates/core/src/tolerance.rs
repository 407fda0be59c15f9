//! Numerical tolerances shared across the engines.

/// Validation tolerance for normalization and nonnegativity.
pub const NORM: f64 = 1e-9;

/// Probability at or below which an event counts as having zero evidence.
pub const ZERO: f64 = 1e-12;

/// Feasibility and optimality tolerance for linear programs, also used for
/// expected-utility ties.
pub const LP: f64 = 1e-8;

/// Separates an isolated zero of an expectation from a region where it vanishes.
pub const STRICT: f64 = 1e-6;

/// Comparison tolerance for values printed in rounded form in published tables.
pub const PAPER: f64 = 5e-3;

/// `|a - b| <= tol`, with a few ulps of slack so that decimal literals such as
/// `0.065 - 0.06` compare as their decimal values would.
pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol + 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0)
}
