//! Analytic circle diffeomorphisms through their lifts, rotation numbers,
//! the rational fixed-point criterion, and the rotation/commutator
//! factorisation of a conjugated rotation.
//!
//! Everything uses period-1 lifts: a diffeomorphism is a map `F: ℝ → ℝ`
//! with `F(x + 1) = F(x) + 1` (orientation preserving) or
//! `F(x + 1) = F(x) - 1` (reversing), the circle point `x` being
//! `exp(2πix)`. Möbius angles are given in radians and divided by `2π` when
//! the lift is formed; rotation amounts are in turns.

mod commutator;
mod diffeo;
mod io;
mod rotation;

use thiserror::Error;

pub use commutator::{commutator_decomposition_check, CommutatorReport};
pub use diffeo::{CircleDiffeo, INVERSE_TOLERANCE};
pub use io::DiffeoSpec;
pub use rotation::{
    is_monotone, mode_locking_window, rational_certificate, rotation_number, rotation_number_with_budget,
    rotation_profile, solve_alpha, AlphaSolution, RotationResult, CERTIFICATE_GRID, DEFAULT_BUDGET,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircleError {
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("map reverses orientation")]
    NotOrientationPreserving,
    #[error("{needed} iterations needed, budget is {budget}")]
    IterationBudgetExceeded { needed: u64, budget: u64 },
    #[error("rotation number decreased from {r_lo} at alpha = {alpha_lo} to {r_hi} at alpha = {alpha_hi}")]
    MonotonicityViolation {
        alpha_lo: f64,
        alpha_hi: f64,
        r_lo: f64,
        r_hi: f64,
    },
}

/// Signed distance from `x` to the nearest integer.
pub(crate) fn circle_gap(x: f64) -> f64 {
    x - x.round()
}
