//! Restriction functions as cocycles: evaluation, the cocycle identity,
//! gauge transforms, reconstruction of `g` from annuli, and defect probes.
//!
//! A restriction function takes a configuration `(ℓ, Ω', Ω)` with
//! `ℓ ⊂ Ω' ⊆ Ω`. In a [`NestedConfig`] the inner domain is `Ω'` and the
//! outer one is `Ω`.

mod continuity;
mod evaluator;
mod gauge;
mod reconstruct;
mod rho;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ising::IsingError;
use crate::lattice::generate::NestedTriple;
use crate::lattice::LatticeError;
use crate::loopsoup::SoupError;

pub use continuity::{continuity_probe, loop_distance, ContinuityReport, ContinuityRow, ProbeLoop};
pub use evaluator::{IsingEvaluator, RestrictionEvaluator};
pub use gauge::{gauge_transform, reference_config, GaugeFunction};
pub use reconstruct::{reconstruct_g, reconstruct_g_with, tube_annulus, GaugeSeed, Reconstruction};
pub use rho::rho_defect;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CocycleError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Ising(#[from] IsingError),
    #[error(transparent)]
    Soup(#[from] SoupError),
    #[error("no essential annulus around the loop: {0}")]
    NoEssentialAnnulus(String),
    #[error("image is not nested: {0}")]
    ImageNotNested(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Outcome of one cocycle check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocycleReport {
    pub id: String,
    pub evaluator: String,
    /// `f(ℓ,Ω₁,Ω₃) - f(ℓ,Ω₁,Ω₂) - f(ℓ,Ω₂,Ω₃)`.
    pub defect: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Evaluate the cocycle defect of `f` on `ℓ ⊂ Ω₁ ⊆ Ω₂ ⊆ Ω₃`.
pub fn check_cocycle(
    f: &RestrictionEvaluator,
    triple: &NestedTriple,
    tolerance: f64,
    id: impl Into<String>,
) -> Result<CocycleReport, CocycleError> {
    let f13 = f.eval(&triple.config(0, 2))?;
    let f12 = f.eval(&triple.config(0, 1))?;
    let f23 = f.eval(&triple.config(1, 2))?;
    let defect = f13 - f12 - f23;
    Ok(CocycleReport {
        id: id.into(),
        evaluator: f.name(),
        defect,
        tolerance,
        pass: defect.abs() <= tolerance,
    })
}
