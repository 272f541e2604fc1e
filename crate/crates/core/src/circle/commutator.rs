use serde::{Deserialize, Serialize};

use super::{circle_gap, solve_alpha, CircleDiffeo, CircleError};

const GRID: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommutatorReport {
    pub theta: f64,
    pub beta: f64,
    /// `sup |f_β(x) - R_{-β}∘(h⁻¹∘R_θ∘h∘R_θ⁻¹)∘R_θ(x)|` over the grid.
    pub sup_defect: f64,
    /// `alpha` returned by [`solve_alpha`] for `f_β` and `theta`.
    pub solved_alpha: f64,
    /// Circle distance between `solved_alpha` and `beta`.
    pub alpha_error: f64,
    /// Rotation number of `R_alpha ∘ f_β` at the solved `alpha`.
    pub achieved_rotation: f64,
}

/// Build `f_β = R_{-β} ∘ h⁻¹ ∘ R_θ ∘ h` and compare it on a 256-point grid
/// with the factorisation `R_{-β} ∘ [h⁻¹, R_θ] ∘ R_θ`, evaluated one map at
/// a time. Also recovers `β` from `f_β` and `θ` with [`solve_alpha`].
pub fn commutator_decomposition_check(
    h: &CircleDiffeo,
    theta: f64,
    beta: f64,
    eps: f64,
) -> Result<CommutatorReport, CircleError> {
    if !h.preserves_orientation() {
        return Err(CircleError::NotOrientationPreserving);
    }
    let h_inv = h.invert();
    let f_beta = CircleDiffeo::rotation(-beta)
        .compose(&h_inv)
        .compose(&CircleDiffeo::rotation(theta))
        .compose(h);
    let mut sup_defect = 0.0f64;
    for i in 0..GRID {
        let x = i as f64 / GRID as f64;
        let lhs = f_beta.lift(x);
        let mut y = x + theta;
        y -= theta;
        y = h.lift(y);
        y += theta;
        y = h_inv.lift(y);
        let rhs = y - beta;
        sup_defect = sup_defect.max((lhs - rhs).abs());
    }
    let solved = solve_alpha(&f_beta, theta.rem_euclid(1.0), eps)?;
    Ok(CommutatorReport {
        theta,
        beta,
        sup_defect,
        solved_alpha: solved.alpha,
        alpha_error: circle_gap(solved.alpha - beta).abs(),
        achieved_rotation: solved.rotation.value,
    })
}
