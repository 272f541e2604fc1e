use serde::{Deserialize, Serialize};

use super::{circle_gap, CircleDiffeo, CircleError};

/// Default cap on lift iterations for one rotation number.
pub const DEFAULT_BUDGET: u64 = 100_000_000;
/// Sample points used to look for a fixed point of `f^q`.
pub const CERTIFICATE_GRID: usize = 1024;
const ZERO_TOLERANCE: f64 = 1e-12;
/// Denominators tried when attaching a certificate to a rotation number.
const AUTO_CERTIFICATE_Q: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationResult {
    /// Rotation number in `[0, 1)`.
    pub value: f64,
    /// The translation number `F^n(0)/n` before reduction mod 1.
    pub translation: f64,
    /// `1/n`; the true value is within this distance.
    pub error_bound: f64,
    pub iterations: u64,
    /// `(p, q)` with `q ≤ 8` when `f^q` has a certified fixed point.
    pub certificate: Option<(u64, u64)>,
}

/// Rotation number of `f` to within `eps`, from `n = ⌈1/eps⌉` iterates of
/// the lift at 0, using the bound `|F^n(x) - x - nr| < 1`.
pub fn rotation_number(f: &CircleDiffeo, eps: f64) -> Result<RotationResult, CircleError> {
    rotation_number_with_budget(f, eps, DEFAULT_BUDGET)
}

pub fn rotation_number_with_budget(f: &CircleDiffeo, eps: f64, budget: u64) -> Result<RotationResult, CircleError> {
    let mut r = translation(f, eps, budget)?;
    r.certificate = rational_certificate(f, AUTO_CERTIFICATE_Q)
        .filter(|&(p, q)| circle_gap(r.value - p as f64 / q as f64).abs() <= r.error_bound);
    Ok(r)
}

fn translation(f: &CircleDiffeo, eps: f64, budget: u64) -> Result<RotationResult, CircleError> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(CircleError::InvalidParameter(format!("eps = {eps}")));
    }
    if !f.preserves_orientation() {
        return Err(CircleError::NotOrientationPreserving);
    }
    let needed = (1.0 / eps).ceil();
    if needed > budget as f64 {
        return Err(CircleError::IterationBudgetExceeded {
            needed: needed.min(u64::MAX as f64) as u64,
            budget,
        });
    }
    let n = needed as u64;
    let t = f.iterate(0.0, n) / n as f64;
    Ok(RotationResult {
        value: t.rem_euclid(1.0),
        translation: t,
        error_bound: 1.0 / n as f64,
        iterations: n,
        certificate: None,
    })
}

/// The smallest `q ≤ q_max` for which `F^q(x) - x - p` changes sign (or
/// vanishes to 1e-12) on a 1024-point grid, as `(p mod q, q)`.
pub fn rational_certificate(f: &CircleDiffeo, q_max: u64) -> Option<(u64, u64)> {
    if !f.preserves_orientation() {
        return None;
    }
    let xs: Vec<f64> = (0..CERTIFICATE_GRID).map(|i| i as f64 / CERTIFICATE_GRID as f64).collect();
    let mut ys = xs.clone();
    for q in 1..=q_max {
        for y in ys.iter_mut() {
            *y = f.lift(*y);
        }
        let (lo, hi) = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| y - x)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), g| (lo.min(g), hi.max(g)));
        let p = (lo - ZERO_TOLERANCE).ceil();
        if p <= hi + ZERO_TOLERANCE {
            return Some(((p as i64).rem_euclid(q as i64) as u64, q));
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaSolution {
    /// In `[0, 1)`.
    pub alpha: f64,
    /// Rotation number of `R_alpha ∘ f` at the returned `alpha`.
    pub rotation: RotationResult,
    pub evaluations: usize,
}

/// `alpha` with `|r(R_alpha ∘ f) - theta| ≤ eps` by bisection on the
/// non-decreasing map `alpha ↦ r(R_alpha ∘ f)`. Every sampled pair is
/// checked against that monotonicity within the error bounds.
pub fn solve_alpha(f: &CircleDiffeo, theta: f64, eps: f64) -> Result<AlphaSolution, CircleError> {
    if !(0.0..1.0).contains(&theta) {
        return Err(CircleError::InvalidParameter(format!("theta = {theta} not in [0, 1)")));
    }
    let inner = eps / 2.0;
    let base = translation(f, inner, DEFAULT_BUDGET)?;
    // τ(α + 1) = τ(α) + 1, so the target lift value lies between α = 0 and 1
    let target = theta + (base.translation - theta).ceil();
    let mut samples: Vec<(f64, RotationResult)> = vec![(0.0, base)];
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut best = (0.0, base);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let r = translation(&CircleDiffeo::rotation(mid).compose(f), inner, DEFAULT_BUDGET)?;
        check_against(&samples, mid, &r)?;
        samples.push((mid, r));
        best = (mid, r);
        let gap = r.translation - target;
        if gap.abs() <= inner || hi - lo <= f64::EPSILON {
            break;
        }
        if gap < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (alpha, rot) = best;
    Ok(AlphaSolution {
        alpha: alpha.rem_euclid(1.0),
        rotation: rot,
        evaluations: samples.len(),
    })
}

fn check_against(samples: &[(f64, RotationResult)], alpha: f64, r: &RotationResult) -> Result<(), CircleError> {
    for (a, s) in samples {
        let slack = s.error_bound + r.error_bound;
        let (lo, hi) = if *a <= alpha { ((*a, s), (alpha, r)) } else { ((alpha, r), (*a, s)) };
        if lo.1.translation > hi.1.translation + slack {
            return Err(CircleError::MonotonicityViolation {
                alpha_lo: lo.0,
                alpha_hi: hi.0,
                r_lo: lo.1.translation,
                r_hi: hi.1.translation,
            });
        }
    }
    Ok(())
}

/// Rotation numbers of `R_alpha ∘ f` over `alphas`.
pub fn rotation_profile(f: &CircleDiffeo, alphas: &[f64], eps: f64) -> Result<Vec<RotationResult>, CircleError> {
    alphas
        .iter()
        .map(|&a| translation(&CircleDiffeo::rotation(a).compose(f), eps, DEFAULT_BUDGET))
        .collect()
}

/// Whether translation numbers sampled at increasing `alphas` never drop
/// by more than their combined error bounds.
pub fn is_monotone(alphas: &[f64], profile: &[RotationResult]) -> Result<(), CircleError> {
    for i in 1..profile.len().min(alphas.len()) {
        check_against(&[(alphas[i - 1], profile[i - 1])], alphas[i], &profile[i])?;
    }
    Ok(())
}

/// The interval of `alpha` on which `R_alpha ∘ f` has rotation number
/// `p/q`, located by bisecting where the grid extremes of
/// `F^q(x) + … - x` cross `p`. `None` when the window is thinner than the
/// grid can resolve.
pub fn mode_locking_window(f: &CircleDiffeo, p: u64, q: u64) -> Option<(f64, f64)> {
    if q == 0 || !f.preserves_orientation() {
        return None;
    }
    let xs: Vec<f64> = (0..CERTIFICATE_GRID).map(|i| i as f64 / CERTIFICATE_GRID as f64).collect();
    let (dmin, dmax) = xs
        .iter()
        .map(|&x| f.lift(x) - x)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| (lo.min(d), hi.max(d)));
    let target = p as f64;
    let extremes = |alpha: f64| {
        let g = CircleDiffeo::rotation(alpha).compose(f);
        xs.iter()
            .map(|&x| g.iterate(x, q) - x)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| (lo.min(d), hi.max(d)))
    };
    let ratio = p as f64 / q as f64;
    let bracket = (ratio - dmax - 0.5, ratio - dmin + 0.5);
    // first alpha where the maximum reaches p, then where the minimum does
    let cross = |pick_max: bool| {
        let (mut lo, mut hi) = bracket;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let (mn, mx) = extremes(mid);
            let v = if pick_max { mx } else { mn };
            if v < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let (a, b) = (cross(true), cross(false));
    (a < b).then_some((a, b))
}
