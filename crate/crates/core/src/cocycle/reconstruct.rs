use serde::{Deserialize, Serialize};

use super::{CocycleError, GaugeFunction, RestrictionEvaluator};
use crate::lattice::{AnnularDomain, DiscreteDomain, DualLoop, NestedConfig, VertexSet};

/// How `g(ℓ, A)` is assigned on the annuli used by the reconstruction.
#[derive(Debug, Clone)]
pub enum GaugeSeed {
    Zero,
    /// `g(ℓ, A) = f(ℓ, A₀, A)` with `A₀` the innermost annulus.
    FromEvaluator,
    Function(GaugeFunction),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reconstruction {
    /// `f(ℓ, A, Σ) + g(ℓ, A)` for the innermost annulus.
    pub value: f64,
    /// The same through the next annulus, if there is one.
    pub alternative: Option<f64>,
    /// `alternative - value`.
    pub discrepancy: Option<f64>,
}

const MAX_RADIUS: i64 = 8;

/// The tube of Chebyshev radius `radius` around `lp` inside `sigma`, with
/// the sites enclosed by the loop and not adjacent to it left out as the
/// hole.
pub fn tube_annulus(lp: &DualLoop, sigma: &DiscreteDomain, radius: i64) -> Result<AnnularDomain, CocycleError> {
    let corners = lp.corner_sites();
    let (x0, y0, x1, y1) = corners.bbox().expect("loops have corner sites");
    let core = VertexSet::rectangle(x0, y0, x1, y1)
        .iter()
        .any(|s| lp.encloses(s) && !corners.contains(s));
    if !core {
        return Err(CocycleError::NoEssentialAnnulus("loop encloses no free site".into()));
    }
    let tube: VertexSet = corners
        .dilate(radius)
        .iter()
        .filter(|&s| sigma.contains(s) && !(lp.encloses(s) && !corners.contains(s)))
        .collect();
    let domain = DiscreteDomain::new(tube, sigma.mesh_exponent())
        .map_err(|e| CocycleError::NoEssentialAnnulus(e.to_string()))?;
    let annulus = AnnularDomain::detect(domain).map_err(|e| CocycleError::NoEssentialAnnulus(e.to_string()))?;
    if !crate::lattice::is_essential(lp, &annulus) {
        return Err(CocycleError::NoEssentialAnnulus("loop is not essential".into()));
    }
    Ok(annulus)
}

/// `g(ℓ, Σ) := f(ℓ, A, Σ) + g(ℓ, A)` through the two smallest distinct
/// tubes around `lp`; their disagreement measures the dependence on `A`.
pub fn reconstruct_g(
    f: &RestrictionEvaluator,
    seed: &GaugeSeed,
    lp: &DualLoop,
    sigma: &DiscreteDomain,
) -> Result<Reconstruction, CocycleError> {
    let mut annuli: Vec<AnnularDomain> = Vec::new();
    for r in 0..=MAX_RADIUS {
        let Ok(a) = tube_annulus(lp, sigma, r) else { continue };
        if NestedConfig::new(lp.clone(), a.domain().clone(), sigma.clone()).is_err() {
            continue;
        }
        if annuli.last().is_some_and(|prev| prev.domain() == a.domain()) {
            continue;
        }
        annuli.push(a);
        if annuli.len() == 2 {
            break;
        }
    }
    if annuli.is_empty() {
        return Err(CocycleError::NoEssentialAnnulus(format!(
            "no tube of radius <= {MAX_RADIUS} inside the domain"
        )));
    }
    reconstruct_g_with(f, seed, lp, sigma, &annuli)
}

/// As [`reconstruct_g`] with explicit annuli `A₀ ⊆ A₁ ⊆ …`; the first is
/// used for the value and the second, if present, for the cross-check.
pub fn reconstruct_g_with(
    f: &RestrictionEvaluator,
    seed: &GaugeSeed,
    lp: &DualLoop,
    sigma: &DiscreteDomain,
    annuli: &[AnnularDomain],
) -> Result<Reconstruction, CocycleError> {
    let base = annuli
        .first()
        .ok_or_else(|| CocycleError::NoEssentialAnnulus("no annulus supplied".into()))?
        .domain();
    let through = |a: &AnnularDomain| -> Result<f64, CocycleError> {
        if !crate::lattice::is_essential(lp, a) {
            return Err(CocycleError::NoEssentialAnnulus("loop is not essential".into()));
        }
        let g_a = match seed {
            GaugeSeed::Zero => 0.0,
            GaugeSeed::FromEvaluator => f.eval(&NestedConfig::new(lp.clone(), base.clone(), a.domain().clone())?)?,
            GaugeSeed::Function(g) => g.eval(lp, a.domain()),
        };
        Ok(f.eval(&NestedConfig::new(lp.clone(), a.domain().clone(), sigma.clone())?)? + g_a)
    };
    let value = through(&annuli[0])?;
    let alternative = annuli.get(1).map(through).transpose()?;
    Ok(Reconstruction {
        value,
        alternative,
        discrepancy: alternative.map(|a| a - value),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::gauge_transform;

    fn block_loop() -> DualLoop {
        DualLoop::rectangle(0, 0, 2, 2)
    }

    #[test]
    fn tube_has_the_core_as_hole() {
        let sigma = DiscreteDomain::rectangle(-5, -5, 8, 8, 0);
        let a = tube_annulus(&block_loop(), &sigma, 0).unwrap();
        assert_eq!(a.hole(), crate::lattice::Site::new(1, 1));
        assert_eq!(a.domain().len(), 24);
        assert!(tube_annulus(&DualLoop::unit(crate::lattice::Site::new(0, 0)), &sigma, 1).is_err());
    }

    #[test]
    fn annular_sigma_gives_the_seed() {
        let lp = block_loop();
        let sigma = tube_annulus(&lp, &DiscreteDomain::rectangle(-5, -5, 8, 8, 0), 0)
            .unwrap()
            .into_domain();
        let g0 = GaugeFunction::domain_area();
        let r = reconstruct_g(&RestrictionEvaluator::Ust, &GaugeSeed::Function(g0.clone()), &lp, &sigma).unwrap();
        assert_eq!(r.value, g0.eval(&lp, &sigma));
        assert_eq!(r.alternative, None);
    }

    #[test]
    fn seed_from_evaluator_has_no_discrepancy() {
        let lp = block_loop();
        let sigma = DiscreteDomain::rectangle(-3, -4, 7, 6, 0);
        let f = RestrictionEvaluator::Ust;
        let r = reconstruct_g(&f, &GaugeSeed::FromEvaluator, &lp, &sigma).unwrap();
        assert!(r.discrepancy.unwrap().abs() < 1e-10, "{r:?}");
        // with a zero seed the discrepancy is f(ℓ, A', A)
        let z = reconstruct_g(&f, &GaugeSeed::Zero, &lp, &sigma).unwrap();
        let a0 = tube_annulus(&lp, &sigma, 0).unwrap().into_domain();
        let a1 = tube_annulus(&lp, &sigma, 1).unwrap().into_domain();
        let f01 = f.eval(&NestedConfig::new(lp.clone(), a0, a1).unwrap()).unwrap();
        assert!((z.discrepancy.unwrap() + f01).abs() < 1e-10, "{z:?} {f01}");
    }

    #[test]
    fn recovers_a_coboundary_up_to_a_constant() {
        let lp = block_loop();
        let g0 = GaugeFunction::domain_area().plus(&GaugeFunction::loop_length());
        let f = gauge_transform(&RestrictionEvaluator::Zero, g0.clone());
        let mut shifts = Vec::new();
        for (dx, dy) in [(0, 0), (1, 0), (2, 3), (0, 4), (3, 1)] {
            let sigma = DiscreteDomain::rectangle(-4 - dx, -4, 6 + dy, 6 + dx, 0);
            let r = reconstruct_g(&f, &GaugeSeed::Zero, &lp, &sigma).unwrap();
            shifts.push(r.value - g0.eval(&lp, &sigma));
            let exact = reconstruct_g(&f, &GaugeSeed::Function(g0.clone()), &lp, &sigma).unwrap();
            assert!((exact.value - g0.eval(&lp, &sigma)).abs() < 1e-12);
        }
        assert!(shifts.iter().all(|s| (s - shifts[0]).abs() < 1e-12), "{shifts:?}");
    }

    #[test]
    fn no_annulus_for_unit_loop() {
        let lp = DualLoop::unit(crate::lattice::Site::new(0, 0));
        let sigma = DiscreteDomain::centered_square(4, 0);
        assert!(matches!(
            reconstruct_g(&RestrictionEvaluator::Ust, &GaugeSeed::Zero, &lp, &sigma),
            Err(CocycleError::NoEssentialAnnulus(_))
        ));
    }
}
