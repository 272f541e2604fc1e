use super::{CocycleError, RestrictionEvaluator};
use crate::lattice::{AnnularDomain, DiscreteDomain, DualLoop, GridMap, NestedConfig};

/// `f(ψℓ, ψA, ψΩ) - f(ℓ, A, Ω)`, where `ψΩ` is the map's stand-in for the
/// ambient domain (the domain itself for isometries).
pub fn rho_defect(
    f: &RestrictionEvaluator,
    psi: &dyn GridMap,
    annulus: &AnnularDomain,
    lp: &DualLoop,
    ambient: &DiscreteDomain,
) -> Result<f64, CocycleError> {
    let before = NestedConfig::new(lp.clone(), annulus.domain().clone(), ambient.clone())?;
    let image = NestedConfig::new(
        psi.map_loop(lp),
        psi.map_domain(annulus.domain()),
        psi.ambient(ambient),
    )
    .map_err(|e| CocycleError::ImageNotNested(e.to_string()))?;
    Ok(f.eval(&image)? - f.eval(&before)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{DyadicRefinement, PointSymmetry, Site, Symmetry, VertexSet};

    fn lopsided_annulus() -> AnnularDomain {
        // thicker on the east side so that no symmetry maps it to itself
        let sites: VertexSet = VertexSet::rectangle(-3, -3, 4, 3)
            .iter()
            .filter(|s| s.x.abs() > 0 || s.y.abs() > 0)
            .collect();
        AnnularDomain::new(DiscreteDomain::new(sites, 0).unwrap(), Site::new(0, 0)).unwrap()
    }

    #[test]
    fn identity_and_symmetries_vanish() {
        let a = lopsided_annulus();
        let lp = DualLoop::rectangle(-1, -1, 1, 1);
        let omega = DiscreteDomain::centered_square(6, 0);
        let f = RestrictionEvaluator::Ust;
        assert_eq!(rho_defect(&f, &Symmetry::IDENTITY, &a, &lp, &omega).unwrap(), 0.0);
        for p in PointSymmetry::ALL {
            let d = rho_defect(&f, &Symmetry::point(p), &a, &lp, &omega).unwrap();
            assert!(d.abs() < 1e-10, "{p:?}: {d}");
        }
    }

    #[test]
    fn image_outside_ambient() {
        let a = lopsided_annulus();
        let lp = DualLoop::rectangle(-1, -1, 1, 1);
        let omega = DiscreteDomain::rectangle(-3, -4, 5, 4, 0);
        let err = rho_defect(&RestrictionEvaluator::Ust, &Symmetry::point(PointSymmetry::ROT180), &a, &lp, &omega);
        assert!(matches!(err, Err(CocycleError::ImageNotNested(_))));
    }

    #[test]
    fn dyadic_refinement_is_exact_for_coboundaries_of_physical_quantities() {
        let a = lopsided_annulus();
        let lp = DualLoop::rectangle(-1, -1, 1, 1);
        let omega = DiscreteDomain::centered_square(6, 0);
        let g = crate::cocycle::GaugeFunction::domain_area();
        let f = crate::cocycle::gauge_transform(&RestrictionEvaluator::Zero, g);
        let d = rho_defect(&f, &DyadicRefinement, &a, &lp, &omega).unwrap();
        assert!(d.abs() < 1e-12, "{d}");
    }
}
