use super::{DiscreteDomain, DualLoop, DualSite, NestedConfig, Site, VertexSet};

/// One of the eight symmetries of the square fixing the origin, as an
/// integer orthogonal matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PointSymmetry {
    m: [[i64; 2]; 2],
}

impl PointSymmetry {
    pub const IDENTITY: PointSymmetry = PointSymmetry { m: [[1, 0], [0, 1]] };
    pub const ROT90: PointSymmetry = PointSymmetry { m: [[0, -1], [1, 0]] };
    pub const ROT180: PointSymmetry = PointSymmetry { m: [[-1, 0], [0, -1]] };
    pub const ROT270: PointSymmetry = PointSymmetry { m: [[0, 1], [-1, 0]] };
    pub const FLIP_X: PointSymmetry = PointSymmetry { m: [[-1, 0], [0, 1]] };
    pub const FLIP_Y: PointSymmetry = PointSymmetry { m: [[1, 0], [0, -1]] };
    pub const DIAGONAL: PointSymmetry = PointSymmetry { m: [[0, 1], [1, 0]] };
    pub const ANTI_DIAGONAL: PointSymmetry = PointSymmetry { m: [[0, -1], [-1, 0]] };

    pub const ALL: [PointSymmetry; 8] = [
        Self::IDENTITY,
        Self::ROT90,
        Self::ROT180,
        Self::ROT270,
        Self::FLIP_X,
        Self::FLIP_Y,
        Self::DIAGONAL,
        Self::ANTI_DIAGONAL,
    ];

    fn apply(&self, x: i64, y: i64) -> (i64, i64) {
        (
            self.m[0][0] * x + self.m[0][1] * y,
            self.m[1][0] * x + self.m[1][1] * y,
        )
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PointSymmetry) -> PointSymmetry {
        let a = self.m;
        let b = other.m;
        let mut m = [[0; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        PointSymmetry { m }
    }

    pub fn inverse(&self) -> PointSymmetry {
        PointSymmetry {
            m: [[self.m[0][0], self.m[1][0]], [self.m[0][1], self.m[1][1]]],
        }
    }

    pub fn preserves_orientation(&self) -> bool {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0] == 1
    }
}

/// A lattice isometry `p ↦ point(p) + translation`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Symmetry {
    pub point: PointSymmetry,
    pub translation: (i64, i64),
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry {
        point: PointSymmetry::IDENTITY,
        translation: (0, 0),
    };

    pub fn new(point: PointSymmetry, translation: (i64, i64)) -> Self {
        Symmetry { point, translation }
    }

    pub fn point(point: PointSymmetry) -> Self {
        Symmetry::new(point, (0, 0))
    }

    pub fn translate(dx: i64, dy: i64) -> Self {
        Symmetry::new(PointSymmetry::IDENTITY, (dx, dy))
    }

    pub fn site(&self, s: Site) -> Site {
        let (x, y) = self.point.apply(s.x, s.y);
        Site::new(x + self.translation.0, y + self.translation.1)
    }

    pub fn dual_site(&self, d: DualSite) -> DualSite {
        let (x, y) = self.point.apply(d.x, d.y);
        DualSite::new(x + 2 * self.translation.0, y + 2 * self.translation.1)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Symmetry) -> Symmetry {
        let (tx, ty) = self.point.apply(other.translation.0, other.translation.1);
        Symmetry {
            point: self.point.compose(&other.point),
            translation: (tx + self.translation.0, ty + self.translation.1),
        }
    }

    pub fn inverse(&self) -> Symmetry {
        let inv = self.point.inverse();
        let (tx, ty) = inv.apply(self.translation.0, self.translation.1);
        Symmetry {
            point: inv,
            translation: (-tx, -ty),
        }
    }

    pub fn apply_config(&self, cfg: &NestedConfig) -> NestedConfig {
        NestedConfig::new(
            self.map_loop(cfg.dual_loop()),
            self.map_domain(cfg.inner()),
            self.map_domain(cfg.outer()),
        )
        .expect("isometries preserve nesting")
    }
}

/// A map acting on lattice objects, used to compare a configuration with
/// its image.
pub trait GridMap {
    fn map_sites(&self, sites: &VertexSet) -> VertexSet;

    fn map_loop(&self, lp: &DualLoop) -> DualLoop;

    /// The image of `domain`, at the image's mesh exponent.
    fn map_domain(&self, domain: &DiscreteDomain) -> DiscreteDomain;

    /// The domain that plays the role of `ambient` once the map has been
    /// applied: unchanged for isometries, re-discretised for maps that
    /// change the mesh.
    fn ambient(&self, ambient: &DiscreteDomain) -> DiscreteDomain;
}

impl GridMap for Symmetry {
    fn map_sites(&self, sites: &VertexSet) -> VertexSet {
        sites.iter().map(|s| self.site(s)).collect()
    }

    fn map_loop(&self, lp: &DualLoop) -> DualLoop {
        lp.map(|d| self.dual_site(d)).expect("isometries map loops to loops")
    }

    fn map_domain(&self, domain: &DiscreteDomain) -> DiscreteDomain {
        DiscreteDomain::new(self.map_sites(domain.sites()), domain.mesh_exponent())
            .expect("isometries preserve connectivity")
    }

    fn ambient(&self, ambient: &DiscreteDomain) -> DiscreteDomain {
        ambient.clone()
    }
}

/// Scaling by two in lattice units: every object is re-discretised on the
/// next finer mesh, so the physical configuration is unchanged.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DyadicRefinement;

impl GridMap for DyadicRefinement {
    fn map_sites(&self, sites: &VertexSet) -> VertexSet {
        sites.refine(1)
    }

    fn map_loop(&self, lp: &DualLoop) -> DualLoop {
        lp.refine(1)
    }

    fn map_domain(&self, domain: &DiscreteDomain) -> DiscreteDomain {
        domain.refine(1)
    }

    fn ambient(&self, ambient: &DiscreteDomain) -> DiscreteDomain {
        ambient.refine(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_laws() {
        use PointSymmetry as P;
        assert_eq!(P::ROT90.compose(&P::ROT90), P::ROT180);
        assert_eq!(P::ROT90.compose(&P::ROT270), P::IDENTITY);
        for p in P::ALL {
            assert_eq!(p.compose(&p.inverse()), P::IDENTITY);
        }
        for p in [P::FLIP_X, P::FLIP_Y, P::DIAGONAL, P::ANTI_DIAGONAL] {
            assert_eq!(p.compose(&p), P::IDENTITY);
            assert!(!p.preserves_orientation());
        }
        let s = Symmetry::new(P::ROT90, (3, -1));
        let t = Symmetry::new(P::FLIP_Y, (-2, 5));
        let x = Site::new(4, 7);
        assert_eq!(s.compose(&t).site(x), s.site(t.site(x)));
        assert_eq!(s.inverse().site(s.site(x)), x);
    }

    #[test]
    fn dual_sites_follow_primal_sites() {
        let s = Symmetry::new(PointSymmetry::ANTI_DIAGONAL, (2, -3));
        let x = Site::new(1, 2);
        let mapped: Vec<Site> = x.corners().iter().flat_map(|c| s.dual_site(*c).corners()).collect();
        assert!(mapped.iter().filter(|&&m| m == s.site(x)).count() == 4);
    }

    #[test]
    fn config_identity_and_rotation() {
        let cfg = NestedConfig::new(
            DualLoop::rectangle(0, 0, 2, 1),
            DiscreteDomain::rectangle(-1, -1, 4, 3, 0),
            DiscreteDomain::rectangle(-3, -2, 6, 4, 0),
        )
        .unwrap();
        assert_eq!(Symmetry::IDENTITY.apply_config(&cfg), cfg);
        let r90 = Symmetry::point(PointSymmetry::ROT90);
        let r180 = Symmetry::point(PointSymmetry::ROT180);
        assert_eq!(r90.apply_config(&r90.apply_config(&cfg)), r180.apply_config(&cfg));
        let f = Symmetry::point(PointSymmetry::FLIP_X);
        assert_eq!(f.apply_config(&f.apply_config(&cfg)), cfg);
    }
}
