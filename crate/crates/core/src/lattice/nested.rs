use super::{DiscreteDomain, DualLoop, LatticeError, Site, VertexSet};

/// The two pieces left after cutting a loop out of a domain.
///
/// Cutting removes every endpoint of every primal edge the loop crosses, so
/// no edge joins `inside` to `outside` and any log-partition quantity of the
/// cut domain is the sum of its values on the two pieces. Either piece may
/// be empty (the unit loop leaves nothing inside).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopComplement {
    pub inside: VertexSet,
    pub outside: VertexSet,
}

impl LoopComplement {
    pub fn len(&self) -> usize {
        self.inside.len() + self.outside.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn union(&self) -> VertexSet {
        self.inside.union(&self.outside)
    }

    pub fn parts(&self) -> [&VertexSet; 2] {
        [&self.inside, &self.outside]
    }
}

/// Cut `lp` out of `domain`.
pub fn subtract_loop(domain: &VertexSet, lp: &DualLoop) -> Result<LoopComplement, LatticeError> {
    let removed = lp.incident_sites();
    if let Some(s) = removed.iter().find(|&s| !domain.contains(s)) {
        return Err(LatticeError::LoopTouchesBoundary(s));
    }
    let (inside, outside): (Vec<Site>, Vec<Site>) = domain
        .iter()
        .filter(|&s| !removed.contains(s))
        .partition(|&s| lp.encloses(s));
    Ok(LoopComplement {
        inside: VertexSet::new(inside),
        outside: VertexSet::new(outside),
    })
}

/// A loop together with two nested domains, `loop ⊂ inner ⊆ outer`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NestedConfig {
    dual_loop: DualLoop,
    inner: DiscreteDomain,
    outer: DiscreteDomain,
}

impl NestedConfig {
    pub fn new(
        dual_loop: DualLoop,
        inner: DiscreteDomain,
        outer: DiscreteDomain,
    ) -> Result<Self, LatticeError> {
        if inner.mesh_exponent() != outer.mesh_exponent() {
            return Err(LatticeError::MeshMismatch(
                inner.mesh_exponent(),
                outer.mesh_exponent(),
            ));
        }
        if !inner.is_subset(&outer) {
            return Err(LatticeError::NotNested("inner domain is not inside outer".into()));
        }
        if let Some(s) = dual_loop.corner_sites().iter().find(|&s| !inner.contains(s)) {
            return Err(LatticeError::NotNested(format!(
                "loop is not strictly inside the inner domain (missing {s:?})"
            )));
        }
        Ok(NestedConfig {
            dual_loop,
            inner,
            outer,
        })
    }

    pub fn dual_loop(&self) -> &DualLoop {
        &self.dual_loop
    }

    pub fn inner(&self) -> &DiscreteDomain {
        &self.inner
    }

    pub fn outer(&self) -> &DiscreteDomain {
        &self.outer
    }

    pub fn mesh_exponent(&self) -> u32 {
        self.inner.mesh_exponent()
    }

    /// `inner \ loop`.
    pub fn inner_cut(&self) -> LoopComplement {
        subtract_loop(self.inner.sites(), &self.dual_loop).expect("validated config")
    }

    /// `outer \ loop`.
    pub fn outer_cut(&self) -> LoopComplement {
        subtract_loop(self.outer.sites(), &self.dual_loop).expect("validated config")
    }

    pub fn is_trivial(&self) -> bool {
        self.inner == self.outer
    }

    pub fn refine(&self, levels: u32) -> NestedConfig {
        NestedConfig {
            dual_loop: self.dual_loop.refine(levels),
            inner: self.inner.refine(levels),
            outer: self.outer.refine(levels),
        }
    }
}

/// A domain with exactly one hole.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnnularDomain {
    domain: DiscreteDomain,
    hole: Site,
}

impl AnnularDomain {
    /// Validate `domain` as an annulus with `hole` inside its bounded
    /// complementary component.
    pub fn new(domain: DiscreteDomain, hole: Site) -> Result<Self, LatticeError> {
        let comps = domain.sites().complement_components();
        if comps.len() != 2 {
            return Err(LatticeError::NotAnnular(format!(
                "complement has {} components",
                comps.len()
            )));
        }
        if !comps[1].contains(hole) {
            return Err(LatticeError::NotAnnular(format!(
                "{hole:?} is not in the hole"
            )));
        }
        Ok(AnnularDomain { domain, hole })
    }

    /// Find the hole automatically.
    pub fn detect(domain: DiscreteDomain) -> Result<Self, LatticeError> {
        let comps = domain.sites().complement_components();
        match comps.get(1).and_then(|c| c.iter().next()) {
            Some(hole) if comps.len() == 2 => AnnularDomain::new(domain, hole),
            _ => Err(LatticeError::NotAnnular(format!(
                "complement has {} components",
                comps.len()
            ))),
        }
    }

    pub fn domain(&self) -> &DiscreteDomain {
        &self.domain
    }

    pub fn hole(&self) -> Site {
        self.hole
    }

    pub fn into_domain(self) -> DiscreteDomain {
        self.domain
    }
}

/// Whether `lp` separates the hole of `annulus` from its outer boundary.
///
/// For a simple loop this is the same as enclosing the hole.
pub fn is_essential(lp: &DualLoop, annulus: &AnnularDomain) -> bool {
    lp.encloses(annulus.hole())
}
