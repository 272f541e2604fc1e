use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{LatticeError, Site};

/// A finite set of primal sites in canonical (sorted, deduplicated) order.
///
/// Unlike [`DiscreteDomain`] this may be empty or disconnected; it is the
/// type the determinant and partition-function engines consume, since the
/// complement of a loop in a domain is generally a union of components.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet {
    sites: Vec<Site>,
}

impl VertexSet {
    pub fn new(sites: impl IntoIterator<Item = Site>) -> Self {
        let mut sites: Vec<Site> = sites.into_iter().collect();
        sites.sort_unstable();
        sites.dedup();
        VertexSet { sites }
    }

    pub fn empty() -> Self {
        VertexSet::default()
    }

    /// All sites of the block `[x0, x1] x [y0, y1]` (inclusive).
    pub fn rectangle(x0: i64, y0: i64, x1: i64, y1: i64) -> Self {
        let mut sites = Vec::new();
        for x in x0..=x1 {
            for y in y0..=y1 {
                sites.push(Site::new(x, y));
            }
        }
        VertexSet { sites }
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn iter(&self) -> impl Iterator<Item = Site> + '_ {
        self.sites.iter().copied()
    }

    pub fn contains(&self, s: Site) -> bool {
        self.sites.binary_search(&s).is_ok()
    }

    pub fn index_of(&self, s: Site) -> Option<usize> {
        self.sites.binary_search(&s).ok()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.sites.iter().all(|&s| other.contains(s))
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::new(self.iter().chain(other.iter()))
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            sites: self.iter().filter(|&s| !other.contains(s)).collect(),
        }
    }

    /// Inclusive bounding box `(min_x, min_y, max_x, max_y)`.
    pub fn bbox(&self) -> Option<(i64, i64, i64, i64)> {
        let first = self.sites.first()?;
        let mut b = (first.x, first.y, first.x, first.y);
        for s in &self.sites {
            b.0 = b.0.min(s.x);
            b.1 = b.1.min(s.y);
            b.2 = b.2.max(s.x);
            b.3 = b.3.max(s.y);
        }
        Some(b)
    }

    /// Number of nearest-neighbour pairs with both ends in the set.
    pub fn internal_edge_count(&self) -> usize {
        self.sites
            .iter()
            .map(|s| {
                [Site::new(s.x + 1, s.y), Site::new(s.x, s.y + 1)]
                    .into_iter()
                    .filter(|&n| self.contains(n))
                    .count()
            })
            .sum()
    }

    /// Number of neighbours of `s` that are outside the set.
    pub fn exterior_degree(&self, s: Site) -> usize {
        s.neighbors().into_iter().filter(|&n| !self.contains(n)).count()
    }

    /// 4-connected components, each in canonical order, sorted by first site.
    pub fn components(&self) -> Vec<VertexSet> {
        let n = self.sites.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(i) = queue.pop_front() {
                let s = self.sites[i];
                comp.push(s);
                for nb in s.neighbors() {
                    if let Some(j) = self.index_of(nb) {
                        if !seen[j] {
                            seen[j] = true;
                            queue.push_back(j);
                        }
                    }
                }
            }
            out.push(VertexSet::new(comp));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        !self.is_empty() && self.components().len() == 1
    }

    /// Connected components of the complement inside the bounding box grown
    /// by one site. The first entry is always the unbounded component (the
    /// one containing the grown box's corner); the rest are holes.
    pub fn complement_components(&self) -> Vec<VertexSet> {
        let Some((x0, y0, x1, y1)) = self.bbox() else {
            return Vec::new();
        };
        let (x0, y0, x1, y1) = (x0 - 1, y0 - 1, x1 + 1, y1 + 1);
        let outside = VertexSet {
            sites: VertexSet::rectangle(x0, y0, x1, y1)
                .sites
                .into_iter()
                .filter(|&s| !self.contains(s))
                .collect(),
        };
        let mut comps = outside.components();
        let corner = Site::new(x0, y0);
        if let Some(i) = comps.iter().position(|c| c.contains(corner)) {
            let outer = comps.remove(i);
            comps.insert(0, outer);
        }
        comps
    }

    /// Sites at most `radius` steps (Chebyshev) away from some site of `self`.
    pub fn dilate(&self, radius: i64) -> VertexSet {
        let mut out = Vec::with_capacity(self.len() * (2 * radius as usize + 1).pow(2));
        for s in &self.sites {
            for dx in -radius..=radius {
                for dy in -radius..=radius {
                    out.push(Site::new(s.x + dx, s.y + dy));
                }
            }
        }
        VertexSet::new(out)
    }

    /// Blow every site up into a `2^levels x 2^levels` block.
    pub fn refine(&self, levels: u32) -> VertexSet {
        let f = 1i64 << levels;
        let mut out = Vec::with_capacity(self.len() << (2 * levels));
        for s in &self.sites {
            for dx in 0..f {
                for dy in 0..f {
                    out.push(Site::new(f * s.x + dx, f * s.y + dy));
                }
            }
        }
        VertexSet::new(out)
    }
}

impl FromIterator<Site> for VertexSet {
    fn from_iter<T: IntoIterator<Item = Site>>(iter: T) -> Self {
        VertexSet::new(iter)
    }
}

impl AsRef<VertexSet> for VertexSet {
    fn as_ref(&self) -> &VertexSet {
        self
    }
}

/// A non-empty, 4-connected set of sites at lattice spacing
/// `2^-mesh_exponent`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiscreteDomain {
    sites: VertexSet,
    mesh_exponent: u32,
}

/// Canonicalise and validate a raw vertex set.
pub fn validate_domain(
    raw: impl IntoIterator<Item = Site>,
    mesh_exponent: u32,
) -> Result<DiscreteDomain, LatticeError> {
    DiscreteDomain::new(VertexSet::new(raw), mesh_exponent)
}

impl DiscreteDomain {
    pub fn new(sites: VertexSet, mesh_exponent: u32) -> Result<Self, LatticeError> {
        if sites.is_empty() {
            return Err(LatticeError::EmptyDomain);
        }
        let components = sites.components().len();
        if components != 1 {
            return Err(LatticeError::DisconnectedDomain { components });
        }
        Ok(DiscreteDomain {
            sites,
            mesh_exponent,
        })
    }

    /// Block `[x0, x1] x [y0, y1]`; panics on an empty range.
    pub fn rectangle(x0: i64, y0: i64, x1: i64, y1: i64, mesh_exponent: u32) -> Self {
        assert!(x0 <= x1 && y0 <= y1, "empty rectangle");
        DiscreteDomain {
            sites: VertexSet::rectangle(x0, y0, x1, y1),
            mesh_exponent,
        }
    }

    /// Square of side `2 * half + 1` centred on the origin.
    pub fn centered_square(half: i64, mesh_exponent: u32) -> Self {
        Self::rectangle(-half, -half, half, half, mesh_exponent)
    }

    pub fn sites(&self) -> &VertexSet {
        &self.sites
    }

    pub fn mesh_exponent(&self) -> u32 {
        self.mesh_exponent
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, s: Site) -> bool {
        self.sites.contains(s)
    }

    pub fn is_subset(&self, other: &DiscreteDomain) -> bool {
        self.sites.is_subset(&other.sites)
    }

    pub fn refine(&self, levels: u32) -> DiscreteDomain {
        DiscreteDomain {
            sites: self.sites.refine(levels),
            mesh_exponent: self.mesh_exponent + levels,
        }
    }
}

impl AsRef<VertexSet> for DiscreteDomain {
    fn as_ref(&self) -> &VertexSet {
        &self.sites
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_site_is_valid() {
        let d = validate_domain([Site::new(0, 0)], 0).unwrap();
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn diagonal_gap_is_disconnected() {
        let err = validate_domain([Site::new(0, 0), Site::new(2, 0)], 0).unwrap_err();
        assert_eq!(err, LatticeError::DisconnectedDomain { components: 2 });
        let err = validate_domain([Site::new(0, 0), Site::new(1, 1)], 0).unwrap_err();
        assert_eq!(err, LatticeError::DisconnectedDomain { components: 2 });
    }

    #[test]
    fn empty_is_rejected() {
        assert_eq!(validate_domain([], 0).unwrap_err(), LatticeError::EmptyDomain);
    }

    #[test]
    fn five_by_five_block() {
        let raw: Vec<Site> = (0..5)
            .flat_map(|x| (0..5).map(move |y| Site::new(x, y)))
            .rev()
            .collect();
        let d = validate_domain(raw, 2).unwrap();
        assert_eq!(d.len(), 25);
        assert_eq!(d, DiscreteDomain::rectangle(0, 0, 4, 4, 2));
        assert_eq!(d.sites().internal_edge_count(), 40);
    }

    #[test]
    fn refine_identity_and_composition() {
        let d = validate_domain([Site::new(0, 0), Site::new(1, 0), Site::new(1, -1)], 1).unwrap();
        assert_eq!(d.refine(0), d);
        assert_eq!(d.refine(1).refine(1), d.refine(2));
        let single = validate_domain([Site::new(0, 0)], 0).unwrap();
        assert_eq!(single.refine(1), DiscreteDomain::rectangle(0, 0, 1, 1, 1));
    }

    #[test]
    fn square_annulus_has_one_hole() {
        let ring = VertexSet::rectangle(0, 0, 5, 5).difference(&VertexSet::rectangle(2, 2, 3, 3));
        let comps = ring.complement_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[1], VertexSet::rectangle(2, 2, 3, 3));
    }
}
