use std::collections::HashMap;

use super::{crossed_edge, dual_of_edge, DualSite, LatticeError, Site, VertexSet};

/// A simple closed path on the dual lattice, stored in canonical form.
///
/// The canonical form starts at the smallest site and walks towards the
/// smaller of its two neighbours, so two loops are equal exactly when they
/// trace the same set of dual edges, whatever the starting point or
/// orientation they were built with.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DualLoop {
    sites: Vec<DualSite>,
}

impl DualLoop {
    pub fn new(raw: Vec<DualSite>) -> Result<Self, LatticeError> {
        let n = raw.len();
        if n < 4 {
            return Err(LatticeError::InvalidLoop(format!("only {n} sites")));
        }
        if let Some(s) = raw.iter().find(|s| !s.is_valid()) {
            return Err(LatticeError::InvalidLoop(format!(
                "{s:?} is not a dual site (coordinates must be odd)"
            )));
        }
        for i in 0..n {
            let (a, b) = (raw[i], raw[(i + 1) % n]);
            if !a.is_adjacent(b) {
                return Err(LatticeError::InvalidLoop(format!(
                    "{a:?} and {b:?} are not adjacent"
                )));
            }
        }
        let mut sorted = raw.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(LatticeError::InvalidLoop("repeated site".into()));
        }
        Ok(DualLoop {
            sites: canonical_cycle(raw),
        })
    }

    /// The boundary of a set of primal sites, if that boundary is a single
    /// simple loop (the set is connected, has no holes and no diagonal
    /// pinches).
    pub fn around(set: &VertexSet) -> Result<Self, LatticeError> {
        let mut adj: HashMap<DualSite, Vec<DualSite>> = HashMap::new();
        for s in set.iter() {
            for n in s.neighbors() {
                if !set.contains(n) {
                    let (a, b) = dual_of_edge(s, n);
                    adj.entry(a).or_default().push(b);
                    adj.entry(b).or_default().push(a);
                }
            }
        }
        if adj.is_empty() {
            return Err(LatticeError::InvalidLoop("empty boundary".into()));
        }
        if adj.values().any(|v| v.len() != 2) {
            return Err(LatticeError::InvalidLoop(
                "boundary touches itself at a corner".into(),
            ));
        }
        let start = *adj.keys().min().unwrap();
        let mut path = vec![start];
        let mut prev = start;
        let mut cur = adj[&start][0];
        while cur != start {
            path.push(cur);
            let nb = &adj[&cur];
            let next = if nb[0] == prev { nb[1] } else { nb[0] };
            prev = cur;
            cur = next;
        }
        if path.len() != adj.len() {
            return Err(LatticeError::InvalidLoop(
                "boundary has several components".into(),
            ));
        }
        DualLoop::new(path)
    }

    /// The loop around the block `[x0, x1] x [y0, y1]` of primal sites.
    pub fn rectangle(x0: i64, y0: i64, x1: i64, y1: i64) -> Self {
        DualLoop::around(&VertexSet::rectangle(x0, y0, x1, y1)).expect("rectangle boundary")
    }

    /// The smallest loop, around the single site `s`.
    pub fn unit(s: Site) -> Self {
        DualLoop::rectangle(s.x, s.y, s.x, s.y)
    }

    pub fn sites(&self) -> &[DualSite] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (DualSite, DualSite)> + '_ {
        let n = self.sites.len();
        (0..n).map(move |i| (self.sites[i], self.sites[(i + 1) % n]))
    }

    /// Primal edges crossed by the loop.
    pub fn crossed_edges(&self) -> impl Iterator<Item = (Site, Site)> + '_ {
        self.edges().map(|(a, b)| crossed_edge(a, b))
    }

    /// Endpoints of the crossed primal edges: the sites removed from a
    /// domain when the loop is cut out of it.
    pub fn incident_sites(&self) -> VertexSet {
        self.crossed_edges().flat_map(|(u, v)| [u, v]).collect()
    }

    /// All primal sites around the loop's dual sites.
    pub fn corner_sites(&self) -> VertexSet {
        self.sites.iter().flat_map(|d| d.corners()).collect()
    }

    /// Whether the primal site `s` lies in the bounded face of the loop.
    pub fn encloses(&self, s: Site) -> bool {
        let (px, py) = (2 * s.x, 2 * s.y);
        // Ray towards +x: only vertical dual edges can cross the line y = py.
        let crossings = self
            .edges()
            .filter(|(a, b)| a.x == b.x && a.x > px && a.y.min(b.y) < py && a.y.max(b.y) > py)
            .count();
        crossings % 2 == 1
    }

    /// Twice the enclosed area, in lattice units (shoelace on doubled
    /// coordinates divided by 2).
    pub fn enclosed_cells(&self) -> i64 {
        let twice: i64 = self.edges().map(|(a, b)| a.x * b.y - b.x * a.y).sum();
        twice.abs() / 8
    }

    /// Loop length in lattice steps.
    pub fn perimeter(&self) -> usize {
        self.sites.len()
    }

    /// The same curve on a lattice `2^levels` times finer.
    pub fn refine(&self, levels: u32) -> DualLoop {
        let mut sites = self.sites.clone();
        for _ in 0..levels {
            let n = sites.len();
            let mut next = Vec::with_capacity(2 * n);
            for i in 0..n {
                let a = DualSite::new(2 * sites[i].x + 1, 2 * sites[i].y + 1);
                let b = DualSite::new(2 * sites[(i + 1) % n].x + 1, 2 * sites[(i + 1) % n].y + 1);
                next.push(a);
                next.push(DualSite::new((a.x + b.x) / 2, (a.y + b.y) / 2));
            }
            sites = next;
        }
        DualLoop {
            sites: canonical_cycle(sites),
        }
    }

    /// Map every site through `f`; the result is re-canonicalised.
    pub fn map(&self, f: impl Fn(DualSite) -> DualSite) -> Result<DualLoop, LatticeError> {
        DualLoop::new(self.sites.iter().map(|&d| f(d)).collect())
    }

    /// Physical coordinates of the sites for a given mesh exponent, matching
    /// the cell-centre placement of [`VertexSet::refine`].
    pub fn physical_points(&self, mesh_exponent: u32) -> Vec<(f64, f64)> {
        let h = 0.5f64.powi(mesh_exponent as i32);
        self.sites
            .iter()
            .map(|d| ((d.x as f64 / 2.0 + 0.5) * h, (d.y as f64 / 2.0 + 0.5) * h))
            .collect()
    }
}

fn canonical_cycle(sites: Vec<DualSite>) -> Vec<DualSite> {
    let n = sites.len();
    let (start, _) = sites.iter().enumerate().min_by_key(|(_, s)| **s).unwrap();
    let forward = sites[(start + 1) % n];
    let backward = sites[(start + n - 1) % n];
    if forward <= backward {
        (0..n).map(|i| sites[(start + i) % n]).collect()
    } else {
        (0..n).map(|i| sites[(start + n - i) % n]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_raw() -> Vec<DualSite> {
        vec![
            DualSite::new(1, 1),
            DualSite::new(-1, 1),
            DualSite::new(-1, -1),
            DualSite::new(1, -1),
        ]
    }

    #[test]
    fn canonical_form_ignores_start_and_orientation() {
        let a = DualLoop::new(unit_raw()).unwrap();
        let mut r = unit_raw();
        r.rotate_left(2);
        let b = DualLoop::new(r.clone()).unwrap();
        r.reverse();
        let c = DualLoop::new(r).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a, DualLoop::unit(Site::new(0, 0)));
        assert_eq!(DualLoop::new(a.sites().to_vec()).unwrap(), a);
    }

    #[test]
    fn rejects_bad_loops() {
        assert!(DualLoop::new(vec![DualSite::new(1, 1), DualSite::new(3, 1)]).is_err());
        assert!(DualLoop::new(vec![
            DualSite::new(1, 1),
            DualSite::new(3, 1),
            DualSite::new(3, 3),
            DualSite::new(2, 3),
        ])
        .is_err());
        let mut open = unit_raw();
        open[3] = DualSite::new(3, -1);
        assert!(DualLoop::new(open).is_err());
    }

    #[test]
    fn unit_loop_geometry() {
        let l = DualLoop::unit(Site::new(0, 0));
        assert_eq!(l.len(), 4);
        assert!(l.encloses(Site::new(0, 0)));
        assert!(!l.encloses(Site::new(1, 0)));
        assert_eq!(l.enclosed_cells(), 1);
        let inc = l.incident_sites();
        assert_eq!(inc.len(), 5);
        assert!(inc.contains(Site::new(0, 0)) && inc.contains(Site::new(-1, 0)));
        assert_eq!(l.corner_sites(), VertexSet::rectangle(-1, -1, 1, 1));
    }

    #[test]
    fn pinched_boundary_is_rejected() {
        let set = VertexSet::new([Site::new(0, 0), Site::new(1, 1)]);
        assert!(DualLoop::around(&set).is_err());
        let holed = VertexSet::rectangle(0, 0, 2, 2).difference(&VertexSet::new([Site::new(1, 1)]));
        assert!(DualLoop::around(&holed).is_err());
    }

    #[test]
    fn refine_matches_refined_block() {
        let l = DualLoop::rectangle(0, 0, 2, 1);
        assert_eq!(l.refine(0), l);
        assert_eq!(l.refine(1), DualLoop::rectangle(0, 0, 5, 3));
        assert_eq!(l.refine(2), l.refine(1).refine(1));
        assert_eq!(l.refine(1).enclosed_cells(), 4 * l.enclosed_cells());
    }
}
