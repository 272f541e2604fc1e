//! Discrete domains on the square lattice, dual loops and the surgery
//! between them.
//!
//! Primal sites are integer pairs. Dual sites (face centres) are stored on
//! the doubled lattice: the face centre `(x + 1/2, y + 1/2)` is the pair
//! `(2x + 1, 2y + 1)`, so every dual site has two odd coordinates and two
//! dual sites are adjacent when they differ by 2 in exactly one coordinate.

mod domain;
mod dual_loop;
pub mod generate;
pub mod io;
mod nested;
mod symmetry;

pub use domain::{validate_domain, DiscreteDomain, VertexSet};
pub use dual_loop::DualLoop;
pub use nested::{is_essential, subtract_loop, AnnularDomain, LoopComplement, NestedConfig};
pub use symmetry::{DyadicRefinement, GridMap, PointSymmetry, Symmetry};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A vertex of the primal lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Site {
    pub x: i64,
    pub y: i64,
}

impl Site {
    pub const fn new(x: i64, y: i64) -> Self {
        Site { x, y }
    }

    /// The four lattice neighbours, in the order east, north, west, south.
    pub fn neighbors(self) -> [Site; 4] {
        [
            Site::new(self.x + 1, self.y),
            Site::new(self.x, self.y + 1),
            Site::new(self.x - 1, self.y),
            Site::new(self.x, self.y - 1),
        ]
    }

    pub fn is_adjacent(self, other: Site) -> bool {
        (self.x - other.x).abs() + (self.y - other.y).abs() == 1
    }

    /// The four dual sites at the corners of this vertex's cell.
    pub fn corners(self) -> [DualSite; 4] {
        let (x, y) = (2 * self.x, 2 * self.y);
        [
            DualSite::new(x + 1, y + 1),
            DualSite::new(x - 1, y + 1),
            DualSite::new(x - 1, y - 1),
            DualSite::new(x + 1, y - 1),
        ]
    }
}

impl From<(i64, i64)> for Site {
    fn from((x, y): (i64, i64)) -> Self {
        Site::new(x, y)
    }
}

/// A vertex of the dual lattice in doubled coordinates (both odd).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DualSite {
    pub x: i64,
    pub y: i64,
}

impl DualSite {
    pub const fn new(x: i64, y: i64) -> Self {
        DualSite { x, y }
    }

    pub fn is_valid(self) -> bool {
        self.x.rem_euclid(2) == 1 && self.y.rem_euclid(2) == 1
    }

    pub fn is_adjacent(self, other: DualSite) -> bool {
        let (dx, dy) = ((self.x - other.x).abs(), (self.y - other.y).abs());
        (dx == 2 && dy == 0) || (dx == 0 && dy == 2)
    }

    /// The four primal vertices around this dual site.
    pub fn corners(self) -> [Site; 4] {
        let (x0, y0) = ((self.x - 1).div_euclid(2), (self.y - 1).div_euclid(2));
        [
            Site::new(x0, y0),
            Site::new(x0 + 1, y0),
            Site::new(x0, y0 + 1),
            Site::new(x0 + 1, y0 + 1),
        ]
    }
}

/// The primal edge crossed by the dual edge `a`–`b` (which must be adjacent).
pub fn crossed_edge(a: DualSite, b: DualSite) -> (Site, Site) {
    debug_assert!(a.is_adjacent(b));
    if a.x == b.x {
        // vertical dual edge crosses a horizontal primal edge
        let my = (a.y + b.y) / 2;
        let y = my.div_euclid(2);
        let x0 = (a.x - 1).div_euclid(2);
        (Site::new(x0, y), Site::new(x0 + 1, y))
    } else {
        let mx = (a.x + b.x) / 2;
        let x = mx.div_euclid(2);
        let y0 = (a.y - 1).div_euclid(2);
        (Site::new(x, y0), Site::new(x, y0 + 1))
    }
}

/// The dual edge crossing the primal edge `u`–`v` (which must be adjacent).
pub fn dual_of_edge(u: Site, v: Site) -> (DualSite, DualSite) {
    let (u, v) = if u <= v { (u, v) } else { (v, u) };
    if u.y == v.y {
        debug_assert_eq!(v.x, u.x + 1);
        let x = 2 * u.x + 1;
        (DualSite::new(x, 2 * u.y - 1), DualSite::new(x, 2 * u.y + 1))
    } else {
        debug_assert_eq!(v.y, u.y + 1);
        let y = 2 * u.y + 1;
        (DualSite::new(2 * u.x - 1, y), DualSite::new(2 * u.x + 1, y))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("domain has no vertices")]
    EmptyDomain,
    #[error("domain is not 4-connected ({components} components)")]
    DisconnectedDomain { components: usize },
    #[error("invalid dual loop: {0}")]
    InvalidLoop(String),
    #[error("loop touches the domain boundary at {0:?}")]
    LoopTouchesBoundary(Site),
    #[error("configuration is not nested: {0}")]
    NotNested(String),
    #[error("domain is not an annulus: {0}")]
    NotAnnular(String),
    #[error("mesh exponents differ ({0} vs {1})")]
    MeshMismatch(u32, u32),
    #[error("could not generate a valid configuration after {0} attempts")]
    GenerationExhausted(usize),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_edge_round_trip() {
        let u = Site::new(3, -2);
        for v in u.neighbors() {
            let (a, b) = dual_of_edge(u, v);
            assert!(a.is_valid() && b.is_valid() && a.is_adjacent(b));
            let (p, q) = crossed_edge(a, b);
            let mut want = [u, v];
            want.sort();
            assert_eq!([p, q], want);
        }
    }

    #[test]
    fn corners_are_inverse() {
        let s = Site::new(-4, 7);
        for c in s.corners() {
            assert!(c.corners().contains(&s));
        }
    }
}
