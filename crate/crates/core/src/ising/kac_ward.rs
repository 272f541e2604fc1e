//! Kac-Ward determinant engine.
//!
//! With + boundary conditions a configuration is the same thing as its set
//! `D` of disagreeing edges, and `Z = e^{β|E|} Σ_D x^{|D|}` with
//! `x = e^{-2β}`, where `E` holds the internal edges plus one edge per
//! exterior neighbour. Seen on the dual lattice, the sets `D` are the even
//! subgraphs of the dual graph of `E`, restricted by one parity condition per
//! hole: the spins just inside each hole are `+` as well, so `D` must cross
//! any path from the hole to the outside an even number of times.
//!
//! For a planar graph with edge weights `w`, `det(I - T) = (Σ_even Π w)^2`,
//! where `T` acts on directed edges with `T[e][e'] = w_e e^{i φ/2}` when `e'`
//! continues `e` without backtracking and turns by `φ`. The hole conditions
//! are imposed by averaging over sign flips of the weights on a straight
//! seam from each hole to the outside. Every signed sum is non-negative
//! (each is a sum of Ising partition functions with the hole spins fixed to
//! `±`, combined with ± signs that cancel in pairs), so the square root is
//! taken on the positive branch and the result is exact, not only up to a
//! constant.

use num_complex::Complex64;

use super::{log_sum_exp, InverseTemperature, IsingError, LogPartition};
use crate::lattice::{dual_of_edge, DualSite, Site, VertexSet};
use crate::linalg::BandMatrix;

/// Above this many holes the `2^h` sign sum is refused.
const MAX_HOLES: usize = 12;

struct DualGraph {
    /// Endpoints of each undirected dual edge.
    edges: Vec<(usize, usize)>,
    vertices: Vec<DualSite>,
    /// Directed edge index `2k` is `a -> b`, `2k + 1` is `b -> a`.
    out: Vec<Vec<usize>>,
}

pub fn log_z_kacward(sites: &VertexSet, beta: InverseTemperature) -> Result<LogPartition, IsingError> {
    if sites.is_empty() {
        return Ok(0.0);
    }
    let primal = interaction_edges(sites);
    let holes: Vec<Site> = sites
        .complement_components()
        .iter()
        .skip(1)
        .map(|c| c.iter().next().expect("non-empty component"))
        .collect();
    if holes.len() > MAX_HOLES {
        return Err(IsingError::TooManyHoles(holes.len()));
    }
    // seam[k] = bitmask of holes whose seam crosses edge k
    let seam: Vec<u32> = primal
        .iter()
        .map(|&(u, v)| {
            holes.iter().enumerate().fold(0u32, |m, (j, h)| {
                let crosses = u.y == v.y && u.y == h.y && u.x >= h.x;
                m | ((crosses as u32) << j)
            })
        })
        .collect();

    let graph = dual_graph(&primal);
    let order = band_order(&graph);
    let x = (-2.0 * beta.value()).exp();

    let mut terms = Vec::with_capacity(1 << holes.len());
    for signs in 0u32..(1u32 << holes.len()) {
        let weights: Vec<f64> = seam
            .iter()
            .map(|&m| if (m & signs).count_ones() % 2 == 1 { -x } else { x })
            .collect();
        terms.push(log_even_sum(&graph, &order, &weights)?);
    }
    let log_valid = log_sum_exp(terms) - holes.len() as f64 * std::f64::consts::LN_2;
    Ok(beta.value() * primal.len() as f64 + log_valid)
}

/// Interaction edges as `(u, v)` with `u < v`; exterior endpoints included.
fn interaction_edges(sites: &VertexSet) -> Vec<(Site, Site)> {
    let mut edges = Vec::new();
    for s in sites.iter() {
        for n in s.neighbors() {
            if !sites.contains(n) || n > s {
                edges.push(if s < n { (s, n) } else { (n, s) });
            }
        }
    }
    edges
}

fn dual_graph(primal: &[(Site, Site)]) -> DualGraph {
    let mut vertices: Vec<DualSite> = primal
        .iter()
        .flat_map(|&(u, v)| {
            let (a, b) = dual_of_edge(u, v);
            [a, b]
        })
        .collect();
    vertices.sort_unstable();
    vertices.dedup();
    let index = |d: DualSite| vertices.binary_search(&d).expect("dual vertex");
    let edges: Vec<(usize, usize)> = primal
        .iter()
        .map(|&(u, v)| {
            let (a, b) = dual_of_edge(u, v);
            (index(a), index(b))
        })
        .collect();
    let mut out = vec![Vec::with_capacity(4); vertices.len()];
    for (k, &(a, b)) in edges.iter().enumerate() {
        out[a].push(2 * k);
        out[b].push(2 * k + 1);
    }
    DualGraph {
        edges,
        vertices,
        out,
    }
}

impl DualGraph {
    fn tail(&self, e: usize) -> usize {
        let (a, b) = self.edges[e / 2];
        if e.is_multiple_of(2) {
            a
        } else {
            b
        }
    }

    fn head(&self, e: usize) -> usize {
        self.tail(e ^ 1)
    }

    fn direction(&self, e: usize) -> (i64, i64) {
        let (t, h) = (self.vertices[self.tail(e)], self.vertices[self.head(e)]);
        ((h.x - t.x) / 2, (h.y - t.y) / 2)
    }
}

/// Directed edges grouped by tail, tails ordered along the longer axis so the
/// matrix bandwidth is a few times the short side.
fn band_order(g: &DualGraph) -> Vec<usize> {
    let (mut lo, mut hi) = ((i64::MAX, i64::MAX), (i64::MIN, i64::MIN));
    for v in &g.vertices {
        lo = (lo.0.min(v.x), lo.1.min(v.y));
        hi = (hi.0.max(v.x), hi.1.max(v.y));
    }
    let column_major = hi.0 - lo.0 >= hi.1 - lo.1;
    let mut tails: Vec<usize> = (0..g.vertices.len()).collect();
    tails.sort_unstable_by_key(|&i| {
        let v = g.vertices[i];
        if column_major {
            (v.x, v.y)
        } else {
            (v.y, v.x)
        }
    });
    tails.iter().flat_map(|&t| g.out[t].iter().copied()).collect()
}

/// `log Σ_even Π w` from `det(I - T) = (Σ_even Π w)^2`.
fn log_even_sum(g: &DualGraph, order: &[usize], weights: &[f64]) -> Result<f64, IsingError> {
    let n = order.len();
    let mut pos = vec![0usize; n];
    for (i, &e) in order.iter().enumerate() {
        pos[e] = i;
    }
    let mut entries = Vec::with_capacity(3 * n);
    let mut band = 0usize;
    for &e in order {
        let d = g.direction(e);
        for &f in &g.out[g.head(e)] {
            if f == e ^ 1 {
                continue;
            }
            let d2 = g.direction(f);
            let cross = d.0 * d2.1 - d.1 * d2.0;
            let half_turn = match cross {
                0 => Complex64::new(1.0, 0.0),
                c => Complex64::from_polar(1.0, c as f64 * std::f64::consts::FRAC_PI_4),
            };
            let (i, j) = (pos[e], pos[f]);
            band = band.max(i.abs_diff(j));
            entries.push((i, j, -half_turn * weights[e / 2]));
        }
    }
    let mut m = BandMatrix::<Complex64>::zeros(n, band, band);
    for i in 0..n {
        m.add(i, i, Complex64::new(1.0, 0.0));
    }
    for (i, j, v) in entries {
        m.add(i, j, v);
    }
    let det = m.log_det().map_err(|_| IsingError::SingularMatrix)?;
    Ok(0.5 * det.log_abs)
}
