//! Independent oracles shared by the integration suites.

#![allow(dead_code)]

use std::collections::BTreeSet;

use looplab_core::lattice::{Site, VertexSet};
use rand::seq::IndexedRandom;
use rand::Rng;

/// A random 4-connected cluster of `size` sites grown from the origin.
pub fn random_cluster(rng: &mut impl Rng, size: usize) -> VertexSet {
    let mut cells = BTreeSet::from([Site::new(0, 0)]);
    while cells.len() < size {
        let frontier: Vec<Site> = cells
            .iter()
            .flat_map(|s| s.neighbors())
            .filter(|n| !cells.contains(n))
            .collect();
        cells.insert(*frontier.choose(rng).expect("non-empty frontier"));
    }
    VertexSet::new(cells)
}

type Cell = (i64, i64);

fn normalise(cells: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mx = cells.iter().map(|c| c.0).min().unwrap();
    let my = cells.iter().map(|c| c.1).min().unwrap();
    let mut out: Vec<_> = cells.iter().map(|(x, y)| (x - mx, y - my)).collect();
    out.sort();
    out
}

/// Canonical representative under the eight point symmetries and
/// translation.
fn free_form(cells: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let maps: [fn(Cell) -> Cell; 8] = [
        |(x, y)| (x, y),
        |(x, y)| (-y, x),
        |(x, y)| (-x, -y),
        |(x, y)| (y, -x),
        |(x, y)| (-x, y),
        |(x, y)| (x, -y),
        |(x, y)| (y, x),
        |(x, y)| (-y, -x),
    ];
    maps.iter()
        .map(|m| normalise(&cells.iter().map(|&c| m(c)).collect::<Vec<_>>()))
        .min()
        .unwrap()
}

/// Every free polyomino with at most `max_cells` cells (one representative
/// per symmetry class).
pub fn free_polyominoes(max_cells: usize) -> Vec<VertexSet> {
    let mut level: BTreeSet<Vec<(i64, i64)>> = BTreeSet::from([vec![(0, 0)]]);
    let mut all = Vec::new();
    for n in 1..=max_cells {
        all.extend(level.iter().cloned());
        if n == max_cells {
            break;
        }
        let mut next = BTreeSet::new();
        for p in &level {
            for &(x, y) in p {
                for c in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
                    if !p.contains(&c) {
                        let mut q = p.clone();
                        q.push(c);
                        next.insert(free_form(&q));
                    }
                }
            }
        }
        level = next;
    }
    all.into_iter()
        .map(|cells| VertexSet::new(cells.into_iter().map(Site::from)))
        .collect()
}

/// Spanning trees of the wired graph of `sites` (all exterior neighbours
/// merged into one root vertex, one edge per boundary link), counted by
/// listing them one by one.
pub fn enumerate_wired_spanning_trees(sites: &VertexSet) -> u64 {
    let n = sites.len();
    let root = n;
    let mut edges = Vec::new();
    for (i, s) in sites.iter().enumerate() {
        for nb in s.neighbors() {
            match sites.index_of(nb) {
                Some(j) if j > i => edges.push((i, j)),
                Some(_) => {}
                None => edges.push((i, root)),
            }
        }
    }
    let parent: Vec<usize> = (0..=n).collect();
    count_trees(&edges, 0, parent, 0, n)
}

fn find(parent: &[usize], mut v: usize) -> usize {
    while parent[v] != v {
        v = parent[v];
    }
    v
}

fn count_trees(edges: &[(usize, usize)], next: usize, parent: Vec<usize>, used: usize, needed: usize) -> u64 {
    if used == needed {
        return 1;
    }
    if edges.len() - next < needed - used {
        return 0;
    }
    let (u, v) = edges[next];
    let (ru, rv) = (find(&parent, u), find(&parent, v));
    let mut total = count_trees(edges, next + 1, parent.clone(), used, needed);
    if ru != rv {
        let mut joined = parent;
        joined[ru] = rv;
        total += count_trees(edges, next + 1, joined, used + 1, needed);
    }
    total
}

/// OLS slope, intercept and R².
pub fn regression(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx, sxy * sxy / (sxx * syy))
}
