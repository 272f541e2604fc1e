use std::collections::{BTreeMap, HashMap};

use super::SpinConfig;
use crate::lattice::{dual_of_edge, DualLoop, DualSite};

/// Arms of a dual vertex in the order east, north, west, south.
const ARMS: [(i64, i64); 4] = [(2, 0), (0, 2), (-2, 0), (0, -2)];

/// The disagreement edges of `sigma` (with the + boundary), split into
/// simple dual loops.
///
/// At a dual vertex with four disagreement edges the arms are paired
/// south with west and north with east. A closed walk traced with that rule
/// can still pass twice through the same vertex; it is then cut there into
/// two loops, so every returned loop is simple and the loops are
/// edge-disjoint with union equal to the disagreement set.
pub fn extract_interfaces(sigma: &SpinConfig) -> Vec<DualLoop> {
    let edges = disagreement_edges(sigma);
    let mut arms: BTreeMap<DualSite, [bool; 4]> = BTreeMap::new();
    for &(a, b) in &edges {
        arms.entry(a).or_default()[arm_index(a, b)] = true;
        arms.entry(b).or_default()[arm_index(b, a)] = true;
    }
    let mut used: HashMap<(DualSite, usize), bool> = HashMap::new();
    let mut loops = Vec::new();
    let starts: Vec<(DualSite, usize)> = arms
        .iter()
        .flat_map(|(&v, a)| (0..4).filter(move |&k| a[k]).map(move |k| (v, k)))
        .collect();
    for (v0, k0) in starts {
        if used.contains_key(&(v0, k0)) {
            continue;
        }
        let mut walk = vec![v0];
        let (mut v, mut k) = (v0, k0);
        loop {
            used.insert((v, k), true);
            let w = step(v, k);
            let back = (k + 2) % 4;
            used.insert((w, back), true);
            let a = arms[&w];
            let degree = a.iter().filter(|&&x| x).count();
            let next = if degree == 2 {
                (0..4).find(|&j| a[j] && j != back).unwrap()
            } else {
                back ^ 1
            };
            if w == v0 && used.contains_key(&(w, next)) {
                break;
            }
            walk.push(w);
            v = w;
            k = next;
        }
        split_simple(walk, &mut loops);
    }
    loops.sort();
    loops
}

fn arm_index(from: DualSite, to: DualSite) -> usize {
    ARMS.iter()
        .position(|&(dx, dy)| to.x - from.x == dx && to.y - from.y == dy)
        .expect("adjacent dual sites")
}

fn step(v: DualSite, k: usize) -> DualSite {
    DualSite::new(v.x + ARMS[k].0, v.y + ARMS[k].1)
}

pub(crate) fn disagreement_edges(sigma: &SpinConfig) -> Vec<(DualSite, DualSite)> {
    let dom = sigma.domain();
    let mut out = Vec::new();
    for s in dom.iter() {
        for n in s.neighbors() {
            let counted = !dom.contains(n) || n > s;
            if counted && sigma.spin(s) != sigma.spin(n) {
                out.push(dual_of_edge(s, n));
            }
        }
    }
    out
}

/// Cut a closed walk (first vertex not repeated at the end) into simple loops.
fn split_simple(walk: Vec<DualSite>, out: &mut Vec<DualLoop>) {
    let mut stack: Vec<DualSite> = Vec::with_capacity(walk.len());
    let mut pos: HashMap<DualSite, usize> = HashMap::new();
    for v in walk.iter().copied().chain(std::iter::once(walk[0])) {
        if let Some(&i) = pos.get(&v) {
            let cycle: Vec<DualSite> = stack.drain(i + 1..).collect();
            for c in &cycle {
                pos.remove(c);
            }
            let mut lp = vec![v];
            lp.extend(cycle);
            out.push(DualLoop::new(lp).expect("simple closed sub-walk"));
        } else {
            pos.insert(v, stack.len());
            stack.push(v);
        }
    }
}
