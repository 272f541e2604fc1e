//! Brute-force companions for the matrix-tree experiment.

use std::collections::BTreeSet;

use looplab_core::{Site, VertexSet};

type Cell = (i64, i64);

fn normalise(cells: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mx = cells.iter().map(|c| c.0).min().unwrap_or(0);
    let my = cells.iter().map(|c| c.1).min().unwrap_or(0);
    let mut out: Vec<_> = cells.iter().map(|(x, y)| (x - mx, y - my)).collect();
    out.sort_unstable();
    out
}

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
        .expect("eight images")
}

/// One representative of every free polyomino with at most `max_cells`
/// cells, smallest first.
pub fn free_polyominoes(max_cells: usize) -> Vec<VertexSet> {
    let mut all = Vec::new();
    let mut level: BTreeSet<Vec<(i64, i64)>> = BTreeSet::from([vec![(0, 0)]]);
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
        .map(|cells| VertexSet::new(cells.into_iter().map(|(x, y)| Site::new(x, y))))
        .collect()
}

/// Wired spanning trees of `sites` (exterior merged into one root, one
/// edge per boundary link), counted one by one. Exponential; meant for
/// domains of a handful of sites.
pub fn list_wired_spanning_trees(sites: &VertexSet) -> u64 {
    let n = sites.len();
    let mut edges = Vec::new();
    for (i, s) in sites.iter().enumerate() {
        for nb in s.neighbors() {
            match sites.index_of(nb) {
                Some(j) if j > i => edges.push((i, j)),
                Some(_) => {}
                None => edges.push((i, n)),
            }
        }
    }
    let parent: Vec<usize> = (0..=n).collect();
    count(&edges, 0, parent, n)
}

fn find(parent: &[usize], mut v: usize) -> usize {
    while parent[v] != v {
        v = parent[v];
    }
    v
}

fn count(edges: &[(usize, usize)], next: usize, parent: Vec<usize>, missing: usize) -> u64 {
    if missing == 0 {
        return 1;
    }
    if edges.len() - next < missing {
        return 0;
    }
    let (u, v) = edges[next];
    let (ru, rv) = (find(&parent, u), find(&parent, v));
    let mut total = count(edges, next + 1, parent.clone(), missing);
    if ru != rv {
        let mut joined = parent;
        joined[ru] = rv;
        total += count(edges, next + 1, joined, missing - 1);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polyomino_counts() {
        let counts: Vec<usize> = (1..=5).map(|k| free_polyominoes(k).len()).collect();
        assert_eq!(counts, [1, 2, 4, 9, 21]);
    }

    #[test]
    fn small_tree_counts() {
        assert_eq!(list_wired_spanning_trees(&VertexSet::rectangle(0, 0, 0, 0)), 4);
        assert_eq!(list_wired_spanning_trees(&VertexSet::rectangle(0, 0, 1, 1)), 192);
    }
}
