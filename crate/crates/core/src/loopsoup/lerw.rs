use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SoupError;
use crate::lattice::{Site, VertexSet};

/// A simple closed path of primal sites; the last site is adjacent to the
/// first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimalCycle {
    sites: Vec<Site>,
}

impl PrimalCycle {
    pub fn new(sites: Vec<Site>) -> Result<Self, String> {
        let n = sites.len();
        if n < 4 {
            return Err(format!("cycle of length {n}"));
        }
        if (0..n).any(|i| !sites[i].is_adjacent(sites[(i + 1) % n])) {
            return Err("consecutive sites are not adjacent".into());
        }
        if VertexSet::new(sites.iter().copied()).len() != n {
            return Err("repeated site".into());
        }
        Ok(PrimalCycle { sites })
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Number of sites spanned along the wider side of the bounding box.
    pub fn extent(&self) -> usize {
        let set = VertexSet::new(self.sites.iter().copied());
        let (x0, y0, x1, y1) = set.bbox().expect("non-empty cycle");
        ((x1 - x0).max(y1 - y0) + 1) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LerwOptions {
    /// Loops spanning fewer sites than this are discarded and resampled.
    pub min_extent: usize,
    /// Walk attempts (killed or too small) before giving up.
    pub max_attempts: usize,
}

impl Default for LerwOptions {
    fn default() -> Self {
        LerwOptions {
            min_extent: 0,
            max_attempts: 1_000_000,
        }
    }
}

/// One loop-erased walk loop through a marked edge at the centre of `domain`.
///
/// The root is the site nearest the centre of the bounding box and the
/// marked edge joins it to its first neighbour (east, north, west, south)
/// in the domain. A walk from that neighbour, forbidden to use the marked
/// edge and killed on leaving the domain, is loop-erased until it reaches
/// the root; the erased path closed by the marked edge is the loop. Killed
/// walks and loops narrower than `min_extent` are rejected.
pub fn sample_lerw_loop(domain: &VertexSet, seed: u64, options: LerwOptions) -> Result<PrimalCycle, SoupError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Sampler::new(domain)?.sample(&mut rng, options)
}

/// `count` loops from a single random stream.
pub fn sample_lerw_loops(
    domain: &VertexSet,
    count: usize,
    seed: u64,
    options: LerwOptions,
) -> Result<Vec<PrimalCycle>, SoupError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampler = Sampler::new(domain)?;
    (0..count).map(|_| sampler.sample(&mut rng, options)).collect()
}

struct Sampler {
    root: Site,
    start: Site,
    origin: (i64, i64),
    height: i64,
    width: i64,
    inside: Vec<bool>,
    pos: Vec<u32>,
}

const OFF_PATH: u32 = u32::MAX;

impl Sampler {
    fn new(domain: &VertexSet) -> Result<Self, SoupError> {
        let (x0, y0, x1, y1) = domain
            .bbox()
            .ok_or_else(|| SoupError::NoCyclePossible("empty domain".into()))?;
        let (cx, cy) = ((x0 + x1) as f64 / 2.0, (y0 + y1) as f64 / 2.0);
        let root = domain
            .iter()
            .min_by(|a, b| {
                let da = (a.x as f64 - cx).powi(2) + (a.y as f64 - cy).powi(2);
                let db = (b.x as f64 - cx).powi(2) + (b.y as f64 - cy).powi(2);
                da.total_cmp(&db)
            })
            .expect("non-empty");
        let start = root
            .neighbors()
            .into_iter()
            .find(|&n| domain.contains(n))
            .ok_or_else(|| SoupError::NoCyclePossible("root has no neighbour".into()))?;
        if !reaches_without_edge(domain, start, root) {
            return Err(SoupError::NoCyclePossible(format!(
                "edge {root:?}-{start:?} is a bridge"
            )));
        }
        let (width, height) = (x1 - x0 + 1, y1 - y0 + 1);
        let mut inside = vec![false; (width * height) as usize];
        for s in domain.iter() {
            inside[((s.x - x0) * height + (s.y - y0)) as usize] = true;
        }
        Ok(Sampler {
            root,
            start,
            origin: (x0, y0),
            height,
            width,
            inside,
            pos: vec![OFF_PATH; (width * height) as usize],
        })
    }

    fn index(&self, s: Site) -> Option<usize> {
        let (dx, dy) = (s.x - self.origin.0, s.y - self.origin.1);
        if dx < 0 || dy < 0 || dx >= self.width || dy >= self.height {
            return None;
        }
        let i = (dx * self.height + dy) as usize;
        self.inside[i].then_some(i)
    }

    fn sample(&mut self, rng: &mut ChaCha8Rng, options: LerwOptions) -> Result<PrimalCycle, SoupError> {
        for _ in 0..options.max_attempts {
            if let Some(path) = self.walk(rng) {
                let cycle = PrimalCycle { sites: path };
                if cycle.extent() >= options.min_extent {
                    return Ok(cycle);
                }
            }
        }
        Err(SoupError::NoCyclePossible(format!(
            "no loop of extent {} after {} attempts",
            options.min_extent, options.max_attempts
        )))
    }

    /// One attempt: the closed loop starting at the root, or `None` if the
    /// walk was killed.
    fn walk(&mut self, rng: &mut ChaCha8Rng) -> Option<Vec<Site>> {
        let mut path = vec![self.start];
        let i0 = self.index(self.start).expect("start in domain");
        self.pos[i0] = 0;
        let mut cur = self.start;
        let result = loop {
            let next = cur.neighbors()[rng.random_range(0..4)];
            if cur == self.start && next == self.root {
                continue;
            }
            if next == self.root {
                let mut cycle = Vec::with_capacity(path.len() + 1);
                cycle.push(self.root);
                cycle.extend_from_slice(&path);
                break Some(cycle);
            }
            let Some(i) = self.index(next) else {
                break None;
            };
            let p = self.pos[i];
            if p != OFF_PATH {
                for s in path.drain(p as usize + 1..) {
                    let j = self.index(s).expect("path in domain");
                    self.pos[j] = OFF_PATH;
                }
            } else {
                self.pos[i] = path.len() as u32;
                path.push(next);
            }
            cur = next;
        };
        for s in path {
            let j = self.index(s).expect("path in domain");
            self.pos[j] = OFF_PATH;
        }
        result
    }
}

fn reaches_without_edge(domain: &VertexSet, from: Site, to: Site) -> bool {
    let mut seen = VertexSet::new([from]).sites().to_vec();
    let mut queue = VecDeque::from([from]);
    while let Some(s) = queue.pop_front() {
        if s == to {
            return true;
        }
        for n in s.neighbors() {
            if (s == from && n == to) || !domain.contains(n) || seen.contains(&n) {
                continue;
            }
            seen.push(n);
            queue.push_back(n);
        }
    }
    false
}
