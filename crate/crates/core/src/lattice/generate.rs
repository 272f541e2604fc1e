//! Seeded random nested configurations for property suites and sweeps.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{DiscreteDomain, DualLoop, LatticeError, NestedConfig, Site, VertexSet};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopFamily {
    /// The four-edge loop around one site.
    Unit,
    /// Boundary of a random block.
    #[default]
    Rectangle,
    /// Boundary of a random simply connected cluster.
    Polyomino,
}

/// Recipe for random configurations inside a `width x height` box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub count: usize,
    pub width: i64,
    pub height: i64,
    #[serde(default)]
    pub mesh_exponent: u32,
    #[serde(default)]
    pub loop_family: LoopFamily,
    /// Largest loop extent (sites per side) for the block and cluster
    /// families.
    #[serde(default = "default_loop_side")]
    pub max_loop_side: i64,
    /// Upper bound on the fraction of sites eroded at each nesting step.
    #[serde(default = "default_erosion")]
    pub erosion: f64,
    /// Refinement applied to every generated configuration.
    #[serde(default)]
    pub refine: u32,
}

fn default_loop_side() -> i64 {
    3
}

fn default_erosion() -> f64 {
    0.3
}

impl GeneratorSpec {
    pub fn new(count: usize, width: i64, height: i64) -> Self {
        GeneratorSpec {
            count,
            width,
            height,
            mesh_exponent: 0,
            loop_family: LoopFamily::default(),
            max_loop_side: default_loop_side(),
            erosion: default_erosion(),
            refine: 0,
        }
    }

    pub fn with_family(mut self, family: LoopFamily) -> Self {
        self.loop_family = family;
        self
    }

    pub fn with_erosion(mut self, erosion: f64) -> Self {
        self.erosion = erosion;
        self
    }

    pub fn with_max_loop_side(mut self, side: i64) -> Self {
        self.max_loop_side = side;
        self
    }
}

/// A loop inside three nested domains `d[0] ⊆ d[1] ⊆ d[2]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedTriple {
    pub dual_loop: DualLoop,
    pub domains: [DiscreteDomain; 3],
}

impl NestedTriple {
    pub fn new(dual_loop: DualLoop, domains: [DiscreteDomain; 3]) -> Result<Self, LatticeError> {
        NestedConfig::new(dual_loop.clone(), domains[0].clone(), domains[1].clone())?;
        NestedConfig::new(dual_loop.clone(), domains[1].clone(), domains[2].clone())?;
        Ok(NestedTriple { dual_loop, domains })
    }

    /// The configuration `(loop, d[i], d[j])`.
    pub fn config(&self, i: usize, j: usize) -> NestedConfig {
        NestedConfig::new(
            self.dual_loop.clone(),
            self.domains[i].clone(),
            self.domains[j].clone(),
        )
        .expect("validated triple")
    }

    pub fn refine(&self, levels: u32) -> NestedTriple {
        NestedTriple {
            dual_loop: self.dual_loop.refine(levels),
            domains: self.domains.clone().map(|d| d.refine(levels)),
        }
    }
}

const MAX_ATTEMPTS: usize = 200;

/// `spec.count` random nested pairs; reproducible for a given seed.
pub fn generate_configs(spec: &GeneratorSpec, seed: u64) -> Result<Vec<NestedConfig>, LatticeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..spec.count)
        .map(|_| {
            let (lp, [inner, outer]) = sample_chain::<2>(spec, &mut rng)?;
            let cfg = NestedConfig::new(lp, inner, outer)?;
            Ok(cfg.refine(spec.refine))
        })
        .collect()
}

/// `spec.count` random nested triples; reproducible for a given seed.
pub fn generate_triples(spec: &GeneratorSpec, seed: u64) -> Result<Vec<NestedTriple>, LatticeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..spec.count)
        .map(|_| {
            let (lp, domains) = sample_chain::<3>(spec, &mut rng)?;
            Ok(NestedTriple::new(lp, domains)?.refine(spec.refine))
        })
        .collect()
}

/// A loop and `N` domains ordered from smallest to largest.
fn sample_chain<const N: usize>(
    spec: &GeneratorSpec,
    rng: &mut ChaCha8Rng,
) -> Result<(DualLoop, [DiscreteDomain; N]), LatticeError> {
    let frame = VertexSet::rectangle(0, 0, spec.width - 1, spec.height - 1);
    let lp = sample_loop(spec, rng)?;
    let protected = lp.corner_sites();
    if !protected.is_subset(&frame) {
        return Err(LatticeError::GenerationExhausted(MAX_ATTEMPTS));
    }
    let mut chain: Vec<VertexSet> = Vec::with_capacity(N);
    let mut current = frame;
    for _ in 0..N {
        let budget = (spec.erosion * current.len() as f64) as usize;
        let n_remove = if budget == 0 { 0 } else { rng.random_range(0..=budget) };
        current = erode(&current, &protected, n_remove, rng);
        chain.push(current.clone());
    }
    chain.reverse();
    let domains: Vec<DiscreteDomain> = chain
        .into_iter()
        .map(|s| DiscreteDomain::new(s, spec.mesh_exponent))
        .collect::<Result<_, _>>()?;
    Ok((lp, domains.try_into().expect("N domains")))
}

fn sample_loop(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<DualLoop, LatticeError> {
    // corners of the loop need one site of margin on every side
    let (w, h) = (spec.width, spec.height);
    for _ in 0..MAX_ATTEMPTS {
        let lp = match spec.loop_family {
            LoopFamily::Unit => {
                if w < 3 || h < 3 {
                    break;
                }
                DualLoop::unit(Site::new(rng.random_range(1..w - 1), rng.random_range(1..h - 1)))
            }
            LoopFamily::Rectangle => {
                let max_w = spec.max_loop_side.min(w - 2);
                let max_h = spec.max_loop_side.min(h - 2);
                if max_w < 1 || max_h < 1 {
                    break;
                }
                let (lw, lh) = (rng.random_range(1..=max_w), rng.random_range(1..=max_h));
                let x0 = rng.random_range(1..=w - 1 - lw);
                let y0 = rng.random_range(1..=h - 1 - lh);
                DualLoop::rectangle(x0, y0, x0 + lw - 1, y0 + lh - 1)
            }
            LoopFamily::Polyomino => {
                let side = spec.max_loop_side.min(w - 2).min(h - 2);
                if side < 1 {
                    break;
                }
                let size = rng.random_range(1..=(side * side) as usize);
                let seed = Site::new(rng.random_range(1..w - 1), rng.random_range(1..h - 1));
                let cluster = grow_cluster(seed, size, (1, 1, w - 2, h - 2), rng);
                match DualLoop::around(&cluster) {
                    Ok(lp) => lp,
                    Err(_) => continue,
                }
            }
        };
        if lp
            .corner_sites()
            .iter()
            .all(|s| s.x >= 0 && s.y >= 0 && s.x < w && s.y < h)
        {
            return Ok(lp);
        }
    }
    Err(LatticeError::GenerationExhausted(MAX_ATTEMPTS))
}

fn grow_cluster(
    seed: Site,
    size: usize,
    (x0, y0, x1, y1): (i64, i64, i64, i64),
    rng: &mut ChaCha8Rng,
) -> VertexSet {
    let mut cluster = vec![seed];
    for _ in 0..4 * size {
        if cluster.len() >= size {
            break;
        }
        let from = *cluster.choose(rng).unwrap();
        let to = from.neighbors()[rng.random_range(0..4)];
        if to.x >= x0 && to.x <= x1 && to.y >= y0 && to.y <= y1 && !cluster.contains(&to) {
            cluster.push(to);
        }
    }
    VertexSet::new(cluster)
}

/// Remove up to `n_remove` boundary sites outside `protected`, keeping the
/// set connected.
fn erode(set: &VertexSet, protected: &VertexSet, n_remove: usize, rng: &mut ChaCha8Rng) -> VertexSet {
    let mut current = set.clone();
    let mut removed = 0;
    let mut failures = 0;
    while removed < n_remove && failures < 50 {
        let candidates: Vec<Site> = current
            .iter()
            .filter(|&s| !protected.contains(s) && current.exterior_degree(s) > 0)
            .collect();
        let Some(&victim) = candidates.choose(rng) else {
            break;
        };
        let next = current.difference(&VertexSet::new([victim]));
        if next.is_connected() {
            current = next;
            removed += 1;
        } else {
            failures += 1;
        }
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_configs() {
        assert!(generate_configs(&GeneratorSpec::new(0, 9, 9), 1).unwrap().is_empty());
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let spec = GeneratorSpec::new(10, 12, 10).with_family(LoopFamily::Polyomino);
        assert_eq!(generate_configs(&spec, 42).unwrap(), generate_configs(&spec, 42).unwrap());
        assert_ne!(generate_configs(&spec, 42).unwrap(), generate_configs(&spec, 43).unwrap());
    }

    #[test]
    fn fifty_triples_in_nine_by_nine_are_valid() {
        let spec = GeneratorSpec::new(50, 9, 9);
        let triples = generate_triples(&spec, 5).unwrap();
        assert_eq!(triples.len(), 50);
        for t in &triples {
            assert!(t.domains[0].is_subset(&t.domains[1]));
            assert!(t.domains[1].is_subset(&t.domains[2]));
            assert!(t.domains[2].len() <= 81);
            for (i, j) in [(0, 1), (1, 2), (0, 2)] {
                let c = t.config(i, j);
                NestedConfig::new(c.dual_loop().clone(), c.inner().clone(), c.outer().clone()).unwrap();
            }
        }
    }

    #[test]
    fn too_small_frame_is_exhausted() {
        let spec = GeneratorSpec::new(1, 2, 2).with_family(LoopFamily::Unit);
        assert!(matches!(
            generate_configs(&spec, 0),
            Err(LatticeError::GenerationExhausted(_))
        ));
    }
}
