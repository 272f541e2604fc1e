use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{InverseTemperature, SiteGraph};
use crate::lattice::{Site, VertexSet};

/// Spins on a domain, `+1` or `-1`, in the domain's site order. Sites outside
/// the domain are `+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinConfig {
    domain: VertexSet,
    spins: Vec<i8>,
}

impl SpinConfig {
    pub fn all_plus(domain: VertexSet) -> Self {
        let spins = vec![1; domain.len()];
        SpinConfig { domain, spins }
    }

    /// Panics unless `spins` has one `±1` entry per site.
    pub fn new(domain: VertexSet, spins: Vec<i8>) -> Self {
        assert_eq!(domain.len(), spins.len(), "one spin per site");
        assert!(spins.iter().all(|s| s.abs() == 1), "spins are ±1");
        SpinConfig { domain, spins }
    }

    pub fn from_fn(domain: VertexSet, f: impl Fn(Site) -> i8) -> Self {
        let spins = domain.iter().map(f).collect();
        SpinConfig::new(domain, spins)
    }

    pub fn domain(&self) -> &VertexSet {
        &self.domain
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    /// The spin at `s`; the boundary value `+1` outside the domain.
    pub fn spin(&self, s: Site) -> i8 {
        self.domain.index_of(s).map_or(1, |i| self.spins[i])
    }

    pub fn magnetization(&self) -> f64 {
        self.spins.iter().map(|&s| s as f64).sum::<f64>() / self.spins.len() as f64
    }

    /// Run-length encoding in site order, e.g. `+12-3+4`.
    pub fn to_rle(&self) -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < self.spins.len() {
            let s = self.spins[i];
            let run = self.spins[i..].iter().take_while(|&&t| t == s).count();
            out.push(if s > 0 { '+' } else { '-' });
            out.push_str(&run.to_string());
            i += run;
        }
        out
    }

    pub fn from_rle(domain: VertexSet, line: &str) -> Result<Self, String> {
        let mut spins = Vec::with_capacity(domain.len());
        let mut chars = line.trim().chars().peekable();
        while let Some(c) = chars.next() {
            let s = match c {
                '+' => 1,
                '-' => -1,
                other => return Err(format!("unexpected `{other}`")),
            };
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let run: usize = digits.parse().map_err(|_| "missing run length".to_string())?;
            spins.extend(std::iter::repeat_n(s, run));
        }
        if spins.len() != domain.len() {
            return Err(format!("{} spins for {} sites", spins.len(), domain.len()));
        }
        Ok(SpinConfig { domain, spins })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerOptions {
    /// Cluster updates discarded before the first sample.
    pub burn_in: usize,
    /// Cluster updates between consecutive samples.
    pub thin: usize,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        SamplerOptions {
            burn_in: 1000,
            thin: 10,
        }
    }
}

/// Wolff cluster dynamics with the + boundary as a fixed ghost spin.
///
/// A cluster of `+` spins that bonds to the boundary would have to flip the
/// boundary too, so that update is rejected; `-` clusters never bond to it.
pub struct WolffSampler {
    graph: SiteGraph,
    domain: VertexSet,
    spins: Vec<i8>,
    p_bond: f64,
    rng: ChaCha8Rng,
    stack: Vec<usize>,
    in_cluster: Vec<bool>,
}

impl WolffSampler {
    pub fn new(domain: &VertexSet, beta: InverseTemperature, seed: u64) -> Self {
        let graph = SiteGraph::new(domain);
        let n = graph.len();
        WolffSampler {
            graph,
            domain: domain.clone(),
            spins: vec![1; n],
            p_bond: 1.0 - (-2.0 * beta.value()).exp(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            stack: Vec::new(),
            in_cluster: vec![false; n],
        }
    }

    /// One cluster update; returns the number of flipped spins.
    pub fn step(&mut self) -> usize {
        let n = self.graph.len();
        if n == 0 {
            return 0;
        }
        let seed = self.rng.random_range(0..n);
        let sign = self.spins[seed];
        let mut cluster = vec![seed];
        self.in_cluster[seed] = true;
        self.stack.push(seed);
        let mut pinned = false;
        while let Some(i) = self.stack.pop() {
            if sign > 0 {
                for _ in 0..self.graph.exterior[i] {
                    if self.rng.random::<f64>() < self.p_bond {
                        pinned = true;
                    }
                }
            }
            for k in 0..self.graph.neighbors[i].len() {
                let j = self.graph.neighbors[i][k];
                if !self.in_cluster[j] && self.spins[j] == sign && self.rng.random::<f64>() < self.p_bond {
                    self.in_cluster[j] = true;
                    cluster.push(j);
                    self.stack.push(j);
                }
            }
        }
        for &i in &cluster {
            self.in_cluster[i] = false;
            if !pinned {
                self.spins[i] = -sign;
            }
        }
        if pinned {
            0
        } else {
            cluster.len()
        }
    }

    pub fn config(&self) -> SpinConfig {
        SpinConfig {
            domain: self.domain.clone(),
            spins: self.spins.clone(),
        }
    }
}

/// `n_samples` configurations from one Wolff chain started at all `+`.
pub fn sample_ising(
    domain: &VertexSet,
    beta: InverseTemperature,
    n_samples: usize,
    seed: u64,
    options: SamplerOptions,
) -> Vec<SpinConfig> {
    let mut sampler = WolffSampler::new(domain, beta, seed);
    for _ in 0..options.burn_in {
        sampler.step();
    }
    let mut out = Vec::with_capacity(n_samples);
    for k in 0..n_samples {
        if k > 0 {
            for _ in 0..options.thin.max(1) {
                sampler.step();
            }
        }
        out.push(sampler.config());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::BETA_C;

    #[test]
    fn single_site_marginal() {
        let site = VertexSet::new([Site::new(0, 0)]);
        let n = 100_000;
        for b in [0.2, BETA_C] {
            let opts = SamplerOptions { burn_in: 100, thin: 1 };
            let samples = sample_ising(&site, InverseTemperature::new(b).unwrap(), n, 11, opts);
            let plus = samples.iter().filter(|s| s.spins()[0] > 0).count() as f64 / n as f64;
            let p = (4.0 * b).exp() / ((4.0 * b).exp() + (-4.0 * b).exp());
            let sigma = (p * (1.0 - p) / n as f64).sqrt();
            assert!((plus - p).abs() < 3.0 * sigma, "β={b}: {plus} vs {p}");
        }
    }

    #[test]
    fn frozen_at_large_beta() {
        let block = VertexSet::rectangle(0, 0, 3, 3);
        let samples = sample_ising(&block, InverseTemperature::new(5.0).unwrap(), 200, 3, SamplerOptions::default());
        let m: f64 = samples.iter().map(SpinConfig::magnetization).sum::<f64>() / 200.0;
        assert!(m > 0.999);
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let block = VertexSet::rectangle(0, 0, 5, 5);
        let b = InverseTemperature::CRITICAL;
        let a = sample_ising(&block, b, 20, 9, SamplerOptions::default());
        assert_eq!(a, sample_ising(&block, b, 20, 9, SamplerOptions::default()));
        assert_ne!(a, sample_ising(&block, b, 20, 10, SamplerOptions::default()));
    }

    #[test]
    fn rle_round_trip() {
        let block = VertexSet::rectangle(0, 0, 3, 2);
        let cfg = SpinConfig::from_fn(block.clone(), |s| if s.x == 1 || s.y == 2 { -1 } else { 1 });
        let line = cfg.to_rle();
        assert_eq!(line, "+2-4+2-1+2-1");
        assert_eq!(SpinConfig::from_rle(block.clone(), &line).unwrap(), cfg);
        assert!(SpinConfig::from_rle(block, "+5").is_err());
    }
}
