//! Random-walk loop soup masses, wired spanning trees and loop-erased walk
//! loops.
//!
//! The walk kernel on a site set `V` is `Q = A/4` with killing at every
//! exterior neighbour. The loop mass is `m(V) = -log det(I - Q)`, the total
//! weight `Σ_n tr(Q^n)/n` of rooted closed walks. Wired spanning trees are
//! counted by the Dirichlet Laplacian `L = 4I - A`, so `log T(V) =
//! |V| ln 4 - m(V)`; the two are computed by separate factorisations.

mod dimension;
mod lerw;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{LoopComplement, NestedConfig, VertexSet};
use crate::linalg::{band_order, BandMatrix, SymBandMatrix};

pub use dimension::{box_counts, box_dimension, DimensionEstimate};
pub use lerw::{sample_lerw_loop, sample_lerw_loops, LerwOptions, PrimalCycle};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SoupError {
    #[error("numerically singular determinant: {0}")]
    NumericalSingularity(String),
    #[error("no simple cycle through the marked edge: {0}")]
    NoCyclePossible(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("SLE parameter must lie in (0, 8], got {0}")]
    InvalidKappa(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SleParameter(f64);

impl SleParameter {
    pub fn new(kappa: f64) -> Result<Self, SoupError> {
        if kappa > 0.0 && kappa <= 8.0 {
            Ok(SleParameter(kappa))
        } else {
            Err(SoupError::InvalidKappa(kappa))
        }
    }

    pub fn kappa(self) -> f64 {
        self.0
    }

    /// Hausdorff dimension `1 + κ/8` of the curve.
    pub fn dimension(self) -> f64 {
        1.0 + self.0 / 8.0
    }
}

impl TryFrom<f64> for SleParameter {
    type Error = SoupError;
    fn try_from(v: f64) -> Result<Self, SoupError> {
        SleParameter::new(v)
    }
}

impl From<SleParameter> for f64 {
    fn from(k: SleParameter) -> f64 {
        k.0
    }
}

/// `c = (3κ - 8)(6 - κ) / (2κ)`.
pub fn central_charge(kappa: SleParameter) -> f64 {
    let k = kappa.0;
    (3.0 * k - 8.0) * (6.0 - k) / (2.0 * k)
}

/// `-log det(I - A/4)` by banded Cholesky. Additive over components; `0` for
/// the empty set.
pub fn loop_mass(sites: &VertexSet) -> Result<f64, SoupError> {
    if sites.is_empty() {
        return Ok(0.0);
    }
    let (order, bw) = band_order(sites);
    let mut m = SymBandMatrix::zeros(order.len(), bw);
    for (i, s) in order.iter().enumerate() {
        m.add(i, i, 1.0);
        for (j, t) in order.iter().enumerate().skip(i + 1).take(bw) {
            if s.is_adjacent(*t) {
                m.add(j, i, -0.25);
            }
        }
    }
    let log_det = m
        .log_det()
        .map_err(|e| SoupError::NumericalSingularity(e.to_string()))?;
    Ok(-log_det)
}

/// `log` of the number of spanning trees of `sites` wired to its exterior,
/// `log det(4I - A)` by banded LU.
pub fn log_tree_count(sites: &VertexSet) -> Result<f64, SoupError> {
    if sites.is_empty() {
        return Ok(0.0);
    }
    let (order, bw) = band_order(sites);
    let mut m = BandMatrix::<f64>::zeros(order.len(), bw, bw);
    for (i, s) in order.iter().enumerate() {
        m.add(i, i, 4.0);
        for (j, t) in order.iter().enumerate().skip(i + 1).take(bw) {
            if s.is_adjacent(*t) {
                m.add(i, j, -1.0);
                m.add(j, i, -1.0);
            }
        }
    }
    let det = m
        .log_det()
        .map_err(|e| SoupError::NumericalSingularity(e.to_string()))?;
    if det.phase < 0.0 {
        return Err(SoupError::NumericalSingularity("negative Laplacian determinant".into()));
    }
    Ok(det.log_abs)
}

fn cut_sum(cut: &LoopComplement, f: fn(&VertexSet) -> Result<f64, SoupError>) -> Result<f64, SoupError> {
    Ok(f(&cut.inside)? + f(&cut.outside)?)
}

/// `M = m(Ω) - m(Ω∖ℓ) - m(Ω') + m(Ω'∖ℓ)` with `Ω' = inner`, `Ω = outer`: the
/// mass of walk loops in `Ω` that visit both the sites cut by `ℓ` and `Ω∖Ω'`.
pub fn soup_mass_m(cfg: &NestedConfig) -> Result<f64, SoupError> {
    if cfg.is_trivial() {
        return Ok(0.0);
    }
    let outer = loop_mass(cfg.outer().sites())?;
    let inner = loop_mass(cfg.inner().sites())?;
    let outer_cut = cut_sum(&cfg.outer_cut(), loop_mass)?;
    let inner_cut = cut_sum(&cfg.inner_cut(), loop_mass)?;
    Ok((outer - outer_cut) - (inner - inner_cut))
}

/// `log [T(Ω'∖ℓ) T(Ω) / (T(Ω') T(Ω∖ℓ))]` with `Ω' = inner`, `Ω = outer`.
/// Equal to `-soup_mass_m(cfg)` because the `4^{|V|}` factors balance.
pub fn ust_restriction(cfg: &NestedConfig) -> Result<f64, SoupError> {
    if cfg.is_trivial() {
        return Ok(0.0);
    }
    let outer = log_tree_count(cfg.outer().sites())?;
    let inner = log_tree_count(cfg.inner().sites())?;
    let outer_cut = cut_sum(&cfg.outer_cut(), log_tree_count)?;
    let inner_cut = cut_sum(&cfg.inner_cut(), log_tree_count)?;
    Ok((inner_cut - inner) - (outer_cut - outer))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::generate::{generate_configs, GeneratorSpec};
    use crate::lattice::{DiscreteDomain, DualLoop, Site};
    use proptest::prelude::*;

    fn dense_log_det(a: &[Vec<f64>]) -> f64 {
        let n = a.len();
        let mut a = a.to_vec();
        let mut acc = 0.0;
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
            a.swap(p, k);
            acc += a[k][k].abs().ln();
            for i in k + 1..n {
                let l = a[i][k] / a[k][k];
                for j in k..n {
                    a[i][j] -= l * a[k][j];
                }
            }
        }
        acc
    }

    #[test]
    fn small_masses() {
        assert_eq!(loop_mass(&VertexSet::new([Site::new(0, 0)])).unwrap(), 0.0);
        let pair = VertexSet::new([Site::new(0, 0), Site::new(1, 0)]);
        assert!((loop_mass(&pair).unwrap() - (16.0f64 / 15.0).ln()).abs() < 1e-15);
        let block = VertexSet::rectangle(0, 0, 2, 2);
        let sites: Vec<Site> = block.iter().collect();
        let dense: Vec<Vec<f64>> = sites
            .iter()
            .map(|s| {
                sites
                    .iter()
                    .map(|t| if s == t { 1.0 } else if s.is_adjacent(*t) { -0.25 } else { 0.0 })
                    .collect()
            })
            .collect();
        assert!((loop_mass(&block).unwrap() + dense_log_det(&dense)).abs() < 1e-13);
    }

    #[test]
    fn small_tree_counts() {
        assert!((log_tree_count(&VertexSet::new([Site::new(0, 0)])).unwrap() - 4f64.ln()).abs() < 1e-15);
        let pair = VertexSet::new([Site::new(0, 0), Site::new(0, 1)]);
        assert!((log_tree_count(&pair).unwrap() - 15f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn central_charges() {
        let c = |k: f64| central_charge(SleParameter::new(k).unwrap());
        assert!(c(8.0 / 3.0).abs() < 1e-15);
        assert_eq!(c(2.0), -2.0);
        assert_eq!(c(4.0), 1.0);
        assert!(SleParameter::new(0.0).is_err());
        assert!(SleParameter::new(8.5).is_err());
        assert_eq!(SleParameter::new(2.0).unwrap().dimension(), 1.25);
    }

    #[test]
    fn mass_is_additive_over_components() {
        let a = VertexSet::rectangle(0, 0, 3, 2);
        let b = VertexSet::rectangle(6, 0, 7, 4);
        let both = loop_mass(&a.union(&b)).unwrap();
        assert!((both - loop_mass(&a).unwrap() - loop_mass(&b).unwrap()).abs() < 1e-13);
    }

    /// Rooted closed walks in `omega` of length `<= max_len` that visit both
    /// `hit_a` and `hit_b`, each weighted `4^{-n}/n`. Also returns a bound
    /// on the omitted tail.
    fn truncated_mass(omega: &VertexSet, hit_a: &VertexSet, hit_b: &VertexSet, max_len: usize) -> (f64, f64) {
        let sites: Vec<Site> = omega.iter().collect();
        let n = sites.len();
        let nbrs: Vec<Vec<usize>> = sites
            .iter()
            .map(|s| s.neighbors().iter().filter_map(|&t| omega.index_of(t)).collect())
            .collect();
        let flag = |i: usize| (hit_a.contains(sites[i]) as usize) | ((hit_b.contains(sites[i]) as usize) << 1);
        let mut total = 0.0;
        for root in 0..n {
            // prob[state][site], state = visited flags
            let mut prob = vec![vec![0.0f64; n]; 4];
            prob[flag(root)][root] = 1.0;
            for len in 1..=max_len {
                let mut next = vec![vec![0.0f64; n]; 4];
                for f in 0..4 {
                    for i in 0..n {
                        let p = prob[f][i];
                        if p == 0.0 {
                            continue;
                        }
                        for &j in &nbrs[i] {
                            next[f | flag(j)][j] += 0.25 * p;
                        }
                    }
                }
                prob = next;
                total += prob[3][root] / len as f64;
            }
        }
        // spectral radius of Q on the bounding box bounds the one on omega
        let (x0, y0, x1, y1) = omega.bbox().unwrap();
        let rho = 0.5
            * ((std::f64::consts::PI / (x1 - x0 + 2) as f64).cos()
                + (std::f64::consts::PI / (y1 - y0 + 2) as f64).cos());
        let l = max_len as f64 + 1.0;
        let tail = n as f64 * rho.powf(l) / (l * (1.0 - rho));
        (total, tail)
    }

    #[test]
    fn mass_matches_walk_enumeration() {
        let cfg = NestedConfig::new(
            DualLoop::unit(Site::new(0, 0)),
            DiscreteDomain::centered_square(3, 0),
            DiscreteDomain::centered_square(4, 0),
        )
        .unwrap();
        let m = soup_mass_m(&cfg).unwrap();
        let removed = cfg.dual_loop().incident_sites();
        let collar = cfg.outer().sites().difference(cfg.inner().sites());
        let (partial, tail) = truncated_mass(cfg.outer().sites(), &removed, &collar, 500);
        assert!(tail < 1e-8, "tail {tail}");
        assert!(m >= partial - 1e-12 && m <= partial + tail + 1e-12, "{m} vs {partial} + {tail}");
        assert!(m > 0.0);
    }

    #[test]
    fn trivial_configs_are_zero() {
        let d = DiscreteDomain::centered_square(3, 0);
        let cfg = NestedConfig::new(DualLoop::unit(Site::new(0, 0)), d.clone(), d).unwrap();
        assert_eq!(soup_mass_m(&cfg).unwrap(), 0.0);
        assert_eq!(ust_restriction(&cfg).unwrap(), 0.0);
    }

    #[test]
    fn shrinking_inner_domain_increases_mass() {
        let lp = DualLoop::unit(Site::new(0, 0));
        let outer = DiscreteDomain::centered_square(6, 0);
        let mut last = 0.0;
        for half in (1..=6).rev() {
            let cfg = NestedConfig::new(lp.clone(), DiscreteDomain::centered_square(half, 0), outer.clone()).unwrap();
            let m = soup_mass_m(&cfg).unwrap();
            assert!(m >= last - 1e-14, "half={half}: {m} < {last}");
            last = m;
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn ust_is_minus_mass(seed in any::<u64>()) {
            let spec = GeneratorSpec::new(1, 10, 9);
            let cfg = &generate_configs(&spec, seed).unwrap()[0];
            let f = ust_restriction(cfg).unwrap();
            let m = soup_mass_m(cfg).unwrap();
            prop_assert!((f + m).abs() < 1e-10, "{f} {m}");
            prop_assert!(m >= -1e-10);
        }
    }
}
