//! Critical Ising model with + boundary conditions.
//!
//! Every lattice neighbour outside the domain is a fixed `+1` spin, so the
//! weight of a configuration is `exp(β (Σ_{x~y} σ_x σ_y + Σ_x d_x σ_x))`
//! where `d_x` counts the exterior neighbours of `x`. Partition functions
//! are carried as natural logarithms.

mod enumerate;
mod interfaces;
mod kac_ward;
mod transfer;
mod wolff;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{NestedConfig, Site, VertexSet};

pub use enumerate::{log_z_enum, ENUM_LIMIT};
pub use interfaces::extract_interfaces;
pub use kac_ward::log_z_kacward;
pub use transfer::{log_z_transfer, STRIP_LIMIT};
pub use wolff::{sample_ising, SamplerOptions, SpinConfig, WolffSampler};

/// `½ ln(√2 + 1)`.
pub const BETA_C: f64 = 0.440_686_793_509_771_5;

/// Natural logarithm of a partition function.
pub type LogPartition = f64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IsingError {
    #[error("domain has {sites} sites, enumeration is limited to {limit}")]
    DomainTooLarge { sites: usize, limit: usize },
    #[error("narrowest side of the bounding box is {width}, transfer is limited to {limit}")]
    StripTooWide { width: usize, limit: usize },
    #[error("Kac-Ward matrix is numerically singular")]
    SingularMatrix,
    #[error("domain has {0} holes, the Kac-Ward sign sum is limited to 12")]
    TooManyHoles(usize),
    #[error("inverse temperature must be positive and finite, got {0}")]
    InvalidBeta(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct InverseTemperature(f64);

impl InverseTemperature {
    pub const CRITICAL: InverseTemperature = InverseTemperature(BETA_C);

    pub fn new(beta: f64) -> Result<Self, IsingError> {
        if beta > 0.0 && beta.is_finite() {
            Ok(InverseTemperature(beta))
        } else {
            Err(IsingError::InvalidBeta(beta))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for InverseTemperature {
    type Error = IsingError;
    fn try_from(v: f64) -> Result<Self, IsingError> {
        InverseTemperature::new(v)
    }
}

impl From<InverseTemperature> for f64 {
    fn from(b: InverseTemperature) -> f64 {
        b.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Engine {
    #[serde(rename = "enum")]
    Enumeration,
    #[serde(rename = "transfer")]
    Transfer,
    #[serde(rename = "kacward")]
    KacWard,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Enumeration, Engine::Transfer, Engine::KacWard];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Enumeration => "enum",
            Engine::Transfer => "transfer",
            Engine::KacWard => "kacward",
        }
    }
}

impl std::str::FromStr for Engine {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "enum" => Ok(Engine::Enumeration),
            "transfer" => Ok(Engine::Transfer),
            "kacward" => Ok(Engine::KacWard),
            other => Err(format!("unknown engine `{other}` (enum, transfer, kacward)")),
        }
    }
}

/// `log Z` of a (possibly disconnected or empty) site set with + boundary.
pub fn log_z(sites: &VertexSet, beta: InverseTemperature, engine: Engine) -> Result<LogPartition, IsingError> {
    if sites.is_empty() {
        return Ok(0.0);
    }
    match engine {
        Engine::Enumeration => log_z_enum(sites, beta),
        Engine::Transfer => log_z_transfer(sites, beta),
        Engine::KacWard => log_z_kacward(sites, beta),
    }
}

/// `log [Z(Ω'∖ℓ) Z(Ω) / (Z(Ω') Z(Ω∖ℓ))]` with `Ω' = inner`, `Ω = outer`.
pub fn ising_restriction(
    cfg: &NestedConfig,
    beta: InverseTemperature,
    engine: Engine,
) -> Result<f64, IsingError> {
    if cfg.is_trivial() {
        return Ok(0.0);
    }
    let cut_sum = |cut: crate::lattice::LoopComplement| -> Result<f64, IsingError> {
        Ok(log_z(&cut.inside, beta, engine)? + log_z(&cut.outside, beta, engine)?)
    };
    let inner_cut = cut_sum(cfg.inner_cut())?;
    let outer_cut = cut_sum(cfg.outer_cut())?;
    let inner = log_z(cfg.inner().sites(), beta, engine)?;
    let outer = log_z(cfg.outer().sites(), beta, engine)?;
    Ok((inner_cut - inner) - (outer_cut - outer))
}

/// Sites of a set indexed `0..n`, with neighbour lists and exterior degrees.
#[derive(Debug, Clone)]
pub(crate) struct SiteGraph {
    pub sites: Vec<Site>,
    pub neighbors: Vec<Vec<usize>>,
    pub exterior: Vec<i32>,
}

impl SiteGraph {
    pub fn new(set: &VertexSet) -> Self {
        let sites: Vec<Site> = set.iter().collect();
        let mut neighbors = vec![Vec::with_capacity(4); sites.len()];
        let mut exterior = vec![0; sites.len()];
        for (i, s) in sites.iter().enumerate() {
            for n in s.neighbors() {
                match set.index_of(n) {
                    Some(j) => neighbors[i].push(j),
                    None => exterior[i] += 1,
                }
            }
        }
        SiteGraph {
            sites,
            neighbors,
            exterior,
        }
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    /// Total number of interaction edges, boundary links included.
    pub fn edge_count(&self) -> usize {
        let internal: usize = self.neighbors.iter().map(Vec::len).sum::<usize>() / 2;
        internal + self.exterior.iter().map(|&d| d as usize).sum::<usize>()
    }

    /// `Σ σσ + Σ d σ` for a configuration of ±1 spins.
    #[cfg(test)]
    pub fn energy(&self, spins: &[i8]) -> i64 {
        let mut e = 0i64;
        for i in 0..self.len() {
            let s = spins[i] as i64;
            e += self.exterior[i] as i64 * s;
            for &j in &self.neighbors[i] {
                if j > i {
                    e += s * spins[j] as i64;
                }
            }
        }
        e
    }
}

/// `log Σ exp(a_i)`.
pub(crate) fn log_sum_exp(values: impl IntoIterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.into_iter().collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|a| (a - m).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{DiscreteDomain, DualLoop, Symmetry};

    #[test]
    fn critical_beta() {
        assert!((BETA_C - 0.5 * (2f64.sqrt() + 1.0).ln()).abs() < 1e-16);
        assert!(InverseTemperature::new(0.0).is_err());
        assert!(InverseTemperature::new(f64::NAN).is_err());
    }

    #[test]
    fn trivial_config_is_zero() {
        let d = DiscreteDomain::centered_square(2, 0);
        let cfg = NestedConfig::new(DualLoop::unit(Site::new(0, 0)), d.clone(), d).unwrap();
        for e in Engine::ALL {
            assert_eq!(ising_restriction(&cfg, InverseTemperature::CRITICAL, e).unwrap(), 0.0);
        }
    }

    fn seven_five() -> NestedConfig {
        NestedConfig::new(
            DualLoop::unit(Site::new(0, 0)),
            DiscreteDomain::centered_square(2, 0),
            DiscreteDomain::centered_square(3, 0),
        )
        .unwrap()
    }

    #[test]
    fn seven_by_seven_engines_agree() {
        // 49 spins is beyond enumeration; transfer and Kac-Ward cross-check.
        let b = InverseTemperature::CRITICAL;
        let cfg = seven_five();
        let t = ising_restriction(&cfg, b, Engine::Transfer).unwrap();
        let k = ising_restriction(&cfg, b, Engine::KacWard).unwrap();
        assert!((t - k).abs() < 1e-9, "{t} vs {k}");
        assert!(matches!(
            ising_restriction(&cfg, b, Engine::Enumeration),
            Err(IsingError::DomainTooLarge { .. })
        ));
    }

    #[test]
    fn five_by_three_matches_enumeration() {
        let b = InverseTemperature::CRITICAL;
        let cfg = NestedConfig::new(
            DualLoop::unit(Site::new(0, 0)),
            DiscreteDomain::centered_square(1, 0),
            DiscreteDomain::centered_square(2, 0),
        )
        .unwrap();
        let e = ising_restriction(&cfg, b, Engine::Enumeration).unwrap();
        for engine in [Engine::Transfer, Engine::KacWard] {
            let v = ising_restriction(&cfg, b, engine).unwrap();
            assert!((v - e).abs() < 1e-9, "{engine:?}: {v} vs {e}");
        }
        assert!(e.is_finite() && e != 0.0);
    }

    #[test]
    fn symmetric_images_give_identical_values() {
        let b = InverseTemperature::CRITICAL;
        let cfg = NestedConfig::new(
            DualLoop::rectangle(0, 0, 1, 0),
            DiscreteDomain::rectangle(-1, -1, 2, 1, 0),
            DiscreteDomain::rectangle(-2, -1, 3, 2, 0),
        )
        .unwrap();
        let base = ising_restriction(&cfg, b, Engine::Enumeration).unwrap();
        for p in crate::lattice::PointSymmetry::ALL {
            let s = Symmetry::new(p, (3, -2));
            let img = s.apply_config(&cfg);
            assert!((ising_restriction(&img, b, Engine::Enumeration).unwrap() - base).abs() < 1e-12);
        }
    }

    #[test]
    fn engine_names_round_trip() {
        for e in Engine::ALL {
            assert_eq!(e.name().parse::<Engine>().unwrap(), e);
            let j = serde_json::to_string(&e).unwrap();
            assert_eq!(j, format!("\"{}\"", e.name()));
        }
    }
}
