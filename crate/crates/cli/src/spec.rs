use std::path::{Path, PathBuf};

use looplab_core::circle::DiffeoSpec;
use looplab_core::cocycle::{gauge_transform, GaugeFunction, RestrictionEvaluator};
use looplab_core::ising::{Engine, InverseTemperature, BETA_C};
use looplab_core::lattice::generate::GeneratorSpec;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecParseError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid experiment spec {path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("invalid experiment spec: {0}")]
    Invalid(String),
}

/// One experiment: what to compute, on which items, with which settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub task: Task,
    #[serde(default)]
    pub source: Source,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub seed: u64,
    /// Worker threads; absent means one per core.
    #[serde(default)]
    pub jobs: Option<usize>,
}

pub fn default_tolerance() -> f64 {
    1e-8
}

/// `"critical"` or a positive number.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Beta {
    #[default]
    Critical,
    Value(f64),
}

impl Beta {
    pub fn resolve(self) -> Result<InverseTemperature, SpecParseError> {
        let b = match self {
            Beta::Critical => BETA_C,
            Beta::Value(b) => b,
        };
        InverseTemperature::new(b).map_err(|e| SpecParseError::Invalid(e.to_string()))
    }
}

impl std::str::FromStr for Beta {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "critical" {
            return Ok(Beta::Critical);
        }
        s.parse::<f64>()
            .map(Beta::Value)
            .map_err(|_| format!("beta must be `critical` or a number, got `{s}`"))
    }
}

impl Serialize for Beta {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Beta::Critical => s.serialize_str("critical"),
            Beta::Value(b) => s.serialize_f64(*b),
        }
    }
}

impl<'de> Deserialize<'de> for Beta {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(b) => Ok(Beta::Value(b)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

fn default_engine() -> Engine {
    Engine::KacWard
}

fn default_c() -> f64 {
    1.0
}

/// A restriction function, optionally gauge transformed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EvaluatorSpec {
    Ust {
        #[serde(default)]
        gauge: Option<GaugeSpec>,
    },
    Soup {
        #[serde(default = "default_c")]
        c: f64,
        #[serde(default)]
        gauge: Option<GaugeSpec>,
    },
    Ising {
        #[serde(default)]
        beta: Beta,
        #[serde(default = "default_engine")]
        engine: Engine,
        #[serde(default)]
        gauge: Option<GaugeSpec>,
    },
}

impl EvaluatorSpec {
    pub fn build(&self) -> Result<RestrictionEvaluator, SpecParseError> {
        let (base, gauge) = match self {
            EvaluatorSpec::Ust { gauge } => (RestrictionEvaluator::Ust, gauge),
            EvaluatorSpec::Soup { c, gauge } => (RestrictionEvaluator::Soup { c: *c }, gauge),
            EvaluatorSpec::Ising { beta, engine, gauge } => {
                (RestrictionEvaluator::ising(beta.resolve()?, *engine), gauge)
            }
        };
        Ok(match gauge {
            Some(g) => gauge_transform(&base, g.build()),
            None => base,
        })
    }
}

/// A gauge function `scale · g` with `g` from a fixed menu.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeSpec {
    pub function: GaugeKind,
    #[serde(default = "default_c")]
    pub scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaugeKind {
    LoopLength,
    EnclosedArea,
    DomainArea,
}

impl GaugeSpec {
    pub fn build(&self) -> GaugeFunction {
        let g = match self.function {
            GaugeKind::LoopLength => GaugeFunction::loop_length(),
            GaugeKind::EnclosedArea => GaugeFunction::enclosed_area(),
            GaugeKind::DomainArea => GaugeFunction::domain_area(),
        };
        if self.scale == 1.0 {
            g
        } else {
            g.scaled(self.scale)
        }
    }
}

fn default_eps() -> f64 {
    1e-6
}

fn default_levels() -> Vec<u32> {
    vec![1, 2, 3]
}

fn default_ratio_tolerance() -> f64 {
    1e-9
}

fn default_min_r2() -> f64 {
    0.9
}

fn default_scales() -> Vec<f64> {
    vec![2.0, 4.0, 8.0, 16.0]
}

/// What is computed for each item of the source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Task {
    /// `f(ℓ, Ω', Ω)` on configurations.
    Restriction { evaluator: EvaluatorSpec },
    /// `M(ℓ, Ω', Ω)` on configurations.
    SoupMass,
    /// `f_UST + M` on configurations; checked against the tolerance.
    UstSoupIdentity,
    /// Transfer against enumeration (relative, on the outer domain) and
    /// Kac-Ward against enumeration (on the four-term ratio).
    EngineOracle {
        #[serde(default)]
        beta: Beta,
        /// Bound on the ratio gap; the spec tolerance bounds the relative
        /// `log Z` gap.
        #[serde(default = "default_ratio_tolerance")]
        ratio_tolerance: f64,
    },
    /// Wired spanning trees of a domain, by matrix-tree and by listing.
    TreeCount,
    /// Cocycle defect on triples.
    Cocycle { evaluator: EvaluatorSpec },
    /// `|f - gauge(gauge(f, g), -g)|` and the cocycle-defect shift on
    /// triples.
    GaugeRoundtrip { evaluator: EvaluatorSpec, gauge: GaugeSpec },
    /// Largest rho-defect over the eight point symmetries. The inner
    /// domain of each configuration is the annulus.
    RhoSymmetry { evaluator: EvaluatorSpec },
    /// Rho-defect of dyadic refinement at each refinement level, with the
    /// inner domain as the annulus.
    RhoDyadic {
        evaluator: EvaluatorSpec,
        #[serde(default = "default_levels")]
        levels: Vec<u32>,
    },
    /// `ising_restriction` and `soup_mass_m` at each refinement level,
    /// followed by a per-level regression.
    IsingVsSoup {
        #[serde(default)]
        beta: Beta,
        #[serde(default = "default_engine")]
        engine: Engine,
        #[serde(default = "default_levels")]
        levels: Vec<u32>,
        #[serde(default = "default_min_r2")]
        min_r2: f64,
    },
    RotationNumber {
        #[serde(default = "default_eps")]
        eps: f64,
    },
    SolveAlpha {
        theta: f64,
        #[serde(default = "default_eps")]
        eps: f64,
    },
    CommutatorCheck {
        theta: f64,
        #[serde(default)]
        beta: f64,
        #[serde(default = "default_eps")]
        eps: f64,
    },
    LerwDimension {
        side: i64,
        loops: usize,
        #[serde(default)]
        min_extent: usize,
        #[serde(default = "default_scales")]
        scales: Vec<f64>,
    },
}

/// Where the items come from.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Source {
    /// A single item with no input (LERW sampling).
    #[default]
    None,
    /// Random nested pairs.
    GenerateConfigs { generator: GeneratorSpec },
    /// Random nested triples.
    GenerateTriples { generator: GeneratorSpec },
    /// Configuration files matching a glob, relative to the spec file.
    ConfigFiles { glob: String },
    /// One triples file, relative to the spec file.
    TriplesFile { path: String },
    /// Every free polyomino with at most `max_cells` cells, as a domain.
    Polyominoes { max_cells: usize },
    /// Circle maps.
    Maps { maps: Vec<DiffeoSpec> },
}

impl ExperimentSpec {
    pub fn from_file(path: &Path) -> Result<Self, SpecParseError> {
        let text = std::fs::read_to_string(path).map_err(|source| SpecParseError::Io {
            path: path.to_owned(),
            source,
        })?;
        let spec: ExperimentSpec = serde_json::from_str(&text).map_err(|source| SpecParseError::Json {
            path: path.to_owned(),
            source,
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), SpecParseError> {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(SpecParseError::Invalid(format!("bad name `{}`", self.name)));
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return Err(SpecParseError::Invalid("tolerance must be non-negative".into()));
        }
        if self.jobs == Some(0) {
            return Err(SpecParseError::Invalid("jobs must be positive".into()));
        }
        let needs = match &self.task {
            Task::Restriction { .. }
            | Task::SoupMass
            | Task::UstSoupIdentity
            | Task::EngineOracle { .. }
            | Task::RhoSymmetry { .. }
            | Task::RhoDyadic { .. }
            | Task::IsingVsSoup { .. } => "configs",
            Task::Cocycle { .. } | Task::GaugeRoundtrip { .. } => "triples",
            Task::TreeCount => "domains",
            Task::RotationNumber { .. } | Task::SolveAlpha { .. } | Task::CommutatorCheck { .. } => "maps",
            Task::LerwDimension { .. } => "none",
        };
        let has = match &self.source {
            Source::None => "none",
            Source::GenerateConfigs { .. } | Source::ConfigFiles { .. } => "configs",
            Source::GenerateTriples { .. } | Source::TriplesFile { .. } => "triples",
            Source::Polyominoes { .. } => "domains",
            Source::Maps { .. } => "maps",
        };
        // triples carry configurations too; domains come from either
        let compatible = needs == has
            || (needs == "configs" && has == "triples")
            || (needs == "domains" && matches!(has, "configs" | "triples"));
        if !compatible {
            return Err(SpecParseError::Invalid(format!("task needs {needs}, source gives {has}")));
        }
        self.task_evaluator().map(|e| e.build()).transpose()?;
        Ok(())
    }

    fn task_evaluator(&self) -> Option<&EvaluatorSpec> {
        match &self.task {
            Task::Restriction { evaluator }
            | Task::Cocycle { evaluator }
            | Task::GaugeRoundtrip { evaluator, .. }
            | Task::RhoSymmetry { evaluator }
            | Task::RhoDyadic { evaluator, .. } => Some(evaluator),
            _ => None,
        }
    }

    /// SHA-256 of the canonical JSON form, as lower-case hex.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("plain data serialises");
        Sha256::digest(&canonical).iter().map(|b| format!("{b:02x}")).collect()
    }
}
