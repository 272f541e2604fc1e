use std::path::Path;

use looplab_core::circle::DiffeoSpec;
use looplab_core::lattice::generate::{generate_configs, generate_triples, NestedTriple};
use looplab_core::lattice::io::{to_canonical_json, ConfigFile, DomainFile, TripleFile, TriplesFile};
use looplab_core::{DiscreteDomain, NestedConfig};

use crate::oracle::free_polyominoes;
use crate::spec::{Source, SpecParseError};

/// One unit of work, with a stable id.
#[derive(Debug, Clone)]
pub struct Item {
    pub id: String,
    pub input: Input,
}

#[derive(Debug, Clone)]
pub enum Input {
    None,
    Config(NestedConfig),
    Triple(NestedTriple),
    Domain(DiscreteDomain),
    Map(DiffeoSpec),
}

impl Item {
    /// Canonical text of the input.
    pub fn fingerprint(&self) -> String {
        match &self.input {
            Input::None => String::new(),
            Input::Config(c) => to_canonical_json(&ConfigFile::from(c)),
            Input::Triple(t) => to_canonical_json(&TripleFile::from(t)),
            Input::Domain(d) => to_canonical_json(&DomainFile::from(d)),
            Input::Map(m) => to_canonical_json(m),
        }
    }
}

impl Input {
    /// The configuration of an item; triples give (innermost, outermost).
    pub fn config(&self) -> Option<NestedConfig> {
        match self {
            Input::Config(c) => Some(c.clone()),
            Input::Triple(t) => Some(t.config(0, 2)),
            _ => None,
        }
    }

    /// The domain of an item; configurations give their outer domain.
    pub fn domain(&self) -> Option<DiscreteDomain> {
        match self {
            Input::Domain(d) => Some(d.clone()),
            other => other.config().map(|c| c.outer().clone()),
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, SpecParseError> {
    let text = std::fs::read_to_string(path).map_err(|source| SpecParseError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| SpecParseError::Json {
        path: path.to_owned(),
        source,
    })
}

fn invalid(what: &Path, e: impl std::fmt::Display) -> SpecParseError {
    SpecParseError::Invalid(format!("{}: {e}", what.display()))
}

/// Reads one configuration file.
pub fn read_config(path: &Path) -> Result<NestedConfig, SpecParseError> {
    let file: ConfigFile = read_json(path)?;
    NestedConfig::try_from(&file).map_err(|e| invalid(path, e))
}

/// Reads a triples file.
pub fn read_triples(path: &Path) -> Result<Vec<NestedTriple>, SpecParseError> {
    let file: TriplesFile = read_json(path)?;
    file.triples
        .iter()
        .map(|t| NestedTriple::try_from(t).map_err(|e| invalid(path, e)))
        .collect()
}

/// Reads a circle map given either inline (`mobius:0,0.3`) or as a JSON
/// file path.
pub fn read_map(arg: &str) -> Result<DiffeoSpec, SpecParseError> {
    let path = Path::new(arg);
    if path.is_file() {
        return read_json(path);
    }
    arg.parse().map_err(|e: looplab_core::circle::CircleError| SpecParseError::Invalid(e.to_string()))
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Materialises the items of a source. Relative paths are resolved against
/// `base_dir`.
pub fn load_items(source: &Source, seed: u64, base_dir: &Path) -> Result<Vec<Item>, SpecParseError> {
    let numbered = |prefix: &str, inputs: Vec<Input>| -> Vec<Item> {
        inputs
            .into_iter()
            .enumerate()
            .map(|(i, input)| Item {
                id: format!("{prefix}-{i:04}"),
                input,
            })
            .collect()
    };
    Ok(match source {
        Source::None => vec![Item {
            id: "run".into(),
            input: Input::None,
        }],
        Source::GenerateConfigs { generator } => {
            let configs = generate_configs(generator, seed).map_err(|e| SpecParseError::Invalid(e.to_string()))?;
            numbered("cfg", configs.into_iter().map(Input::Config).collect())
        }
        Source::GenerateTriples { generator } => {
            let triples = generate_triples(generator, seed).map_err(|e| SpecParseError::Invalid(e.to_string()))?;
            numbered("triple", triples.into_iter().map(Input::Triple).collect())
        }
        Source::ConfigFiles { glob } => {
            let pattern = base_dir.join(glob);
            let paths = glob::glob(&pattern.to_string_lossy()).map_err(|e| SpecParseError::Invalid(e.to_string()))?;
            let mut paths: Vec<_> = paths
                .collect::<Result<_, _>>()
                .map_err(|e| SpecParseError::Invalid(e.to_string()))?;
            paths.sort();
            paths
                .iter()
                .map(|p| {
                    Ok(Item {
                        id: stem(p),
                        input: Input::Config(read_config(p)?),
                    })
                })
                .collect::<Result<_, SpecParseError>>()?
        }
        Source::TriplesFile { path } => {
            let path = base_dir.join(path);
            let prefix = stem(&path);
            numbered(&prefix, read_triples(&path)?.into_iter().map(Input::Triple).collect())
        }
        Source::Polyominoes { max_cells } => numbered(
            "poly",
            free_polyominoes(*max_cells)
                .into_iter()
                .map(|s| Input::Domain(DiscreteDomain::new(s, 0).expect("polyominoes are connected")))
                .collect(),
        ),
        Source::Maps { maps } => numbered("map", maps.iter().cloned().map(Input::Map).collect()),
    })
}
