//! JSON file formats for domains, loops and configurations.
//!
//! Domains are `{"mesh_exponent": k, "vertices": [[x, y], ...]}` and loops
//! are `{"dual_sites": [[x, y], ...]}` in doubled coordinates. Writers
//! always emit the canonical order, so files produced from equal objects
//! are byte-identical.

use serde::{Deserialize, Serialize};

use super::generate::NestedTriple;
use super::{DiscreteDomain, DualLoop, DualSite, LatticeError, NestedConfig, Site, VertexSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainFile {
    pub mesh_exponent: u32,
    pub vertices: Vec<[i64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopFile {
    pub dual_sites: Vec<[i64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigFile {
    #[serde(rename = "loop")]
    pub dual_loop: LoopFile,
    pub inner: DomainFile,
    pub outer: DomainFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleFile {
    #[serde(rename = "loop")]
    pub dual_loop: LoopFile,
    /// Smallest first.
    pub domains: [DomainFile; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriplesFile {
    pub triples: Vec<TripleFile>,
}

impl From<&DiscreteDomain> for DomainFile {
    fn from(d: &DiscreteDomain) -> Self {
        DomainFile {
            mesh_exponent: d.mesh_exponent(),
            vertices: d.sites().iter().map(|s| [s.x, s.y]).collect(),
        }
    }
}

impl TryFrom<&DomainFile> for DiscreteDomain {
    type Error = LatticeError;

    fn try_from(f: &DomainFile) -> Result<Self, Self::Error> {
        DiscreteDomain::new(
            VertexSet::new(f.vertices.iter().map(|&[x, y]| Site::new(x, y))),
            f.mesh_exponent,
        )
    }
}

impl From<&DualLoop> for LoopFile {
    fn from(l: &DualLoop) -> Self {
        LoopFile {
            dual_sites: l.sites().iter().map(|d| [d.x, d.y]).collect(),
        }
    }
}

impl TryFrom<&LoopFile> for DualLoop {
    type Error = LatticeError;

    fn try_from(f: &LoopFile) -> Result<Self, Self::Error> {
        DualLoop::new(f.dual_sites.iter().map(|&[x, y]| DualSite::new(x, y)).collect())
    }
}

impl From<&NestedConfig> for ConfigFile {
    fn from(c: &NestedConfig) -> Self {
        ConfigFile {
            dual_loop: c.dual_loop().into(),
            inner: c.inner().into(),
            outer: c.outer().into(),
        }
    }
}

impl TryFrom<&ConfigFile> for NestedConfig {
    type Error = LatticeError;

    fn try_from(f: &ConfigFile) -> Result<Self, Self::Error> {
        NestedConfig::new(
            (&f.dual_loop).try_into()?,
            (&f.inner).try_into()?,
            (&f.outer).try_into()?,
        )
    }
}

impl From<&NestedTriple> for TripleFile {
    fn from(t: &NestedTriple) -> Self {
        TripleFile {
            dual_loop: (&t.dual_loop).into(),
            domains: [
                (&t.domains[0]).into(),
                (&t.domains[1]).into(),
                (&t.domains[2]).into(),
            ],
        }
    }
}

impl TryFrom<&TripleFile> for NestedTriple {
    type Error = LatticeError;

    fn try_from(f: &TripleFile) -> Result<Self, Self::Error> {
        NestedTriple::new(
            (&f.dual_loop).try_into()?,
            [
                (&f.domains[0]).try_into()?,
                (&f.domains[1]).try_into()?,
                (&f.domains[2]).try_into()?,
            ],
        )
    }
}

/// Canonical single-line JSON for any of the file types.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serialises")
}
