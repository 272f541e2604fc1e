//! Lattice loop restriction experiments: discrete domains and dual loops,
//! Ising and uniform-spanning-tree restriction functionals, loop-soup
//! masses, cocycle checks and circle-map rotation numbers.

pub mod circle;
pub mod cocycle;
pub mod ising;
pub mod lattice;
pub mod linalg;
pub mod loopsoup;

pub use lattice::{
    DiscreteDomain, DualLoop, DualSite, LatticeError, NestedConfig, Site, VertexSet,
};

use thiserror::Error;

/// Crate version, stamped into result rows.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Any error raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Ising(#[from] ising::IsingError),
    #[error(transparent)]
    Soup(#[from] loopsoup::SoupError),
    #[error(transparent)]
    Cocycle(#[from] cocycle::CocycleError),
    #[error(transparent)]
    Circle(#[from] circle::CircleError),
}
