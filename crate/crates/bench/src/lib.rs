//! Shared inputs for the benchmarks.

use looplab_core::lattice::generate::{generate_configs, GeneratorSpec};
use looplab_core::{NestedConfig, VertexSet};

/// A square block of `side * side` sites.
pub fn square(side: i64) -> VertexSet {
    VertexSet::rectangle(0, 0, side - 1, side - 1)
}

/// A fixed non-trivial configuration in a `side x side` box.
pub fn config(side: i64) -> NestedConfig {
    generate_configs(&GeneratorSpec::new(8, side, side).with_max_loop_side(side / 2), 1)
        .expect("generator succeeds")
        .into_iter()
        .find(|c| !c.is_trivial())
        .expect("some configuration is non-trivial")
}
