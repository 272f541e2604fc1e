//! Experiment specs, sweeps and file plumbing behind the `looplab` binary.

pub mod evaluate;
pub mod items;
pub mod oracle;
pub mod spec;
pub mod sweep;

pub use evaluate::{Measurement, Prepared};
pub use items::{load_items, read_config, read_map, read_triples, Input, Item};
pub use spec::{Beta, EvaluatorSpec, ExperimentSpec, GaugeKind, GaugeSpec, Source, SpecParseError, Task};
pub use sweep::{engine_version, run_sweep, ResultRow, SweepError, SweepOptions, SweepOutcome};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "LOOPLAB_OUT_DIR";
