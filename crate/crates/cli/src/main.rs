use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use looplab_cli::{read_config, read_map, read_triples, run_sweep, Beta, EvaluatorSpec, ExperimentSpec, SweepOptions};
use looplab_cli::OUT_DIR_ENV;
use looplab_core::circle::{commutator_decomposition_check, rotation_number, solve_alpha};
use looplab_core::cocycle::check_cocycle;
use looplab_core::ising::{ising_restriction, Engine};
use looplab_core::loopsoup::{box_dimension, sample_lerw_loops, soup_mass_m, ust_restriction, LerwOptions, SleParameter};

#[derive(Parser)]
#[command(name = "looplab", version, about = "Lattice loop restriction and circle-map experiments")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Random seed; overrides the seed in a sweep spec.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output file, or output directory for `sweep`. Relative paths are
    /// resolved against $LOOPLAB_OUT_DIR when it is set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Tolerance for checked quantities.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Exit with status 3 when a checked quantity fails.
    #[arg(long, global = true)]
    assert: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Ising restriction function of one configuration.
    IsingRestriction {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "kacward")]
        engine: Engine,
        /// `critical` or a number.
        #[arg(long, default_value = "critical")]
        beta: Beta,
    },
    /// Spanning-tree restriction function of one configuration.
    UstRestriction {
        #[arg(long)]
        config: PathBuf,
    },
    /// Loop-soup mass M of one configuration.
    SoupMass {
        #[arg(long)]
        config: PathBuf,
    },
    /// Cocycle defect of every triple in a file, as JSONL.
    CocycleCheck {
        #[arg(long, value_parser = ["ust", "ising", "soup"])]
        evaluator: String,
        #[arg(long)]
        triples: PathBuf,
        /// Soup multiplier.
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value = "critical")]
        beta: Beta,
        #[arg(long, default_value = "enum")]
        engine: Engine,
    },
    /// Rotation number of a circle map.
    RotationNumber {
        /// `mobius:θ,re[,im]`, `trig:a0,a1,b1,...`, `rotation:α` or a JSON
        /// file.
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
    },
    /// The rotation α with r(R_α ∘ f) = θ.
    SolveAlpha {
        #[arg(long)]
        map: String,
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
    },
    /// Checks the commutator factorisation of R_{-β} ∘ h⁻¹ ∘ R_θ ∘ h.
    CommutatorCheck {
        #[arg(long)]
        h: String,
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
    },
    /// Box-counting dimension of loop-erased walk loops, as CSV.
    LerwDimension {
        #[arg(long, default_value_t = 128)]
        side: i64,
        #[arg(long, default_value_t = 50)]
        loops: usize,
        /// Smallest accepted loop extent (default: side / 4).
        #[arg(long)]
        min_extent: Option<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16")]
        scales: Vec<f64>,
    },
    /// Runs an experiment spec, resuming from its journal.
    Sweep { spec: PathBuf },
}

enum Failure {
    Usage(anyhow::Error),
    Engine(anyhow::Error),
    Assertion(String),
}

impl Failure {
    fn engine(e: impl Into<anyhow::Error>) -> Self {
        Failure::Engine(e.into())
    }

    fn usage(e: impl Into<anyhow::Error>) -> Self {
        Failure::Usage(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Engine(e)) => {
            eprintln!("engine failure: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Assertion(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(3)
        }
    }
}

fn resolve_out(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path.to_owned(),
    }
}

/// Writes to `--out` when given, else to stdout.
fn emit(global: &Global, text: &str) -> Result<(), Failure> {
    match &global.out {
        Some(path) => {
            let path = resolve_out(path);
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).with_context(|| dir.display().to_string()).map_err(Failure::usage)?;
            }
            std::fs::write(&path, text).with_context(|| path.display().to_string()).map_err(Failure::usage)
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check(global: &Global, ok: bool, msg: impl FnOnce() -> String) -> Result<(), Failure> {
    if global.assert && !ok {
        Err(Failure::Assertion(msg()))
    } else {
        Ok(())
    }
}

fn config_id(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn single_shot(
    global: &Global,
    path: &Path,
    quantity: &str,
    engine: &str,
    f: impl FnOnce(&looplab_core::NestedConfig) -> anyhow::Result<f64>,
) -> Result<(), Failure> {
    let cfg = read_config(path).map_err(Failure::usage)?;
    let start = Instant::now();
    let value = f(&cfg).map_err(Failure::Engine)?;
    let out = json!({
        "config_id": config_id(path),
        "quantity": quantity,
        "f": value,
        "engine": engine,
        "engine_version": looplab_cli::engine_version(engine),
        "timings": { "seconds": start.elapsed().as_secs_f64() },
    });
    emit(global, &format!("{out}\n"))
}

fn pool(global: &Global) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(global.jobs.unwrap_or(0))
        .build()
        .map_err(Failure::usage)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    if g.jobs == Some(0) {
        return Err(Failure::usage(anyhow::anyhow!("--jobs must be positive")));
    }
    match cli.command {
        Command::IsingRestriction { config, engine, beta } => {
            let beta = beta.resolve().map_err(Failure::usage)?;
            single_shot(g, &config, "ising_restriction", engine.name(), |c| {
                Ok(ising_restriction(c, beta, engine)?)
            })
        }
        Command::UstRestriction { config } => {
            single_shot(g, &config, "ust_restriction", "matrix-tree", |c| Ok(ust_restriction(c)?))
        }
        Command::SoupMass { config } => single_shot(g, &config, "soup_mass_m", "loop-soup", |c| Ok(soup_mass_m(c)?)),
        Command::CocycleCheck {
            evaluator,
            triples,
            c,
            beta,
            engine,
        } => {
            let tol = g.tol.unwrap_or_else(looplab_cli::spec::default_tolerance);
            let spec = match evaluator.as_str() {
                "ust" => EvaluatorSpec::Ust { gauge: None },
                "soup" => EvaluatorSpec::Soup { c, gauge: None },
                _ => EvaluatorSpec::Ising {
                    beta,
                    engine,
                    gauge: None,
                },
            };
            let f = spec.build().map_err(Failure::usage)?;
            let list = read_triples(&triples).map_err(Failure::usage)?;
            let stem = config_id(&triples);
            let reports = pool(g)?.install(|| {
                list.par_iter()
                    .enumerate()
                    .map(|(i, t)| check_cocycle(&f, t, tol, format!("{stem}-{i:04}")))
                    .collect::<Result<Vec<_>, _>>()
            });
            let reports = reports.map_err(Failure::engine)?;
            let text: String = reports
                .iter()
                .map(|r| serde_json::to_string(r).expect("plain data serialises") + "\n")
                .collect();
            emit(g, &text)?;
            let failed = reports.iter().filter(|r| !r.pass).count();
            check(g, failed == 0, || format!("{failed} of {} triples exceed {tol:e}", reports.len()))
        }
        Command::RotationNumber { map, eps } => {
            let f = read_map(&map).map_err(Failure::usage)?.build().map_err(Failure::usage)?;
            let r = rotation_number(&f, eps).map_err(Failure::engine)?;
            emit(g, &format!("{}\n", serde_json::to_string(&r).expect("plain data serialises")))
        }
        Command::SolveAlpha { map, theta, eps } => {
            let f = read_map(&map).map_err(Failure::usage)?.build().map_err(Failure::usage)?;
            let s = solve_alpha(&f, theta, eps).map_err(Failure::engine)?;
            emit(g, &format!("{}\n", serde_json::to_string(&s).expect("plain data serialises")))
        }
        Command::CommutatorCheck { h, theta, beta, eps } => {
            let tol = g.tol.unwrap_or_else(looplab_cli::spec::default_tolerance);
            let h = read_map(&h).map_err(Failure::usage)?.build().map_err(Failure::usage)?;
            let r = commutator_decomposition_check(&h, theta, beta, eps).map_err(Failure::engine)?;
            emit(g, &format!("{}\n", serde_json::to_string(&r).expect("plain data serialises")))?;
            check(g, r.sup_defect <= tol, || format!("sup defect {:e} exceeds {tol:e}", r.sup_defect))
        }
        Command::LerwDimension {
            side,
            loops,
            min_extent,
            scales,
        } => {
            if side < 2 {
                return Err(Failure::usage(anyhow::anyhow!("--side must be at least 2")));
            }
            let domain = looplab_core::VertexSet::rectangle(0, 0, side - 1, side - 1);
            let options = LerwOptions {
                min_extent: min_extent.unwrap_or(side as usize / 4),
                ..LerwOptions::default()
            };
            let seed = g.seed.unwrap_or(0);
            let cycles = sample_lerw_loops(&domain, loops, seed, options).map_err(Failure::engine)?;
            let est = box_dimension(&cycles, &scales).map_err(Failure::engine)?;
            let mut text = String::from("config_id,quantity,value,engine,mesh_exponent\n");
            for (i, s) in est.slopes.iter().enumerate() {
                text.push_str(&format!("loop-{i:04},box_slope,{s},lerw,0\n"));
            }
            text.push_str(&format!("all,dimension,{},lerw,0\n", est.dimension));
            text.push_str(&format!("all,stderr,{},lerw,0\n", est.stderr));
            emit(g, &text)?;
            let expected = SleParameter::new(2.0).map_err(Failure::engine)?.dimension();
            let window = g.tol.unwrap_or(0.10);
            check(g, (est.dimension - expected).abs() <= window, || {
                format!("dimension {:.4} outside {expected} +- {window}", est.dimension)
            })
        }
        Command::Sweep { spec: path } => {
            let mut spec = ExperimentSpec::from_file(&path).map_err(Failure::usage)?;
            if let Some(tol) = g.tol {
                spec.tolerance = tol;
            }
            let out_dir = match &g.out {
                Some(dir) => resolve_out(dir),
                None => std::env::var_os(OUT_DIR_ENV)
                    .map(PathBuf::from)
                    .unwrap_or_else(|| PathBuf::from("looplab-out")),
            };
            let options = SweepOptions {
                out_dir,
                base_dir: path.parent().map(Path::to_owned).unwrap_or_default(),
                seed: g.seed,
                jobs: g.jobs,
            };
            let outcome = run_sweep(&spec, &options).map_err(|e| match e {
                looplab_cli::SweepError::Spec(e) => Failure::usage(e),
                other => Failure::engine(other),
            })?;
            let failures = outcome.failures();
            eprintln!(
                "{}: {} rows, {} items computed, {} from journal, {failures} failed checks; {}",
                spec.name,
                outcome.rows.len(),
                outcome.computed,
                outcome.skipped,
                outcome.jsonl.display()
            );
            check(g, failures == 0, || format!("{failures} rows failed in {}", spec.name))
        }
    }
}
