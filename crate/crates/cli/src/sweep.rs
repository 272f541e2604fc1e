use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::evaluate::{Measurement, Prepared};
use crate::items::{load_items, Item};
use crate::spec::{ExperimentSpec, SpecParseError, Task};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Spec(#[from] SpecParseError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("thread pool: {0}")]
    Pool(String),
}

/// One line of sweep output. Wall times live in a sidecar file so that
/// result files are reproducible byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub spec_hash: String,
    pub config_id: String,
    pub quantity: String,
    pub value: Option<f64>,
    pub error_bound: Option<f64>,
    /// Outcome of the row's check, for checked quantities.
    pub pass: Option<bool>,
    /// Set on failed rows, which carry no value.
    pub error: Option<String>,
    pub engine_version: String,
}

impl ResultRow {
    fn measured(hash: &str, id: &str, m: Measurement) -> Self {
        ResultRow {
            spec_hash: hash.into(),
            config_id: id.into(),
            quantity: m.quantity,
            value: Some(m.value),
            error_bound: m.error_bound,
            pass: m.pass,
            error: None,
            engine_version: engine_version(&m.engine),
        }
    }

    fn failed(hash: &str, id: &str, error: String) -> Self {
        ResultRow {
            spec_hash: hash.into(),
            config_id: id.into(),
            quantity: "error".into(),
            value: None,
            error_bound: None,
            pass: Some(false),
            error: Some(error),
            engine_version: engine_version("-"),
        }
    }

    pub fn is_failure(&self) -> bool {
        self.pass == Some(false)
    }
}

pub fn engine_version(engine: &str) -> String {
    format!("looplab-core/{} {engine}", looplab_core::VERSION)
}

/// Rows of the finished items of one spec, keyed by config id. A journal
/// is reused only when both the spec and its input files are unchanged.
#[derive(Debug, Default, Serialize, Deserialize)]
struct Journal {
    spec_hash: String,
    inputs_hash: String,
    completed: BTreeMap<String, Vec<ResultRow>>,
}

impl Journal {
    fn load(path: &Path, spec_hash: &str, inputs_hash: &str) -> Journal {
        std::fs::read_to_string(path)
            .ok()
            .and_then(|t| serde_json::from_str::<Journal>(&t).ok())
            .filter(|j| j.spec_hash == spec_hash && j.inputs_hash == inputs_hash)
            .unwrap_or_else(|| Journal {
                spec_hash: spec_hash.into(),
                inputs_hash: inputs_hash.into(),
                completed: BTreeMap::new(),
            })
    }

    fn save(&self, path: &Path) -> Result<(), SweepError> {
        write_atomic(path, &serde_json::to_vec(self).expect("plain data serialises"))
    }
}

/// Digest of the items' inputs, so that edited input files invalidate the
/// journal.
fn inputs_hash(items: &[Item]) -> String {
    let mut h = Sha256::new();
    for it in items {
        h.update(it.id.as_bytes());
        h.update(it.fingerprint().as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), SweepError> {
    let io = |source| SweepError::Io {
        path: path.to_owned(),
        source,
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, bytes).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    pub out_dir: PathBuf,
    /// Directory that relative paths in the spec are resolved against.
    pub base_dir: PathBuf,
    /// Overrides the spec's seed.
    pub seed: Option<u64>,
    /// Overrides the spec's worker count.
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub spec_hash: String,
    pub rows: Vec<ResultRow>,
    /// Items evaluated in this run.
    pub computed: usize,
    /// Items found in the journal.
    pub skipped: usize,
    pub jsonl: PathBuf,
    pub csv: PathBuf,
}

impl SweepOutcome {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.is_failure()).count()
    }
}

/// Runs every item of `spec` not already in the journal, then writes
/// `<name>.jsonl` and `<name>.csv` with all rows in item order. Items are
/// evaluated in parallel; failed items become failed rows.
pub fn run_sweep(spec: &ExperimentSpec, options: &SweepOptions) -> Result<SweepOutcome, SweepError> {
    let mut spec = spec.clone();
    if let Some(seed) = options.seed {
        spec.seed = seed;
    }
    spec.validate()?;
    let hash = spec.hash();
    let prepared = Prepared::new(&spec)?;
    let items = load_items(&spec.source, spec.seed, &options.base_dir)?;

    std::fs::create_dir_all(&options.out_dir).map_err(|source| SweepError::Io {
        path: options.out_dir.clone(),
        source,
    })?;
    let file = |ext: &str| options.out_dir.join(format!("{}.{ext}", spec.name));
    let journal_path = file("journal.json");
    let mut journal = Journal::load(&journal_path, &hash, &inputs_hash(&items));

    let pending: Vec<&Item> = items.iter().filter(|it| !journal.completed.contains_key(&it.id)).collect();
    let skipped = items.len() - pending.len();
    let jobs = options.jobs.or(spec.jobs).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| SweepError::Pool(e.to_string()))?;
    let chunk = pool.current_num_threads() * 4;
    let timings_path = file("timings.csv");
    for batch in pending.chunks(chunk.max(1)) {
        let results: Vec<(Vec<ResultRow>, f64)> = pool.install(|| {
            batch
                .par_iter()
                .map(|item| {
                    let start = Instant::now();
                    let rows = match prepared.evaluate(&item.input) {
                        Ok(ms) => ms.into_iter().map(|m| ResultRow::measured(&hash, &item.id, m)).collect(),
                        Err(e) => vec![ResultRow::failed(&hash, &item.id, e.to_string())],
                    };
                    (rows, start.elapsed().as_secs_f64())
                })
                .collect()
        });
        let mut timings = String::new();
        for (item, (rows, secs)) in batch.iter().zip(results) {
            timings.push_str(&format!("{},{},{secs:.6}\n", hash, item.id));
            journal.completed.insert(item.id.clone(), rows);
        }
        journal.save(&journal_path)?;
        append(&timings_path, &timings)?;
    }

    let mut rows: Vec<ResultRow> = items
        .iter()
        .flat_map(|it| journal.completed[&it.id].iter().cloned())
        .collect();
    rows.extend(aggregate(&prepared.task, &hash, &rows));

    let jsonl = file("jsonl");
    let mut text = String::new();
    for r in &rows {
        text.push_str(&serde_json::to_string(r).expect("plain data serialises"));
        text.push('\n');
    }
    write_atomic(&jsonl, text.as_bytes())?;
    let csv = file("csv");
    write_atomic(&csv, &rows_to_csv(&rows))?;

    Ok(SweepOutcome {
        spec_hash: hash,
        rows,
        computed: pending.len(),
        skipped,
        jsonl,
        csv,
    })
}

fn append(path: &Path, text: &str) -> Result<(), SweepError> {
    let io = |source| SweepError::Io {
        path: path.to_owned(),
        source,
    };
    let mut f = std::fs::OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
    f.write_all(text.as_bytes()).map_err(io)
}

pub fn rows_to_csv(rows: &[ResultRow]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory writer");
    }
    w.into_inner().expect("in-memory writer")
}

/// Summary rows computed from the per-item rows of tasks that have them.
fn aggregate(task: &Task, hash: &str, rows: &[ResultRow]) -> Vec<ResultRow> {
    let Task::IsingVsSoup { levels, min_r2, .. } = task else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut slopes = Vec::new();
    let row = |quantity: String, value: f64, pass: Option<bool>| ResultRow {
        spec_hash: hash.into(),
        config_id: "regression".into(),
        quantity,
        value: Some(value),
        error_bound: None,
        pass,
        error: None,
        engine_version: engine_version("least-squares"),
    };
    for l in levels {
        let column = |q: String| -> BTreeMap<&str, f64> {
            rows.iter()
                .filter(|r| r.quantity == q)
                .filter_map(|r| r.value.map(|v| (r.config_id.as_str(), v)))
                .collect()
        };
        let xs = column(format!("soup_mass_m@{l}"));
        let ys = column(format!("ising_restriction@{l}"));
        let pairs: Vec<(f64, f64)> = xs.iter().filter_map(|(id, x)| ys.get(id).map(|y| (*x, *y))).collect();
        let Some((slope, intercept, r2)) = regression(&pairs) else {
            out.push(row(format!("pairs@{l}"), pairs.len() as f64, Some(false)));
            continue;
        };
        slopes.push(slope);
        out.push(row(format!("pairs@{l}"), pairs.len() as f64, None));
        out.push(row(format!("slope@{l}"), slope, None));
        out.push(row(format!("intercept@{l}"), intercept, None));
        out.push(row(format!("r2@{l}"), r2, Some(r2 >= *min_r2)));
    }
    if let (Some(first), Some(last)) = (slopes.first(), slopes.last()) {
        out.push(row("slope_drift".into(), last - first, None));
        let stable = slopes.iter().all(|s| s.signum() == first.signum());
        out.push(row("sign_stable".into(), f64::from(u8::from(stable)), Some(stable)));
    }
    out
}

/// Least-squares slope, intercept and R²; `None` for fewer than two
/// distinct abscissae.
pub fn regression(pairs: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let n = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pairs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pairs.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let syy: f64 = pairs.iter().map(|(_, y)| (y - my).powi(2)).sum();
    if pairs.len() < 2 || sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some((slope, my - slope * mx, r2))
}
