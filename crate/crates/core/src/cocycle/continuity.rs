use serde::{Deserialize, Serialize};

use super::CocycleError;
use crate::lattice::DualLoop;

const SAMPLES: usize = 256;
const MIN_SEQUENCE: usize = 5;

/// A loop at a given mesh together with the value of `g` on it.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeLoop {
    pub dual_loop: DualLoop,
    pub mesh_exponent: u32,
    pub g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuityRow {
    pub distance: f64,
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub rows: Vec<ContinuityRow>,
    /// Indices of rows whose difference is not smaller than the previous one.
    pub not_shrinking: Vec<usize>,
}

impl ContinuityReport {
    pub fn is_shrinking(&self) -> bool {
        self.not_shrinking.is_empty()
    }
}

/// Points at equally spaced arclength along the closed polygon.
fn resample(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let n = points.len();
    let seg: Vec<f64> = (0..n)
        .map(|i| {
            let (a, b) = (points[i], points[(i + 1) % n]);
            ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt()
        })
        .collect();
    let total: f64 = seg.iter().sum();
    let mut out = Vec::with_capacity(SAMPLES);
    let (mut i, mut start) = (0, 0.0);
    for k in 0..SAMPLES {
        let t = total * k as f64 / SAMPLES as f64;
        while i + 1 < n && start + seg[i] < t {
            start += seg[i];
            i += 1;
        }
        let u = if seg[i] > 0.0 { ((t - start) / seg[i]).clamp(0.0, 1.0) } else { 0.0 };
        let (a, b) = (points[i], points[(i + 1) % n]);
        out.push((a.0 + u * (b.0 - a.0), a.1 + u * (b.1 - a.1)));
    }
    out
}

/// Sup distance between the arclength parametrisations of two loops in
/// physical units, minimised over starting point and orientation.
pub fn loop_distance(a: &DualLoop, mesh_a: u32, b: &DualLoop, mesh_b: u32) -> f64 {
    let pa = resample(&a.physical_points(mesh_a));
    let mut pb = resample(&b.physical_points(mesh_b));
    let mut best = f64::INFINITY;
    for _ in 0..2 {
        for shift in 0..SAMPLES {
            let mut worst = 0.0f64;
            for (k, p) in pa.iter().enumerate() {
                let q = pb[(k + shift) % SAMPLES];
                worst = worst.max((p.0 - q.0).hypot(p.1 - q.1));
                if worst >= best {
                    break;
                }
            }
            best = best.min(worst);
        }
        pb.reverse();
    }
    best
}

/// Tabulate `(d(ℓ_n, ℓ), |g(ℓ_n) - g(ℓ)|)` along `sequence` and flag the
/// places where the difference fails to shrink.
pub fn continuity_probe(target: &ProbeLoop, sequence: &[ProbeLoop]) -> Result<ContinuityReport, CocycleError> {
    if sequence.len() < MIN_SEQUENCE {
        return Err(CocycleError::InvalidInput(format!(
            "{} loops in the sequence, need {MIN_SEQUENCE}",
            sequence.len()
        )));
    }
    let rows: Vec<ContinuityRow> = sequence
        .iter()
        .map(|p| ContinuityRow {
            distance: loop_distance(&p.dual_loop, p.mesh_exponent, &target.dual_loop, target.mesh_exponent),
            difference: (p.g - target.g).abs(),
        })
        .collect();
    let not_shrinking = (1..rows.len())
        .filter(|&i| rows[i].difference > 0.0 && rows[i].difference >= rows[i - 1].difference)
        .collect();
    Ok(ContinuityReport { rows, not_shrinking })
}
