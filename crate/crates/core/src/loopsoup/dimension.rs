use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{PrimalCycle, SoupError};

pub const MIN_LOOPS: usize = 20;
pub const MIN_SCALES: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    /// Mean of the per-loop slopes.
    pub dimension: f64,
    /// Standard error of that mean.
    pub stderr: f64,
    pub slopes: Vec<f64>,
}

/// Boxes of side `scale` (lattice units) met by the cycle, averaged over a
/// grid of box offsets to reduce the alignment bias.
pub fn box_counts(cycle: &PrimalCycle, scale: f64) -> f64 {
    let k = (scale.ceil() as usize).clamp(1, 8);
    let mut total = 0usize;
    let mut boxes = HashSet::with_capacity(cycle.len());
    for ox in 0..k {
        for oy in 0..k {
            let (dx, dy) = (ox as f64 * scale / k as f64, oy as f64 * scale / k as f64);
            boxes.clear();
            for s in cycle.sites() {
                let bx = ((s.x as f64 + dx) / scale).floor() as i64;
                let by = ((s.y as f64 + dy) / scale).floor() as i64;
                boxes.insert((bx, by));
            }
            total += boxes.len();
        }
    }
    total as f64 / (k * k) as f64
}

/// Per-loop least-squares slope of `log N(s)` against `log(1/s)`, averaged.
pub fn box_dimension(cycles: &[PrimalCycle], scales: &[f64]) -> Result<DimensionEstimate, SoupError> {
    if cycles.len() < MIN_LOOPS {
        return Err(SoupError::InsufficientData(format!(
            "{} loops, need {MIN_LOOPS}",
            cycles.len()
        )));
    }
    let mut distinct: Vec<f64> = scales.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < MIN_SCALES || distinct[0] <= 0.0 {
        return Err(SoupError::InsufficientData(format!(
            "{} distinct positive scales, need {MIN_SCALES}",
            distinct.len()
        )));
    }
    if distinct[distinct.len() - 1] / distinct[0] < 4.0 {
        return Err(SoupError::InsufficientData("scales span less than two octaves".into()));
    }
    let xs: Vec<f64> = distinct.iter().map(|s| -s.ln()).collect();
    let slopes: Vec<f64> = cycles
        .iter()
        .map(|c| {
            let ys: Vec<f64> = distinct.iter().map(|&s| box_counts(c, s).ln()).collect();
            least_squares_slope(&xs, &ys)
        })
        .collect();
    let n = slopes.len() as f64;
    let mean = slopes.iter().sum::<f64>() / n;
    let var = slopes.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(DimensionEstimate {
        dimension: mean,
        stderr: (var / n).sqrt(),
        slopes,
    })
}

pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Site;

    fn square(side: i64) -> PrimalCycle {
        let mut s = Vec::new();
        s.extend((0..side).map(|x| Site::new(x, 0)));
        s.extend((1..side).map(|y| Site::new(side - 1, y)));
        s.extend((0..side - 1).rev().map(|x| Site::new(x, side - 1)));
        s.extend((1..side - 1).rev().map(|y| Site::new(0, y)));
        PrimalCycle::new(s).unwrap()
    }

    /// Hamiltonian cycle of an even square block.
    fn serpentine(side: i64) -> PrimalCycle {
        let mut s: Vec<Site> = (0..side).map(|x| Site::new(x, 0)).collect();
        for (k, x) in (1..side).rev().enumerate() {
            if k % 2 == 0 {
                s.extend((1..side).map(|y| Site::new(x, y)));
            } else {
                s.extend((1..side).rev().map(|y| Site::new(x, y)));
            }
        }
        s.extend((1..side).rev().map(|y| Site::new(0, y)));
        PrimalCycle::new(s).unwrap()
    }

    const SCALES: [f64; 4] = [1.0, 2.0, 4.0, 8.0];

    #[test]
    fn smooth_square_has_dimension_one() {
        let loops = vec![square(64); 20];
        let est = box_dimension(&loops, &SCALES).unwrap();
        assert!((est.dimension - 1.0).abs() < 0.05, "{est:?}");
    }

    #[test]
    fn space_filling_cycle_trends_to_two() {
        // partial boxes along the block edge bias small blocks downwards
        let dims: Vec<f64> = [16, 32, 64]
            .iter()
            .map(|&side| box_dimension(&vec![serpentine(side); 20], &SCALES).unwrap().dimension)
            .collect();
        assert!(dims[0] < dims[1] && dims[1] < dims[2], "{dims:?}");
        assert!(dims[2] > 1.85 && dims[2] <= 2.0, "{dims:?}");
    }

    #[test]
    fn insufficient_data() {
        let few = vec![square(8); 5];
        assert!(box_dimension(&few, &SCALES).is_err());
        let many = vec![square(8); 20];
        assert!(box_dimension(&many, &[1.0, 2.0, 3.0]).is_err());
        assert!(box_dimension(&many, &[1.0, 1.2, 1.5, 2.0]).is_err());
    }

    #[test]
    fn slope_of_a_line() {
        assert!((least_squares_slope(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]) - 2.0).abs() < 1e-15);
    }
}
