//! Banded factorisations with log-scale determinant accumulation.
//!
//! Lattice operators ordered column by column have bandwidth of the order
//! of the column height, so an `n x n` factorisation costs `O(n b^2)`
//! instead of `O(n^3)`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

use crate::lattice::{Site, VertexSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is numerically singular at pivot {0}")]
    Singular(usize),
    #[error("matrix is not positive definite at pivot {0}")]
    NotPositiveDefinite(usize),
}

pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + PartialEq
{
    fn zero() -> Self;
    fn one() -> Self;
    fn modulus(self) -> f64;
    /// `self / |self|`.
    fn unit(self) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn unit(self) -> Self {
        self.signum()
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn unit(self) -> Self {
        self / self.norm()
    }
}

/// `det = phase * exp(log_abs)` with `|phase| = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet<T> {
    pub log_abs: f64,
    pub phase: T,
}

/// General band matrix with `kl` sub- and `ku` super-diagonals.
///
/// Row `i` keeps columns `i - kl ..= i + kl + ku`; the extra `kl` columns
/// absorb the fill-in produced by partial pivoting.
#[derive(Debug, Clone)]
pub struct BandMatrix<T> {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<T>,
}

impl<T: Scalar> BandMatrix<T> {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandMatrix {
            n,
            kl,
            ku,
            width,
            data: vec![T::zero(); n * width],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.kl + self.ku);
        i * self.width + (j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        if j + self.kl < i || j > i + self.kl + self.ku {
            T::zero()
        } else {
            self.data[self.slot(i, j)]
        }
    }

    /// Panics if `(i, j)` lies outside the declared band.
    pub fn add(&mut self, i: usize, j: usize, v: T) {
        assert!(
            j + self.kl >= i && j <= i + self.ku,
            "entry ({i}, {j}) outside band kl={} ku={}",
            self.kl,
            self.ku
        );
        let s = self.slot(i, j);
        self.data[s] = self.data[s] + v;
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn log_det(mut self) -> Result<LogDet<T>, LinalgError> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let mut log_abs = 0.0;
        let mut phase = T::one();
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.modulus()));
        let tiny = scale * f64::EPSILON * n.max(1) as f64 * 1e-3;
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let last_col = (k + kl + ku).min(n - 1);
            let mut p = k;
            let mut best = self.get(k, k).modulus();
            for i in k + 1..=last_row {
                let m = self.get(i, k).modulus();
                if m > best {
                    best = m;
                    p = i;
                }
            }
            if best <= tiny || best == 0.0 {
                return Err(LinalgError::Singular(k));
            }
            if p != k {
                for j in k..=last_col {
                    let (a, b) = (self.slot(k, j), self.slot(p, j));
                    self.data.swap(a, b);
                }
                phase = -phase;
            }
            let pivot = self.data[self.slot(k, k)];
            log_abs += pivot.modulus().ln();
            phase = phase * pivot.unit();
            for i in k + 1..=last_row {
                let s = self.slot(i, k);
                let l = self.data[s] / pivot;
                if l == T::zero() {
                    continue;
                }
                self.data[s] = T::zero();
                let (ri, rk) = (self.slot(i, k + 1), self.slot(k, k + 1));
                for t in 0..last_col - k {
                    let v = self.data[rk + t];
                    self.data[ri + t] = self.data[ri + t] - l * v;
                }
            }
        }
        Ok(LogDet { log_abs, phase })
    }
}

/// Symmetric positive-definite band matrix, lower triangle stored.
#[derive(Debug, Clone)]
pub struct SymBandMatrix {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl SymBandMatrix {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        SymBandMatrix {
            n,
            bw: bandwidth,
            data: vec![0.0; n * (bandwidth + 1)],
        }
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && i - j <= self.bw);
        i * (self.bw + 1) + (self.bw + j - i)
    }

    /// Add `v` at `(i, j)` (and implicitly at `(j, i)`).
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        assert!(i - j <= self.bw, "entry ({i}, {j}) outside bandwidth {}", self.bw);
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    /// `log det` via banded Cholesky, `2 Σ log L_ii`.
    pub fn log_det(mut self) -> Result<f64, LinalgError> {
        let (n, bw) = (self.n, self.bw);
        let mut acc = 0.0;
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            for j in j0..=i {
                let k0 = j0.max(j.saturating_sub(bw));
                let mut sum = self.data[self.slot(i, j)];
                for k in k0..j {
                    sum -= self.data[self.slot(i, k)] * self.data[self.slot(j, k)];
                }
                if i == j {
                    if sum <= 0.0 {
                        return Err(LinalgError::NotPositiveDefinite(i));
                    }
                    let d = sum.sqrt();
                    acc += d.ln();
                    let s = self.slot(i, i);
                    self.data[s] = d;
                } else {
                    let s = self.slot(i, j);
                    self.data[s] = sum / self.data[self.slot(j, j)];
                }
            }
        }
        Ok(2.0 * acc)
    }
}

/// Sites ordered for a small bandwidth (column- or row-major, whichever is
/// narrower), with the resulting nearest-neighbour bandwidth.
pub(crate) fn band_order(sites: &VertexSet) -> (Vec<Site>, usize) {
    let by_column: Vec<Site> = sites.iter().collect();
    let mut by_row = by_column.clone();
    by_row.sort_unstable_by_key(|s| (s.y, s.x));
    let bw = |order: &[Site]| -> usize {
        let mut best = 0;
        for (i, s) in order.iter().enumerate() {
            for n in [Site::new(s.x + 1, s.y), Site::new(s.x, s.y + 1)] {
                if sites.contains(n) {
                    let j = order[i..].iter().position(|&t| t == n).unwrap_or(0);
                    best = best.max(j);
                }
            }
        }
        best
    };
    let (bc, br) = (bw(&by_column), bw(&by_row));
    if bc <= br {
        (by_column, bc)
    } else {
        (by_row, br)
    }
}
