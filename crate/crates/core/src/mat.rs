//! Column-major dense matrices over f64.
//!
//! Points are stored as columns throughout the crate (a point set is an
//! `N x p` matrix whose columns are the points), so column access is the
//! hot path and the storage follows it.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng::{stream_rng, STREAM_POINTS};

/// Dense `rows x cols` matrix, column-major f64 storage.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// A set of `p` points in `R^N`: an `N x p` matrix, one point per column.
pub type PointSet = DenseMatrix;

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be >= 1");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "data length {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Builds column `j` from `f(i, j)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.data[j * rows + i] = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.rows + i] = v;
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                t.data[i * self.cols + j] = self.data[j * self.rows + i];
            }
        }
        t
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `self - other`.
    pub fn frobenius_distance(&self, other: &DenseMatrix) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    }

    /// Relative Frobenius error `|self - other|_F / |other|_F` (absolute when
    /// `other` is zero).
    pub fn rel_frobenius_error(&self, other: &DenseMatrix) -> Result<f64> {
        let dist = self.frobenius_distance(other)?;
        let denom = other.frobenius_norm();
        Ok(if denom == 0.0 { dist } else { dist / denom })
    }

    pub fn scale_in_place(&mut self, factor: f64) {
        for v in &mut self.data {
            *v *= factor;
        }
    }
}

/// Squared Euclidean norm of a vector.
pub fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// `N x p` matrix of i.i.d. standard normal entries, filled column by column
/// from the seed's point-generation stream.
pub fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let mut rng = stream_rng(seed, STREAM_POINTS);
    let mut m = DenseMatrix::zeros(rows, cols);
    for v in m.data_mut() {
        *v = rng.sample(StandardNormal);
    }
    m
}

/// Gaussian columns normalized to unit Euclidean length.
pub fn unit_sphere_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let mut m = gaussian_matrix(rows, cols, seed);
    for j in 0..cols {
        let col = m.col_mut(j);
        let norm = norm_sq(col).sqrt();
        if norm > 0.0 {
            for v in col {
                *v /= norm;
            }
        }
    }
    m
}

/// A near-duplicate "hard" point set: one Gaussian anchor plus p-1 copies
/// perturbed by `spread` times a fresh Gaussian direction. JL bounds are
/// worst-case, and tightly clustered points stress them differently than
/// well-separated ones.
pub fn near_duplicate_matrix(rows: usize, cols: usize, spread: f64, seed: u64) -> DenseMatrix {
    let mut rng = stream_rng(seed, STREAM_POINTS);
    let anchor: Vec<f64> = (0..rows).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let mut m = DenseMatrix::zeros(rows, cols);
    for j in 0..cols {
        let col = m.col_mut(j);
        for (i, v) in col.iter_mut().enumerate() {
            let noise: f64 = rng.sample(StandardNormal);
            *v = anchor[i] + if j == 0 { 0.0 } else { spread * noise };
        }
    }
    m
}
