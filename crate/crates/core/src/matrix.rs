//! Symmetric pairwise dissimilarity caches.

use thiserror::Error;

use crate::dataset::Dataset;
use crate::measures::MeasureError;

#[derive(Debug, Error, PartialEq)]
pub enum MatrixError {
    #[error("expected a square matrix, row {row} has {found} entries for n = {n}")]
    NotSquare { row: usize, found: usize, n: usize },
    #[error("diagonal entry [{index}][{index}] is {value}, must be 0")]
    NonZeroDiagonal { index: usize, value: f64 },
    #[error("entries [{i}][{j}] = {upper} and [{j}][{i}] = {lower} break symmetry")]
    Asymmetric {
        i: usize,
        j: usize,
        upper: f64,
        lower: f64,
    },
    #[error("entry [{i}][{j}] = {value} is not a non-negative finite dissimilarity")]
    InvalidEntry { i: usize, j: usize, value: f64 },
}

/// A symmetric `n x n` cache of pairwise dissimilarity values with zero
/// diagonal and non-negative entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DissimilarityMatrix {
    n: usize,
    values: Vec<f64>, // row-major
}

impl DissimilarityMatrix {
    /// Evaluates `measure` on every unordered element pair of `dataset` and
    /// caches the results. The diagonal is fixed at zero and each off-diagonal
    /// pair is evaluated exactly once, so the result is symmetric by
    /// construction and deterministic for a deterministic measure.
    pub fn compute<T>(
        dataset: &Dataset<T>,
        measure: impl Fn(&T, &T) -> Result<f64, MeasureError>,
    ) -> Result<Self, MeasureError> {
        let n = dataset.len();
        let elements = dataset.elements();
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = measure(&elements[i], &elements[j])?;
                if !d.is_finite() || d < 0.0 {
                    return Err(MeasureError::InvalidDissimilarity { value: d });
                }
                values[i * n + j] = d;
                values[j * n + i] = d;
            }
        }
        Ok(Self { n, values })
    }

    /// Builds a matrix from explicit rows, validating all invariants.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        for (row, entries) in rows.iter().enumerate() {
            if entries.len() != n {
                return Err(MatrixError::NotSquare {
                    row,
                    found: entries.len(),
                    n,
                });
            }
        }
        let mut values = vec![0.0; n * n];
        for (i, entries) in rows.iter().enumerate() {
            for (j, &value) in entries.iter().enumerate() {
                if !value.is_finite() || value < 0.0 {
                    return Err(MatrixError::InvalidEntry { i, j, value });
                }
                values[i * n + j] = value;
            }
        }
        for i in 0..n {
            if values[i * n + i] != 0.0 {
                return Err(MatrixError::NonZeroDiagonal {
                    index: i,
                    value: values[i * n + i],
                });
            }
            for j in (i + 1)..n {
                if values[i * n + j] != values[j * n + i] {
                    return Err(MatrixError::Asymmetric {
                        i,
                        j,
                        upper: values[i * n + j],
                        lower: values[j * n + i],
                    });
                }
            }
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// The dissimilarities of element `i` to the whole dataset, self included.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.row(i).iter().sum()
    }

    /// Index of the MinSOD element: the one minimizing the sum of
    /// dissimilarities to every other element. Ties break to the lowest
    /// index, so the result is deterministic.
    pub fn minsod(&self) -> usize {
        let mut best = 0;
        let mut best_sum = self.row_sum(0);
        for i in 1..self.n {
            let sum = self.row_sum(i);
            if sum < best_sum {
                best = i;
                best_sum = sum;
            }
        }
        best
    }

    /// Returns a copy with every entry multiplied by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> Result<Self, MatrixError> {
        if !factor.is_finite() || factor <= 0.0 {
            return Err(MatrixError::InvalidEntry {
                i: 0,
                j: 0,
                value: factor,
            });
        }
        Ok(Self {
            n: self.n,
            values: self.values.iter().map(|v| v * factor).collect(),
        })
    }
}
