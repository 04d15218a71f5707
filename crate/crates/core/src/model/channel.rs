use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// What a channel's rows are indexed by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conditioning {
    /// One row per source symbol `x`.
    SourceOnly,
    /// One row per pair `(x, q)`, ordered `x·|Q| + q`.
    SourceAndSide,
}

/// Row-stochastic kernel `p(out | row)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalChannel {
    rows: usize,
    cols: usize,
    kernel: Vec<f64>,
}

const ROW_TOLERANCE: f64 = 1e-12;

impl ConditionalChannel {
    pub fn new(rows: usize, cols: usize, kernel: Vec<f64>) -> Result<Self> {
        if kernel.len() != rows * cols || rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "kernel has {} entries for a {rows}×{cols} channel",
                kernel.len()
            )));
        }
        for r in 0..rows {
            let row = &kernel[r * cols..(r + 1) * cols];
            if row.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
                return Err(Error::InvalidProbability {
                    what: "channel row",
                    reason: format!("row {r} has a negative or non-finite entry"),
                });
            }
            let mass: f64 = row.iter().sum();
            if (mass - 1.0).abs() > ROW_TOLERANCE {
                return Err(Error::InvalidProbability {
                    what: "channel row",
                    reason: format!("row {r} sums to {mass}"),
                });
            }
        }
        Ok(Self { rows, cols, kernel })
    }

    /// Deterministic channel `row ↦ map[row]`.
    pub fn deterministic(map: &[usize], cols: usize) -> Result<Self> {
        let mut kernel = alloc::vec![0.0; map.len() * cols];
        for (r, &c) in map.iter().enumerate() {
            if c >= cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} maps to output {c} of {cols}"
                )));
            }
            kernel[r * cols + c] = 1.0;
        }
        Self::new(map.len(), cols, kernel)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.kernel[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.kernel[row * self.cols..(row + 1) * self.cols]
    }

    pub fn kernel(&self) -> &[f64] {
        &self.kernel
    }
}
