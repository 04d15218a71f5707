//! Unitary DFT (`1/√n` both ways) on short blocks.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math::{cos, sin, sqrt};

/// Twiddle table `e^{2πi j/n}` for one block length; immutable and
/// shareable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Dft {
    n: usize,
    twiddles: Vec<Complex64>,
    scale: f64,
}

impl Dft {
    pub fn new(n: usize) -> Self {
        let twiddles = (0..n)
            .map(|j| {
                let t = 2.0 * core::f64::consts::PI * j as f64 / n as f64;
                Complex64::new(cos(t), sin(t))
            })
            .collect();
        Self {
            n,
            twiddles,
            scale: 1.0 / sqrt(n as f64),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `e^{2πi·r·c/n}`.
    #[inline]
    pub fn twiddle(&self, r: usize, c: usize) -> Complex64 {
        self.twiddles[(r * c) % self.n]
    }

    /// `X_c = n^{-1/2} Σ_r x_r e^{−2πi rc/n}`.
    pub fn forward(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|c| {
                let s: Complex64 = x
                    .iter()
                    .enumerate()
                    .map(|(r, v)| v * self.twiddle(r, c).conj())
                    .sum();
                s * self.scale
            })
            .collect()
    }

    /// Inverse transform of `coefficients` zero-padded to `n` frequencies.
    pub fn inverse_padded(&self, coefficients: &[Complex64]) -> Vec<Complex64> {
        (0..self.n).map(|r| self.inverse_at(coefficients, r)).collect()
    }

    /// One sample of [`Dft::inverse_padded`].
    pub fn inverse_at(&self, coefficients: &[Complex64], r: usize) -> Complex64 {
        let s: Complex64 = coefficients
            .iter()
            .enumerate()
            .map(|(c, v)| v * self.twiddle(r, c))
            .sum();
        s * self.scale
    }

    /// Rows of the inverse transform at `positions`, restricted to the first
    /// `positions.len()` frequencies, row-major.
    pub fn interpolation_matrix(&self, positions: &[usize]) -> Vec<Complex64> {
        let k = positions.len();
        let mut a = Vec::with_capacity(k * k);
        for &p in positions {
            for c in 0..k {
                a.push(self.twiddle(p, c) * self.scale);
            }
        }
        a
    }
}
