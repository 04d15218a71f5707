//! Seeded complex Gaussian blocks with random relevance masks.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::seq::index;

use crate::math::{cos, ln, sin, sqrt};
use crate::rng::{namespace, open_unit, stream};

/// Per-dimension standard deviation of the unit-variance complex source.
pub const SOURCE_SIGMA: f64 = core::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianBlock {
    pub samples: Vec<Complex64>,
    /// `true` at the `k` relevant (important) positions.
    pub mask: Vec<bool>,
}

/// Block `index` of the corpus drawn from stream namespace `space`:
/// `n` samples by Box–Muller (variance ½ per dimension), then a uniformly
/// chosen weight-`k` mask.
pub fn block_in(space: u64, seed: u64, index: u64, n: usize, k: usize) -> GaussianBlock {
    let mut rng = stream(seed, space | index);
    let samples = (0..n)
        .map(|_| {
            let r = sqrt(-ln(open_unit(&mut rng)));
            let t = 2.0 * core::f64::consts::PI * open_unit(&mut rng);
            Complex64::new(r * cos(t), r * sin(t))
        })
        .collect();
    let mut mask = vec![false; n];
    for i in index::sample(&mut rng, n, k) {
        mask[i] = true;
    }
    GaussianBlock { samples, mask }
}

/// Block `index` of the measurement corpus.
pub fn block(seed: u64, index: u64, n: usize, k: usize) -> GaussianBlock {
    block_in(namespace::GAUSSIAN_BLOCKS, seed, index, n, k)
}

/// Block `index` of the calibration corpus, disjoint from the measurement
/// corpus for the same seed.
pub fn calibration_block(seed: u64, index: u64, n: usize, k: usize) -> GaussianBlock {
    block_in(namespace::CALIBRATION, seed, index, n, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_and_masks() {
        let (n, k) = (16, 5);
        let mut power = 0.0;
        let mut mean = Complex64::new(0.0, 0.0);
        let trials = 4000;
        for t in 0..trials {
            let b = block(42, t, n, k);
            assert_eq!(b.mask.iter().filter(|m| **m).count(), k);
            for s in &b.samples {
                power += s.norm_sqr();
                mean += s;
            }
        }
        let count = (trials as usize * n) as f64;
        assert!((power / count - 1.0).abs() < 0.02);
        assert!(mean.norm_sqr() / (count * count) < 1e-4);
        assert_ne!(block(42, 0, n, k), calibration_block(42, 0, n, k));
        assert_eq!(block(42, 7, n, k), block(42, 7, n, k));
    }
}
