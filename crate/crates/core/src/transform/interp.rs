use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::dft::Dft;
use super::linalg::{condition_number, Lu};
use crate::{Error, Result};

/// Largest accepted spectral condition number of an interpolation matrix.
pub const CONDITION_BOUND: f64 = 1e6;

/// `0`/`1` rendering of a mask, position 0 first.
pub fn mask_string(mask: &[bool]) -> String {
    mask.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Band-limited interpolation through the relevant positions of a block:
/// the map from the first `k` DFT coefficients to the samples at the `k`
/// relevant positions, factored once per mask.
#[derive(Debug, Clone)]
pub struct InterpolationSystem {
    positions: Vec<usize>,
    lu: Lu,
    condition: f64,
}

impl InterpolationSystem {
    pub fn new(dft: &Dft, mask: &[bool], bound: f64) -> Result<Self> {
        if mask.len() != dft.len() {
            return Err(Error::BlockShape(alloc::format!(
                "mask of length {} for a {}-point transform",
                mask.len(),
                dft.len()
            )));
        }
        let positions: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
        let k = positions.len();
        let a = dft.interpolation_matrix(&positions);
        let condition = if k == 0 { 1.0 } else { condition_number(&a, k) };
        let ill = |condition| Error::IllConditioned {
            mask: mask_string(mask),
            condition,
            bound,
        };
        if condition.is_nan() || condition > bound {
            return Err(ill(condition));
        }
        let lu = Lu::new(a, k).ok_or_else(|| ill(f64::INFINITY))?;
        Ok(Self {
            positions,
            lu,
            condition,
        })
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// Coefficients whose padded inverse DFT passes through `block` at the
    /// relevant positions (`block` has all `n` samples).
    pub fn solve(&self, block: &[Complex64]) -> Vec<Complex64> {
        let rhs: Vec<Complex64> = self.positions.iter().map(|&p| block[p]).collect();
        self.lu.solve(&rhs)
    }
}
