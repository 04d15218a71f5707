//! Rate penalty for the encoder not knowing side information `q` that
//! scales a quadratic distortion, `½(ln E[q] − E[ln q])` nats per sample, in
//! closed form, by Monte-Carlo and as measured by the rate-distortion
//! oracle on a discretized source.
//!
//! Almost none of these laws could be sent losslessly at finite rate; that
//! cost is not modelled.

mod family;
mod monte_carlo;
mod penalty;
pub mod special;

pub use family::{Sampler, SideInfoDistribution, PRINTED_EXPONENTIAL_GAP};
pub use monte_carlo::{
    gap_from_shards, gap_monte_carlo, shard_moments, shard_sizes, GapResult, ShardMoments, DEFAULT_SAMPLES,
    SHARD_SAMPLES,
};
pub use penalty::{
    grid, penalty_check, quantized_gaussian_instance, PenaltyConfig, PenaltyPoint, PenaltyReport,
    GRID_POINTS, GRID_SPAN, TARGET_FACTORS,
};

use crate::math::ln;
use crate::{Error, Result};
use core::f64::consts::{E, PI};

/// High-resolution rates of a source with differential entropy `h` under
/// distortion `q·(x − x̂)²` at average distortion `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighResolutionRates {
    /// `h − ½ ln(2πeD) + ½ E[ln q]`
    pub both: f64,
    /// `h − ½ ln(2πeD) + ½ ln E[q]`, `+∞` when the mean diverges
    pub dec: f64,
}

impl HighResolutionRates {
    pub fn gap(&self) -> f64 {
        self.dec - self.both
    }
}

pub fn high_resolution_rates(
    entropy: f64,
    distortion: f64,
    dist: &SideInfoDistribution,
) -> Result<HighResolutionRates> {
    dist.validate()?;
    if !(distortion.is_finite() && distortion > 0.0) || !entropy.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!(
            "h = {entropy}, D = {distortion}"
        )));
    }
    let base = entropy - 0.5 * ln(2.0 * PI * E * distortion);
    let ln_mean = dist.ln_mean();
    Ok(HighResolutionRates {
        both: base + 0.5 * dist.mean_ln(),
        dec: if ln_mean.is_finite() {
            base + 0.5 * ln_mean
        } else {
            f64::INFINITY
        },
    })
}
