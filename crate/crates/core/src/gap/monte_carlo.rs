use alloc::vec::Vec;

use super::family::SideInfoDistribution;
use crate::math::{ln, sqrt};
use crate::rng::{namespace, stream};
use crate::Result;

/// Samples per shard. Each shard owns one random stream, so shards can run
/// anywhere and be merged in index order.
pub const SHARD_SAMPLES: u64 = 1 << 16;

/// Default sample count.
pub const DEFAULT_SAMPLES: u64 = 1_000_000;

/// Running moments of `q` and `ln q` over one or more shards, merged with
/// the pairwise update so large shifts do not cancel.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ShardMoments {
    pub count: u64,
    /// draws with `q ≤ 0` or non-finite `q`, left out of the moments
    pub non_finite: u64,
    pub mean_q: f64,
    pub mean_ln: f64,
    /// centered second moments, summed
    pub m2_q: f64,
    pub m2_ln: f64,
    pub c_q_ln: f64,
}

impl ShardMoments {
    fn push(&mut self, q: f64) {
        if !(q.is_finite() && q > 0.0) {
            self.non_finite += 1;
            return;
        }
        let l = ln(q);
        self.count += 1;
        let n = self.count as f64;
        let dq = q - self.mean_q;
        let dl = l - self.mean_ln;
        self.mean_q += dq / n;
        self.mean_ln += dl / n;
        self.m2_q += dq * (q - self.mean_q);
        self.m2_ln += dl * (l - self.mean_ln);
        self.c_q_ln += dq * (l - self.mean_ln);
    }

    pub fn merge(&mut self, other: &ShardMoments) {
        self.non_finite += other.non_finite;
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            let non_finite = self.non_finite;
            *self = *other;
            self.non_finite = non_finite;
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        let dq = other.mean_q - self.mean_q;
        let dl = other.mean_ln - self.mean_ln;
        self.mean_q += dq * nb / n;
        self.mean_ln += dl * nb / n;
        self.m2_q += other.m2_q + dq * dq * na * nb / n;
        self.m2_ln += other.m2_ln + dl * dl * na * nb / n;
        self.c_q_ln += other.c_q_ln + dq * dl * na * nb / n;
        self.count += other.count;
    }

    /// `½(ln mean(q) − mean(ln q))` and its delta-method standard error.
    pub fn estimate(&self) -> (f64, f64) {
        if self.count < 2 {
            return (f64::NAN, f64::NAN);
        }
        let n = self.count as f64;
        let gap = 0.5 * (ln(self.mean_q) - self.mean_ln);
        let (vq, vl, c) = (
            self.m2_q / (n - 1.0),
            self.m2_ln / (n - 1.0),
            self.c_q_ln / (n - 1.0),
        );
        let m = self.mean_q;
        // gradient (1/(2m), −½)
        let var = 0.25 * (vq / (m * m) - 2.0 * c / m + vl);
        (gap, sqrt(var.max(0.0) / n))
    }
}

/// Sizes of the shards covering `samples` draws.
pub fn shard_sizes(samples: u64) -> Vec<u64> {
    let full = samples / SHARD_SAMPLES;
    let mut sizes: Vec<u64> = (0..full).map(|_| SHARD_SAMPLES).collect();
    if !samples.is_multiple_of(SHARD_SAMPLES) {
        sizes.push(samples % SHARD_SAMPLES);
    }
    sizes
}

/// Moments of shard `shard` holding `size` draws.
pub fn shard_moments(dist: &SideInfoDistribution, seed: u64, shard: u64, size: u64) -> Result<ShardMoments> {
    let sampler = dist.sampler()?;
    let mut rng = stream(seed, namespace::MONTE_CARLO | dist.family_index() << 32 | shard);
    let mut m = ShardMoments::default();
    for _ in 0..size {
        m.push(sampler.draw(&mut rng));
    }
    Ok(m)
}

/// Outcome of the Monte-Carlo estimate of the rate penalty.
#[derive(Debug, Clone, PartialEq)]
pub struct GapResult {
    pub distribution: SideInfoDistribution,
    pub closed_form: f64,
    /// `None` when the mean of `q` diverges; see `divergence`.
    pub monte_carlo: Option<f64>,
    pub std_error: Option<f64>,
    pub samples: u64,
    pub non_finite: u64,
    pub seed: u64,
    /// Running estimate after 1, 2, 4, … shards and at the end; filled
    /// only when the closed form is infinite.
    pub divergence: Vec<(u64, f64)>,
}

impl GapResult {
    /// Least-squares slope of the running estimate against `ln(samples)`.
    /// Positive when the estimate keeps growing.
    pub fn divergence_slope(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self.divergence.iter().map(|&(n, g)| (ln(n as f64), g)).collect();
        if pts.len() < 2 {
            return None;
        }
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        Some(sxy / sxx)
    }
}

/// Merges shard moments (in shard order) into a [`GapResult`].
pub fn gap_from_shards(dist: &SideInfoDistribution, seed: u64, shards: &[ShardMoments]) -> GapResult {
    let closed_form = dist.gap_closed_form();
    let mut total = ShardMoments::default();
    let mut divergence = Vec::new();
    let mut next_mark = 1;
    for (i, s) in shards.iter().enumerate() {
        total.merge(s);
        if closed_form.is_infinite() && (i + 1 == next_mark || i + 1 == shards.len()) {
            divergence.push((total.count, total.estimate().0));
            next_mark *= 2;
        }
    }
    let (estimate, se) = total.estimate();
    let finite = closed_form.is_finite();
    GapResult {
        distribution: *dist,
        closed_form,
        monte_carlo: finite.then_some(estimate),
        std_error: finite.then_some(se),
        samples: total.count + total.non_finite,
        non_finite: total.non_finite,
        seed,
        divergence,
    }
}

/// Estimates `½(ln E[q] − E[ln q])` from `samples` draws, sequentially.
pub fn gap_monte_carlo(dist: &SideInfoDistribution, samples: u64, seed: u64) -> Result<GapResult> {
    dist.validate()?;
    let shards = shard_sizes(samples)
        .into_iter()
        .enumerate()
        .map(|(i, size)| shard_moments(dist, seed, i as u64, size))
        .collect::<Result<Vec<_>>>()?;
    Ok(gap_from_shards(dist, seed, &shards))
}
