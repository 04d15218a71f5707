//! Minimum-distortion endpoints computed directly rather than as a `λ → ∞`
//! limit.
//!
//! At `D = D_min` every source symbol may only be reproduced by one of its
//! distortion-minimizing reconstructions. The rate is the smallest mutual
//! information of a channel supported on those sets, found by the
//! support-restricted alternating minimization `p(j|i) ∝ r(j)·1[j ∈ A(i)]`.
//! When every set is a singleton this is the (conditional) entropy of the
//! induced map.

use alloc::vec;
use alloc::vec::Vec;

use super::ba::{kl, output_marginal, rate_and_distortion, settled};
use crate::model::{DiscreteInstance, Scenario};
use crate::{Error, Result};

const ARGMIN_TOLERANCE: f64 = 1e-12;
const MAX_ITERATIONS: usize = 100_000;
const TOLERANCE: f64 = 1e-14;
/// Largest source alphabet for the decoder-side endpoint (subset search).
pub const MAX_DECODER_LOSSLESS_SOURCE: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LosslessPoint {
    pub scenario: Scenario,
    pub rate: f64,
    pub distortion: f64,
}

/// Indicator matrix of the per-row minimizers of `dist`.
fn argmin_support(dist: &[f64], outputs: usize) -> (Vec<f64>, Vec<f64>) {
    let rows = dist.len() / outputs;
    let mut allowed = vec![0.0; dist.len()];
    let mut mins = vec![0.0; rows];
    for i in 0..rows {
        let d = &dist[i * outputs..(i + 1) * outputs];
        let m = d.iter().copied().fold(f64::INFINITY, f64::min);
        mins[i] = m;
        for (a, v) in allowed[i * outputs..(i + 1) * outputs].iter_mut().zip(d) {
            if *v <= m + ARGMIN_TOLERANCE * m.abs().max(1.0) {
                *a = 1.0;
            }
        }
    }
    (allowed, mins)
}

/// `min I` over channels supported on `allowed`.
fn restricted_min_information(weights: &[f64], allowed: &[f64], outputs: usize) -> f64 {
    let rows = weights.len();
    let mut output = vec![1.0 / outputs as f64; outputs];
    let mut next = vec![0.0; outputs];
    let mut channel = vec![0.0; rows * outputs];
    let mut previous = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let mut head = 0.0;
        for i in 0..rows {
            let a = &allowed[i * outputs..(i + 1) * outputs];
            let row = &mut channel[i * outputs..(i + 1) * outputs];
            let mut z = 0.0;
            for ((p, &ai), &r) in row.iter_mut().zip(a).zip(&output) {
                *p = ai * r;
                z += *p;
            }
            row.iter_mut().for_each(|p| *p /= z);
            if weights[i] > 0.0 {
                head -= weights[i] * crate::math::ln(z);
            }
        }
        output_marginal(weights, &channel, outputs, &mut next);
        let objective = head - kl(&next, &output);
        core::mem::swap(&mut output, &mut next);
        if settled(previous, objective, TOLERANCE) {
            break;
        }
        previous = objective;
    }
    let zeros = vec![0.0; rows * outputs];
    rate_and_distortion(weights, &zeros, &channel, outputs).0
}

/// Rate and distortion of `scenario` at its minimum distortion.
pub fn lossless_point(instance: &DiscreteInstance, scenario: Scenario) -> Result<LosslessPoint> {
    let nxh = instance.recon_size();
    let px = instance.p_x();
    let (rate, distortion) = match scenario {
        Scenario::Neither => {
            let avg = instance.averaged_distortion();
            let (allowed, mins) = argmin_support(&avg, nxh);
            let d: f64 = px.iter().zip(&mins).map(|(p, m)| p * m).sum();
            (restricted_min_information(px, &allowed, nxh), d)
        }
        Scenario::Both => {
            let mut rate = 0.0;
            let mut d = 0.0;
            for (q, &pq) in instance.p_q().iter().enumerate() {
                if pq == 0.0 {
                    continue;
                }
                let (allowed, mins) = argmin_support(instance.dist().slice(q), nxh);
                rate += pq * restricted_min_information(px, &allowed, nxh);
                d += pq * px.iter().zip(&mins).map(|(p, m)| p * m).sum::<f64>();
            }
            (rate, d)
        }
        Scenario::Encoder => {
            let (weights, dist) = instance.super_source_distortion();
            let (allowed, mins) = argmin_support(&dist, nxh);
            let d: f64 = weights.iter().zip(&mins).map(|(w, m)| w * m).sum();
            (restricted_min_information(&weights, &allowed, nxh), d)
        }
        Scenario::Decoder => decoder_lossless(instance)?,
    };
    Ok(LosslessPoint {
        scenario,
        rate,
        distortion,
    })
}

/// The decoder reaches the fully informed minimum distortion only if each
/// auxiliary symbol groups source symbols that share a minimizer for every
/// side value. The rate is the least `I(x; u)` over channels that send `x`
/// only to groups containing it; maximal groups suffice because merging
/// `u`'s never increases `I(x; u)`.
fn decoder_lossless(instance: &DiscreteInstance) -> Result<(f64, f64)> {
    let nx = instance.source_size();
    let nxh = instance.recon_size();
    if nx > MAX_DECODER_LOSSLESS_SOURCE {
        return Err(Error::AlphabetTooLarge {
            axis: "source (decoder-side lossless endpoint)",
            size: nx,
            max: MAX_DECODER_LOSSLESS_SOURCE,
        });
    }
    let px = instance.p_x();
    let mut sets_per_q = Vec::new();
    let mut d_min = 0.0;
    for (q, &pq) in instance.p_q().iter().enumerate() {
        if pq == 0.0 {
            continue;
        }
        let (allowed, mins) = argmin_support(instance.dist().slice(q), nxh);
        d_min += pq * px.iter().zip(&mins).map(|(p, m)| p * m).sum::<f64>();
        sets_per_q.push(allowed);
    }
    let compatible = |subset: usize| {
        sets_per_q.iter().all(|allowed| {
            (0..nxh).any(|xh| {
                (0..nx)
                    .filter(|x| subset >> x & 1 == 1)
                    .all(|x| allowed[x * nxh + xh] > 0.0)
            })
        })
    };
    let full = (1usize << nx) - 1;
    let mut ok = vec![false; full + 1];
    for s in 1..=full {
        ok[s] = compatible(s);
    }
    let maximal: Vec<usize> = (1..=full)
        .filter(|&s| ok[s] && (0..nx).all(|x| s >> x & 1 == 1 || !ok[s | 1 << x]))
        .collect();
    let groups = maximal.len();
    let mut allowed = vec![0.0; nx * groups];
    for (g, &s) in maximal.iter().enumerate() {
        for x in 0..nx {
            if s >> x & 1 == 1 {
                allowed[x * groups + g] = 1.0;
            }
        }
    }
    Ok((restricted_min_information(px, &allowed, groups), d_min))
}
