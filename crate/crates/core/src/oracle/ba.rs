//! Blahut–Arimoto alternating minimization for one slope.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{exp, ln};

/// A weighted input alphabet with a distortion matrix (row-major
/// `inputs × outputs`).
#[derive(Debug, Clone, Copy)]
pub(crate) struct BaProblem<'a> {
    pub weights: &'a [f64],
    pub dist: &'a [f64],
    pub outputs: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct BaSolution {
    pub channel: Vec<f64>,
    pub rate: f64,
    pub distortion: f64,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Stopping {
    pub max_iterations: usize,
    pub rel_tolerance: f64,
}

/// Relative objective change below which two iterates count as converged.
#[inline]
pub(crate) fn settled(previous: f64, current: f64, tol: f64) -> bool {
    (previous - current).abs() <= tol * current.abs().max(1.0)
}

/// Upper bound on how far the objective of the channel just computed from
/// output law `old` (giving `new`) sits above the optimum:
/// `max_j ln c_j − KL(new ‖ old)` with `c_j = Σ_i w_i K_ij / z_i`, which is
/// `new_j / old_j` wherever `old_j > 0`. Outputs without mass still count;
/// their `c_j` is summed from the row normalizers `ln_z`.
pub(crate) fn optimality_gap(
    problem: BaProblem<'_>,
    slope: f64,
    row_min: &[f64],
    ln_z: &[f64],
    old: &[f64],
    new: &[f64],
    kl_new_old: f64,
) -> f64 {
    let outputs = problem.outputs;
    let top = (0..outputs)
        .map(|j| {
            if old[j] > 0.0 {
                return ln(new[j] / old[j]);
            }
            let c: f64 = problem
                .weights
                .iter()
                .enumerate()
                .filter(|(_, w)| **w > 0.0)
                .map(|(i, w)| w * exp(-slope * (problem.dist[i * outputs + j] - row_min[i]) - ln_z[i]))
                .sum();
            ln(c)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    (top - kl_new_old).max(0.0)
}

/// Slack for the monotone-objective assertion (floating point noise only).
#[inline]
pub(crate) fn monotone_slack(value: f64) -> f64 {
    1e-10 * value.abs().max(1.0)
}

/// One channel update `p(j|i) ∝ r(j)·exp(−λ(d(i,j) − m_i))` for all rows.
///
/// Writes the channel into `channel`, `ln z_i` into `ln_z` and returns
/// `Σ_i w_i (λ m_i − ln z_i)`, the part of the Lagrangian that depends on
/// the row normalizers. Rows whose normalizer underflows are redone in the
/// log domain.
#[allow(clippy::too_many_arguments)]
pub(crate) fn channel_step(
    weights: &[f64],
    dist: &[f64],
    outputs: usize,
    slope: f64,
    kernel: &[f64],
    row_min: &[f64],
    output: &[f64],
    channel: &mut [f64],
    ln_z: &mut [f64],
) -> f64 {
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        let k = &kernel[i * outputs..(i + 1) * outputs];
        let row = &mut channel[i * outputs..(i + 1) * outputs];
        let mut z = 0.0;
        for ((p, &kij), &r) in row.iter_mut().zip(k).zip(output) {
            *p = r * kij;
            z += *p;
        }
        let row_ln_z;
        if z > 1e-280 {
            for p in row.iter_mut() {
                *p /= z;
            }
            row_ln_z = ln(z);
        } else {
            // log-domain fallback: exponents relative to the best live output
            let d = &dist[i * outputs..(i + 1) * outputs];
            let best = output
                .iter()
                .zip(d)
                .filter(|(r, _)| **r > 0.0)
                .map(|(r, dij)| ln(*r) - slope * (dij - row_min[i]))
                .fold(f64::NEG_INFINITY, f64::max);
            let mut s = 0.0;
            for ((p, &r), &dij) in row.iter_mut().zip(output).zip(d) {
                *p = if r > 0.0 {
                    exp(ln(r) - slope * (dij - row_min[i]) - best)
                } else {
                    0.0
                };
                s += *p;
            }
            for p in row.iter_mut() {
                *p /= s;
            }
            row_ln_z = best + ln(s);
        }
        ln_z[i] = row_ln_z;
        if w > 0.0 {
            acc += w * (slope * row_min[i] - row_ln_z);
        }
    }
    acc
}

/// `r'(j) = Σ_i w_i p(j|i)`.
pub(crate) fn output_marginal(weights: &[f64], channel: &[f64], outputs: usize, out: &mut [f64]) {
    out.iter_mut().for_each(|v| *v = 0.0);
    for (i, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        for (o, p) in out.iter_mut().zip(&channel[i * outputs..(i + 1) * outputs]) {
            *o += w * p;
        }
    }
}

/// `KL(new ‖ old)` over the output alphabet.
pub(crate) fn kl(new: &[f64], old: &[f64]) -> f64 {
    new.iter()
        .zip(old)
        .filter(|(n, _)| **n > 0.0)
        .map(|(n, o)| n * ln(n / o))
        .sum()
}

/// Mutual information and expected distortion of a channel.
pub(crate) fn rate_and_distortion(
    weights: &[f64],
    dist: &[f64],
    channel: &[f64],
    outputs: usize,
) -> (f64, f64) {
    let mut marginal = vec![0.0; outputs];
    output_marginal(weights, channel, outputs, &mut marginal);
    let mut rate = 0.0;
    let mut distortion = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let row = &channel[i * outputs..(i + 1) * outputs];
        let d = &dist[i * outputs..(i + 1) * outputs];
        for j in 0..outputs {
            let p = row[j];
            if p > 0.0 {
                rate += w * p * ln(p / marginal[j]);
                distortion += w * p * d[j];
            }
        }
    }
    (rate.max(0.0), distortion)
}

pub(crate) fn kernel_for(dist: &[f64], outputs: usize, slope: f64) -> (Vec<f64>, Vec<f64>) {
    let rows = dist.len() / outputs;
    let mut kernel = vec![0.0; dist.len()];
    let mut row_min = vec![0.0; rows];
    for i in 0..rows {
        let d = &dist[i * outputs..(i + 1) * outputs];
        let m = d.iter().copied().fold(f64::INFINITY, f64::min);
        row_min[i] = m;
        for (k, dij) in kernel[i * outputs..(i + 1) * outputs].iter_mut().zip(d) {
            *k = exp(-slope * (dij - m));
        }
    }
    (kernel, row_min)
}

/// Runs BA at Lagrange slope `slope`, starting from output law `start`
/// (uniform when `None`).
///
/// The objective `I + λ·E[d]` never increases from one iteration to the
/// next; debug builds assert it.
pub(crate) fn blahut_arimoto(
    problem: BaProblem<'_>,
    slope: f64,
    start: Option<&[f64]>,
    stop: Stopping,
    mut trace: Option<&mut Vec<f64>>,
) -> BaSolution {
    let outputs = problem.outputs;
    let inputs = problem.weights.len();
    let (kernel, row_min) = kernel_for(problem.dist, outputs, slope);
    let mut output = match start {
        Some(r) => r.to_vec(),
        None => vec![1.0 / outputs as f64; outputs],
    };
    let mut next = vec![0.0; outputs];
    let mut channel = vec![0.0; inputs * outputs];
    let mut ln_z = vec![0.0; inputs];
    let mut previous = f64::INFINITY;
    let mut lower_bound = f64::NEG_INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < stop.max_iterations {
        iterations += 1;
        let head = channel_step(
            problem.weights,
            problem.dist,
            outputs,
            slope,
            &kernel,
            &row_min,
            &output,
            &mut channel,
            &mut ln_z,
        );
        output_marginal(problem.weights, &channel, outputs, &mut next);
        let divergence = kl(&next, &output);
        let objective = head - divergence;
        debug_assert!(
            objective <= previous + monotone_slack(previous),
            "BA objective increased: {previous} -> {objective}"
        );
        if let Some(t) = trace.as_deref_mut() {
            t.push(objective);
        }
        let gap = optimality_gap(problem, slope, &row_min, &ln_z, &output, &next, divergence);
        lower_bound = lower_bound.max(objective - gap);
        core::mem::swap(&mut output, &mut next);
        if settled(previous, objective, stop.rel_tolerance)
            && gap <= stop.rel_tolerance * objective.abs().max(1.0)
        {
            converged = true;
            break;
        }
        previous = objective;
    }
    let (rate, distortion) = rate_and_distortion(problem.weights, problem.dist, &channel, outputs);
    let objective = rate + slope * distortion;
    // Near the zero-rate end the losing outputs decay only sublinearly, so
    // the best constant reconstruction is checked explicitly.
    let (column, constant) = best_constant(problem);
    if slope * constant < objective {
        let tol = stop.rel_tolerance * (slope * constant).abs().max(1.0);
        for row in channel.chunks_mut(outputs) {
            row.iter_mut().for_each(|p| *p = 0.0);
            row[column] = 1.0;
        }
        return BaSolution {
            channel,
            rate: 0.0,
            distortion: constant,
            objective: slope * constant,
            iterations,
            converged: converged || slope * constant - lower_bound <= tol,
        };
    }
    BaSolution {
        channel,
        rate,
        distortion,
        objective,
        iterations,
        converged,
    }
}

/// Output with the least expected distortion, and that distortion.
fn best_constant(problem: BaProblem<'_>) -> (usize, f64) {
    let outputs = problem.outputs;
    (0..outputs)
        .map(|j| {
            let d: f64 = problem
                .weights
                .iter()
                .enumerate()
                .filter(|(_, w)| **w > 0.0)
                .map(|(i, w)| w * problem.dist[i * outputs + j])
                .sum();
            (j, d)
        })
        .fold((0, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best })
}
