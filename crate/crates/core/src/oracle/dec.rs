//! Decoder-side scenario: alternating minimization over the test channel
//! `p(u|x)` and the reconstruction map `v(u, q)`.
//!
//! For fixed `p(u|x)` the map is set exactly,
//! `v(u, q) = argmin_x̂ E[d(x, x̂, q) | u, q]`; since `u` is generated from
//! `x` alone and `x ⊥ q`, the conditional law of `x` given `(u, q)` is
//! `p(x|u)`. For fixed `v` one BA update runs on the induced distortion
//! `ρ(x, u) = Σ_q p(q)·d(x, v(u, q), q)`. The `I(u; q)` term is identically
//! zero under the Markov chain `u - x - q` with `x ⊥ q`, so the rate is
//! `I(x; u)`.
//!
//! The problem is not convex, so every slope is solved from several
//! initializations. Initialization 0 lifts the no-side-information optimum
//! (`u = x̂`, `v(u, q) = u`); the rest are random.

use alloc::vec;
use alloc::vec::Vec;

use super::ba::{channel_step, kl, monotone_slack, optimality_gap, output_marginal, settled, BaProblem};
use super::scenarios::{channel_from, none_solution};
use super::{Diagnostics, PointSolution, SolverConfig};
use crate::math::{exp, ln};
use crate::model::{DiscreteInstance, Scenario};
use crate::rng::{namespace, open_unit, stream};
use crate::Result;

/// Relative tolerance under which two candidate reconstructions tie.
const TIE: f64 = 1e-12;

/// Reconstruction map `v(u, q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconstructionMap {
    aux: usize,
    side: usize,
    map: Vec<usize>,
}

impl ReconstructionMap {
    pub fn aux_size(&self) -> usize {
        self.aux
    }

    pub fn side_size(&self) -> usize {
        self.side
    }

    #[inline]
    pub fn get(&self, u: usize, q: usize) -> usize {
        self.map[u * self.side + q]
    }
}

struct DecRun {
    channel: Vec<f64>,
    map: Vec<usize>,
    rate: f64,
    distortion: f64,
    objective: f64,
    iterations: usize,
    converged: bool,
}

/// `v(u, q)` from the unnormalized posterior weights `p(x)·p(u|x)`.
fn update_map(instance: &DiscreteInstance, channel: &[f64], aux: usize, map: &mut [usize]) {
    let (nx, nxh, nq) = (
        instance.source_size(),
        instance.recon_size(),
        instance.side_size(),
    );
    let px = instance.p_x();
    let dist = instance.dist();
    for u in 0..aux {
        for q in 0..nq {
            let cost = |xh: usize| -> f64 {
                (0..nx)
                    .map(|x| px[x] * channel[x * aux + u] * dist.get(x, xh, q))
                    .sum()
            };
            let mut best = 0;
            let mut best_cost = cost(0);
            for xh in 1..nxh {
                let cost = cost(xh);
                if cost < best_cost - TIE * best_cost.abs() {
                    best = xh;
                    best_cost = cost;
                }
            }
            map[u * nq + q] = best;
        }
    }
}

/// `ρ(x, u) = Σ_q p(q)·d(x, v(u, q), q)`, row-major `|X| × |U|`.
fn induced_distortion(instance: &DiscreteInstance, map: &[usize], aux: usize, out: &mut [f64]) {
    let nq = instance.side_size();
    let dist = instance.dist();
    for x in 0..instance.source_size() {
        for u in 0..aux {
            out[x * aux + u] = instance
                .p_q()
                .iter()
                .enumerate()
                .map(|(q, &pq)| pq * dist.get(x, map[u * nq + q], q))
                .sum();
        }
    }
}

fn run(
    instance: &DiscreteInstance,
    slope: f64,
    aux: usize,
    start: Vec<f64>,
    config: &SolverConfig,
) -> DecRun {
    let nx = instance.source_size();
    let nq = instance.side_size();
    let px = instance.p_x();
    let mut channel = start;
    let mut map = vec![0; aux * nq];
    let mut rho = vec![0.0; nx * aux];
    let mut kernel = vec![0.0; nx * aux];
    let mut row_min = vec![0.0; nx];
    let mut ln_z = vec![0.0; nx];
    let mut output = vec![0.0; aux];
    let mut next = vec![0.0; aux];
    let mut previous = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iterations {
        iterations += 1;
        update_map(instance, &channel, aux, &mut map);
        induced_distortion(instance, &map, aux, &mut rho);
        for x in 0..nx {
            let r = &rho[x * aux..(x + 1) * aux];
            let m = r.iter().copied().fold(f64::INFINITY, f64::min);
            row_min[x] = m;
            for (k, v) in kernel[x * aux..(x + 1) * aux].iter_mut().zip(r) {
                *k = exp(-slope * (v - m));
            }
        }
        output_marginal(px, &channel, aux, &mut output);
        let head = channel_step(
            px,
            &rho,
            aux,
            slope,
            &kernel,
            &row_min,
            &output,
            &mut channel,
            &mut ln_z,
        );
        output_marginal(px, &channel, aux, &mut next);
        let divergence = kl(&next, &output);
        let objective = head - divergence;
        debug_assert!(
            objective <= previous + monotone_slack(previous),
            "decoder-side objective increased: {previous} -> {objective}"
        );
        // the gap bounds the channel step for the current map only
        let problem = BaProblem {
            weights: px,
            dist: &rho,
            outputs: aux,
        };
        let gap = optimality_gap(problem, slope, &row_min, &ln_z, &output, &next, divergence);
        if settled(previous, objective, config.rel_tolerance)
            && gap <= config.rel_tolerance * objective.abs().max(1.0)
        {
            converged = true;
            break;
        }
        previous = objective;
    }
    update_map(instance, &channel, aux, &mut map);
    induced_distortion(instance, &map, aux, &mut rho);
    output_marginal(px, &channel, aux, &mut output);
    let mut rate = 0.0;
    let mut distortion = 0.0;
    for x in 0..nx {
        for u in 0..aux {
            let p = channel[x * aux + u];
            if p > 0.0 && px[x] > 0.0 {
                rate += px[x] * p * ln(p / output[u]);
                distortion += px[x] * p * rho[x * aux + u];
            }
        }
    }
    let rate = rate.max(0.0);
    DecRun {
        channel,
        map,
        rate,
        distortion,
        objective: rate + slope * distortion,
        iterations,
        converged,
    }
}

/// Dirichlet(1) rows.
fn random_start(nx: usize, aux: usize, seed: u64, stream_id: u64) -> Vec<f64> {
    let mut rng = stream(seed, stream_id);
    let mut channel = vec![0.0; nx * aux];
    for row in channel.chunks_mut(aux) {
        for p in row.iter_mut() {
            *p = -ln(open_unit(&mut rng));
        }
        let s: f64 = row.iter().sum();
        row.iter_mut().for_each(|p| *p /= s);
    }
    channel
}

pub(crate) fn dec_point(
    instance: &DiscreteInstance,
    slope: f64,
    index: u64,
    config: &SolverConfig,
) -> Result<PointSolution> {
    let aux = config.aux_for(instance)?;
    let (nx, nxh) = (instance.source_size(), instance.recon_size());

    let lifted = {
        let none = none_solution(instance, slope, config);
        let mut start = vec![0.0; nx * aux];
        for x in 0..nx {
            start[x * aux..x * aux + nxh].copy_from_slice(&none.channel[x * nxh..(x + 1) * nxh]);
        }
        start
    };

    let mut best: Option<(usize, DecRun)> = None;
    for restart in 0..config.restarts {
        let start = if restart == 0 {
            lifted.clone()
        } else {
            let id = namespace::SOLVER | (index << 16) | restart as u64;
            random_start(nx, aux, config.seed, id)
        };
        let candidate = run(instance, slope, aux, start, config);
        let better = match &best {
            None => true,
            Some((_, incumbent)) => {
                candidate.objective < incumbent.objective - TIE * incumbent.objective.abs().max(1.0)
            }
        };
        if better {
            best = Some((restart, candidate));
        }
    }
    let (restart, run) = best.expect("at least one restart");
    Ok(PointSolution {
        scenario: Scenario::Decoder,
        slope,
        rate: run.rate,
        distortion: run.distortion,
        objective: run.objective,
        iterations: run.iterations,
        converged: run.converged,
        channel: channel_from(nx, aux, run.channel),
        reconstruction: Some(ReconstructionMap {
            aux,
            side: instance.side_size(),
            map: run.map,
        }),
        diagnostics: Diagnostics {
            restart: Some(restart),
            ..Diagnostics::default()
        },
    })
}
