use alloc::vec;
use alloc::vec::Vec;

use super::ba::{blahut_arimoto, BaProblem, BaSolution};
use super::{dec, solve, Diagnostics, PointSolution, ScenarioResult, SolverConfig};
use crate::model::{mutual_information, ConditionalChannel, DiscreteInstance, JointMatrix, Scenario};
use crate::{Error, Result};

/// Solves `scenario` at a single slope. `index` selects the random streams
/// of the decoder-side restarts, so a sweep split across workers reproduces
/// the sequential result when each point keeps its index.
pub fn solve_point(
    instance: &DiscreteInstance,
    scenario: Scenario,
    slope: f64,
    index: u64,
    config: &SolverConfig,
) -> Result<PointSolution> {
    if !(slope.is_finite() && slope > 0.0) {
        return Err(Error::InvalidConfig(alloc::format!(
            "slope {slope} is not positive"
        )));
    }
    match scenario {
        Scenario::Neither => Ok(none_point(instance, slope, config)),
        Scenario::Both => Ok(both_point(instance, slope, config)),
        Scenario::Encoder => Ok(enc_point(instance, slope, config)),
        Scenario::Decoder => dec::dec_point(instance, slope, index, config),
    }
}

pub fn solve_none(instance: &DiscreteInstance, config: &SolverConfig) -> Result<ScenarioResult> {
    solve(instance, Scenario::Neither, config)
}

pub fn solve_both(instance: &DiscreteInstance, config: &SolverConfig) -> Result<ScenarioResult> {
    solve(instance, Scenario::Both, config)
}

pub fn solve_enc(instance: &DiscreteInstance, config: &SolverConfig) -> Result<ScenarioResult> {
    solve(instance, Scenario::Encoder, config)
}

pub fn solve_dec(instance: &DiscreteInstance, config: &SolverConfig) -> Result<ScenarioResult> {
    config.aux_for(instance)?;
    solve(instance, Scenario::Decoder, config)
}

pub(crate) fn none_solution(instance: &DiscreteInstance, slope: f64, config: &SolverConfig) -> BaSolution {
    let avg = instance.averaged_distortion();
    blahut_arimoto(
        BaProblem {
            weights: instance.p_x(),
            dist: &avg,
            outputs: instance.recon_size(),
        },
        slope,
        None,
        config.stopping(),
        None,
    )
}

fn none_point(instance: &DiscreteInstance, slope: f64, config: &SolverConfig) -> PointSolution {
    let sol = none_solution(instance, slope, config);
    let nxh = instance.recon_size();
    PointSolution {
        scenario: Scenario::Neither,
        slope,
        rate: sol.rate,
        distortion: sol.distortion,
        objective: sol.objective,
        iterations: sol.iterations,
        converged: sol.converged,
        channel: channel_from(instance.source_size(), nxh, sol.channel),
        reconstruction: None,
        diagnostics: Diagnostics::default(),
    }
}

fn both_point(instance: &DiscreteInstance, slope: f64, config: &SolverConfig) -> PointSolution {
    let (nx, nxh, nq) = (
        instance.source_size(),
        instance.recon_size(),
        instance.side_size(),
    );
    let mut kernel = vec![0.0; nx * nq * nxh];
    let (mut rate, mut distortion) = (0.0, 0.0);
    let mut iterations = 0;
    let mut converged = true;
    for (q, &pq) in instance.p_q().iter().enumerate() {
        let sol = blahut_arimoto(
            BaProblem {
                weights: instance.p_x(),
                dist: instance.dist().slice(q),
                outputs: nxh,
            },
            slope,
            None,
            config.stopping(),
            None,
        );
        if pq > 0.0 {
            rate += pq * sol.rate;
            distortion += pq * sol.distortion;
            iterations += sol.iterations;
            converged &= sol.converged;
        }
        for x in 0..nx {
            let dst = (x * nq + q) * nxh;
            kernel[dst..dst + nxh].copy_from_slice(&sol.channel[x * nxh..(x + 1) * nxh]);
        }
    }
    PointSolution {
        scenario: Scenario::Both,
        slope,
        rate,
        distortion,
        objective: rate + slope * distortion,
        iterations,
        converged,
        channel: channel_from(nx * nq, nxh, kernel),
        reconstruction: None,
        diagnostics: Diagnostics {
            conditional_rate: Some(rate),
            ..Diagnostics::default()
        },
    }
}

fn enc_point(instance: &DiscreteInstance, slope: f64, config: &SolverConfig) -> PointSolution {
    let (nx, nxh, nq) = (
        instance.source_size(),
        instance.recon_size(),
        instance.side_size(),
    );
    let (weights, dist) = instance.super_source_distortion();
    let sol = blahut_arimoto(
        BaProblem {
            weights: &weights,
            dist: &dist,
            outputs: nxh,
        },
        slope,
        None,
        config.stopping(),
        None,
    );
    let channel = channel_from(nx * nq, nxh, sol.channel);
    let (conditional, leakage) = enc_decomposition(instance, &channel);
    PointSolution {
        scenario: Scenario::Encoder,
        slope,
        rate: sol.rate,
        distortion: sol.distortion,
        objective: sol.objective,
        iterations: sol.iterations,
        converged: sol.converged,
        channel,
        reconstruction: None,
        diagnostics: Diagnostics {
            conditional_rate: Some(conditional),
            side_leakage: Some(leakage),
            restart: None,
        },
    }
}

/// `(I(x; x̂ | q), I(x̂; q))` of a channel `p(x̂ | x, q)`; they sum to
/// `I(x, q; x̂)`.
pub(crate) fn enc_decomposition(instance: &DiscreteInstance, channel: &ConditionalChannel) -> (f64, f64) {
    let (nx, nxh, nq) = (
        instance.source_size(),
        instance.recon_size(),
        instance.side_size(),
    );
    let mut side_joint = vec![0.0; nq * nxh];
    let mut conditional = 0.0;
    for (q, &pq) in instance.p_q().iter().enumerate() {
        let mut joint = Vec::with_capacity(nx * nxh);
        for (x, &px) in instance.p_x().iter().enumerate() {
            for xh in 0..nxh {
                let p = px * channel.get(x * nq + q, xh);
                joint.push(p);
                side_joint[q * nxh + xh] += pq * p;
            }
        }
        if pq > 0.0 {
            if let Ok(j) = JointMatrix::new(nx, nxh, joint) {
                conditional += pq * mutual_information(&j);
            }
        }
    }
    let leakage = JointMatrix::new(nq, nxh, side_joint)
        .map(|j| mutual_information(&j))
        .unwrap_or(f64::NAN);
    (conditional, leakage)
}

/// Wraps a kernel produced by BA; rows are normalized by construction, so a
/// renormalization pass only removes rounding before validation.
pub(crate) fn channel_from(rows: usize, cols: usize, mut kernel: Vec<f64>) -> ConditionalChannel {
    for row in kernel.chunks_mut(cols) {
        let s: f64 = row.iter().sum();
        row.iter_mut().for_each(|p| *p /= s);
    }
    ConditionalChannel::new(rows, cols, kernel).expect("BA channels are row-stochastic")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::ln;
    use crate::model::{make_scaled_distortion, DistortionTensor};
    use crate::oracle::log_slopes;

    fn hamming(n: usize) -> Vec<f64> {
        (0..n * n)
            .map(|i| if i / n == i % n { 0.0 } else { 1.0 })
            .collect()
    }

    fn hb(p: f64) -> f64 {
        if p <= 0.0 || p >= 1.0 {
            0.0
        } else {
            -(p * ln(p) + (1.0 - p) * ln(1.0 - p))
        }
    }

    fn config(slopes: Vec<f64>) -> SolverConfig {
        SolverConfig {
            slopes,
            ..SolverConfig::default()
        }
    }

    #[test]
    fn none_binary_hamming_at_tenth() {
        let inst =
            DiscreteInstance::uniform(make_scaled_distortion(&[1.0], &hamming(2), 2).unwrap()).unwrap();
        let res = solve_none(&inst, &config(vec![ln(9.0)])).unwrap();
        let p = &res.points[0];
        assert!((p.distortion - 0.1).abs() < 1e-8);
        assert!((p.rate - (core::f64::consts::LN_2 - hb(0.1))).abs() < 1e-8);
        assert!((p.rate - 0.3681).abs() < 1e-4);
    }

    #[test]
    fn none_small_slope_approaches_zero_rate() {
        // biased source: best constant reconstruction has D_max = 0.3
        let dist = make_scaled_distortion(&[1.0], &hamming(2), 2).unwrap();
        let inst = DiscreteInstance::new(vec![0.7, 0.3], vec![1.0], dist).unwrap();
        // below the curve's steepest slope at D_max, ln(0.7/0.3)
        let res = solve_none(&inst, &config(vec![0.2])).unwrap();
        let p = &res.points[0];
        assert!(p.rate < 1e-6, "rate {}", p.rate);
        assert!(
            (p.distortion - 0.3).abs() < 1e-4,
            "D {} it {}",
            p.distortion,
            p.iterations
        );
    }

    #[test]
    fn none_quaternary_scaled_hamming_closed_form() {
        // d̄ = 1.5·Hamming on 4 symbols: R(D) = ln 4 − H_b(D/1.5) − (D/1.5)·ln 3
        let dist = make_scaled_distortion(&[1.0, 2.0], &hamming(4), 4).unwrap();
        let inst = DiscreteInstance::uniform(dist).unwrap();
        let res = solve_none(&inst, &config(log_slopes(0.5, 20.0, 12))).unwrap();
        for p in &res.points {
            let t = p.distortion / 1.5;
            if t >= 0.75 - 1e-9 {
                continue;
            }
            let expected = ln(4.0) - hb(t) - t * ln(3.0);
            assert!(
                (p.rate - expected).abs() < 1e-7,
                "D={} R={} vs {}",
                p.distortion,
                p.rate,
                expected
            );
        }
    }

    #[test]
    fn degenerate_side_information_collapses_scenarios() {
        let dist = DistortionTensor::from_fn(3, 3, 1, |x, xh, _| {
            ((x as f64) - (xh as f64)).abs() + if xh == 2 { 0.1 } else { 0.0 }
        })
        .unwrap();
        let inst = DiscreteInstance::new(vec![0.2, 0.5, 0.3], vec![1.0], dist).unwrap();
        let cfg = config(log_slopes(0.1, 10.0, 8));
        let none = solve_none(&inst, &cfg).unwrap();
        for s in [Scenario::Both, Scenario::Encoder, Scenario::Decoder] {
            let other = solve(&inst, s, &cfg).unwrap();
            for (a, b) in none.points.iter().zip(&other.points) {
                // the Lagrangian is pinned much tighter than its split into
                // rate and distortion, which drifts along flat directions
                assert!(
                    (a.objective - b.objective).abs() < 1e-7,
                    "{s}: F {} vs {}",
                    a.objective,
                    b.objective
                );
                assert!((a.rate - b.rate).abs() < 1e-4, "{s}: {} vs {}", a.rate, b.rate);
                assert!((a.distortion - b.distortion).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn enc_decomposition_adds_up() {
        let dist =
            DistortionTensor::from_fn(3, 2, 2, |x, xh, q| ((x + 2 * xh + 3 * q) % 4) as f64 * 0.5).unwrap();
        let inst = DiscreteInstance::new(vec![0.5, 0.3, 0.2], vec![0.6, 0.4], dist).unwrap();
        let res = solve_enc(&inst, &config(vec![1.0, 3.0])).unwrap();
        for p in &res.points {
            let c = p.diagnostics.conditional_rate.unwrap();
            let l = p.diagnostics.side_leakage.unwrap();
            assert!((c + l - p.rate).abs() < 1e-10);
        }
    }

    #[test]
    fn aux_cardinality_below_recon_rejected() {
        let inst =
            DiscreteInstance::uniform(make_scaled_distortion(&[1.0], &hamming(3), 3).unwrap()).unwrap();
        let cfg = SolverConfig {
            aux_cardinality: Some(2),
            ..config(vec![1.0])
        };
        assert!(matches!(
            solve_dec(&inst, &cfg),
            Err(Error::AuxCardinalityTooSmall { got: 2, needed: 3 })
        ));
    }
}
