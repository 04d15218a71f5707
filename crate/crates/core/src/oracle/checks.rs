//! Structural checks on solved curves: the encoder-only scenario matching
//! full side information on group-difference instances, the decoder-only
//! scenario matching no side information on separable instances, and the
//! ordering between all four scenarios.
//!
//! Each check is split into a `validate_*`/`*_report` pair so the solves in
//! between can be scheduled by the caller; `check_*` runs everything
//! sequentially.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{solve, ScenarioResult, SolverConfig};
use crate::model::{DiscreteInstance, GroupTable, Scenario};
use crate::{Error, Result};

/// Allowed rate excess, in nats, before an ordering is reported violated.
pub const ORDERING_SLACK: f64 = 1e-6;
const STRUCTURE_TOLERANCE: f64 = 1e-12;
const SEPARABLE_TOLERANCE: f64 = 1e-9;
/// Auxiliary symbols lighter than this are ignored by the map check.
const LIVE_MASS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Report {
    /// `max |R_ENC(D) − R_BOTH(D)|` at matched distortions.
    pub max_rate_gap: f64,
    pub at_distortion: f64,
    pub at_slope: f64,
    /// Largest `I(x̂; q)` among the encoder-only optimizers.
    pub max_side_leakage: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem3Report {
    /// `max |R_DEC(D) − R_NONE(D)|` at matched distortions.
    pub max_rate_gap: f64,
    pub at_distortion: f64,
    pub at_slope: f64,
    /// Whether every kept `v(u, q)` ignores `q` where it matters.
    pub map_ignores_side: bool,
    /// `(slope, u)` pairs where it does not.
    pub map_violations: Vec<(f64, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairExcess {
    pub lower: Scenario,
    pub upper: Scenario,
    /// `max (R_lower(D) − R_upper(D))`; positive means the order is broken
    /// somewhere.
    pub max_excess: f64,
    pub at_distortion: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderingReport {
    pub pairs: Vec<PairExcess>,
    pub slack: f64,
}

impl OrderingReport {
    pub fn holds(&self) -> bool {
        self.pairs.iter().all(|p| p.holds)
    }
}

/// Checks that `instance` has uniform source, `X = X̂ = G` and a distortion
/// depending only on the group difference and `q`.
pub fn validate_group_instance(instance: &DiscreteInstance, group: &GroupTable) -> Result<()> {
    let (nx, nxh, nq) = (
        instance.source_size(),
        instance.recon_size(),
        instance.side_size(),
    );
    let order = group.order();
    if nx != order || nxh != order {
        return Err(Error::NotGroupDifference(format!(
            "alphabets {nx}×{nxh} do not match group order {order}"
        )));
    }
    let u = 1.0 / nx as f64;
    if let Some(x) = instance
        .p_x()
        .iter()
        .position(|p| (p - u).abs() > STRUCTURE_TOLERANCE)
    {
        return Err(Error::NotGroupDifference(format!(
            "source is not uniform (p_x[{x}] = {})",
            instance.p_x()[x]
        )));
    }
    let e = group.identity();
    let dist = instance.dist();
    for q in 0..nq {
        for x in 0..nx {
            for xh in 0..nxh {
                let want = dist.get(group.difference(x, xh), e, q);
                let got = dist.get(x, xh, q);
                if (got - want).abs() > STRUCTURE_TOLERANCE * want.abs().max(1.0) {
                    return Err(Error::NotGroupDifference(format!(
                        "d({x},{xh},{q}) = {got} but d(x⊖x̂, e, {q}) = {want}"
                    )));
                }
            }
        }
    }
    Ok(())
}

fn curve_gap(a: &ScenarioResult, b: &ScenarioResult) -> Result<(f64, f64, f64)> {
    let gap = a.curve().gap_to(&b.curve()).ok_or_else(|| {
        Error::DimensionMismatch(format!(
            "{} and {} curves share no distortion range",
            a.scenario, b.scenario
        ))
    })?;
    Ok((gap.max_abs_gap, gap.at_distortion, gap.at_slope))
}

fn expect_scenario(result: &ScenarioResult, scenario: Scenario) -> Result<()> {
    if result.scenario != scenario {
        return Err(Error::DimensionMismatch(format!(
            "expected a {scenario} result, got {}",
            result.scenario
        )));
    }
    Ok(())
}

pub fn theorem1_report(enc: &ScenarioResult, both: &ScenarioResult) -> Result<Theorem1Report> {
    expect_scenario(enc, Scenario::Encoder)?;
    expect_scenario(both, Scenario::Both)?;
    let (max_rate_gap, at_distortion, at_slope) = curve_gap(enc, both)?;
    let max_side_leakage = enc
        .points
        .iter()
        .filter_map(|p| p.diagnostics.side_leakage)
        .fold(0.0, f64::max);
    Ok(Theorem1Report {
        max_rate_gap,
        at_distortion,
        at_slope,
        max_side_leakage,
    })
}

pub fn check_theorem1(
    instance: &DiscreteInstance,
    group: &GroupTable,
    config: &SolverConfig,
) -> Result<Theorem1Report> {
    validate_group_instance(instance, group)?;
    let enc = solve(instance, Scenario::Encoder, config)?;
    let both = solve(instance, Scenario::Both, config)?;
    theorem1_report(&enc, &both)
}

/// Factors `d(x, x̂, q) = d0(q)·d1(x, x̂)`, returning `(d0, d1)` with `d1`
/// taken from the side value of largest magnitude.
pub fn separable_factors(instance: &DiscreteInstance) -> Result<(Vec<f64>, Vec<f64>)> {
    let dist = instance.dist();
    let nq = instance.side_size();
    let norm2 = |s: &[f64]| s.iter().map(|v| v * v).sum::<f64>();
    let pivot = (0..nq)
        .max_by(|&a, &b| norm2(dist.slice(a)).total_cmp(&norm2(dist.slice(b))))
        .unwrap_or(0);
    let d1: Vec<f64> = dist.slice(pivot).to_vec();
    let n1 = norm2(&d1);
    if n1 == 0.0 {
        return Ok((vec![0.0; nq], d1));
    }
    let mut d0 = Vec::with_capacity(nq);
    for q in 0..nq {
        let s = dist.slice(q);
        let c = s.iter().zip(&d1).map(|(a, b)| a * b).sum::<f64>() / n1;
        let scale = s.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        if let Some(i) = s
            .iter()
            .zip(&d1)
            .position(|(a, b)| (a - c * b).abs() > SEPARABLE_TOLERANCE * scale)
        {
            let nxh = instance.recon_size();
            return Err(Error::NotSeparable(format!(
                "d(·,·,{q}) is not a multiple of d(·,·,{pivot}) at (x, x̂) = ({}, {})",
                i / nxh,
                i % nxh
            )));
        }
        d0.push(c);
    }
    Ok((d0, d1))
}

pub fn theorem3_report(
    instance: &DiscreteInstance,
    dec: &ScenarioResult,
    none: &ScenarioResult,
) -> Result<Theorem3Report> {
    expect_scenario(dec, Scenario::Decoder)?;
    expect_scenario(none, Scenario::Neither)?;
    let (d0, _) = separable_factors(instance)?;
    let (max_rate_gap, at_distortion, at_slope) = curve_gap(dec, none)?;
    let live_q: Vec<usize> = (0..instance.side_size())
        .filter(|&q| d0[q] > 0.0 && instance.p_q()[q] > 0.0)
        .collect();
    let mut violations = Vec::new();
    for p in &dec.points {
        let Some(map) = &p.reconstruction else {
            continue;
        };
        for u in 0..map.aux_size() {
            let mass: f64 = instance
                .p_x()
                .iter()
                .enumerate()
                .map(|(x, px)| px * p.channel.get(x, u))
                .sum();
            if mass <= LIVE_MASS {
                continue;
            }
            let mut values = live_q.iter().map(|&q| map.get(u, q));
            if let Some(first) = values.next() {
                if values.any(|v| v != first) {
                    violations.push((p.slope, u));
                }
            }
        }
    }
    Ok(Theorem3Report {
        max_rate_gap,
        at_distortion,
        at_slope,
        map_ignores_side: violations.is_empty(),
        map_violations: violations,
    })
}

pub fn check_theorem3(instance: &DiscreteInstance, config: &SolverConfig) -> Result<Theorem3Report> {
    separable_factors(instance)?;
    let dec = solve(instance, Scenario::Decoder, config)?;
    let none = solve(instance, Scenario::Neither, config)?;
    theorem3_report(instance, &dec, &none)
}

const ORDER: [(Scenario, Scenario); 4] = [
    (Scenario::Both, Scenario::Encoder),
    (Scenario::Encoder, Scenario::Neither),
    (Scenario::Both, Scenario::Decoder),
    (Scenario::Decoder, Scenario::Neither),
];

/// Compares every available pair of `BOTH ≤ ENC ≤ NONE` and
/// `BOTH ≤ DEC ≤ NONE`. Pairs with a missing scenario are skipped.
///
/// Two measurements are combined: the envelope gap over the common
/// distortion range, and `F_lower(λ) − F_upper(λ)` at every slope both
/// sweeps share. For convex curves the second is equivalent to the ordering
/// at every distortion, and it still applies when the two swept ranges do
/// not overlap.
pub fn ordering_report(results: &[ScenarioResult], slack: f64) -> Result<OrderingReport> {
    let find = |s: Scenario| results.iter().find(|r| r.scenario == s);
    let mut pairs = Vec::new();
    for (lower, upper) in ORDER {
        let (Some(a), Some(b)) = (find(lower), find(upper)) else {
            continue;
        };
        let mut max_excess = f64::NEG_INFINITY;
        let mut at_distortion = f64::NAN;
        if let Some(gap) = a.curve().gap_to(&b.curve()) {
            max_excess = gap.max_excess;
            at_distortion = gap.at_distortion;
        }
        for p in &a.points {
            let Some(q) = b.points.iter().find(|q| q.slope == p.slope) else {
                continue;
            };
            let excess = p.objective - q.objective;
            if excess > max_excess {
                max_excess = excess;
                at_distortion = p.distortion;
            }
        }
        if max_excess == f64::NEG_INFINITY {
            return Err(Error::DimensionMismatch(format!(
                "{lower} and {upper} sweeps share neither distortions nor slopes"
            )));
        }
        pairs.push(PairExcess {
            lower,
            upper,
            max_excess,
            at_distortion,
            holds: max_excess <= slack,
        });
    }
    Ok(OrderingReport { pairs, slack })
}

pub fn check_ordering(instance: &DiscreteInstance, config: &SolverConfig) -> Result<OrderingReport> {
    let results = Scenario::ALL
        .iter()
        .map(|&s| solve(instance, s, config))
        .collect::<Result<Vec<_>>>()?;
    ordering_report(&results, ORDERING_SLACK)
}
