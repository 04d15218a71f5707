use rayon::prelude::*;
use serde_json::{json, Value};
use sideinfo_core::gap::{
    gap_from_shards, high_resolution_rates, penalty_check as run_penalty, shard_moments, shard_sizes,
    PenaltyConfig, SideInfoDistribution, PRINTED_EXPONENTIAL_GAP,
};

use crate::config::{PenaltyCheck, RateGap};
use crate::error::Result;
use crate::output::{num, opt_num, Artifacts, Cell, Check, Table};

/// Allowed distance of Monte-Carlo from the closed form, in standard errors.
const SIGMAS: f64 = 3.0;
const IDENTITY_TOLERANCE: f64 = 1e-12;

pub fn rate_gap(cfg: &RateGap, seed: u64) -> Result<Artifacts> {
    let dists: Vec<SideInfoDistribution> = cfg.families.iter().map(|&f| f.into()).collect();
    for d in &dists {
        d.validate()?;
    }
    let sizes = shard_sizes(cfg.samples);
    let units: Vec<(usize, u64, u64)> = (0..dists.len())
        .flat_map(|f| sizes.iter().enumerate().map(move |(s, &n)| (f, s as u64, n)))
        .collect();
    let moments = units
        .par_iter()
        .map(|&(f, shard, n)| shard_moments(&dists[f], seed, shard, n))
        .collect::<std::result::Result<Vec<_>, _>>()?;

    let mut table = Table::new(&[
        "family",
        "params",
        "gap_closed_nats",
        "gap_mc_nats",
        "mc_stderr",
        "samples",
        "seed",
    ]);
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for (d, shards) in dists.iter().zip(moments.chunks(sizes.len().max(1))) {
        let g = gap_from_shards(d, seed, shards);
        table.push(vec![
            d.family().into(),
            d.params().into(),
            g.closed_form.into(),
            g.monte_carlo.into(),
            g.std_error.into(),
            g.samples.into(),
            seed.into(),
        ]);
        let name = d.to_string();
        let mut row = json!({
            "distribution": name,
            "family": d.family(),
            "params": d.params(),
            "closed_form": num(g.closed_form),
            "ln_mean": num(d.ln_mean()),
            "mean_ln": num(d.mean_ln()),
            "monte_carlo": opt_num(g.monte_carlo),
            "std_error": opt_num(g.std_error),
            "samples": g.samples,
            "non_finite": g.non_finite,
        });
        let approximations: serde_json::Map<String, Value> = d
            .approximations()
            .into_iter()
            .map(|(k, v)| (k.to_owned(), num(v)))
            .collect();
        if !approximations.is_empty() {
            row["approximations"] = Value::Object(approximations);
        }
        if let (Some(mc), Some(se)) = (g.monte_carlo, g.std_error) {
            let z = (mc - g.closed_form).abs() / se;
            row["z_score"] = num(z);
            checks.push(Check::at_most(format!("|z| {name}"), z, SIGMAS, false));
        }
        if g.closed_form.is_finite() {
            let hr = high_resolution_rates(cfg.entropy, cfg.distortion, d)?;
            let err = (hr.gap() - g.closed_form).abs();
            row["high_resolution"] = json!({
                "r_both": num(hr.both),
                "r_dec": num(hr.dec),
                "identity_error": num(err),
            });
            checks.push(Check::at_most(
                format!("identity {name}"),
                err,
                IDENTITY_TOLERANCE,
                true,
            ));
        } else {
            let slope = g.divergence_slope();
            row["divergence"] = json!({
                "trend": g.divergence.iter().map(|&(n, v)| json!([n, num(v)])).collect::<Vec<_>>(),
                "slope_per_ln_samples": opt_num(slope),
            });
            checks.push(Check::holds(
                format!("divergence grows {name}"),
                slope.is_some_and(|s| s > 0.0),
                false,
            ));
        }
        if matches!(d, SideInfoDistribution::Exponential { .. }) {
            let sides_with = g.monte_carlo.map(|mc| {
                if (mc - g.closed_form).abs() < (mc - PRINTED_EXPONENTIAL_GAP).abs() {
                    "moments"
                } else {
                    "printed"
                }
            });
            row["discrepancy"] = json!({
                "printed": PRINTED_EXPONENTIAL_GAP,
                "from_moments": num(g.closed_form),
                "difference": num(g.closed_form - PRINTED_EXPONENTIAL_GAP),
                "monte_carlo_closer_to": sides_with,
            });
        }
        rows.push(row);
    }
    Ok(Artifacts {
        table,
        summary: json!({
            "samples": cfg.samples,
            "entropy": cfg.entropy,
            "distortion": cfg.distortion,
            "families": rows,
        }),
        checks,
    })
}

pub fn penalty_check(cfg: &PenaltyCheck) -> Result<Artifacts> {
    let dist: SideInfoDistribution = cfg.distribution.into();
    let mut pc = PenaltyConfig::for_distribution(&dist)?;
    let lo = dist.atoms().map_or(f64::NAN, |[(a, _), (b, _)]| a.min(b));
    pc.grid_points = cfg.grid_points;
    pc.span = cfg.span;
    pc.targets = cfg.target_factors.iter().map(|f| f * lo).collect();
    pc.solver.rel_tolerance = cfg.rel_tolerance;
    pc.solver.max_iterations = cfg.max_iterations;
    pc.fit_tolerance = cfg.fit_tolerance;
    pc.max_fit_steps = cfg.max_fit_steps;
    let report = run_penalty(&dist, &pc)?;

    let mut table = Table::new(&[
        "target",
        "none_rate",
        "both_rate",
        "gap",
        "none_slope",
        "both_slope",
        "converged",
        "warning",
    ]);
    for p in &report.points {
        table.push(vec![
            p.target.into(),
            p.none_rate.into(),
            p.both_rate.into(),
            p.gap.into(),
            p.none_slope.into(),
            p.both_slope.into(),
            p.converged.into(),
            p.warning.clone().map_or(Cell::Empty, Cell::from),
        ]);
    }
    let final_error = report.final_error().unwrap_or(f64::INFINITY);
    let converged = report.points.iter().all(|p| p.converged);
    let checks = vec![
        Check::holds("gap grows as D shrinks", report.is_monotone(0.0), true),
        Check::at_most(
            "final |gap - closed form|",
            final_error,
            cfg.max_final_error,
            true,
        ),
        Check::holds("every solve converged", converged, true),
    ];
    let summary = json!({
        "distribution": dist.to_string(),
        "closed_form": num(report.closed_form),
        "grid_points": pc.grid_points,
        "span": pc.span,
        "gaps": report.points.iter().map(|p| num(p.gap)).collect::<Vec<_>>(),
        "final_error": num(final_error),
        "warnings": report.points.iter().filter_map(|p| p.warning.clone()).collect::<Vec<_>>(),
    });
    Ok(Artifacts {
        table,
        summary,
        checks,
    })
}
