use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};
use sideinfo_core::model::{DiscreteInstance, Scenario};
use sideinfo_core::oracle::{
    ordering_report, separable_factors, solve_point, theorem1_report, theorem3_report,
    validate_group_instance, ScenarioResult, SolverConfig, ORDERING_SLACK,
};

use super::load_instances;
use super::Digests;
use crate::config::{RdCurves, Theorem1, Theorem3};
use crate::error::{CliError, Result};
use crate::output::{num, Artifacts, Cell, Check, Table};

/// Solves every `(scenario, slope)` pair of `scenarios` in parallel and
/// assembles one sweep per scenario, in the order given.
pub fn sweep(
    instance: &DiscreteInstance,
    scenarios: &[Scenario],
    config: &SolverConfig,
) -> Result<Vec<ScenarioResult>> {
    config.validate()?;
    if scenarios.contains(&Scenario::Decoder) {
        config.aux_for(instance)?;
    }
    let units: Vec<(Scenario, usize)> = scenarios
        .iter()
        .flat_map(|&s| (0..config.slopes.len()).map(move |i| (s, i)))
        .collect();
    let points = units
        .par_iter()
        .map(|&(s, i)| solve_point(instance, s, config.slopes[i], i as u64, config))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let per = config.slopes.len();
    Ok(scenarios
        .iter()
        .zip(points.chunks(per))
        .map(|(&s, chunk)| ScenarioResult::from_points(s, chunk.to_vec()))
        .collect())
}

const CURVE_COLUMNS: [&str; 7] = [
    "instance",
    "scenario",
    "slope",
    "rate_nats",
    "distortion",
    "iterations",
    "converged",
];

fn push_curves(table: &mut Table, label: &str, results: &[ScenarioResult]) {
    for r in results {
        for p in &r.points {
            table.push(vec![
                Cell::from(label),
                Cell::from(r.scenario.label()),
                p.slope.into(),
                p.rate.into(),
                p.distortion.into(),
                p.iterations.into(),
                p.converged.into(),
            ]);
        }
    }
}

fn unconverged(results: &[ScenarioResult]) -> (usize, Value) {
    let mut total = 0;
    let mut map = serde_json::Map::new();
    for r in results {
        let slopes = r.unconverged();
        total += slopes.len();
        if !slopes.is_empty() {
            map.insert(r.scenario.label().into(), json!(slopes));
        }
    }
    (total, Value::Object(map))
}

pub fn rd_curves(cfg: &RdCurves, seed: u64, base: &Path) -> Result<(Digests, Artifacts)> {
    let scenarios = cfg.scenarios()?;
    let solver = cfg.solver.solver_config(seed)?;
    let (instances, inputs) = load_instances(&cfg.instance, seed, base)?;
    let mut table = Table::new(&CURVE_COLUMNS);
    let mut summaries = Vec::new();
    let mut checks = Vec::new();
    let mut total_unconverged = 0;
    for inst in &instances {
        let results = sweep(&inst.instance, &scenarios, &solver)?;
        push_curves(&mut table, &inst.label, &results);
        let (count, slopes) = unconverged(&results);
        total_unconverged += count;
        let mut summary = json!({
            "instance": inst.label,
            "unconverged_slopes": slopes,
        });
        if cfg.check_ordering && results.len() > 1 {
            let report = ordering_report(&results, ORDERING_SLACK)?;
            let pairs: Vec<Value> = report
                .pairs
                .iter()
                .map(|p| {
                    json!({
                        "lower": p.lower.label(),
                        "upper": p.upper.label(),
                        "max_excess": num(p.max_excess),
                        "at_distortion": num(p.at_distortion),
                        "holds": p.holds,
                    })
                })
                .collect();
            if !pairs.is_empty() {
                checks.push(Check::holds(
                    format!("ordering {}", inst.label),
                    report.holds(),
                    true,
                ));
            }
            summary["ordering"] = json!({ "slack": report.slack, "holds": report.holds(), "pairs": pairs });
        }
        summaries.push(summary);
    }
    checks.push(Check::at_most(
        "unconverged points",
        total_unconverged as f64,
        0.0,
        false,
    ));
    Ok((
        inputs,
        Artifacts {
            table,
            summary: json!({ "instances": summaries }),
            checks,
        },
    ))
}

fn single(cfg_instances: Vec<super::LoadedInstance>) -> Result<super::LoadedInstance> {
    let mut v = cfg_instances;
    if v.len() != 1 {
        return Err(CliError::Config(
            "this experiment takes exactly one instance".into(),
        ));
    }
    Ok(v.remove(0))
}

pub fn theorem1(cfg: &Theorem1, seed: u64, base: &Path) -> Result<(Digests, Artifacts)> {
    let solver = cfg.solver.solver_config(seed)?;
    let (instances, inputs) = load_instances(&cfg.instance, seed, base)?;
    let inst = single(instances)?;
    let group = inst
        .group
        .as_ref()
        .ok_or_else(|| CliError::Config(format!("instance `{}` carries no group table", inst.label)))?;
    validate_group_instance(&inst.instance, group)?;
    let results = sweep(&inst.instance, &[Scenario::Encoder, Scenario::Both], &solver)?;
    let report = theorem1_report(&results[0], &results[1])?;
    let mut table = Table::new(&CURVE_COLUMNS);
    push_curves(&mut table, &inst.label, &results);
    let (count, slopes) = unconverged(&results);
    let checks = vec![
        Check::at_most(
            "max |R_ENC - R_BOTH|",
            report.max_rate_gap,
            cfg.gap_tolerance,
            true,
        ),
        Check::at_most(
            "max I(xh; q)",
            report.max_side_leakage,
            cfg.leakage_tolerance,
            true,
        ),
        Check::at_most("unconverged points", count as f64, 0.0, false),
    ];
    let summary = json!({
        "instance": inst.label,
        "max_rate_gap": num(report.max_rate_gap),
        "at_distortion": num(report.at_distortion),
        "at_slope": num(report.at_slope),
        "max_side_leakage": num(report.max_side_leakage),
        "unconverged_slopes": slopes,
    });
    Ok((
        inputs,
        Artifacts {
            table,
            summary,
            checks,
        },
    ))
}

pub fn theorem3(cfg: &Theorem3, seed: u64, base: &Path) -> Result<(Digests, Artifacts)> {
    let solver = cfg.solver.solver_config(seed)?;
    let (instances, inputs) = load_instances(&cfg.instance, seed, base)?;
    let inst = single(instances)?;
    let (d0, _) = separable_factors(&inst.instance)?;
    let results = sweep(&inst.instance, &[Scenario::Decoder, Scenario::Neither], &solver)?;
    let report = theorem3_report(&inst.instance, &results[0], &results[1])?;
    let mut table = Table::new(&CURVE_COLUMNS);
    push_curves(&mut table, &inst.label, &results);
    let (count, slopes) = unconverged(&results);
    let checks = vec![
        Check::at_most(
            "max |R_DEC - R_NONE|",
            report.max_rate_gap,
            cfg.gap_tolerance,
            true,
        ),
        Check::holds("v(u, q) ignores q", report.map_ignores_side, true),
        Check::at_most("unconverged points", count as f64, 0.0, false),
    ];
    let violations: Vec<Value> = report
        .map_violations
        .iter()
        .map(|(slope, u)| json!({ "slope": slope, "u": u }))
        .collect();
    let summary = json!({
        "instance": inst.label,
        "side_scales": d0,
        "max_rate_gap": num(report.max_rate_gap),
        "at_distortion": num(report.at_distortion),
        "at_slope": num(report.at_slope),
        "map_ignores_side": report.map_ignores_side,
        "map_violations": violations,
        "unconverged_slopes": slopes,
    });
    Ok((
        inputs,
        Artifacts {
            table,
            summary,
            checks,
        },
    ))
}
