use rayon::prelude::*;
use serde_json::{json, Value};
use sideinfo_core::transform::gauss::block;
use sideinfo_core::transform::{
    calibrate_coefficient_sigma, calibrate_shift_sigma, informed_baseline, DftScheme, TwoStage,
    CONDITION_BOUND,
};
use sideinfo_core::Error;

use crate::config::{DftDemo, TwoStage as TwoStageConfig};
use crate::error::Result;
use crate::output::{num, Artifacts, Cell, Check, Table};

/// Splits off rejected masks: `Ok(Err(condition))`.
fn rejected<T>(r: sideinfo_core::Result<T>) -> Result<std::result::Result<T, f64>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(Error::IllConditioned { condition, .. }) => Ok(Err(condition)),
        Err(e) => Err(e.into()),
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        s / n as f64
    }
}

pub fn dft_demo(cfg: &DftDemo, seed: u64) -> Result<Artifacts> {
    let (n, k) = (cfg.n, cfg.k);
    let cal = calibrate_coefficient_sigma(n, k, seed, cfg.calibration_blocks)?;
    let scheme = DftScheme::new(n, k, cfg.bits, cal.sigma[0])?;
    let trials = (0..cfg.trials)
        .into_par_iter()
        .map(|t| rejected(scheme.trial(&block(seed, t, n, k))))
        .collect::<Result<Vec<_>>>()?;

    let mut table = Table::new(&[
        "trial",
        "status",
        "dist_relevant",
        "dist_other",
        "dist_coefficient",
        "bits",
        "condition",
    ]);
    let slack = cfg.contraction_slack;
    let (mut violations, mut max_ratio, mut max_mismatch) = (0u64, 0.0f64, 0.0f64);
    for (t, r) in trials.iter().enumerate() {
        match r {
            Ok(tr) => {
                let (rel, coef) = (tr.relevant_distortion, tr.coefficient_distortion);
                if rel > coef * (1.0 + slack) {
                    violations += 1;
                }
                if coef > 0.0 {
                    max_ratio = max_ratio.max(rel / coef);
                    max_mismatch = max_mismatch.max((rel - coef).abs() / coef);
                }
                table.push(vec![
                    t.into(),
                    "ok".into(),
                    rel.into(),
                    tr.other_distortion.into(),
                    coef.into(),
                    tr.bits.into(),
                    tr.condition.into(),
                ]);
            }
            Err(condition) => table.push(vec![
                t.into(),
                "rejected".into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                (*condition).into(),
            ]),
        }
    }
    let ok: Vec<_> = trials.iter().filter_map(|r| r.as_ref().ok()).collect();
    let mut checks = vec![Check::at_most(
        "contraction violations",
        violations as f64,
        0.0,
        true,
    )];
    if k == n {
        checks.push(Check::at_most(
            "full-mask relative mismatch",
            max_mismatch,
            slack,
            true,
        ));
    }
    let summary = json!({
        "n": n,
        "k": k,
        "bits_per_coefficient": cfg.bits,
        "sigma": num(cal.sigma[0]),
        "calibration": { "rms": num(cal.rms), "used": cal.used, "rejected": cal.rejected },
        "condition_bound": CONDITION_BOUND,
        "trials": cfg.trials,
        "used": ok.len(),
        "rejected": trials.len() - ok.len(),
        "mean_relevant": num(mean(ok.iter().map(|t| t.relevant_distortion))),
        "mean_other": num(mean(ok.iter().map(|t| t.other_distortion))),
        "mean_coefficient": num(mean(ok.iter().map(|t| t.coefficient_distortion))),
        "max_relevant_over_coefficient": num(max_ratio),
        "max_relative_mismatch": num(max_mismatch),
        "contraction_violations": violations,
    });
    Ok(Artifacts {
        table,
        summary,
        checks,
    })
}

struct Pair {
    important: f64,
    other: f64,
    bits: Option<u64>,
    condition: f64,
    baseline_important: f64,
    baseline_other: f64,
    baseline_bits: u64,
}

pub fn two_stage(cfg: &TwoStageConfig, seed: u64) -> Result<Artifacts> {
    let (n, k) = (cfg.n, cfg.k);
    let mut table = Table::new(&[
        "r0",
        "r1",
        "trial",
        "status",
        "dist_important",
        "dist_other",
        "baseline_important",
        "baseline_other",
        "bits",
        "baseline_bits",
        "condition",
    ]);
    let mut rungs = Vec::new();
    let mut deficits = Vec::new();
    let mut rate_mismatch = 0u64;
    for &[r0, r1] in &cfg.rates {
        let cal = calibrate_shift_sigma(n, k, r0, r1, seed, cfg.calibration_blocks)?;
        let scheme = TwoStage::new(n, k, r0, r1, cal.sigma)?;
        let trials = (0..cfg.trials)
            .into_par_iter()
            .map(|t| -> Result<_> {
                let b = block(seed, t, n, k);
                Ok(match rejected(scheme.trial(&b))? {
                    Ok(tr) => {
                        let base = informed_baseline(&b.samples, &b.mask, r0, r1)?;
                        Ok(Pair {
                            important: tr.important_distortion,
                            other: tr.other_distortion,
                            bits: tr.bits,
                            condition: tr.condition,
                            baseline_important: base.important_distortion,
                            baseline_other: base.other_distortion,
                            baseline_bits: base.bits,
                        })
                    }
                    Err(c) => Err(c),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        for (t, r) in trials.iter().enumerate() {
            let lead = [Cell::from(r0), r1.into(), t.into()];
            let rest: Vec<Cell> = match r {
                Ok(p) => {
                    if p.bits != Some(p.baseline_bits) {
                        rate_mismatch += 1;
                    }
                    vec![
                        "ok".into(),
                        p.important.into(),
                        p.other.into(),
                        p.baseline_important.into(),
                        p.baseline_other.into(),
                        p.bits.map_or(Cell::Empty, Cell::from),
                        p.baseline_bits.into(),
                        p.condition.into(),
                    ]
                }
                Err(c) => {
                    let mut v = vec![Cell::from("rejected")];
                    v.extend(std::iter::repeat_n(Cell::Empty, 6));
                    v.push((*c).into());
                    v
                }
            };
            table.push(lead.into_iter().chain(rest).collect());
        }
        let ok: Vec<&Pair> = trials.iter().filter_map(|r| r.as_ref().ok()).collect();
        let two_stage = mean(ok.iter().map(|p| p.important));
        let baseline = mean(ok.iter().map(|p| p.baseline_important));
        let deficit_db = 10.0 * (two_stage / baseline).log10();
        deficits.push(deficit_db);
        rungs.push(json!({
            "r0": r0,
            "r1": r1,
            "shift_sigma": [num(cal.sigma[0]), num(cal.sigma[1])],
            "shift_rms": num(cal.rms),
            "calibration_used": cal.used,
            "calibration_rejected": cal.rejected,
            "used": ok.len(),
            "rejected": trials.len() - ok.len(),
            "bits_per_block": scheme.nominal_bits(),
            "mean_important": num(two_stage),
            "mean_other": num(mean(ok.iter().map(|p| p.other))),
            "baseline_important": num(baseline),
            "baseline_other": num(mean(ok.iter().map(|p| p.baseline_other))),
            "deficit_db": num(deficit_db),
        }));
    }
    let shrinking = deficits.windows(2).all(|w| w[1] < w[0]);
    let checks = vec![
        Check::at_most(
            "blocks with unmatched total rate",
            rate_mismatch as f64,
            0.0,
            true,
        ),
        Check::at_most(
            format!("deficit dB at ({}, {})", cfg.rates[0][0], cfg.rates[0][1]),
            deficits[0],
            cfg.max_deficit_db,
            false,
        ),
        Check::holds("deficit shrinks with rate", shrinking, false),
    ];
    let summary = json!({
        "n": n,
        "k": k,
        "trials": cfg.trials,
        "rungs": rungs,
        "deficits_db": deficits.iter().copied().map(num).collect::<Vec<Value>>(),
        "deficit_shrinks": shrinking,
    });
    Ok(Artifacts {
        table,
        summary,
        checks,
    })
}
