//! Built-in instances and the catalog of ready-made runs.

use serde::Serialize;
use sideinfo_core::gap::SideInfoDistribution;
use sideinfo_core::model::{catalog, DiscreteInstance, GroupTable};

use crate::config::{
    DftDemo, Experiment, FamilySpec, InstanceRef, MdsDemo, PenaltyCheck, RateGap, RdCurves, RunConfig,
    SolverSection, Theorem1, Theorem3, TwoStage,
};
use crate::error::Result;

pub const BUILTIN_INSTANCES: [&str; 7] = [
    "z2-group",
    "z4-group",
    "binary-scaled",
    "quaternary-scaled",
    "erasure",
    "safe-symbol-toy",
    "random",
];

/// Built-in instance `name`; `random` draws instance `index` of the family
/// seeded by `seed`. Group instances come with their table.
pub fn builtin_instance(name: &str, seed: u64, index: u64) -> Result<(DiscreteInstance, Option<GroupTable>)> {
    Ok(match name {
        "z2-group" => {
            let (g, i) = catalog::z2_group()?;
            (i, Some(g))
        }
        "z4-group" => {
            let (g, i) = catalog::z4_group()?;
            (i, Some(g))
        }
        "binary-scaled" => (catalog::binary_scaled()?, None),
        "quaternary-scaled" => (catalog::quaternary_scaled()?, None),
        // GF(8) symbols, 5 of every 7 matter
        "erasure" => (catalog::erasure(8, 7, 5)?, None),
        "safe-symbol-toy" => (catalog::safe_symbol_toy()?, None),
        "random" => (catalog::random_small(seed, index)?, None),
        other => {
            return Err(crate::error::CliError::Config(format!(
                "unknown builtin instance `{other}`"
            )))
        }
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub kind: &'static str,
    pub tags: &'static [&'static str],
    pub description: &'static str,
    #[serde(skip)]
    pub config: RunConfig,
}

fn preset(
    name: &'static str,
    tags: &'static [&'static str],
    description: &'static str,
    experiment: Experiment,
) -> Preset {
    Preset {
        name,
        kind: experiment.kind(),
        tags,
        description,
        config: RunConfig::new(0, experiment),
    }
}

/// Every preset, in a fixed order.
pub fn presets() -> Vec<Preset> {
    vec![
        preset(
            "rd-curves-safe-symbol",
            &["rd-functions"],
            "four rate-distortion curves of the non-separable safe-symbol toy",
            Experiment::RdCurves(RdCurves::default()),
        ),
        preset(
            "ordering-random",
            &["rd-functions", "ordering"],
            "scenario ordering on 20 random small instances",
            Experiment::RdCurves(RdCurves {
                instance: InstanceRef {
                    count: 20,
                    ..InstanceRef::builtin("random")
                },
                solver: SolverSection {
                    slope_min: 0.05,
                    slope_max: 50.0,
                    slope_count: 16,
                    ..SolverSection::default()
                },
                ..RdCurves::default()
            }),
        ),
        preset(
            "theorem1-z2",
            &["equalities", "encoder-side"],
            "encoder-only side information is as good as both on Z_2",
            Experiment::CheckTheorem1(Theorem1 {
                instance: InstanceRef::builtin("z2-group"),
                ..Theorem1::default()
            }),
        ),
        preset(
            "theorem1-z4",
            &["equalities", "encoder-side"],
            "encoder-only side information is as good as both on Z_4",
            Experiment::CheckTheorem1(Theorem1::default()),
        ),
        preset(
            "theorem3-binary",
            &["equalities", "decoder-side"],
            "decoder-only side information is useless for a scaled binary distortion",
            Experiment::CheckTheorem3(Theorem3 {
                instance: InstanceRef::builtin("binary-scaled"),
                ..Theorem3::default()
            }),
        ),
        preset(
            "theorem3-quaternary",
            &["equalities", "decoder-side"],
            "decoder-only side information is useless for a scaled 4-ary distortion",
            Experiment::CheckTheorem3(Theorem3::default()),
        ),
        preset(
            "mds-7-5-gf8",
            &["discrete-scheme"],
            "curve-fit coder, n = 7, k = 5 over GF(8), 10^4 random blocks",
            Experiment::MdsDemo(MdsDemo::default()),
        ),
        preset(
            "dft-64-16",
            &["gaussian-scheme"],
            "band-limited interpolation quantizer, n = 64, k = 16, 10^5 blocks",
            Experiment::DftDemo(DftDemo::default()),
        ),
        preset(
            "dft-64-64",
            &["gaussian-scheme"],
            "band-limited interpolation quantizer with every sample relevant",
            Experiment::DftDemo(DftDemo {
                k: 64,
                trials: 1_000,
                calibration_blocks: 200,
                ..DftDemo::default()
            }),
        ),
        preset(
            "two-stage-64-32",
            &["two-stage"],
            "two-stage transform quantizer against the informed baseline, n = 64, k = 32",
            Experiment::TwoStage(TwoStage::default()),
        ),
        preset(
            "rate-gap-all-families",
            &["rate-penalty"],
            "closed-form and Monte-Carlo rate penalty for all seven table rows",
            Experiment::RateGap(RateGap::default()),
        ),
        preset(
            "penalty-two-atoms",
            &["rate-penalty"],
            "oracle-measured penalty for side information 0.25 or 4, equiprobable",
            Experiment::PenaltyCheck(PenaltyCheck::default()),
        ),
        preset(
            "penalty-pathological",
            &["rate-penalty"],
            "oracle-measured penalty for the pathological law at eps = 0.1",
            Experiment::PenaltyCheck(PenaltyCheck {
                distribution: FamilySpec::from(SideInfoDistribution::Pathological { eps: 0.1 }),
                ..PenaltyCheck::default()
            }),
        ),
    ]
}

pub fn find(name: &str) -> Option<Preset> {
    presets().into_iter().find(|p| p.name == name)
}

/// Presets carrying `tag`; empty when nothing matches.
pub fn with_tag(tag: &str) -> Vec<Preset> {
    presets().into_iter().filter(|p| p.tags.contains(&tag)).collect()
}

/// The first preset of `kind`, used when a subcommand gets neither a
/// config nor a preset.
pub fn default_for(kind: &str) -> Option<Preset> {
    presets().into_iter().find(|p| p.kind == kind)
}
