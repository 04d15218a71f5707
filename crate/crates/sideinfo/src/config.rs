//! Run configuration, read from TOML.
//!
//! ```toml
//! seed = 7
//! jobs = 4            # worker threads; does not affect results
//! format = "csv"      # or "json"
//!
//! [experiment]
//! kind = "check-theorem1"
//! instance = { builtin = "z4-group" }
//! gap_tolerance = 1e-3
//!
//! [experiment.solver]
//! slope_min = 0.01
//! slope_max = 100.0
//! slope_count = 32
//! ```
//!
//! Every experiment table has defaults for all of its fields, so
//! `[experiment]` with only `kind` is a valid run. Unknown keys are errors.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sideinfo_core::gap::{SideInfoDistribution, DEFAULT_SAMPLES, GRID_POINTS, GRID_SPAN, TARGET_FACTORS};
use sideinfo_core::model::Scenario;
use sideinfo_core::oracle::{log_slopes, SolverConfig};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    /// Worker threads, all available cores when absent. Left out of the
    /// resolved config and its hash: it never changes an artifact.
    #[serde(default, skip_serializing)]
    pub jobs: Option<usize>,
    #[serde(default)]
    pub format: Format,
    pub experiment: Experiment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Experiment {
    RdCurves(RdCurves),
    #[serde(alias = "theorem1")]
    CheckTheorem1(Theorem1),
    #[serde(alias = "theorem3")]
    CheckTheorem3(Theorem3),
    MdsDemo(MdsDemo),
    DftDemo(DftDemo),
    TwoStage(TwoStage),
    RateGap(RateGap),
    PenaltyCheck(PenaltyCheck),
}

impl Experiment {
    pub const KINDS: [&'static str; 8] = [
        "rd-curves",
        "check-theorem1",
        "check-theorem3",
        "mds-demo",
        "dft-demo",
        "two-stage",
        "rate-gap",
        "penalty-check",
    ];

    pub fn kind(&self) -> &'static str {
        let i = match self {
            Self::RdCurves(_) => 0,
            Self::CheckTheorem1(_) => 1,
            Self::CheckTheorem3(_) => 2,
            Self::MdsDemo(_) => 3,
            Self::DftDemo(_) => 4,
            Self::TwoStage(_) => 5,
            Self::RateGap(_) => 6,
            Self::PenaltyCheck(_) => 7,
        };
        Self::KINDS[i]
    }

    /// The experiment of `kind` with every field at its default.
    pub fn default_for(kind: &str) -> Option<Self> {
        Some(match kind {
            "rd-curves" => Self::RdCurves(RdCurves::default()),
            "check-theorem1" => Self::CheckTheorem1(Theorem1::default()),
            "check-theorem3" => Self::CheckTheorem3(Theorem3::default()),
            "mds-demo" => Self::MdsDemo(MdsDemo::default()),
            "dft-demo" => Self::DftDemo(DftDemo::default()),
            "two-stage" => Self::TwoStage(TwoStage::default()),
            "rate-gap" => Self::RateGap(RateGap::default()),
            "penalty-check" => Self::PenaltyCheck(PenaltyCheck::default()),
            _ => return None,
        })
    }
}

/// Where a discrete instance comes from: a built-in name or a JSON file
/// (see [`crate::instance_file`]). `count > 1` is allowed for `random`
/// only and runs instances `0..count` of the seeded random family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InstanceRef {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    pub count: u64,
}

impl Default for InstanceRef {
    fn default() -> Self {
        Self {
            builtin: None,
            file: None,
            count: 1,
        }
    }
}

impl InstanceRef {
    pub fn builtin(name: &str) -> Self {
        Self {
            builtin: Some(name.to_owned()),
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        match (&self.builtin, &self.file) {
            (Some(_), Some(_)) => Err(CliError::Config(
                "instance: give either `builtin` or `file`, not both".into(),
            )),
            (None, None) => Err(CliError::Config(
                "instance: `builtin` or `file` is required".into(),
            )),
            (Some(name), None) => {
                if !crate::presets::BUILTIN_INSTANCES.contains(&name.as_str()) {
                    return Err(CliError::Config(format!(
                        "unknown builtin instance `{name}` (known: {})",
                        crate::presets::BUILTIN_INSTANCES.join(", ")
                    )));
                }
                if self.count == 0 || (self.count > 1 && name != "random") {
                    return Err(CliError::Config(format!(
                        "instance count {} is only allowed above 1 for `random`",
                        self.count
                    )));
                }
                Ok(())
            }
            (None, Some(_)) if self.count != 1 => {
                Err(CliError::Config("instance count must be 1 for a file".into()))
            }
            (None, Some(_)) => Ok(()),
        }
    }
}

/// Slope grid and stopping rule of the rate-distortion solvers. An explicit
/// `slopes` list replaces the logarithmic grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub slope_min: f64,
    pub slope_max: f64,
    pub slope_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slopes: Option<Vec<f64>>,
    pub max_iterations: usize,
    pub rel_tolerance: f64,
    pub restarts: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aux_cardinality: Option<usize>,
}

impl Default for SolverSection {
    fn default() -> Self {
        let d = SolverConfig::default();
        Self {
            slope_min: 1e-2,
            slope_max: 1e2,
            slope_count: d.slopes.len(),
            slopes: None,
            max_iterations: d.max_iterations,
            rel_tolerance: d.rel_tolerance,
            restarts: d.restarts,
            aux_cardinality: d.aux_cardinality,
        }
    }
}

impl SolverSection {
    pub fn solver_config(&self, seed: u64) -> Result<SolverConfig> {
        let slopes = match &self.slopes {
            Some(s) => s.clone(),
            None => {
                if !(self.slope_min > 0.0 && self.slope_max >= self.slope_min) {
                    return Err(CliError::Config(format!(
                        "slope range [{}, {}] is not positive and ordered",
                        self.slope_min, self.slope_max
                    )));
                }
                log_slopes(self.slope_min, self.slope_max, self.slope_count)
            }
        };
        let cfg = SolverConfig {
            slopes,
            max_iterations: self.max_iterations,
            rel_tolerance: self.rel_tolerance,
            aux_cardinality: self.aux_cardinality,
            restarts: self.restarts,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RdCurves {
    pub instance: InstanceRef,
    /// Labels among NONE, DEC, ENC, BOTH.
    pub scenarios: Vec<String>,
    pub solver: SolverSection,
    /// Fail the run when the four curves are out of order.
    pub check_ordering: bool,
}

impl Default for RdCurves {
    fn default() -> Self {
        Self {
            instance: InstanceRef::builtin("safe-symbol-toy"),
            scenarios: Scenario::ALL.iter().map(|s| s.label().to_owned()).collect(),
            solver: SolverSection::default(),
            check_ordering: true,
        }
    }
}

impl RdCurves {
    pub fn scenarios(&self) -> Result<Vec<Scenario>> {
        if self.scenarios.is_empty() {
            return Err(CliError::Config("no scenarios requested".into()));
        }
        let mut out: Vec<Scenario> = self
            .scenarios
            .iter()
            .map(|l| {
                Scenario::from_label(l).ok_or_else(|| {
                    CliError::Config(format!("unknown scenario `{l}` (use NONE, DEC, ENC, BOTH)"))
                })
            })
            .collect::<Result<_>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Theorem1 {
    pub instance: InstanceRef,
    pub solver: SolverSection,
    /// Largest allowed `|R_ENC − R_BOTH|`, nats.
    pub gap_tolerance: f64,
    /// Largest allowed `I(x̂; q)` of an encoder-only optimizer, nats.
    pub leakage_tolerance: f64,
}

impl Default for Theorem1 {
    fn default() -> Self {
        Self {
            instance: InstanceRef::builtin("z4-group"),
            solver: SolverSection::default(),
            gap_tolerance: 1e-3,
            leakage_tolerance: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Theorem3 {
    pub instance: InstanceRef,
    pub solver: SolverSection,
    /// Largest allowed `|R_DEC − R_NONE|`, nats.
    pub gap_tolerance: f64,
}

impl Default for Theorem3 {
    fn default() -> Self {
        Self {
            instance: InstanceRef::builtin("quaternary-scaled"),
            solver: SolverSection::default(),
            gap_tolerance: 1e-3,
        }
    }
}

/// A block given explicitly: symbols as integers and the mask as a
/// bitstring such as `"1101101"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitBlock {
    pub symbols: Vec<u32>,
    pub mask: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MdsDemo {
    pub n: usize,
    pub k: usize,
    /// Field degree, `GF(2^m)`.
    pub m: u32,
    pub trials: u64,
    /// Coded before the random trials.
    pub blocks: Vec<ExplicitBlock>,
}

impl Default for MdsDemo {
    fn default() -> Self {
        Self {
            n: 7,
            k: 5,
            m: 3,
            trials: 10_000,
            blocks: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DftDemo {
    pub n: usize,
    pub k: usize,
    /// Bits per complex coefficient.
    pub bits: u32,
    pub trials: u64,
    pub calibration_blocks: u64,
    /// Relative slack of the per-trial check `D_relevant ≤ D_coefficient`.
    pub contraction_slack: f64,
}

impl Default for DftDemo {
    fn default() -> Self {
        Self {
            n: 64,
            k: 16,
            bits: 8,
            trials: 100_000,
            calibration_blocks: 2_000,
            contraction_slack: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TwoStage {
    pub n: usize,
    pub k: usize,
    /// `[R0, R1]` pairs, bits per complex sample.
    pub rates: Vec<[u32; 2]>,
    pub trials: u64,
    pub calibration_blocks: u64,
    /// Deficit against the informed baseline allowed at the first rate pair.
    pub max_deficit_db: f64,
}

impl Default for TwoStage {
    fn default() -> Self {
        Self {
            n: 64,
            k: 32,
            rates: vec![[4, 8], [6, 10], [8, 12]],
            trials: 10_000,
            calibration_blocks: 500,
            max_deficit_db: 1.25,
        }
    }
}

/// A side-information law, tagged by `family`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilySpec {
    Exponential { tau: f64 },
    Uniform,
    Lognormal { m: f64, q2: f64 },
    Pareto { a: f64, b: f64 },
    Gamma { a: f64, b: f64 },
    Pathological { eps: f64 },
    PositiveCauchy,
    TwoPoint { atoms: [f64; 2], weights: [f64; 2] },
}

impl From<FamilySpec> for SideInfoDistribution {
    fn from(f: FamilySpec) -> Self {
        match f {
            FamilySpec::Exponential { tau } => Self::Exponential { tau },
            FamilySpec::Uniform => Self::Uniform01,
            FamilySpec::Lognormal { m, q2 } => Self::Lognormal { m, q2 },
            FamilySpec::Pareto { a, b } => Self::Pareto { a, b },
            FamilySpec::Gamma { a, b } => Self::Gamma { a, b },
            FamilySpec::Pathological { eps } => Self::Pathological { eps },
            FamilySpec::PositiveCauchy => Self::PositiveCauchy,
            FamilySpec::TwoPoint { atoms, weights } => Self::TwoPoint { atoms, weights },
        }
    }
}

impl From<SideInfoDistribution> for FamilySpec {
    fn from(d: SideInfoDistribution) -> Self {
        match d {
            SideInfoDistribution::Exponential { tau } => Self::Exponential { tau },
            SideInfoDistribution::Uniform01 => Self::Uniform,
            SideInfoDistribution::Lognormal { m, q2 } => Self::Lognormal { m, q2 },
            SideInfoDistribution::Pareto { a, b } => Self::Pareto { a, b },
            SideInfoDistribution::Gamma { a, b } => Self::Gamma { a, b },
            SideInfoDistribution::Pathological { eps } => Self::Pathological { eps },
            SideInfoDistribution::PositiveCauchy => Self::PositiveCauchy,
            SideInfoDistribution::TwoPoint { atoms, weights } => Self::TwoPoint { atoms, weights },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RateGap {
    pub families: Vec<FamilySpec>,
    pub samples: u64,
    /// Differential entropy of the source for the high-resolution rates.
    pub entropy: f64,
    pub distortion: f64,
}

/// Least sample count for a finite-mean family.
pub const MIN_SAMPLES: u64 = 10_000;

impl Default for RateGap {
    fn default() -> Self {
        Self {
            families: SideInfoDistribution::table()
                .into_iter()
                .map(Into::into)
                .collect(),
            samples: DEFAULT_SAMPLES,
            // unit-variance Gaussian
            entropy: 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln(),
            distortion: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PenaltyCheck {
    /// Must have two atoms: `two-point` or `pathological`.
    pub distribution: FamilySpec,
    pub grid_points: usize,
    pub span: f64,
    /// Distortion targets as multiples of the smaller atom.
    pub target_factors: Vec<f64>,
    pub rel_tolerance: f64,
    pub max_iterations: usize,
    pub fit_tolerance: f64,
    pub max_fit_steps: usize,
    /// Largest allowed distance of the last gap from the closed form, nats.
    pub max_final_error: f64,
}

impl Default for PenaltyCheck {
    fn default() -> Self {
        let d = FamilySpec::TwoPoint {
            atoms: [0.25, 4.0],
            weights: [0.5, 0.5],
        };
        let p = sideinfo_core::gap::PenaltyConfig::for_distribution(&d.into())
            .expect("default law has two atoms");
        Self {
            distribution: d,
            grid_points: GRID_POINTS,
            span: GRID_SPAN,
            target_factors: TARGET_FACTORS.to_vec(),
            rel_tolerance: p.solver.rel_tolerance,
            max_iterations: p.solver.max_iterations,
            fit_tolerance: p.fit_tolerance,
            max_fit_steps: p.max_fit_steps,
            max_final_error: 0.05,
        }
    }
}

impl RunConfig {
    pub fn new(seed: u64, experiment: Experiment) -> Self {
        Self {
            seed,
            jobs: None,
            format: Format::Csv,
            experiment,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.message().to_owned()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Schema checks that do not need the numerical core.
    pub fn validate(&self) -> Result<()> {
        if self.jobs == Some(0) {
            return Err(CliError::Config("jobs must be at least 1".into()));
        }
        let positive = |what: &str, v: u64| {
            if v == 0 {
                Err(CliError::Config(format!("{what} must be positive")))
            } else {
                Ok(())
            }
        };
        match &self.experiment {
            Experiment::RdCurves(e) => {
                e.instance.validate()?;
                e.scenarios()?;
            }
            Experiment::CheckTheorem1(e) => e.instance.validate()?,
            Experiment::CheckTheorem3(e) => e.instance.validate()?,
            Experiment::MdsDemo(e) => positive("trials", e.trials)?,
            Experiment::DftDemo(e) => {
                positive("trials", e.trials)?;
                positive("calibration_blocks", e.calibration_blocks)?;
            }
            Experiment::TwoStage(e) => {
                positive("trials", e.trials)?;
                positive("calibration_blocks", e.calibration_blocks)?;
                if e.rates.is_empty() {
                    return Err(CliError::Config("rates is empty".into()));
                }
            }
            Experiment::RateGap(e) => {
                if e.families.is_empty() {
                    return Err(CliError::Config("families is empty".into()));
                }
                if e.samples < MIN_SAMPLES {
                    return Err(CliError::Config(format!(
                        "samples = {} is below the minimum of {MIN_SAMPLES}",
                        e.samples
                    )));
                }
            }
            Experiment::PenaltyCheck(e) => {
                if e.target_factors.is_empty() {
                    return Err(CliError::Config("target_factors is empty".into()));
                }
            }
        }
        Ok(())
    }

    /// The resolved configuration as sorted-key JSON.
    pub fn canonical_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}
