//! Rate-distortion functions for the four side-information scenarios on
//! small discrete instances.
//!
//! | scenario | optimization |
//! |----------|--------------|
//! | neither  | `inf I(x; x̂)` over `p(x̂|x)` against `d̄(x, x̂) = E_q d(x, x̂, q)` |
//! | decoder  | `inf I(x; u)` over `p(u|x)` and `v(u, q)` |
//! | encoder  | `inf I(x, q; x̂)` over `p(x̂|x, q)` (the super source `(x, q)`) |
//! | both     | `inf I(x; x̂ | q)` over `p(x̂|x, q)` |
//!
//! Every curve is traced by sweeping the Lagrange slope `λ` and minimizing
//! `I + λ·E[d]` at each slope. Single points can be solved independently
//! (see [`solve_point`]), so callers are free to evaluate a sweep in
//! parallel and assemble it with [`ScenarioResult::from_points`].

pub(crate) mod ba;
mod checks;
mod dec;
mod lossless;
mod scenarios;

use alloc::format;
use alloc::vec::Vec;

use crate::math::{exp, ln};
use crate::model::{ConditionalChannel, DiscreteInstance, RdCurve, RdPoint, Scenario};
use crate::{Error, Result};

pub use checks::{
    check_ordering, check_theorem1, check_theorem3, ordering_report, separable_factors, theorem1_report,
    theorem3_report, validate_group_instance, OrderingReport, PairExcess, Theorem1Report, Theorem3Report,
    ORDERING_SLACK,
};
pub use dec::ReconstructionMap;
pub use lossless::{lossless_point, LosslessPoint};
pub use scenarios::{solve_both, solve_dec, solve_enc, solve_none, solve_point};

/// Parameters shared by all solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Lagrange slopes, strictly positive and increasing.
    pub slopes: Vec<f64>,
    pub max_iterations: usize,
    /// An inner solve ends once both the relative change of `I + λ·E[d]`
    /// and its certified distance to the optimum fall below this.
    pub rel_tolerance: f64,
    /// `|U|` for the decoder-side scenario; `|X̂| + 1` when `None`.
    pub aux_cardinality: Option<usize>,
    /// Initializations per slope for the decoder-side scenario.
    pub restarts: usize,
    /// Seed for the decoder-side random initializations.
    pub seed: u64,
}

pub const DEFAULT_SLOPE_COUNT: usize = 32;

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            slopes: log_slopes(1e-2, 1e2, DEFAULT_SLOPE_COUNT),
            max_iterations: 10_000,
            rel_tolerance: 1e-9,
            aux_cardinality: None,
            restarts: 8,
            seed: 0,
        }
    }
}

/// `count` logarithmically spaced slopes from `lo` to `hi` inclusive.
pub fn log_slopes(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => alloc::vec![lo],
        _ => {
            let (a, b) = (ln(lo), ln(hi));
            (0..count)
                .map(|i| exp(a + (b - a) * i as f64 / (count - 1) as f64))
                .collect()
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.slopes.is_empty() {
            return Err(Error::InvalidConfig("empty slope grid".into()));
        }
        if self.slopes.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::InvalidConfig("slopes must be finite and positive".into()));
        }
        if self.slopes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig("slopes must be strictly increasing".into()));
        }
        if !(self.rel_tolerance > 0.0 && self.rel_tolerance <= 1e-3) {
            return Err(Error::InvalidConfig(format!(
                "relative tolerance {} outside (0, 1e-3]",
                self.rel_tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be positive".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be positive".into()));
        }
        Ok(())
    }

    pub(crate) fn stopping(&self) -> ba::Stopping {
        ba::Stopping {
            max_iterations: self.max_iterations,
            rel_tolerance: self.rel_tolerance,
        }
    }

    /// `|U|` to use for `instance`, checked against `|X̂|`.
    pub fn aux_for(&self, instance: &DiscreteInstance) -> Result<usize> {
        let needed = instance.recon_size();
        let got = self.aux_cardinality.unwrap_or(needed + 1);
        if got < needed {
            return Err(Error::AuxCardinalityTooSmall { got, needed });
        }
        Ok(got)
    }
}

/// Quantities reported beside the rate and distortion of a point.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    /// `I(x; x̂ | q)` of the optimizing channel (encoder and both scenarios).
    pub conditional_rate: Option<f64>,
    /// `I(x̂; q)` of the optimizing channel (encoder scenario).
    pub side_leakage: Option<f64>,
    /// Initialization that produced the kept solution (decoder scenario).
    pub restart: Option<usize>,
}

/// Solution of one scenario at one slope.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSolution {
    pub scenario: Scenario,
    pub slope: f64,
    /// nats per sample
    pub rate: f64,
    pub distortion: f64,
    /// `rate + slope·distortion`
    pub objective: f64,
    /// Inner iterations; for per-side-value solves the sum over side values,
    /// for the decoder scenario the iterations of the kept initialization.
    pub iterations: usize,
    /// `false` when the iteration cap was hit before the tolerance.
    pub converged: bool,
    /// `p(x̂|x)`, `p(x̂|x,q)` or `p(u|x)` depending on the scenario.
    pub channel: ConditionalChannel,
    /// `v(u, q)` for the decoder scenario.
    pub reconstruction: Option<ReconstructionMap>,
    pub diagnostics: Diagnostics,
}

impl PointSolution {
    pub fn rd_point(&self) -> RdPoint {
        RdPoint {
            rate: self.rate,
            distortion: self.distortion,
            slope: self.slope,
            scenario: self.scenario,
        }
    }
}

/// A full slope sweep for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult {
    pub scenario: Scenario,
    pub points: Vec<PointSolution>,
}

impl ScenarioResult {
    pub fn from_points(scenario: Scenario, mut points: Vec<PointSolution>) -> Self {
        points.sort_by(|a, b| a.slope.total_cmp(&b.slope));
        Self { scenario, points }
    }

    pub fn curve(&self) -> RdCurve {
        RdCurve::new(
            self.scenario,
            self.points.iter().map(PointSolution::rd_point).collect(),
        )
    }

    /// Slopes whose inner solve hit the iteration cap.
    pub fn unconverged(&self) -> Vec<f64> {
        self.points
            .iter()
            .filter(|p| !p.converged)
            .map(|p| p.slope)
            .collect()
    }
}

/// Sweeps every slope of `config` for `scenario`, sequentially.
pub fn solve(
    instance: &DiscreteInstance,
    scenario: Scenario,
    config: &SolverConfig,
) -> Result<ScenarioResult> {
    config.validate()?;
    let points = config
        .slopes
        .iter()
        .enumerate()
        .map(|(i, &slope)| solve_point(instance, scenario, slope, i as u64, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScenarioResult::from_points(scenario, points))
}
