//! Measured penalty `R_NONE − R_BOTH` on a quantized Gaussian source with
//! two-level side information scaling a squared error.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::family::SideInfoDistribution;
use crate::math::{erf, exp, ln, sqrt};
use crate::model::{make_scaled_distortion, DiscreteInstance};
use crate::oracle::ba::{blahut_arimoto, BaProblem};
use crate::oracle::SolverConfig;
use crate::{Error, Result};

/// Source and reconstruction grid size.
pub const GRID_POINTS: usize = 129;
/// Half-width of the grid in source standard deviations.
pub const GRID_SPAN: f64 = 6.0;
/// Targets are these multiples of the smaller atom.
pub const TARGET_FACTORS: [f64; 3] = [3.2, 1.6, 0.4];

#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyConfig {
    pub grid_points: usize,
    pub span: f64,
    /// Distortion targets, visited in the given order.
    pub targets: Vec<f64>,
    /// Inner solver settings; only the stopping rule is used.
    pub solver: SolverConfig,
    /// Relative distortion mismatch accepted when fitting the slope.
    pub fit_tolerance: f64,
    pub max_fit_steps: usize,
}

impl PenaltyConfig {
    /// Grid of [`GRID_POINTS`] over `±GRID_SPAN`, targets from
    /// [`TARGET_FACTORS`] times the smaller atom of `dist`.
    pub fn for_distribution(dist: &SideInfoDistribution) -> Result<Self> {
        let [(a, _), (b, _)] = two_atoms(dist)?;
        let lo = a.min(b);
        Ok(Self {
            grid_points: GRID_POINTS,
            span: GRID_SPAN,
            targets: TARGET_FACTORS.iter().map(|f| f * lo).collect(),
            solver: SolverConfig {
                slopes: vec![1.0],
                rel_tolerance: 1e-4,
                max_iterations: 20_000,
                ..SolverConfig::default()
            },
            fit_tolerance: 2e-3,
            max_fit_steps: 40,
        })
    }
}

/// One distortion target.
#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyPoint {
    pub target: f64,
    pub none_rate: f64,
    pub none_slope: f64,
    pub both_rate: f64,
    pub both_slope: f64,
    /// `R_NONE − R_BOTH` at the target
    pub gap: f64,
    pub converged: bool,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyReport {
    pub distribution: SideInfoDistribution,
    pub closed_form: f64,
    pub points: Vec<PenaltyPoint>,
}

impl PenaltyReport {
    /// Gaps never decrease from one target to the next (within `slack`).
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.points.windows(2).all(|w| w[1].gap >= w[0].gap - slack)
    }

    /// `|gap − closed form|` at the last target.
    pub fn final_error(&self) -> Option<f64> {
        self.points.last().map(|p| (p.gap - self.closed_form).abs())
    }
}

fn two_atoms(dist: &SideInfoDistribution) -> Result<[(f64, f64); 2]> {
    dist.validate()?;
    dist.atoms()
        .ok_or_else(|| Error::InvalidParameter(format!("{dist} is not a two-atom law")))
}

/// Grid points `x_i = −span + 2·span·i/(points − 1)`.
pub fn grid(points: usize, span: f64) -> Vec<f64> {
    let step = 2.0 * span / (points - 1) as f64;
    (0..points).map(|i| -span + step * i as f64).collect()
}

/// Unit Gaussian quantized to the grid (cell masses between midpoints, the
/// outer cells open), reconstructions on the same grid, distortion
/// `q·(x − x̂)²`.
pub fn quantized_gaussian_instance(
    dist: &SideInfoDistribution,
    points: usize,
    span: f64,
) -> Result<DiscreteInstance> {
    let atoms = two_atoms(dist)?;
    if points < 2 || !(span.is_finite() && span > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "grid of {points} points over ±{span}"
        )));
    }
    let xs = grid(points, span);
    let cdf = |t: f64| 0.5 * (1.0 + erf(t / sqrt(2.0)));
    let mut p_x: Vec<f64> = (0..points)
        .map(|i| {
            let lo = if i == 0 {
                0.0
            } else {
                cdf(0.5 * (xs[i - 1] + xs[i]))
            };
            let hi = if i + 1 == points {
                1.0
            } else {
                cdf(0.5 * (xs[i] + xs[i + 1]))
            };
            hi - lo
        })
        .collect();
    let total: f64 = p_x.iter().sum();
    p_x.iter_mut().for_each(|p| *p /= total);
    let d1: Vec<f64> = xs
        .iter()
        .flat_map(|x| xs.iter().map(move |y| (x - y) * (x - y)))
        .collect();
    let d0 = [atoms[0].0, atoms[1].0];
    let tensor = make_scaled_distortion(&d0, &d1, points)?;
    DiscreteInstance::new(p_x, vec![atoms[0].1, atoms[1].1], tensor)
}

/// Rate-distortion problems solved by plain BA from a uniform output law,
/// one per side value for the informed case.
struct Fit<'a> {
    /// `(mass, problem)`
    problems: Vec<(f64, BaProblem<'a>)>,
}

impl Fit<'_> {
    /// `(rate, distortion, converged)` at `slope`.
    fn solve(&self, slope: f64, config: &SolverConfig) -> (f64, f64, bool) {
        let (mut rate, mut distortion, mut converged) = (0.0, 0.0, true);
        for (weight, problem) in &self.problems {
            let sol = blahut_arimoto(*problem, slope, None, config.stopping(), None);
            rate += weight * sol.rate;
            distortion += weight * sol.distortion;
            converged &= sol.converged;
        }
        (rate, distortion, converged)
    }

    /// Rate at distortion `target`: the slope is refitted until the
    /// distortion is within `fit_tolerance` (relative), then the rate is
    /// moved along the supporting line to the target.
    fn rate_at(&self, target: f64, start: f64, config: &PenaltyConfig) -> Result<(f64, f64, bool)> {
        let mut slope = start;
        let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
        let mut last: Option<(f64, f64)> = None;
        for _ in 0..config.max_fit_steps {
            let (rate, distortion, converged) = self.solve(slope, &config.solver);
            let mismatch = distortion / target - 1.0;
            if mismatch.abs() <= config.fit_tolerance {
                return Ok((rate + slope * (distortion - target), slope, converged));
            }
            // distortion falls as the slope grows
            if mismatch > 0.0 {
                lo = lo.max(slope);
            } else {
                hi = hi.min(slope);
            }
            // secant on (ln λ, ln D), starting from D ∝ 1/λ
            let (x, y) = (ln(slope), ln(distortion));
            let elasticity = match last {
                Some((px, py)) if (y - py).abs() > 1e-12 && x != px => ((y - py) / (x - px)).min(-1e-3),
                _ => -1.0,
            };
            last = Some((x, y));
            let mut next = exp(x + (ln(target) - y) / elasticity);
            if !(next > lo && next < hi) {
                next = if hi.is_finite() {
                    sqrt(lo.max(hi * 1e-3) * hi)
                } else {
                    2.0 * lo
                };
            }
            slope = next;
        }
        Err(Error::InvalidConfig(format!(
            "no slope reaches distortion {target} within {} steps",
            config.max_fit_steps
        )))
    }
}

/// Measures `R_NONE(D) − R_BOTH(D)` at each target distortion.
pub fn penalty_check(dist: &SideInfoDistribution, config: &PenaltyConfig) -> Result<PenaltyReport> {
    let atoms = two_atoms(dist)?;
    let instance = quantized_gaussian_instance(dist, config.grid_points, config.span)?;
    let step = 2.0 * config.span / (config.grid_points - 1) as f64;
    let cell_noise = step * step / 12.0;
    let q_hi = atoms[0].0.max(atoms[1].0);
    let avg = instance.averaged_distortion();
    let nxh = instance.recon_size();
    // zero-rate distortion: the best constant reconstruction
    let d_max = (0..nxh)
        .map(|j| {
            instance
                .p_x()
                .iter()
                .enumerate()
                .map(|(i, p)| p * avg[i * nxh + j])
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min);
    let none = Fit {
        problems: vec![(
            1.0,
            BaProblem {
                weights: instance.p_x(),
                dist: &avg,
                outputs: nxh,
            },
        )],
    };
    let both = Fit {
        problems: (0..2)
            .map(|q| {
                let problem = BaProblem {
                    weights: instance.p_x(),
                    dist: instance.dist().slice(q),
                    outputs: nxh,
                };
                (atoms[q].1, problem)
            })
            .collect(),
    };
    let mut points = Vec::with_capacity(config.targets.len());
    for &target in &config.targets {
        if !(target.is_finite() && target > 0.0 && target < d_max) {
            return Err(Error::InvalidParameter(format!(
                "distortion target {target} outside (0, {d_max:.6}), the zero-rate distortion"
            )));
        }
        let start = 0.5 / target;
        let (none_rate, none_slope, c0) = none.rate_at(target, start, config)?;
        let (both_rate, both_slope, c1) = both.rate_at(target, start, config)?;
        // the finest per-sample error the informed coder aims for
        let finest = 1.0 / (2.0 * both_slope * q_hi);
        let warning = (finest < 10.0 * cell_noise).then(|| {
            format!(
                "target {target}: per-sample error {finest:.3e} is within 10x of the grid cell noise {cell_noise:.3e}"
            )
        });
        points.push(PenaltyPoint {
            target,
            none_rate,
            none_slope,
            both_rate,
            both_slope,
            gap: none_rate - both_rate,
            converged: c0 && c1,
            warning,
        });
    }
    Ok(PenaltyReport {
        distribution: *dist,
        closed_form: dist.gap_closed_form(),
        points,
    })
}
