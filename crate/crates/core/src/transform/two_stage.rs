//! Two-level side information known only to the encoder: `k` important
//! samples deserve rate `R1`, the rest `R0 ≤ R1`.
//!
//! 1. every important sample is quantized at `R0` (`ŷ₁`, zero elsewhere);
//! 2. the first-stage error at the important positions is interpolated by
//!    `k` low-frequency DFT coefficients, sent at `R1 − R0` bits each, and
//!    the decoder's copy `ê` of the interpolated error is formed everywhere;
//! 3. at the other positions `x − ê` is quantized at `R0` (`ŷ₂`).
//!
//! Each position carries exactly one `R0`-bit code, so the decoder rebuilds
//! `x̂ = ŷ₁ + ŷ₂ + ê` from the codes in position order without labels.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::dft::Dft;
use super::dft_scheme::{rms_per_dimension, split_errors, Calibration};
use super::gauss::{calibration_block, GaussianBlock, SOURCE_SIGMA};
use super::interp::{InterpolationSystem, CONDITION_BOUND};
use super::quant::ComplexQuantizer;
use crate::math::pow;
use crate::{Error, Result};

/// A transmitted value: a quantizer code, or the exact value when that
/// stage is bypassed (tests only; carries no bit count).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coded {
    Index(u32),
    Exact(Complex64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoStagePayload {
    /// One per position, in position order.
    pub samples: Vec<Coded>,
    /// One per shift coefficient.
    pub shifts: Vec<Coded>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStageTrial {
    pub important_distortion: f64,
    pub other_distortion: f64,
    /// `None` when a stage is bypassed.
    pub bits: Option<u64>,
    pub condition: f64,
}

#[derive(Debug, Clone)]
pub struct TwoStage {
    dft: Dft,
    k: usize,
    r0: u32,
    r1: u32,
    samples: Option<ComplexQuantizer>,
    shift: Option<ComplexQuantizer>,
    bound: f64,
}

impl TwoStage {
    /// `shift_sigma` holds the real and imaginary scales of the shift
    /// coefficients, see [`calibrate_shift_sigma`].
    pub fn new(n: usize, k: usize, r0: u32, r1: u32, shift_sigma: [f64; 2]) -> Result<Self> {
        if n == 0 || k > n {
            return Err(Error::BlockShape(format!(
                "need 1 ≤ n and k ≤ n, got n = {n}, k = {k}"
            )));
        }
        if r1 < r0 {
            return Err(Error::RateOrder { r0, r1 });
        }
        if r1 > 24 {
            return Err(Error::InvalidParameter(format!("R1 = {r1} bits")));
        }
        if shift_sigma.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::InvalidParameter(format!("shift scales {shift_sigma:?}")));
        }
        Ok(Self {
            dft: Dft::new(n),
            k,
            r0,
            r1,
            samples: Some(ComplexQuantizer::new(r0, SOURCE_SIGMA)),
            shift: Some(ComplexQuantizer::with_scales(r1 - r0, shift_sigma)),
            bound: CONDITION_BOUND,
        })
    }

    /// Sends the shift coefficients exactly.
    pub fn bypass_shift(mut self) -> Self {
        self.shift = None;
        self
    }

    /// Sends the per-position values exactly.
    pub fn bypass_samples(mut self) -> Self {
        self.samples = None;
        self
    }

    pub fn n(&self) -> usize {
        self.dft.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `n·R0 + k·(R1 − R0)`.
    pub fn nominal_bits(&self) -> u64 {
        self.n() as u64 * u64::from(self.r0) + self.k as u64 * u64::from(self.r1 - self.r0)
    }

    fn system(&self, labels: &[bool]) -> Result<InterpolationSystem> {
        if labels.len() != self.n() {
            return Err(Error::BlockShape(format!(
                "{} labels for n = {}",
                labels.len(),
                self.n()
            )));
        }
        let weight = labels.iter().filter(|m| **m).count();
        if weight != self.k {
            return Err(Error::MaskWeight {
                expected: self.k,
                got: weight,
            });
        }
        InterpolationSystem::new(&self.dft, labels, self.bound)
    }

    fn code(q: &Option<ComplexQuantizer>, v: Complex64) -> (Coded, Complex64) {
        match q {
            Some(q) => {
                let c = q.encode(v);
                (Coded::Index(c), q.decode(c))
            }
            None => (Coded::Exact(v), v),
        }
    }

    fn value(q: &Option<ComplexQuantizer>, c: Coded) -> Result<Complex64> {
        match (q, c) {
            (Some(q), Coded::Index(i)) if i >> q.bits() == 0 => Ok(q.decode(i)),
            (None, Coded::Exact(v)) => Ok(v),
            _ => Err(Error::MalformedPayload(format!("unexpected symbol {c:?}"))),
        }
    }

    /// Shift coefficients and the first-stage reconstruction.
    fn stages(
        &self,
        system: &InterpolationSystem,
        x: &[Complex64],
        labels: &[bool],
    ) -> (Vec<Coded>, Vec<Coded>, Vec<Complex64>) {
        let n = self.n();
        let zero = Complex64::new(0.0, 0.0);
        let mut sample_codes = vec![Coded::Exact(zero); n];
        let mut error = vec![zero; n];
        for i in 0..n {
            if labels[i] {
                let (c, y1) = Self::code(&self.samples, x[i]);
                sample_codes[i] = c;
                error[i] = x[i] - y1;
            }
        }
        let coefficients = system.solve(&error);
        let (shift_codes, shift_values): (Vec<Coded>, Vec<Complex64>) =
            coefficients.iter().map(|&c| Self::code(&self.shift, c)).unzip();
        let e_hat = self.dft.inverse_padded(&shift_values);
        for i in 0..n {
            if !labels[i] {
                sample_codes[i] = Self::code(&self.samples, x[i] - e_hat[i]).0;
            }
        }
        (sample_codes, shift_codes, coefficients)
    }

    pub fn encode(&self, x: &[Complex64], labels: &[bool]) -> Result<TwoStagePayload> {
        let system = self.system(labels)?;
        if x.len() != self.n() {
            return Err(Error::BlockShape(format!(
                "{} samples for n = {}",
                x.len(),
                self.n()
            )));
        }
        let (samples, shifts, _) = self.stages(&system, x, labels);
        Ok(TwoStagePayload { samples, shifts })
    }

    pub fn decode(&self, payload: &TwoStagePayload) -> Result<Vec<Complex64>> {
        if payload.samples.len() != self.n() || payload.shifts.len() != self.k {
            return Err(Error::MalformedPayload(format!(
                "{} sample codes and {} shift codes, expected {} and {}",
                payload.samples.len(),
                payload.shifts.len(),
                self.n(),
                self.k
            )));
        }
        let shifts = payload
            .shifts
            .iter()
            .map(|&c| Self::value(&self.shift, c))
            .collect::<Result<Vec<_>>>()?;
        let e_hat = self.dft.inverse_padded(&shifts);
        payload
            .samples
            .iter()
            .zip(e_hat)
            .map(|(&c, e)| Ok(Self::value(&self.samples, c)? + e))
            .collect()
    }

    /// Payload size; `None` if any stage is bypassed.
    pub fn payload_bits(&self, payload: &TwoStagePayload) -> Option<u64> {
        let (s, h) = (self.samples?, self.shift?);
        Some(
            payload.samples.len() as u64 * u64::from(s.bits())
                + payload.shifts.len() as u64 * u64::from(h.bits()),
        )
    }

    pub fn trial(&self, block: &GaussianBlock) -> Result<TwoStageTrial> {
        let system = self.system(&block.mask)?;
        if block.samples.len() != self.n() {
            return Err(Error::BlockShape(format!(
                "{} samples for n = {}",
                block.samples.len(),
                self.n()
            )));
        }
        let (samples, shifts, _) = self.stages(&system, &block.samples, &block.mask);
        let payload = TwoStagePayload { samples, shifts };
        let xh = self.decode(&payload)?;
        let (important, other) = split_errors(&block.samples, &xh, &block.mask);
        Ok(TwoStageTrial {
            important_distortion: important,
            other_distortion: other,
            bits: self.payload_bits(&payload),
            condition: system.condition(),
        })
    }
}

/// Halvings of the quantizer power tried below the RMS scale.
const SCALE_GRID: i32 = 80;

/// Scales of the shift quantizer (real part, imaginary part) for rates
/// `(r0, r1)`, fitted on `blocks` calibration blocks.
///
/// The shift coefficients are heavy tailed (their size grows with the
/// condition number of the mask), so their RMS overloads nothing but
/// wastes every cell on the rare huge values. Scales `rms·2^{−j/2}` for
/// `j = 0..=80` are tried instead, first one common scale and then each
/// part in turn, keeping the least mean important-position distortion on
/// the calibration blocks. The parts need separate scales because an odd
/// shift rate gives the real part one more bit.
pub fn calibrate_shift_sigma(
    n: usize,
    k: usize,
    r0: u32,
    r1: u32,
    seed: u64,
    blocks: u64,
) -> Result<Calibration> {
    let probe = TwoStage::new(n, k, r0, r1, [1.0, 1.0])?;
    struct Sample {
        a: Vec<Complex64>,
        error: Vec<Complex64>,
        coefficients: Vec<Complex64>,
    }
    let mut samples = Vec::new();
    let (mut sum, mut count, mut rejected) = (0.0, 0usize, 0usize);
    for t in 0..blocks {
        let b = calibration_block(seed, t, n, k);
        let system = match probe.system(&b.mask) {
            Ok(s) => s,
            Err(Error::IllConditioned { .. }) => {
                rejected += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let (_, _, coefficients) = probe.stages(&system, &b.samples, &b.mask);
        let first = probe.samples.expect("probe quantizes samples");
        let error: Vec<Complex64> = system
            .positions()
            .iter()
            .map(|&p| b.samples[p] - first.quantize(b.samples[p]))
            .collect();
        sum += coefficients.iter().map(|v| v.norm_sqr()).sum::<f64>();
        count += coefficients.len();
        samples.push(Sample {
            a: probe.dft.interpolation_matrix(system.positions()),
            error,
            coefficients,
        });
    }
    let rms = rms_per_dimension(sum, count);
    let used = samples.len();
    let shift_bits = r1 - r0;
    if shift_bits == 0 || used == 0 || k == 0 {
        return Ok(Calibration {
            sigma: [rms, rms],
            rms,
            used,
            rejected,
        });
    }
    let scale = |j: i32| rms * pow(2.0, -f64::from(j) / 2.0);
    let cost = |grid: [i32; 2]| -> f64 {
        let q = ComplexQuantizer::with_scales(shift_bits, [scale(grid[0]), scale(grid[1])]);
        let mut total = 0.0;
        for s in &samples {
            let shifted: Vec<Complex64> = s.coefficients.iter().map(|c| q.quantize(*c)).collect();
            for (r, e) in s.error.iter().enumerate() {
                let e_hat: Complex64 = s.a[r * k..(r + 1) * k]
                    .iter()
                    .zip(&shifted)
                    .map(|(a, c)| a * c)
                    .sum();
                total += (e - e_hat).norm_sqr();
            }
        }
        total
    };
    // one common scale first, then each part in turn with the other fixed
    let (mut grid, mut best) = (0..=SCALE_GRID)
        .map(|j| ([j, j], cost([j, j])))
        .fold(([0, 0], f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b });
    for _round in 0..2 {
        for axis in 0..2 {
            for j in 0..=SCALE_GRID {
                let mut trial = grid;
                trial[axis] = j;
                let c = cost(trial);
                if c < best {
                    (grid, best) = (trial, c);
                }
            }
        }
    }
    Ok(Calibration {
        sigma: [scale(grid[0]), scale(grid[1])],
        rms,
        used,
        rejected,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineTrial {
    pub important_distortion: f64,
    pub other_distortion: f64,
    pub bits: u64,
}

/// Labels known at both ends: rate `R1` on important samples and `R0` on
/// the rest, total `(n − k)·R0 + k·R1` bits.
pub fn informed_baseline(x: &[Complex64], labels: &[bool], r0: u32, r1: u32) -> Result<BaselineTrial> {
    if r1 < r0 {
        return Err(Error::RateOrder { r0, r1 });
    }
    if x.len() != labels.len() {
        return Err(Error::BlockShape(format!(
            "{} samples, {} labels",
            x.len(),
            labels.len()
        )));
    }
    let q0 = ComplexQuantizer::new(r0, SOURCE_SIGMA);
    let q1 = ComplexQuantizer::new(r1, SOURCE_SIGMA);
    let xh: Vec<Complex64> = x
        .iter()
        .zip(labels)
        .map(|(&v, &l)| if l { q1.quantize(v) } else { q0.quantize(v) })
        .collect();
    let (important, other) = split_errors(x, &xh, labels);
    let k = labels.iter().filter(|l| **l).count() as u64;
    Ok(BaselineTrial {
        important_distortion: important,
        other_distortion: other,
        bits: (x.len() as u64 - k) * u64::from(r0) + k * u64::from(r1),
    })
}
