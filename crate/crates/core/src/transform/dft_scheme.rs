//! Lossy coding of a complex block when only `k` of its `n` samples matter:
//! send quantized coefficients of the band-limited (first `k` frequencies)
//! sequence through the relevant samples. The decoder zero-pads and inverts
//! the DFT without knowing the mask.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::dft::Dft;
use super::gauss::{calibration_block, GaussianBlock};
use super::interp::{InterpolationSystem, CONDITION_BOUND};
use super::quant::ComplexQuantizer;
use crate::math::sqrt;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct DftScheme {
    dft: Dft,
    k: usize,
    quantizer: ComplexQuantizer,
    bound: f64,
}

/// Fixed-rate payload: one code of `bits` bits per coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DftPayload {
    pub codes: Vec<u32>,
    pub bits_per_code: u32,
}

impl DftPayload {
    pub fn bits(&self) -> u64 {
        self.codes.len() as u64 * u64::from(self.bits_per_code)
    }
}

/// Errors of one coded block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DftTrial {
    /// Mean `|X̃_c − X̂_c|²` over the `k` coefficients.
    pub coefficient_distortion: f64,
    /// Mean `|x_i − x̂_i|²` over the relevant positions.
    pub relevant_distortion: f64,
    /// Mean `|x_i − x̂_i|²` over the other positions (0 when `k = n`).
    pub other_distortion: f64,
    pub bits: u64,
    pub condition: f64,
}

impl DftScheme {
    /// `sigma` is the per-dimension scale of the coefficients, see
    /// [`calibrate_coefficient_sigma`].
    pub fn new(n: usize, k: usize, bits: u32, sigma: f64) -> Result<Self> {
        if n == 0 || k > n {
            return Err(Error::BlockShape(alloc::format!(
                "need 1 ≤ n and k ≤ n, got n = {n}, k = {k}"
            )));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "coefficient scale {sigma}"
            )));
        }
        if bits > 24 {
            return Err(Error::InvalidParameter(alloc::format!(
                "{bits} bits per coefficient"
            )));
        }
        Ok(Self {
            dft: Dft::new(n),
            k,
            quantizer: ComplexQuantizer::new(bits, sigma),
            bound: CONDITION_BOUND,
        })
    }

    pub fn n(&self) -> usize {
        self.dft.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn quantizer(&self) -> &ComplexQuantizer {
        &self.quantizer
    }

    pub fn system(&self, mask: &[bool]) -> Result<InterpolationSystem> {
        let weight = mask.iter().filter(|m| **m).count();
        if weight != self.k {
            return Err(Error::MaskWeight {
                expected: self.k,
                got: weight,
            });
        }
        InterpolationSystem::new(&self.dft, mask, self.bound)
    }

    /// Unquantized coefficients.
    pub fn interpolate(&self, samples: &[Complex64], mask: &[bool]) -> Result<Vec<Complex64>> {
        if samples.len() != self.n() {
            return Err(Error::BlockShape(alloc::format!(
                "{} samples for n = {}",
                samples.len(),
                self.n()
            )));
        }
        Ok(self.system(mask)?.solve(samples))
    }

    pub fn encode(&self, samples: &[Complex64], mask: &[bool]) -> Result<DftPayload> {
        let coefficients = self.interpolate(samples, mask)?;
        Ok(self.quantize(&coefficients))
    }

    fn quantize(&self, coefficients: &[Complex64]) -> DftPayload {
        DftPayload {
            codes: coefficients.iter().map(|c| self.quantizer.encode(*c)).collect(),
            bits_per_code: self.quantizer.bits(),
        }
    }

    /// Zero-padded inverse DFT of arbitrary coefficients.
    pub fn reconstruct(&self, coefficients: &[Complex64]) -> Result<Vec<Complex64>> {
        if coefficients.len() > self.n() {
            return Err(Error::BlockShape(alloc::format!(
                "{} coefficients for n = {}",
                coefficients.len(),
                self.n()
            )));
        }
        Ok(self.dft.inverse_padded(coefficients))
    }

    pub fn decode(&self, payload: &DftPayload) -> Result<Vec<Complex64>> {
        if payload.codes.len() != self.k || payload.bits_per_code != self.quantizer.bits() {
            return Err(Error::MalformedPayload(alloc::format!(
                "{} codes of {} bits, expected {} of {}",
                payload.codes.len(),
                payload.bits_per_code,
                self.k,
                self.quantizer.bits()
            )));
        }
        let coefficients: Vec<Complex64> = payload.codes.iter().map(|&c| self.quantizer.decode(c)).collect();
        self.reconstruct(&coefficients)
    }

    /// Codes `block` and measures its errors.
    pub fn trial(&self, block: &GaussianBlock) -> Result<DftTrial> {
        let system = self.system(&block.mask)?;
        let coefficients = system.solve(&block.samples);
        let payload = self.quantize(&coefficients);
        let decoded = self.decode(&payload)?;
        let k = self.k.max(1) as f64;
        let coefficient_distortion = coefficients
            .iter()
            .zip(&payload.codes)
            .map(|(c, &code)| (c - self.quantizer.decode(code)).norm_sqr())
            .sum::<f64>()
            / k;
        let (rel, other) = split_errors(&block.samples, &decoded, &block.mask);
        Ok(DftTrial {
            coefficient_distortion,
            relevant_distortion: rel,
            other_distortion: other,
            bits: payload.bits(),
            condition: system.condition(),
        })
    }
}

/// Mean squared error over the marked and unmarked positions.
pub(crate) fn split_errors(x: &[Complex64], xh: &[Complex64], mask: &[bool]) -> (f64, f64) {
    let (mut a, mut na, mut b, mut nb) = (0.0, 0usize, 0.0, 0usize);
    for ((u, v), &m) in x.iter().zip(xh).zip(mask) {
        let e = (u - v).norm_sqr();
        if m {
            a += e;
            na += 1;
        } else {
            b += e;
            nb += 1;
        }
    }
    let mean = |s: f64, c: usize| if c == 0 { 0.0 } else { s / c as f64 };
    (mean(a, na), mean(b, nb))
}

/// Calibration outcome: the chosen quantizer scales for the real and
/// imaginary parts, the per-dimension RMS they were derived from, and how
/// many calibration blocks contributed (ill-conditioned masks are skipped).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub sigma: [f64; 2],
    pub rms: f64,
    pub used: usize,
    pub rejected: usize,
}

pub(crate) fn rms_per_dimension(sum_sq: f64, count: usize) -> f64 {
    if count == 0 {
        1.0
    } else {
        sqrt(sum_sq / (2.0 * count as f64))
    }
}

/// Per-dimension RMS of the interpolated coefficients over `blocks`
/// calibration blocks.
pub fn calibrate_coefficient_sigma(n: usize, k: usize, seed: u64, blocks: u64) -> Result<Calibration> {
    // scale is irrelevant for interpolation
    let scheme = DftScheme::new(n, k, 0, 1.0)?;
    let (mut sum, mut count, mut used, mut rejected) = (0.0, 0usize, 0usize, 0usize);
    for t in 0..blocks {
        let b = calibration_block(seed, t, n, k);
        match scheme.interpolate(&b.samples, &b.mask) {
            Ok(c) => {
                sum += c.iter().map(|v| v.norm_sqr()).sum::<f64>();
                count += c.len();
                used += 1;
            }
            Err(Error::IllConditioned { .. }) => rejected += 1,
            Err(e) => return Err(e),
        }
    }
    let rms = rms_per_dimension(sum, count);
    Ok(Calibration {
        sigma: [rms, rms],
        rms,
        used,
        rejected,
    })
}
