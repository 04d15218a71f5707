//! Fixed-rate uniform mid-rise scalar quantizers.

use num_complex::Complex64;

use crate::math::floor;

/// Overload point in multiples of the input standard deviation.
pub const LOADING: f64 = 4.0;

/// `2^bits` cells of width `2·LOADING·σ/2^bits` centred on zero. Zero bits
/// always reproduce `0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformQuantizer {
    bits: u32,
    step: f64,
}

impl UniformQuantizer {
    pub fn new(bits: u32, sigma: f64) -> Self {
        assert!(bits <= 31, "at most 31 bits per real dimension");
        let levels = f64::from(1u32 << bits);
        Self {
            bits,
            step: 2.0 * LOADING * sigma / levels,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    fn levels(&self) -> i64 {
        1i64 << self.bits
    }

    /// Cell index in `0..2^bits`; inputs beyond the overload point clamp to
    /// the outer cells.
    pub fn index(&self, v: f64) -> u32 {
        if self.bits == 0 {
            return 0;
        }
        let half = self.levels() / 2;
        let i = (floor(v / self.step) as i64).saturating_add(half);
        i.clamp(0, self.levels() - 1) as u32
    }

    pub fn value(&self, index: u32) -> f64 {
        if self.bits == 0 {
            return 0.0;
        }
        let half = (self.levels() / 2) as f64;
        (f64::from(index) - half + 0.5) * self.step
    }

    pub fn quantize(&self, v: f64) -> f64 {
        self.value(self.index(v))
    }
}

/// `bits` per complex sample, `⌈bits/2⌉` to the real part and `⌊bits/2⌋` to
/// the imaginary part, each scaled by the per-dimension deviation `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexQuantizer {
    re: UniformQuantizer,
    im: UniformQuantizer,
}

impl ComplexQuantizer {
    pub fn new(bits: u32, sigma: f64) -> Self {
        Self::with_scales(bits, [sigma, sigma])
    }

    /// Separate deviations for the real and imaginary parts.
    pub fn with_scales(bits: u32, sigma: [f64; 2]) -> Self {
        Self {
            re: UniformQuantizer::new(bits.div_ceil(2), sigma[0]),
            im: UniformQuantizer::new(bits / 2, sigma[1]),
        }
    }

    pub fn bits(&self) -> u32 {
        self.re.bits + self.im.bits
    }

    /// Code with the real index in the high bits.
    pub fn encode(&self, v: Complex64) -> u32 {
        self.re.index(v.re) << self.im.bits | self.im.index(v.im)
    }

    pub fn decode(&self, code: u32) -> Complex64 {
        let mask = (1u32 << self.im.bits) - 1;
        Complex64::new(self.re.value(code >> self.im.bits), self.im.value(code & mask))
    }

    pub fn quantize(&self, v: Complex64) -> Complex64 {
        self.decode(self.encode(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_bit_cells() {
        let q = UniformQuantizer::new(1, 1.0);
        assert_eq!(q.step(), 4.0);
        assert_eq!(q.quantize(0.3), 2.0);
        assert_eq!(q.quantize(-0.3), -2.0);
        assert_eq!(q.quantize(100.0), 2.0);
    }

    #[test]
    fn zero_bits_is_zero() {
        let q = ComplexQuantizer::new(0, 3.0);
        assert_eq!(q.quantize(Complex64::new(5.0, -2.0)), Complex64::new(0.0, 0.0));
        assert_eq!(q.bits(), 0);
    }

    #[test]
    fn granular_error_is_within_half_a_step() {
        let q = UniformQuantizer::new(6, 1.0);
        for i in -399..400 {
            let v = i as f64 * 0.01;
            assert!((q.quantize(v) - v).abs() <= q.step() / 2.0 + 1e-15);
        }
    }

    #[test]
    fn odd_rates_split_toward_the_real_part() {
        let q = ComplexQuantizer::new(5, 1.0);
        assert_eq!(q.bits(), 5);
        let v = Complex64::new(0.7, -1.1);
        assert_eq!(q.decode(q.encode(v)), q.quantize(v));
        assert!(q.encode(v) < 32);
    }
}
