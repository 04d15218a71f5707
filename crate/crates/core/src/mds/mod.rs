//! Lossless coding when only `k` of `n` samples matter and only the encoder
//! knows which: fit a polynomial of degree `< k` through the relevant
//! samples over `GF(2^m)` (Reed–Solomon erasure decoding) and send its `k`
//! coefficients.

mod codec;
mod gf;
mod pack;

pub use codec::{default_points, FieldPolynomial, MaskedBlock, MdsCoder};
pub use gf::Field;
pub use pack::{pack, unpack};

use crate::math::log2;
use crate::{Error, Result};

/// Bits per block for the three ways of handling the relevance mask.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateReport {
    pub n: usize,
    pub k: usize,
    pub m: u32,
    /// Send every symbol: `n·m`.
    pub ignore: f64,
    /// Send the mask then the relevant symbols: `n·H_b(k/n) + k·m`.
    pub tell_decoder: f64,
    /// Send the curve: `k·m`.
    pub scheme: f64,
}

impl RateReport {
    /// Labels ordered from cheapest to most expensive.
    pub fn ordering(&self) -> [&'static str; 3] {
        let mut rates = [
            ("scheme", self.scheme),
            ("ignore", self.ignore),
            ("tell-decoder", self.tell_decoder),
        ];
        rates.sort_by(|a, b| a.1.total_cmp(&b.1));
        rates.map(|r| r.0)
    }
}

/// Binary entropy in bits.
fn hb_bits(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * log2(p) - (1.0 - p) * log2(1.0 - p)
    }
}

pub fn rate_report(n: usize, k: usize, m: u32) -> Result<RateReport> {
    if n == 0 || k > n || m == 0 {
        return Err(Error::BlockShape(alloc::format!(
            "need 0 ≤ k ≤ n, n ≥ 1, m ≥ 1; got n = {n}, k = {k}, m = {m}"
        )));
    }
    let (nf, kf, mf) = (n as f64, k as f64, f64::from(m));
    Ok(RateReport {
        n,
        k,
        m,
        ignore: nf * mf,
        tell_decoder: nf * hb_bits(kf / nf) + kf * mf,
        scheme: kf * mf,
    })
}
