use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Largest alphabet accepted on any axis of a [`DiscreteInstance`].
pub const MAX_ALPHABET: usize = 256;

/// Allowed deviation of a probability vector's mass from one.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

/// Distortion `d(x, x̂, q)` over `X × X̂ × Q`.
///
/// Stored side-value major (`[q][x][x̂]`) so each per-`q` slice is a
/// contiguous `|X| × |X̂|` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionTensor {
    source: usize,
    recon: usize,
    side: usize,
    data: Vec<f64>,
}

impl DistortionTensor {
    /// Builds a tensor from `f(x, x̂, q)`.
    pub fn from_fn(
        source: usize,
        recon: usize,
        side: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        if source == 0 || recon == 0 || side == 0 {
            return Err(Error::DimensionMismatch(format!(
                "empty alphabet in {source}×{recon}×{side} distortion tensor"
            )));
        }
        let mut data = vec![0.0; source * recon * side];
        for q in 0..side {
            for x in 0..source {
                for xh in 0..recon {
                    data[(q * source + x) * recon + xh] = f(x, xh, q);
                }
            }
        }
        let tensor = Self {
            source,
            recon,
            side,
            data,
        };
        tensor.validate()?;
        Ok(tensor)
    }

    /// Builds a tensor from nested arrays indexed `[x][x̂][q]`.
    pub fn from_nested(nested: &[Vec<Vec<f64>>]) -> Result<Self> {
        let source = nested.len();
        let recon = nested.first().map_or(0, Vec::len);
        let side = nested.first().and_then(|row| row.first()).map_or(0, Vec::len);
        for (x, row) in nested.iter().enumerate() {
            if row.len() != recon || row.iter().any(|cell| cell.len() != side) {
                return Err(Error::DimensionMismatch(format!(
                    "ragged distortion array at source symbol {x}"
                )));
            }
        }
        Self::from_fn(source, recon, side, |x, xh, q| nested[x][xh][q])
    }

    fn validate(&self) -> Result<()> {
        for q in 0..self.side {
            for x in 0..self.source {
                for xh in 0..self.recon {
                    let d = self.get(x, xh, q);
                    if !d.is_finite() || d < 0.0 {
                        return Err(Error::InvalidDistortion(format!(
                            "d({x}, {xh}, {q}) = {d} is not a finite nonnegative number"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn get(&self, x: usize, xh: usize, q: usize) -> f64 {
        self.data[(q * self.source + x) * self.recon + xh]
    }

    /// Row-major `|X| × |X̂|` slice for one side value.
    #[inline]
    pub fn slice(&self, q: usize) -> &[f64] {
        let len = self.source * self.recon;
        &self.data[q * len..(q + 1) * len]
    }

    pub fn source_size(&self) -> usize {
        self.source
    }

    pub fn recon_size(&self) -> usize {
        self.recon
    }

    pub fn side_size(&self) -> usize {
        self.side
    }

    /// Nested `[x][x̂][q]` view, the layout used by instance documents.
    pub fn to_nested(&self) -> Vec<Vec<Vec<f64>>> {
        (0..self.source)
            .map(|x| {
                (0..self.recon)
                    .map(|xh| (0..self.side).map(|q| self.get(x, xh, q)).collect())
                    .collect()
            })
            .collect()
    }

    /// Element-wise `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if (self.source, self.recon, self.side) != (other.source, other.recon, other.side) {
            return Err(Error::DimensionMismatch(
                "distortion tensors differ in shape".into(),
            ));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(u, v)| a * u + b * v)
            .collect();
        let out = Self { data, ..*self };
        out.validate()?;
        Ok(out)
    }
}

/// `dist(x, x̂, q) = d0(q)·d1(x, x̂)`.
///
/// `d1` is row-major `|X| × |X̂|` with `recon` columns.
pub fn make_scaled_distortion(d0: &[f64], d1: &[f64], recon: usize) -> Result<DistortionTensor> {
    if d0.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::InvalidDistortion(
            "scale profile d0 must be finite and nonnegative".into(),
        ));
    }
    if d1.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::InvalidDistortion(
            "base distortion d1 must be finite and nonnegative".into(),
        ));
    }
    if recon == 0 || !d1.len().is_multiple_of(recon) {
        return Err(Error::DimensionMismatch(format!(
            "d1 has {} entries, not a multiple of {recon} columns",
            d1.len()
        )));
    }
    let source = d1.len() / recon;
    DistortionTensor::from_fn(source, recon, d0.len(), |x, xh, q| d0[q] * d1[x * recon + xh])
}

/// Validates a probability vector: nonnegative, mass one within
/// [`PROBABILITY_TOLERANCE`].
pub fn check_probability_vector(what: &'static str, p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidProbability {
            what,
            reason: "empty".into(),
        });
    }
    if let Some(i) = p.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::InvalidProbability {
            what,
            reason: format!("entry {i} = {} is negative or not finite", p[i]),
        });
    }
    let mass: f64 = p.iter().sum();
    if (mass - 1.0).abs() > PROBABILITY_TOLERANCE {
        return Err(Error::InvalidProbability {
            what,
            reason: format!("mass {mass} deviates from 1"),
        });
    }
    Ok(())
}

/// A finite source coding problem with distortion side information.
///
/// Source and side information are independent: the joint law is always
/// `p_x ⊗ p_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteInstance {
    p_x: Vec<f64>,
    p_q: Vec<f64>,
    dist: DistortionTensor,
}

impl DiscreteInstance {
    pub fn new(p_x: Vec<f64>, p_q: Vec<f64>, dist: DistortionTensor) -> Result<Self> {
        check_probability_vector("p_x", &p_x)?;
        check_probability_vector("p_q", &p_q)?;
        if p_x.len() != dist.source_size() || p_q.len() != dist.side_size() {
            return Err(Error::DimensionMismatch(format!(
                "p_x has {} and p_q has {} entries but the distortion tensor is {}×{}×{}",
                p_x.len(),
                p_q.len(),
                dist.source_size(),
                dist.recon_size(),
                dist.side_size()
            )));
        }
        for (axis, size) in [
            ("source", dist.source_size()),
            ("reconstruction", dist.recon_size()),
            ("side", dist.side_size()),
        ] {
            if size > MAX_ALPHABET {
                return Err(Error::AlphabetTooLarge {
                    axis,
                    size,
                    max: MAX_ALPHABET,
                });
            }
        }
        Ok(Self { p_x, p_q, dist })
    }

    /// Uniform source and side laws.
    pub fn uniform(dist: DistortionTensor) -> Result<Self> {
        let nx = dist.source_size();
        let nq = dist.side_size();
        Self::new(vec![1.0 / nx as f64; nx], vec![1.0 / nq as f64; nq], dist)
    }

    pub fn p_x(&self) -> &[f64] {
        &self.p_x
    }

    pub fn p_q(&self) -> &[f64] {
        &self.p_q
    }

    pub fn dist(&self) -> &DistortionTensor {
        &self.dist
    }

    pub fn source_size(&self) -> usize {
        self.p_x.len()
    }

    pub fn recon_size(&self) -> usize {
        self.dist.recon_size()
    }

    pub fn side_size(&self) -> usize {
        self.p_q.len()
    }

    /// `d̄(x, x̂) = Σ_q p(q)·d(x, x̂, q)`, row-major `|X| × |X̂|`.
    pub fn averaged_distortion(&self) -> Vec<f64> {
        let (nx, nxh) = (self.source_size(), self.recon_size());
        let mut avg = vec![0.0; nx * nxh];
        for (q, &pq) in self.p_q.iter().enumerate() {
            if pq == 0.0 {
                continue;
            }
            for (a, d) in avg.iter_mut().zip(self.dist.slice(q)) {
                *a += pq * d;
            }
        }
        avg
    }

    /// Distortion of the super source `(x, q)`, rows ordered `x·|Q| + q`.
    pub fn super_source_distortion(&self) -> (Vec<f64>, Vec<f64>) {
        let (nx, nxh, nq) = (self.source_size(), self.recon_size(), self.side_size());
        let mut weights = Vec::with_capacity(nx * nq);
        let mut dist = Vec::with_capacity(nx * nq * nxh);
        for x in 0..nx {
            for q in 0..nq {
                weights.push(self.p_x[x] * self.p_q[q]);
                dist.extend((0..nxh).map(|xh| self.dist.get(x, xh, q)));
            }
        }
        (weights, dist)
    }

    /// Same alphabets and distortion with a degenerate (single-valued) side
    /// law: the side information is collapsed to its average distortion.
    pub fn without_side_information(&self) -> Result<Self> {
        let nxh = self.recon_size();
        let avg = self.averaged_distortion();
        let dist = DistortionTensor::from_fn(self.source_size(), nxh, 1, |x, xh, _| avg[x * nxh + xh])?;
        Self::new(self.p_x.clone(), vec![1.0], dist)
    }
}
