use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index;
use rand::RngCore;

use super::gf::Field;
use crate::rng::{namespace, stream};
use crate::{Error, Result};

/// A block of `n` symbols and the positions that matter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskedBlock {
    pub symbols: Vec<u8>,
    pub mask: Vec<bool>,
}

impl MaskedBlock {
    pub fn weight(&self) -> usize {
        self.mask.iter().filter(|b| **b).count()
    }
}

/// Coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldPolynomial {
    pub coefficients: Vec<u8>,
}

impl FieldPolynomial {
    /// Horner evaluation.
    pub fn eval(&self, field: &Field, x: u8) -> u8 {
        self.coefficients
            .iter()
            .rev()
            .fold(0, |acc, &c| field.add(field.mul(acc, x), c))
    }
}

/// `α^0, …, α^{n−1}`, followed by `0` when `n = 2^m`.
pub fn default_points(field: &Field, n: usize) -> Result<Vec<u8>> {
    if n == 0 || n > field.size() {
        return Err(Error::BlockShape(format!(
            "n = {n} outside 1..={} for GF(2^{})",
            field.size(),
            field.m()
        )));
    }
    let nonzero = n.min(field.size() - 1);
    let mut points: Vec<u8> = (0..nonzero).map(|i| field.alpha_pow(i)).collect();
    if n == field.size() {
        points.push(0);
    }
    Ok(points)
}

/// Lossless coder for blocks of `n` symbols of which exactly `k` matter:
/// the `k` relevant symbols are interpolated by a polynomial of degree
/// `< k`, whose coefficients are the payload. The decoder evaluates the
/// polynomial at every point and never sees the mask.
#[derive(Debug, Clone)]
pub struct MdsCoder {
    field: Field,
    k: usize,
    points: Vec<u8>,
}

impl MdsCoder {
    pub fn new(field: Field, n: usize, k: usize) -> Result<Self> {
        let points = default_points(&field, n)?;
        Self::with_points(field, k, points)
    }

    pub fn with_points(field: Field, k: usize, points: Vec<u8>) -> Result<Self> {
        let n = points.len();
        if k > n || n > field.size() {
            return Err(Error::BlockShape(format!(
                "need k ≤ n ≤ 2^m, got k = {k}, n = {n}, m = {}",
                field.m()
            )));
        }
        for (i, &p) in points.iter().enumerate() {
            field.check(u32::from(p))?;
            if points[..i].contains(&p) {
                return Err(Error::RepeatedEvaluationPoint(i));
            }
        }
        Ok(Self { field, k, points })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[u8] {
        &self.points
    }

    /// Payload bits per block, `k·m`, whatever the mask.
    pub fn payload_bits(&self) -> usize {
        self.k * self.field.m() as usize
    }

    pub fn block(&self, symbols: Vec<u8>, mask: Vec<bool>) -> Result<MaskedBlock> {
        let block = MaskedBlock { symbols, mask };
        self.validate(&block)?;
        Ok(block)
    }

    fn validate(&self, block: &MaskedBlock) -> Result<()> {
        let n = self.n();
        if block.symbols.len() != n || block.mask.len() != n {
            return Err(Error::BlockShape(format!(
                "block has {} symbols and {} mask bits, expected {n}",
                block.symbols.len(),
                block.mask.len()
            )));
        }
        for &s in &block.symbols {
            self.field.check(u32::from(s))?;
        }
        let got = block.weight();
        if got != self.k {
            return Err(Error::MaskWeight {
                expected: self.k,
                got,
            });
        }
        Ok(())
    }

    /// Lagrange interpolation through the relevant positions, using the
    /// master polynomial `M(x) = Π (x − x_j)` so every basis polynomial is
    /// one synthetic division away.
    pub fn encode(&self, block: &MaskedBlock) -> Result<FieldPolynomial> {
        self.validate(block)?;
        let f = &self.field;
        let (xs, ys): (Vec<u8>, Vec<u8>) = block
            .mask
            .iter()
            .zip(self.points.iter().zip(&block.symbols))
            .filter(|(m, _)| **m)
            .map(|(_, (&x, &y))| (x, y))
            .unzip();
        let k = xs.len();
        let mut coefficients = vec![0u8; k];
        if k == 0 {
            return Ok(FieldPolynomial { coefficients });
        }
        // ascending coefficients of M, degree k
        let mut master = vec![0u8; k + 1];
        master[0] = 1;
        for (deg, &xj) in xs.iter().enumerate() {
            for i in (1..=deg + 1).rev() {
                master[i] = f.add(master[i - 1], f.mul(master[i], xj));
            }
            master[0] = f.mul(master[0], xj);
        }
        let mut quotient = vec![0u8; k];
        for (j, (&xj, &yj)) in xs.iter().zip(&ys).enumerate() {
            if yj == 0 {
                continue;
            }
            // M(x) / (x − x_j) by synthetic division from the top
            let mut carry = 0u8;
            for i in (0..k).rev() {
                carry = f.add(master[i + 1], f.mul(carry, xj));
                quotient[i] = carry;
            }
            let denom = xs
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != j)
                .fold(1u8, |acc, (_, &xi)| f.mul(acc, f.add(xj, xi)));
            let scale = f.mul(yj, f.inv(denom).expect("distinct points"));
            for (c, &qc) in coefficients.iter_mut().zip(&quotient) {
                *c = f.add(*c, f.mul(scale, qc));
            }
        }
        Ok(FieldPolynomial { coefficients })
    }

    /// Evaluates `poly` at every point.
    pub fn reconstruct(&self, poly: &FieldPolynomial) -> Result<Vec<u8>> {
        if poly.coefficients.len() != self.k {
            return Err(Error::MalformedPayload(format!(
                "{} coefficients for k = {}",
                poly.coefficients.len(),
                self.k
            )));
        }
        for &c in &poly.coefficients {
            self.field.check(u32::from(c))?;
        }
        Ok(self.points.iter().map(|&x| poly.eval(&self.field, x)).collect())
    }

    /// Uniform symbols and a uniformly chosen weight-`k` mask for trial
    /// `trial` of stream `seed`.
    pub fn random_block(&self, seed: u64, trial: u64) -> MaskedBlock {
        let mut rng = stream(seed, namespace::MDS_BLOCKS | trial);
        let n = self.n();
        let size = self.field.size() as u32;
        let symbols = (0..n).map(|_| (rng.next_u32() % size) as u8).collect();
        let mut mask = vec![false; n];
        for i in index::sample(&mut rng, n, self.k) {
            mask[i] = true;
        }
        MaskedBlock { symbols, mask }
    }
}
