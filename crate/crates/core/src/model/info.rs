use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{ConditionalChannel, Conditioning, DiscreteInstance};
use crate::math::{ln, xlnx};
use crate::{Error, Result};

/// Entries below this are treated as exact zeros before taking logs.
const CLAMP: f64 = 1e-15;
const JOINT_TOLERANCE: f64 = 1e-9;

/// Row-major joint probability matrix `p(a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl JointMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols || rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}×{cols} joint",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidProbability {
                what: "joint",
                reason: format!("entry {i} = {} is negative or not finite", data[i]),
            });
        }
        let mass: f64 = data.iter().sum();
        if (mass - 1.0).abs() > JOINT_TOLERANCE {
            return Err(Error::InvalidProbability {
                what: "joint",
                reason: format!("mass {mass} deviates from 1"),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// `p(a)·p(b)`.
    pub fn product(pa: &[f64], pb: &[f64]) -> Result<Self> {
        let data = pa.iter().flat_map(|a| pb.iter().map(move |b| a * b)).collect();
        Self::new(pa.len(), pb.len(), data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn row_marginal(&self) -> Vec<f64> {
        self.data.chunks(self.cols).map(|r| r.iter().sum()).collect()
    }

    pub fn col_marginal(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.cols];
        for row in self.data.chunks(self.cols) {
            for (acc, p) in m.iter_mut().zip(row) {
                *acc += p;
            }
        }
        m
    }
}

#[inline]
fn clamp(p: f64) -> f64 {
    if p < CLAMP {
        0.0
    } else {
        p
    }
}

/// `I(a; b) = Σ p(a,b) ln[p(a,b) / (p(a)p(b))]` in nats.
pub fn mutual_information(joint: &JointMatrix) -> f64 {
    let pa = joint.row_marginal();
    let pb = joint.col_marginal();
    let mut total = 0.0;
    for r in 0..joint.rows {
        let a = clamp(pa[r]);
        if a == 0.0 {
            continue;
        }
        for c in 0..joint.cols {
            let p = clamp(joint.get(r, c));
            let b = clamp(pb[c]);
            if p > 0.0 && b > 0.0 {
                total += p * ln(p / (a * b));
            }
        }
    }
    total.max(0.0)
}

/// Shannon entropy in nats.
pub fn entropy(p: &[f64]) -> f64 {
    -p.iter().map(|&v| xlnx(clamp(v))).sum::<f64>()
}

/// `E[d(x, x̂, q)]` under `p_x ⊗ p_q` and the given channel.
pub fn expected_distortion(
    instance: &DiscreteInstance,
    channel: &ConditionalChannel,
    conditioning: Conditioning,
) -> Result<f64> {
    let (nx, nxh, nq) = (
        instance.source_size(),
        instance.recon_size(),
        instance.side_size(),
    );
    let expected_rows = match conditioning {
        Conditioning::SourceOnly => nx,
        Conditioning::SourceAndSide => nx * nq,
    };
    if channel.rows() != expected_rows || channel.cols() != nxh {
        return Err(Error::DimensionMismatch(format!(
            "channel is {}×{}, instance needs {expected_rows}×{nxh}",
            channel.rows(),
            channel.cols()
        )));
    }
    let dist = instance.dist();
    let mut total = 0.0;
    for (x, &px) in instance.p_x().iter().enumerate() {
        for (q, &pq) in instance.p_q().iter().enumerate() {
            let row = match conditioning {
                Conditioning::SourceOnly => x,
                Conditioning::SourceAndSide => x * nq + q,
            };
            let w = px * pq;
            for xh in 0..nxh {
                total += w * channel.get(row, xh) * dist.get(x, xh, q);
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_scaled_distortion, DistortionTensor};

    #[test]
    fn independent_joint_has_zero_information() {
        let j = JointMatrix::product(&[0.3, 0.7], &[0.2, 0.5, 0.3]).unwrap();
        assert!(mutual_information(&j) < 1e-15);
    }

    #[test]
    fn perfectly_correlated_bit() {
        let j = JointMatrix::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((mutual_information(&j) - core::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn symmetric_binary_joint_matches_high_precision_sum() {
        // 0.8·ln 1.6 + 0.2·ln 0.4, summed at 40 digits with mpmath.
        let exact = 0.192_744_757_021_757_4_f64;
        let j = JointMatrix::new(2, 2, vec![0.4, 0.1, 0.1, 0.4]).unwrap();
        assert!((mutual_information(&j) - exact).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_joints() {
        assert!(JointMatrix::new(1, 2, vec![1.1, -0.1]).is_err());
        assert!(JointMatrix::new(1, 2, vec![0.5, 0.4]).is_err());
        assert!(JointMatrix::new(1, 2, vec![0.5]).is_err());
    }

    #[test]
    fn identity_channel_has_zero_distortion() {
        let hamming: Vec<f64> = (0..9).map(|i| if i / 3 == i % 3 { 0.0 } else { 1.0 }).collect();
        let dist = make_scaled_distortion(&[1.0, 2.0], &hamming, 3).unwrap();
        let inst = DiscreteInstance::uniform(dist).unwrap();
        let ch = ConditionalChannel::deterministic(&[0, 1, 2], 3).unwrap();
        assert_eq!(
            expected_distortion(&inst, &ch, Conditioning::SourceOnly).unwrap(),
            0.0
        );
        let ch = ConditionalChannel::deterministic(&[0, 0, 1, 1, 2, 2], 3).unwrap();
        assert_eq!(
            expected_distortion(&inst, &ch, Conditioning::SourceAndSide).unwrap(),
            0.0
        );
    }

    #[test]
    fn constant_channel_on_a_fair_bit() {
        let dist = make_scaled_distortion(&[1.0], &[0.0, 1.0, 1.0, 0.0], 2).unwrap();
        let inst = DiscreteInstance::uniform(dist).unwrap();
        let ch = ConditionalChannel::deterministic(&[0, 0], 2).unwrap();
        let d = expected_distortion(&inst, &ch, Conditioning::SourceOnly).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_reported() {
        let dist = DistortionTensor::from_fn(2, 2, 2, |_, _, _| 1.0).unwrap();
        let inst = DiscreteInstance::uniform(dist).unwrap();
        let ch = ConditionalChannel::deterministic(&[0, 0], 2).unwrap();
        assert!(expected_distortion(&inst, &ch, Conditioning::SourceAndSide).is_err());
    }
}
