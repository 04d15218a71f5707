//! Named instances used by the checks, the presets and the tests.

use alloc::vec::Vec;

use super::{
    cyclic_group, make_group_difference_distortion, make_scaled_distortion, DiscreteInstance,
    DistortionTensor, GroupTable,
};
use crate::math::ln;
use crate::rng::{namespace, open_unit, stream};
use crate::Result;

/// `[x ≠ x̂]` on `n` symbols, row-major.
pub fn hamming(n: usize) -> Vec<f64> {
    (0..n * n)
        .map(|i| if i / n == i % n { 0.0 } else { 1.0 })
        .collect()
}

/// Squared cyclic distance `min(|x − x̂|, n − |x − x̂|)²`, row-major.
pub fn squared_cyclic(n: usize) -> Vec<f64> {
    (0..n * n)
        .map(|i| {
            let z = (i / n + n - i % n) % n;
            let c = z.min(n - z) as f64;
            c * c
        })
        .collect()
}

/// Group instance with profile `profile(z, q) = levels[q]·base(z)` and
/// equiprobable side values.
pub fn group_scaled(group: &GroupTable, base: &[f64], levels: &[f64]) -> Result<DiscreteInstance> {
    let side = levels.len();
    let profile: Vec<f64> = base
        .iter()
        .flat_map(|b| levels.iter().map(move |l| l * b))
        .collect();
    let dist = make_group_difference_distortion(group, &profile, side)?;
    DiscreteInstance::uniform(dist)
}

/// `Z_2`, profile `q·z` for `q ∈ {1, 2}`.
pub fn z2_group() -> Result<(GroupTable, DiscreteInstance)> {
    let g = cyclic_group(2)?;
    let inst = group_scaled(&g, &[0.0, 1.0], &[1.0, 2.0])?;
    Ok((g, inst))
}

/// `Z_4`, profile `q·cyc(z)²` for `q ∈ {1, 2}`.
pub fn z4_group() -> Result<(GroupTable, DiscreteInstance)> {
    let g = cyclic_group(4)?;
    let base: Vec<f64> = squared_cyclic(4)[..4].to_vec();
    let inst = group_scaled(&g, &base, &[1.0, 2.0])?;
    Ok((g, inst))
}

/// Uniform binary source, `d0 = (1, 3)`, Hamming `d1`.
pub fn binary_scaled() -> Result<DiscreteInstance> {
    DiscreteInstance::uniform(make_scaled_distortion(&[1.0, 3.0], &hamming(2), 2)?)
}

/// Uniform 4-ary source, `d0 = (0.5, 2)`, squared cyclic `d1`.
pub fn quaternary_scaled() -> Result<DiscreteInstance> {
    DiscreteInstance::uniform(make_scaled_distortion(&[0.5, 2.0], &squared_cyclic(4), 4)?)
}

/// Uniform source on `alphabet` symbols where only a fraction `k/n` of
/// samples matter: `d0 = (0, 1)`, Hamming `d1`, `p(q = 1) = k/n`.
pub fn erasure(alphabet: usize, n: usize, k: usize) -> Result<DiscreteInstance> {
    let dist = make_scaled_distortion(&[0.0, 1.0], &hamming(alphabet), alphabet)?;
    let p1 = k as f64 / n as f64;
    DiscreteInstance::new(
        alloc::vec![1.0 / alphabet as f64; alphabet],
        alloc::vec![1.0 - p1, p1],
        dist,
    )
}

/// Binary source where the side value names the reconstruction that is
/// cheap: `d = [x ≠ x̂] + [x̂ ≠ q]`. Not separable.
pub fn safe_symbol_toy() -> Result<DiscreteInstance> {
    let dist = DistortionTensor::from_fn(2, 2, 2, |x, xh, q| {
        f64::from(u8::from(x != xh)) + f64::from(u8::from(xh != q))
    })?;
    DiscreteInstance::uniform(dist)
}

/// Random instance with `2..=3` symbols on every axis, Dirichlet(1)
/// marginals and distortions uniform on `[0, 1)`. `index` picks the stream.
pub fn random_small(seed: u64, index: u64) -> Result<DiscreteInstance> {
    let mut rng = stream(seed, namespace::INSTANCES | index);
    let mut size = || 2 + (rand::RngCore::next_u32(&mut rng) % 2) as usize;
    let (nx, nxh, nq) = (size(), size(), size());
    let mut dirichlet = |n: usize| {
        let mut p: Vec<f64> = (0..n).map(|_| -ln(open_unit(&mut rng))).collect();
        let s: f64 = p.iter().sum();
        p.iter_mut().for_each(|v| *v /= s);
        p
    };
    let p_x = dirichlet(nx);
    let p_q = dirichlet(nq);
    let mut rng = stream(seed, namespace::INSTANCES | index | 1 << 32);
    let dist = DistortionTensor::from_fn(nx, nxh, nq, |_, _, _| 1.0 - open_unit(&mut rng))?;
    DiscreteInstance::new(p_x, p_q, dist)
}
