use alloc::format;
use alloc::vec::Vec;

use super::DistortionTensor;
use crate::{Error, Result};

/// Cayley table of a finite group, verified exhaustively at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    /// `table[a·order + b] = a ∘ b`.
    pub fn new(order: usize, table: Vec<usize>) -> Result<Self> {
        if order == 0 || table.len() != order * order {
            return Err(Error::NotAGroup(format!(
                "{} entries for a table of order {order}",
                table.len()
            )));
        }
        if let Some(i) = table.iter().position(|&v| v >= order) {
            return Err(Error::NotAGroup(format!("entry {i} is outside the set")));
        }
        let op = |a: usize, b: usize| table[a * order + b];
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if op(op(a, b), c) != op(a, op(b, c)) {
                        return Err(Error::NotAGroup(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| op(e, a) == a && op(a, e) == a))
            .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
        let inverse = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| op(a, b) == identity && op(b, a) == identity)
                    .ok_or_else(|| Error::NotAGroup(format!("element {a} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            order,
            table,
            identity,
            inverse,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `x ⊖ x̂ = x̂⁻¹ ∘ x`, invariant under `(x, x̂) ↦ (g∘x, g∘x̂)`.
    #[inline]
    pub fn difference(&self, x: usize, xh: usize) -> usize {
        self.op(self.inverse[xh], x)
    }
}

/// The cyclic group `Z_n` under addition mod `n`.
pub fn cyclic_group(order: usize) -> Result<GroupTable> {
    let table = (0..order * order)
        .map(|i| (i / order + i % order) % order)
        .collect();
    GroupTable::new(order, table)
}

/// `dist(x, x̂, q) = profile(x ⊖ x̂, q)` with `profile` row-major
/// `|G| × |Q|`.
pub fn make_group_difference_distortion(
    group: &GroupTable,
    profile: &[f64],
    side: usize,
) -> Result<DistortionTensor> {
    let n = group.order();
    if side == 0 || profile.len() != n * side {
        return Err(Error::DimensionMismatch(format!(
            "profile has {} entries, expected {n}×{side}",
            profile.len()
        )));
    }
    DistortionTensor::from_fn(n, n, side, |x, xh, q| profile[group.difference(x, xh) * side + q])
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn z2_scaled_hamming() {
        let g = cyclic_group(2).unwrap();
        // profile(z, q) = q·z with side values {1, 2}
        let profile = [0.0, 0.0, 1.0, 2.0];
        let t = make_group_difference_distortion(&g, &profile, 2).unwrap();
        for x in 0..2 {
            for xh in 0..2 {
                let ham = if x == xh { 0.0 } else { 1.0 };
                assert_eq!(t.get(x, xh, 0), ham);
                assert_eq!(t.get(x, xh, 1), 2.0 * ham);
            }
        }
    }

    #[test]
    fn z4_cyclic_squared_matches_direct_construction() {
        let g = cyclic_group(4).unwrap();
        let sides = [1.0, 2.0];
        let profile: Vec<f64> = (0..4)
            .flat_map(|z| {
                let m = core::cmp::min(z, 4 - z) as f64;
                sides.iter().map(move |q| q * m * m)
            })
            .collect();
        let t = make_group_difference_distortion(&g, &profile, 2).unwrap();
        for x in 0..4i32 {
            for xh in 0..4i32 {
                let z = (x - xh).rem_euclid(4);
                let m = core::cmp::min(z, 4 - z) as f64;
                for (q, s) in sides.iter().enumerate() {
                    assert_eq!(t.get(x as usize, xh as usize, q), s * m * m);
                }
            }
        }
    }

    #[test]
    fn zero_profile_gives_zero_tensor() {
        let g = cyclic_group(5).unwrap();
        let t = make_group_difference_distortion(&g, &[0.0; 10], 2).unwrap();
        assert!(t.to_nested().iter().flatten().flatten().all(|&d| d == 0.0));
    }

    #[test]
    fn non_groups_rejected() {
        // subtraction mod 3 is not associative
        let sub: Vec<usize> = (0..9).map(|i| (i / 3 + 3 - i % 3) % 3).collect();
        assert!(matches!(GroupTable::new(3, sub), Err(Error::NotAGroup(_))));
        // constant table has no identity
        assert!(GroupTable::new(2, vec![0, 0, 0, 0]).is_err());
        assert!(GroupTable::new(2, vec![0, 1, 1, 2]).is_err());
    }

    fn s3() -> GroupTable {
        // permutations of {0,1,2}, composed as (a∘b)(i) = a(b(i))
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let mut table = vec![0; 36];
        for a in 0..6 {
            for b in 0..6 {
                let c = [
                    perms[a][perms[b][0]],
                    perms[a][perms[b][1]],
                    perms[a][perms[b][2]],
                ];
                table[a * 6 + b] = idx(c);
            }
        }
        GroupTable::new(6, table).unwrap()
    }

    #[test]
    fn translation_invariance_exhaustive() {
        let groups = [
            cyclic_group(2).unwrap(),
            cyclic_group(4).unwrap(),
            cyclic_group(8).unwrap(),
            s3(),
        ];
        for g in &groups {
            let n = g.order();
            let profile: Vec<f64> = (0..n * 2).map(|i| ((i * 7919) % 13) as f64 * 0.5).collect();
            let t = make_group_difference_distortion(g, &profile, 2).unwrap();
            for h in 0..n {
                for x in 0..n {
                    for xh in 0..n {
                        for q in 0..2 {
                            assert_eq!(t.get(g.op(h, x), g.op(h, xh), q), t.get(x, xh, q));
                        }
                    }
                }
            }
        }
    }
}
