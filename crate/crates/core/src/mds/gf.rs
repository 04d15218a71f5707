//! Arithmetic in `GF(2^m)` through log/antilog tables.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Reduction polynomials, bit `i` = coefficient of `x^i`.
const POLYNOMIALS: [(u32, u32); 3] = [(3, 0b1011), (4, 0b1_0011), (8, 0x11D)];

/// `GF(2^m)` for `m ∈ {3, 4, 8}`, elements stored as `u8` in polynomial
/// basis. `α = x` generates the multiplicative group for every supported
/// polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    m: u32,
    polynomial: u32,
    exp: Vec<u8>,
    log: Vec<u8>,
}

impl Field {
    pub fn new(m: u32) -> Result<Self> {
        let polynomial = POLYNOMIALS
            .iter()
            .find(|(mm, _)| *mm == m)
            .map(|(_, p)| *p)
            .ok_or(Error::UnsupportedField(m))?;
        let size = 1usize << m;
        let order = size - 1;
        // doubled so products of logs index without a reduction
        let mut exp = vec![0u8; 2 * order];
        let mut log = vec![0u8; size];
        let mut v: u32 = 1;
        for i in 0..order {
            exp[i] = v as u8;
            log[v as usize] = i as u8;
            v <<= 1;
            if v & (1 << m) != 0 {
                v ^= polynomial;
            }
        }
        debug_assert_eq!(v, 1, "x is not primitive");
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Self {
            m,
            polynomial,
            exp,
            log,
        })
    }

    /// Bits per symbol.
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn polynomial(&self) -> u32 {
        self.polynomial
    }

    /// Number of elements, `2^m`.
    pub fn size(&self) -> usize {
        1 << self.m
    }

    pub fn check(&self, value: u32) -> Result<u8> {
        if (value as usize) < self.size() {
            Ok(value as u8)
        } else {
            Err(Error::SymbolOutOfRange { value, m: self.m })
        }
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u8) -> Option<u8> {
        if a == 0 {
            return None;
        }
        let order = self.size() - 1;
        Some(self.exp[(order - self.log[a as usize] as usize) % order])
    }

    /// `α^i`.
    #[inline]
    pub fn alpha_pow(&self, i: usize) -> u8 {
        self.exp[i % (self.size() - 1)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Carry-less multiply then reduce, independent of the tables.
    fn slow_mul(a: u8, b: u8, m: u32, poly: u32) -> u8 {
        let mut acc: u32 = 0;
        for i in 0..m {
            if b >> i & 1 == 1 {
                acc ^= (a as u32) << i;
            }
        }
        for bit in (m..2 * m).rev() {
            if acc >> bit & 1 == 1 {
                acc ^= poly << (bit - m);
            }
        }
        acc as u8
    }

    #[test]
    fn tables_match_schoolbook_multiplication() {
        for m in [3, 4, 8] {
            let f = Field::new(m).unwrap();
            let n = f.size();
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(
                        f.mul(a as u8, b as u8),
                        slow_mul(a as u8, b as u8, m, f.polynomial())
                    );
                }
            }
        }
    }

    #[test]
    fn field_axioms_small_fields() {
        for m in [3, 4] {
            let f = Field::new(m).unwrap();
            let n = f.size() as u8;
            for a in 0..n {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, a), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..n {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..n {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn generator_powers_are_distinct() {
        for m in [3, 4, 8] {
            let f = Field::new(m).unwrap();
            let mut seen = vec![false; f.size()];
            for i in 0..f.size() - 1 {
                let v = f.alpha_pow(i) as usize;
                assert!(!seen[v] && v != 0);
                seen[v] = true;
            }
        }
    }

    #[test]
    fn unsupported_and_out_of_range() {
        assert_eq!(Field::new(5), Err(Error::UnsupportedField(5)));
        let f = Field::new(3).unwrap();
        assert!(f.check(7).is_ok());
        assert_eq!(f.check(8), Err(Error::SymbolOutOfRange { value: 8, m: 3 }));
    }
}
