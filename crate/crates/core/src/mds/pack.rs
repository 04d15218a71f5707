//! `m`-bit symbol packing, most significant bit first.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

pub fn pack(symbols: &[u8], m: u32) -> Vec<u8> {
    let bits = symbols.len() * m as usize;
    let mut out = vec![0u8; bits.div_ceil(8)];
    let mut pos = 0usize;
    for &s in symbols {
        for b in (0..m).rev() {
            if s >> b & 1 == 1 {
                out[pos / 8] |= 0x80 >> (pos % 8);
            }
            pos += 1;
        }
    }
    out
}

/// Inverse of [`pack`]; the padding bits must be zero.
pub fn unpack(bytes: &[u8], count: usize, m: u32) -> Result<Vec<u8>> {
    let bits = count * m as usize;
    if bytes.len() != bits.div_ceil(8) {
        return Err(Error::MalformedPayload(format!(
            "{} bytes for {count} symbols of {m} bits",
            bytes.len()
        )));
    }
    let bit = |pos: usize| bytes[pos / 8] >> (7 - pos % 8) & 1;
    if (bits..bytes.len() * 8).any(|p| bit(p) != 0) {
        return Err(Error::MalformedPayload("nonzero padding bits".into()));
    }
    Ok((0..count)
        .map(|i| (0..m as usize).fold(0u8, |acc, b| acc << 1 | bit(i * m as usize + b)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_bit_layout() {
        // 101 011 111 000 001 → 1010 1111 1000 0010
        assert_eq!(pack(&[5, 3, 7, 0, 1], 3), vec![0b1010_1111, 0b1000_0010]);
        assert_eq!(
            unpack(&[0b1010_1111, 0b1000_0010], 5, 3).unwrap(),
            vec![5, 3, 7, 0, 1]
        );
    }

    #[test]
    fn rejects_padding_and_length() {
        assert!(unpack(&[0b1010_1111, 0b1000_0011], 5, 3).is_err());
        assert!(unpack(&[0], 5, 3).is_err());
    }
}
