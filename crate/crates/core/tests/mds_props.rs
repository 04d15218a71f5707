use proptest::prelude::*;
use sideinfo_core::mds::{pack, unpack, Field, FieldPolynomial, MdsCoder};

fn params() -> impl Strategy<Value = (u32, usize, usize)> {
    prop_oneof![Just(3u32), Just(4u32), Just(8u32)]
        .prop_flat_map(|m| (1usize..=(1usize << m).min(40)).prop_flat_map(move |n| (Just(m), Just(n), 0..=n)))
}

proptest! {
    #[test]
    fn relevant_symbols_survive((m, n, k) in params(), seed in any::<u64>(), trial in any::<u32>()) {
        let c = MdsCoder::new(Field::new(m).unwrap(), n, k).unwrap();
        let b = c.random_block(seed, u64::from(trial));
        let poly = c.encode(&b).unwrap();
        let xh = c.reconstruct(&poly).unwrap();
        for ((&keep, &got), &want) in b.mask.iter().zip(&xh).zip(&b.symbols) {
            if keep {
                prop_assert_eq!(got, want);
            }
        }
        // re-encoding the reconstruction under the same mask is a fixed point
        let again = c.encode(&c.block(xh, b.mask.clone()).unwrap()).unwrap();
        prop_assert_eq!(&again, &poly);
        let bytes = pack(&poly.coefficients, m);
        prop_assert_eq!(bytes.len(), (k * m as usize).div_ceil(8));
        prop_assert_eq!(unpack(&bytes, k, m).unwrap(), poly.coefficients);
    }

    #[test]
    fn encoding_is_linear((m, n, k) in params(), seed in any::<u64>(), a in any::<u8>()) {
        let f = Field::new(m).unwrap();
        let a = (u32::from(a) % f.size() as u32) as u8;
        let c = MdsCoder::new(f.clone(), n, k).unwrap();
        let b1 = c.random_block(seed, 0);
        let mut b2 = c.random_block(seed, 1);
        b2.mask = b1.mask.clone();
        let combo: Vec<u8> = b1.symbols.iter().zip(&b2.symbols).map(|(&x, &y)| f.add(f.mul(a, x), y)).collect();
        let lhs = c.encode(&c.block(combo, b1.mask.clone()).unwrap()).unwrap();
        let p1 = c.encode(&b1).unwrap();
        let p2 = c.encode(&b2).unwrap();
        let rhs: Vec<u8> = p1.coefficients.iter().zip(&p2.coefficients).map(|(&x, &y)| f.add(f.mul(a, x), y)).collect();
        prop_assert_eq!(lhs.coefficients, rhs);
    }

    #[test]
    fn any_k_points_determine_a_low_degree_block((m, n, k) in params(), seed in any::<u64>()) {
        let f = Field::new(m).unwrap();
        let c = MdsCoder::new(f.clone(), n, k).unwrap();
        // a block on a degree < k curve
        let mut coeffs = c.random_block(seed, 0).symbols;
        coeffs.truncate(k);
        let poly = FieldPolynomial { coefficients: coeffs };
        let on_curve = c.reconstruct(&poly).unwrap();
        for t in 1..4 {
            let mask = c.random_block(seed, t).mask;
            let b = c.block(on_curve.clone(), mask).unwrap();
            prop_assert_eq!(&c.encode(&b).unwrap(), &poly);
        }
    }
}
