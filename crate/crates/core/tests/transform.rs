use proptest::prelude::*;
use sideinfo_core::transform::gauss::{block, SOURCE_SIGMA};
use sideinfo_core::transform::{
    calibrate_shift_sigma, informed_baseline, ComplexQuantizer, DftScheme, TwoStage,
};
use sideinfo_core::Error;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relevant_error_never_exceeds_coefficient_error(
        n in 2usize..40, frac in 0.05f64..1.0, bits in 0u32..12, sigma in 0.05f64..20.0, seed in any::<u64>()
    ) {
        let k = ((n as f64 * frac).ceil() as usize).clamp(1, n);
        let s = DftScheme::new(n, k, bits, sigma).unwrap();
        match s.trial(&block(seed, 0, n, k)) {
            Ok(t) => {
                prop_assert!(t.relevant_distortion <= t.coefficient_distortion * (1.0 + 1e-9) + 1e-300);
                prop_assert_eq!(t.bits, k as u64 * u64::from(bits));
            }
            Err(Error::IllConditioned { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
        }
    }

    #[test]
    fn full_mask_conserves_error_energy(n in 1usize..48, bits in 0u32..12, seed in any::<u64>()) {
        let s = DftScheme::new(n, n, bits, 0.7).unwrap();
        let t = s.trial(&block(seed, 1, n, n)).unwrap();
        prop_assert!((t.relevant_distortion - t.coefficient_distortion).abs() <= 1e-12 * t.coefficient_distortion.max(1e-300));
    }

    #[test]
    fn exact_stages_reproduce_important_samples(n in 2usize..40, frac in 0.05f64..1.0, r0 in 0u32..8, extra in 0u32..6, seed in any::<u64>()) {
        let k = ((n as f64 * frac).ceil() as usize).clamp(1, n);
        let s = TwoStage::new(n, k, r0, r0 + extra, [1.0; 2]).unwrap().bypass_shift();
        match s.trial(&block(seed, 2, n, k)) {
            Ok(t) => prop_assert!(t.important_distortion <= 1e-20),
            Err(Error::IllConditioned { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
        }
    }
}

/// Paired over the same blocks: the mean change in important-position
/// distortion from one more refinement bit must not be significantly
/// positive (3 standard errors).
#[test]
fn more_refinement_bits_never_hurt_on_average() {
    let (n, k, r0, blocks) = (32, 12, 3, 2000u64);
    let run = |r1: u32| -> Vec<Option<f64>> {
        let cal = calibrate_shift_sigma(n, k, r0, r1, 0, 500).unwrap();
        let s = TwoStage::new(n, k, r0, r1, cal.sigma).unwrap();
        (0..blocks)
            .map(|t| s.trial(&block(1, t, n, k)).ok().map(|tr| tr.important_distortion))
            .collect()
    };
    let mut previous = run(r0);
    for r1 in r0 + 1..r0 + 7 {
        let current = run(r1);
        let diffs: Vec<f64> = previous
            .iter()
            .zip(&current)
            .filter_map(|(a, b)| Some(b.as_ref()? - a.as_ref()?))
            .collect();
        let m = diffs.len() as f64;
        let mean = diffs.iter().sum::<f64>() / m;
        let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (m - 1.0);
        let se = (var / m).sqrt();
        assert!(mean <= 3.0 * se, "R1 = {r1}: mean change {mean:.3e}, se {se:.3e}");
        previous = current;
    }
}

#[test]
fn baseline_follows_high_resolution_scaling() {
    // D ≈ c·2^{−R} per complex sample (R/2 bits per real dimension)
    let n = 32;
    let cs: Vec<f64> = [6u32, 8, 10]
        .iter()
        .map(|&r| {
            let mut sum = 0.0;
            let blocks = 3000;
            for t in 0..blocks {
                let b = block(3, t, n, n);
                sum += informed_baseline(&b.samples, &b.mask, r, r)
                    .unwrap()
                    .important_distortion;
            }
            sum / blocks as f64 * 2f64.powi(r as i32)
        })
        .collect();
    let mean = cs.iter().sum::<f64>() / 3.0;
    for c in &cs {
        assert!((c / mean - 1.0).abs() < 0.2, "{cs:?}");
    }
    // granular-noise constant 2·(2·4σ)²/12 with σ² = ½
    let granular = 2.0 * (8.0 * SOURCE_SIGMA).powi(2) / 12.0;
    assert!((cs[2] / granular - 1.0).abs() < 0.05, "{cs:?}");
}

#[test]
fn baseline_equal_rates_treats_labels_alike() {
    let b = block(9, 0, 16, 5);
    let base = informed_baseline(&b.samples, &b.mask, 5, 5).unwrap();
    let q = ComplexQuantizer::new(5, SOURCE_SIGMA);
    let all: f64 = b
        .samples
        .iter()
        .map(|v| (v - q.quantize(*v)).norm_sqr())
        .sum::<f64>()
        / 16.0;
    let mixed = (base.important_distortion * 5.0 + base.other_distortion * 11.0) / 16.0;
    assert!((all - mixed).abs() < 1e-15);
    assert_eq!(base.bits, 80);
}
