use proptest::prelude::*;
use sideinfo_core::gap::special::{digamma, ln_gamma};
use sideinfo_core::gap::*;

const EULER: f64 = 0.577_215_664_901_532_9;

/// Composite Simpson on `[lo, hi]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let mut s = f(lo) + f(hi);
    for i in 1..n {
        s += f(lo + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Mass of a density on `[start, ∞)` through `q = start + t/(1 − t)`,
/// stopping just short of `t = 1` (the Cauchy integrand tends to `2/π`
/// there, so the cut loses about 6e-8).
fn total_mass(d: &SideInfoDistribution, start: f64) -> f64 {
    simpson(
        |t| {
            let q = start + t / (1.0 - t);
            d.density(q).unwrap() / ((1.0 - t) * (1.0 - t))
        },
        0.0,
        1.0 - 1e-7,
        200_000,
    )
}

#[test]
fn densities_integrate_to_one() {
    let cases = [
        (SideInfoDistribution::Exponential { tau: 1.0 }, 0.0),
        (SideInfoDistribution::Exponential { tau: 3.5 }, 0.0),
        (SideInfoDistribution::Lognormal { m: 0.0, q2: 1.0 }, 0.0),
        (SideInfoDistribution::Lognormal { m: 0.7, q2: 0.3 }, 0.0),
        (SideInfoDistribution::Pareto { a: 3.0, b: 1.0 }, 1.0),
        (SideInfoDistribution::Pareto { a: 1.5, b: 0.4 }, 0.4),
        (SideInfoDistribution::Gamma { a: 4.0, b: 1.0 }, 0.0),
        (SideInfoDistribution::Gamma { a: 2.5, b: 6.0 }, 0.0),
        (SideInfoDistribution::PositiveCauchy, 0.0),
    ];
    for (d, start) in cases {
        let mass = total_mass(&d, start);
        assert!((mass - 1.0).abs() < 1e-6, "{d}: mass {mass}");
    }
    let uniform = simpson(
        |q| SideInfoDistribution::Uniform01.density(q).unwrap(),
        0.0,
        1.0,
        2,
    );
    assert!((uniform - 1.0).abs() < 1e-12);
}

#[test]
fn digamma_and_ln_gamma_against_series() {
    // ψ(x) = −γ + Σ_{n≥0} (1/(n+1) − 1/(n+x)), tail bounded by (x−1)/N
    for x in [0.3, 1.7, 4.0, 12.5] {
        let mut s = -EULER;
        let terms = 2_000_000u32;
        for n in 0..terms {
            let n = f64::from(n);
            s += 1.0 / (n + 1.0) - 1.0 / (n + x);
        }
        s += (x - 1.0) / f64::from(terms);
        assert!((digamma(x) - s).abs() < 1e-9, "ψ({x})");
    }
    // Gauss multiplication: ln Γ(x) + ln Γ(x + ½) = ln √π + (1 − 2x) ln 2 + ln Γ(2x)
    for x in [0.2, 1.3, 7.9, 30.0] {
        let lhs = ln_gamma(x) + ln_gamma(x + 0.5);
        let rhs = 0.5 * std::f64::consts::PI.ln() + (1.0 - 2.0 * x) * 2f64.ln() + ln_gamma(2.0 * x);
        assert!((lhs - rhs).abs() < 1e-12 * rhs.abs().max(1.0), "x = {x}");
    }
}

#[test]
fn table_rows_closed_forms() {
    let uniform = SideInfoDistribution::Uniform01.gap_closed_form();
    assert!((uniform - 0.1534).abs() < 5e-4);
    for q2 in [0.5, 1.0, 2.0] {
        let g = SideInfoDistribution::Lognormal { m: 0.4, q2 }.gap_closed_form();
        assert_eq!(g, q2 / 4.0);
    }
    let path = SideInfoDistribution::Pathological { eps: 0.01 }.gap_closed_form();
    let by_hand = 0.5 * 1.0099f64.ln() + 0.49 * 100f64.ln();
    assert!((path - by_hand).abs() < 1e-12);
    assert!((path - 2.2615).abs() < 1e-4);
    let pareto = SideInfoDistribution::Pareto { a: 3.0, b: 2.0 }.gap_closed_form();
    assert!((pareto - 0.5 * (1.5f64.ln() - 1.0 / 3.0)).abs() < 1e-15);
    let exp = SideInfoDistribution::Exponential { tau: 2.0 }.gap_closed_form();
    assert!((exp - EULER / 2.0).abs() < 1e-15);
    assert!((PRINTED_EXPONENTIAL_GAP - 0.2748).abs() < 1e-4);
    assert!((exp - PRINTED_EXPONENTIAL_GAP).abs() > 0.01);
    assert_eq!(
        SideInfoDistribution::PositiveCauchy.gap_closed_form(),
        f64::INFINITY
    );
    let gamma = SideInfoDistribution::Gamma { a: 4.0, b: 1.0 }.gap_closed_form();
    // ψ(4) = 1 + 1/2 + 1/3 − γ
    assert!((gamma - 0.5 * (4f64.ln() - (11.0 / 6.0 - EULER))).abs() < 1e-14);
}

#[test]
fn gamma_approximations_reported() {
    let d = SideInfoDistribution::Gamma { a: 50.0, b: 1.0 };
    let exact = d.gap_closed_form();
    let approx = d.approximations();
    let series = approx.iter().find(|(n, _)| n.starts_with("series")).unwrap().1;
    let printed = approx.iter().find(|(n, _)| n.starts_with("printed")).unwrap().1;
    assert!((exact - series).abs() < (exact - printed).abs());
    assert!((exact / series - 1.0).abs() < 0.01);
}

#[test]
fn pathological_approaches_half_log() {
    for eps in [1e-3, 1e-4, 1e-6, 1e-9] {
        let d = SideInfoDistribution::Pathological { eps };
        let ratio = d.gap_closed_form() / (0.5 * (1.0 / eps).ln());
        assert!((0.9..=1.1).contains(&ratio), "eps {eps}: {ratio}");
    }
}

#[test]
fn high_resolution_difference_is_the_penalty() {
    let mut cases = SideInfoDistribution::table();
    cases.push(SideInfoDistribution::TwoPoint {
        atoms: [0.25, 4.0],
        weights: [0.5, 0.5],
    });
    let h = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln();
    for d in cases {
        for dd in [1e-4, 0.01, 0.3] {
            let r = high_resolution_rates(h, dd, &d).unwrap();
            let closed = d.gap_closed_form();
            if closed.is_finite() {
                assert!((r.gap() - closed).abs() < 1e-12, "{d} at D = {dd}");
            } else {
                assert_eq!(r.dec, f64::INFINITY);
                assert!(r.both.is_finite());
            }
        }
    }
    let unit = SideInfoDistribution::TwoPoint {
        atoms: [1.0, 1.0],
        weights: [0.5, 0.5],
    };
    let r = high_resolution_rates(h, 0.01, &unit).unwrap();
    assert!((r.both - 0.5 * 100f64.ln()).abs() < 1e-12);
    assert_eq!(r.both, r.dec);
    let uniform = high_resolution_rates(h, 0.01, &SideInfoDistribution::Uniform01).unwrap();
    assert!((uniform.gap() - 0.1534).abs() < 5e-4);
    let lognormal =
        high_resolution_rates(1.3, 0.2, &SideInfoDistribution::Lognormal { m: -1.0, q2: 2.0 }).unwrap();
    assert!((lognormal.gap() - 0.5).abs() < 1e-12);
}

#[test]
fn scale_parameters_cancel() {
    for tau in [0.01, 0.5, 1.0, 30.0] {
        let d = SideInfoDistribution::Exponential { tau };
        assert!((d.gap_from_moments() - EULER / 2.0).abs() < 1e-12);
    }
    for a in [0.5, 2.0, 9.0] {
        let base = SideInfoDistribution::Gamma { a, b: 1.0 }.gap_from_moments();
        for b in [0.01, 3.0, 1e3] {
            let g = SideInfoDistribution::Gamma { a, b }.gap_from_moments();
            assert!((g - base).abs() < 1e-12, "a {a} b {b}");
        }
    }
}

#[test]
fn monte_carlo_agrees_with_closed_forms() {
    let mut cases = SideInfoDistribution::table();
    cases.push(SideInfoDistribution::Gamma { a: 0.7, b: 2.0 });
    for d in cases {
        let r = gap_monte_carlo(&d, 200_000, 11).unwrap();
        assert_eq!(r.non_finite, 0, "{d}");
        match (r.monte_carlo, r.std_error) {
            (Some(g), Some(se)) => {
                assert!(
                    (g - r.closed_form).abs() <= 4.0 * se,
                    "{d}: {g} ± {se} vs {}",
                    r.closed_form
                )
            }
            _ => assert!(r.closed_form.is_infinite()),
        }
    }
}

#[test]
fn standard_error_shrinks_like_root_n() {
    for d in [
        SideInfoDistribution::Uniform01,
        SideInfoDistribution::Gamma { a: 4.0, b: 1.0 },
    ] {
        let small = gap_monte_carlo(&d, 10_000, 3).unwrap().std_error.unwrap();
        let large = gap_monte_carlo(&d, 1_000_000, 3).unwrap().std_error.unwrap();
        let ratio = small / large;
        assert!((8.0..=12.0).contains(&ratio), "{d}: {ratio}");
    }
}

#[test]
fn cauchy_estimate_grows() {
    let r = gap_monte_carlo(&SideInfoDistribution::PositiveCauchy, 1_000_000, 5).unwrap();
    assert!(r.monte_carlo.is_none());
    assert!(r.divergence.len() >= 4);
    assert!(r.divergence_slope().unwrap() > 0.0);
}

#[test]
fn sharded_runs_merge_in_order() {
    let d = SideInfoDistribution::Lognormal { m: 0.0, q2: 1.0 };
    let samples = 3 * SHARD_SAMPLES + 100;
    let shards: Vec<ShardMoments> = shard_sizes(samples)
        .into_iter()
        .enumerate()
        .rev()
        .map(|(i, n)| (i, shard_moments(&d, 9, i as u64, n).unwrap()))
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .map(|(_, m)| m)
        .collect();
    let merged = gap_from_shards(&d, 9, &shards);
    assert_eq!(merged, gap_monte_carlo(&d, samples, 9).unwrap());
}

#[test]
fn constant_side_information_has_no_penalty() {
    let d = SideInfoDistribution::TwoPoint {
        atoms: [2.0, 2.0],
        weights: [0.3, 0.7],
    };
    assert!(d.gap_closed_form().abs() < 1e-15);
    let r = gap_monte_carlo(&d, 10_000, 1).unwrap();
    assert!(r.monte_carlo.unwrap().abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn penalty_is_nonnegative(
        tau in 1e-3f64..1e3,
        m in -5.0f64..5.0,
        q2 in 1e-3f64..10.0,
        a in 0.05f64..50.0,
        b in 1e-3f64..1e3,
        eps in 1e-6f64..0.999,
        q0 in 1e-3f64..1e3,
        q1 in 1e-3f64..1e3,
        w in 0.0f64..=1.0,
    ) {
        let cases = [
            SideInfoDistribution::Exponential { tau },
            SideInfoDistribution::Lognormal { m, q2 },
            SideInfoDistribution::Pareto { a: 1.0 + a, b },
            SideInfoDistribution::Gamma { a, b },
            SideInfoDistribution::Pathological { eps },
            SideInfoDistribution::TwoPoint { atoms: [q0, q1], weights: [w, 1.0 - w] },
        ];
        for d in cases {
            let g = d.gap_closed_form();
            prop_assert!(g >= -1e-12, "{} gives {}", d, g);
        }
    }
}

#[test]
fn penalty_trend_for_two_atoms() {
    let d = SideInfoDistribution::TwoPoint {
        atoms: [0.25, 4.0],
        weights: [0.5, 0.5],
    };
    let cfg = PenaltyConfig::for_distribution(&d).unwrap();
    assert_eq!(cfg.targets.len(), 3);
    let report = penalty_check(&d, &cfg).unwrap();
    assert!((report.closed_form - 0.5 * 2.125f64.ln()).abs() < 1e-15);
    assert!((report.closed_form - 0.3769).abs() < 1e-4);
    assert!(report.is_monotone(0.0), "{:?}", report.points);
    assert!(report.final_error().unwrap() <= 0.05);
    for p in &report.points {
        assert!(p.converged, "target {}", p.target);
        assert!(p.gap <= report.closed_form + 0.01);
    }
}

#[test]
fn penalty_vanishes_without_side_information() {
    let d = SideInfoDistribution::TwoPoint {
        atoms: [1.0, 1.0],
        weights: [0.5, 0.5],
    };
    let cfg = PenaltyConfig {
        targets: vec![0.5, 0.2, 0.05],
        ..PenaltyConfig::for_distribution(&d).unwrap()
    };
    let report = penalty_check(&d, &cfg).unwrap();
    for p in &report.points {
        assert!(p.gap.abs() <= 0.01, "target {}: {}", p.target, p.gap);
    }
}

#[test]
fn penalty_trend_for_pathological_atoms() {
    let d = SideInfoDistribution::Pathological { eps: 0.1 };
    let report = penalty_check(&d, &PenaltyConfig::for_distribution(&d).unwrap()).unwrap();
    let expected = 0.5 * 1.09f64.ln() - 0.4 * 0.1f64.ln();
    assert!((report.closed_form - expected).abs() < 1e-12);
    assert!((expected - 0.964).abs() < 1e-3);
    assert!(report.is_monotone(0.0));
    assert!(report.final_error().unwrap() <= 0.05);
}

#[test]
fn penalty_check_refusals() {
    let continuous = SideInfoDistribution::Uniform01;
    assert!(PenaltyConfig::for_distribution(&continuous).is_err());
    let d = SideInfoDistribution::TwoPoint {
        atoms: [0.25, 4.0],
        weights: [0.5, 0.5],
    };
    // the zero-rate distortion is E[q]·Var(x) ≈ 2.125
    let cfg = PenaltyConfig {
        targets: vec![3.0],
        ..PenaltyConfig::for_distribution(&d).unwrap()
    };
    assert!(penalty_check(&d, &cfg).is_err());
}

#[test]
fn quantized_gaussian_grid() {
    let d = SideInfoDistribution::TwoPoint {
        atoms: [0.25, 4.0],
        weights: [0.5, 0.5],
    };
    let inst = quantized_gaussian_instance(&d, GRID_POINTS, GRID_SPAN).unwrap();
    assert_eq!(
        (inst.source_size(), inst.recon_size(), inst.side_size()),
        (129, 129, 2)
    );
    let xs = grid(GRID_POINTS, GRID_SPAN);
    let var: f64 = inst.p_x().iter().zip(&xs).map(|(p, x)| p * x * x).sum();
    // cell quantization adds about step²/12
    let step = xs[1] - xs[0];
    assert!((var - 1.0 - step * step / 12.0).abs() < 1e-4, "variance {var}");
    assert_eq!(inst.dist().get(3, 5, 1), 4.0 * (xs[3] - xs[5]).powi(2));
}
