use proptest::prelude::*;
use sideinfo_core::model::catalog::random_small;
use sideinfo_core::model::Scenario;
use sideinfo_core::oracle::{log_slopes, ordering_report, solve, SolverConfig, ORDERING_SLACK};

fn config() -> SolverConfig {
    SolverConfig {
        slopes: log_slopes(0.1, 20.0, 8),
        restarts: 4,
        ..SolverConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn more_side_information_never_costs_rate(seed in any::<u64>(), index in 0u64..1000) {
        let inst = random_small(seed, index).unwrap();
        let cfg = config();
        let results: Vec<_> = Scenario::ALL.iter().map(|&s| solve(&inst, s, &cfg).unwrap()).collect();
        let report = ordering_report(&results, ORDERING_SLACK).unwrap();
        prop_assert!(report.holds(), "{:?}", report.pairs);
    }

    #[test]
    fn convex_scenarios_give_convex_curves(seed in any::<u64>(), index in 0u64..1000) {
        let inst = random_small(seed, index).unwrap();
        for s in [Scenario::Neither, Scenario::Encoder, Scenario::Both] {
            let c = solve(&inst, s, &config()).unwrap().curve();
            prop_assert!(c.is_non_increasing(1e-6));
            prop_assert!(c.is_convex(1e-6));
        }
    }

    #[test]
    fn encoder_rate_splits_into_conditional_rate_and_leakage(seed in any::<u64>(), index in 0u64..1000) {
        let inst = random_small(seed, index).unwrap();
        for p in solve(&inst, Scenario::Encoder, &config()).unwrap().points {
            let c = p.diagnostics.conditional_rate.unwrap();
            let l = p.diagnostics.side_leakage.unwrap();
            prop_assert!((c + l - p.rate).abs() < 1e-9);
            prop_assert!(l >= 0.0);
        }
    }
}
