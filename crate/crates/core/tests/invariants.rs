mod support;

use proptest::prelude::*;
use quasiarc::metric::Sampling;
use quasiarc::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nets_are_separated_and_maximal(seed in 0u64..10_000, r in 0.3f64..4.0) {
        let cfg = support::micro_config(seed);
        let net = build_net(&cfg.space, r, &[cfg.arc.a()]).unwrap();
        prop_assert!(net.verify(&cfg.space).passed());
        prop_assert!(net.contains(cfg.arc.a()));
    }

    #[test]
    fn colourings_separate_classes(seed in 0u64..10_000, r in 0.3f64..2.0) {
        let cfg = support::micro_config(seed);
        let net = build_net(&cfg.space, r, &[]).unwrap();
        let c = color_net(&cfg.space, &net, 20.0 * r);
        prop_assert!(c.verify(&cfg.space, &net).passed());
    }

    #[test]
    fn excised_walks_are_arcs(seed in 0u64..10_000) {
        let cfg = support::micro_config(seed);
        // walk there and back, then onward: every point but the last repeats
        let mut walk = cfg.arc.indices().to_vec();
        walk.extend(cfg.arc.indices().iter().rev().skip(1));
        let (arc, loops) = excise_loops(&walk);
        prop_assert_eq!(arc.len(), 1);
        prop_assert!(loops >= 1 || cfg.arc.len() == 1);
        let (same, none) = excise_loops(cfg.arc.indices());
        prop_assert_eq!(same, cfg.arc.indices().to_vec());
        prop_assert_eq!(none, 0);
    }

    #[test]
    fn straightening_keeps_its_guarantees(seed in 0u64..10_000, k in 1.0f64..3.0) {
        let cfg = support::micro_config(seed);
        let l = estimate_linear_connectivity(&cfg.space, Sampling::Exhaustive).unwrap().l_hat;
        let iota = straighten::scale_floor(&cfg.space, l) * k;
        let res = straighten(&cfg.space, &StraightenParams::new(l), &cfg.arc, iota).unwrap();
        prop_assert!(res.passed(), "{:?}", res.failure());
        prop_assert!(DiscreteArc::new(&cfg.space, res.arc.indices().to_vec()).is_ok());
        prop_assert_eq!((res.arc.a(), res.arc.b()), (cfg.arc.a(), cfg.arc.b()));
        prop_assert!(res.follow_map.maps_endpoints());
    }

    #[test]
    fn composition_adds_bounds_and_keeps_endpoints(len in 2usize..30, picks in proptest::collection::vec(0usize..1000, 0..60)) {
        let mid = |n: usize, m: usize, salt: usize| -> CoarseMap<f64> {
            let mut assignment: Vec<usize> = (0..n).map(|i| (picks.get(i + salt).copied().unwrap_or(i)) % m).collect();
            assignment[0] = 0;
            assignment[n - 1] = m - 1;
            CoarseMap { assignment, target_len: m, displacement_bound: 0.5 }
        };
        let first = mid(len + 3, len, 0);
        let second = mid(len + 1, len + 3, 7);
        let c = quasiarc::multiscale::compose_follow_maps(&[first.clone(), second.clone()], len).unwrap();
        prop_assert!(c.maps_endpoints());
        prop_assert_eq!(c.displacement_bound, 1.0);
        for (i, &q) in c.assignment.iter().enumerate() {
            prop_assert_eq!(q, first.assignment[second.assignment[i]]);
        }
    }
}
