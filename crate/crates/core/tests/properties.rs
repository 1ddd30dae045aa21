mod common;

use std::collections::BTreeSet;

use common::*;
use frechet::graph::{enumerate_space, format_graph, hamming_distance, parse_graph, Graph, GraphSpaceConfig};
use frechet::lab::{diagnostic_t, run_consistency_experiment, sample_iid, ExperimentConfig, LabSpace, LimitParams};
use frechet::limits::{kuratowski_limsup, tail_blocks, tail_limsup, ziezold_limcsup, SetTrajectory, DEFAULT_TAIL_BLOCKS};
use frechet::metric::{
    check_metric_axioms, equicontinuity_bound, DiscreteMeasure, GridSpace, MatrixSpace, MetricSpace, Order,
    PointId, Sample,
};
use frechet::solver::{restricted_sample_mean_set, sample_mean_set};
use proptest::prelude::*;

fn graph_strategy() -> impl Strategy<Value = Graph> {
    (2usize..14).prop_flat_map(|nv| {
        let slots = nv * (nv - 1) / 2;
        proptest::collection::vec(any::<bool>(), slots).prop_map(move |bits| {
            let text: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
            parse_graph(&format!("{nv}:{text}")).unwrap()
        })
    })
}

fn graph_pair() -> impl Strategy<Value = (Graph, Graph)> {
    (2usize..14).prop_flat_map(|nv| {
        let slots = nv * (nv - 1) / 2;
        let bits = || proptest::collection::vec(any::<bool>(), slots);
        (bits(), bits()).prop_map(move |(a, b)| {
            let g = |v: Vec<bool>| {
                let text: String = v.iter().map(|&b| if b { '1' } else { '0' }).collect();
                parse_graph(&format!("{nv}:{text}")).unwrap()
            };
            (g(a), g(b))
        })
    })
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// A trajectory of subsets of `0..n`.
fn trajectory(n: usize, len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Vec<PointId>>> {
    proptest::collection::vec(
        proptest::collection::btree_set(0..n, 0..4).prop_map(|s| s.into_iter().map(PointId).collect()),
        len,
    )
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn hamming_is_symmetric_difference((a, b) in graph_pair()) {
        let ea: BTreeSet<_> = a.edges().into_iter().collect();
        let eb: BTreeSet<_> = b.edges().into_iter().collect();
        prop_assert_eq!(hamming_distance(&a, &b).unwrap(), ea.symmetric_difference(&eb).count() as u64);
        prop_assert_eq!(hamming_distance(&a, &b).unwrap(), hamming_distance(&b, &a).unwrap());
    }

    #[test]
    fn text_format_round_trips(g in graph_strategy()) {
        let text = format_graph(&g);
        prop_assert_eq!(parse_graph(&text).unwrap(), g.clone());
        let rebuilt = Graph::from_edges(g.nv(), &g.edges()).unwrap();
        prop_assert_eq!(rebuilt, g);
    }

    #[test]
    fn mean_sets_are_exact_minimizers(
        sample in proptest::collection::vec(0usize..64, 1..8),
        r in 1u32..4,
    ) {
        let g4 = enumerate_space(GraphSpaceConfig::new(4)).unwrap();
        let oracle = EdgeSets::new(&g4);
        let sample: Vec<PointId> = sample.into_iter().map(PointId).collect();
        let s = Sample::new(sample.clone()).unwrap();
        let order = Order::integer(r).unwrap();
        let full = sample_mean_set(&g4, &s, order).unwrap();
        let restricted = restricted_sample_mean_set(&g4, &s, order).unwrap();

        prop_assert!(!full.argmin.is_empty());
        let best = full.exact_optimum.clone().unwrap();
        for x in frechet::metric::points(&g4) {
            let v = functional(&oracle, &sample, x, r);
            prop_assert!(v >= best);
            prop_assert_eq!(v == best, full.contains(x));
        }
        // restricted means are sampled points and never beat the full minimum
        prop_assert!(restricted.argmin.iter().all(|p| sample.contains(p)));
        prop_assert!(restricted.exact_optimum.unwrap() >= best);
    }

    #[test]
    fn mean_set_ignores_sample_order(
        mut sample in proptest::collection::vec(0usize..201, 1..12),
        r in 1u32..4,
    ) {
        let grid = GridSpace::from_interval(-1.0, 1.0, 100).unwrap();
        let order = Order::integer(r).unwrap();
        let a = sample_mean_set(&grid, &Sample::new(sample.iter().map(|&i| PointId(i)).collect()).unwrap(), order).unwrap();
        sample.reverse();
        let b = sample_mean_set(&grid, &Sample::new(sample.iter().map(|&i| PointId(i)).collect()).unwrap(), order).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn diagnostic_t_is_difference_of_functionals(
        sample in proptest::collection::vec(0usize..201, 1..10),
        z in 0usize..201,
        r in 1u32..4,
    ) {
        let grid = GridSpace::from_interval(-1.0, 1.0, 100).unwrap();
        let coords = GridCoords::new(&grid);
        let mu = DiscreteMeasure::uniform([PointId(0), PointId(200)]).unwrap();
        let sample: Vec<PointId> = sample.into_iter().map(PointId).collect();
        let t = diagnostic_t(&grid, &mu, &Sample::new(sample.clone()).unwrap(), PointId(z), Order::integer(r).unwrap()).unwrap();
        let pairs = [(PointId(0), ratio(1, 2)), (PointId(200), ratio(1, 2))];
        let expected = functional(&coords, &sample, PointId(z), r) - population_functional(&coords, &pairs, PointId(z), r);
        prop_assert_eq!(t.exact, Some(expected));
    }

    #[test]
    fn lipschitz_bound_on_grid_triples(
        x in 0usize..201, y in 0usize..201, z in 0usize..201, r in 1u32..4,
    ) {
        let grid = GridSpace::from_interval(-1.0, 1.0, 100).unwrap();
        let coords = GridCoords::new(&grid);
        let (x, y, z) = (PointId(x), PointId(y), PointId(z));
        let lhs = pow(&coords.dist(z, x), r) - pow(&coords.dist(z, y), r);
        let lhs = if lhs < int(0) { -lhs } else { lhs };
        // (2^r - 1) M^(r-1) d(x, y) with M = 2
        let rhs = int((1 << r) - 1) * pow(&int(2), r - 1) * coords.dist(x, y);
        prop_assert!(lhs <= rhs);
        prop_assert!(equicontinuity_bound(grid.bound(), r, grid.distance(x, y)) + 1e-12 >= grid.distance(z, x).powi(r as i32) - grid.distance(z, y).powi(r as i32));
    }

    #[test]
    fn kuratowski_is_monotone(sets in trajectory(12, 4..30), eps in 0.0f64..4.0, k in 1usize..4) {
        let grid = GridSpace::new(0, 11, 1).unwrap();
        let traj = SetTrajectory::new(&grid, sets).unwrap();
        let burn = traj.len() / 2;
        let est = |e: f64, v: usize| -> BTreeSet<PointId> {
            kuratowski_limsup(&traj, e, burn, v).unwrap().points.into_iter().collect()
        };
        prop_assert!(est(eps, k + 1).is_subset(&est(eps, k)));
        prop_assert!(est(eps, k).is_subset(&est(eps + 1.0, k)));
        // tail limsup ⊆ kuratowski(ε > 0) at one visit
        let tail: BTreeSet<PointId> = tail_limsup(&traj, burn).unwrap().into_iter().collect();
        prop_assert!(tail.is_subset(&est(eps.max(1e-9), 1)));
    }

    #[test]
    fn ziezold_equals_tail_limsup_on_metric_spaces(sets in trajectory(16, 2..40)) {
        let grid = GridSpace::new(0, 15, 1).unwrap();
        let traj = SetTrajectory::new(&grid, sets).unwrap();
        let burn = traj.len() / 2;
        prop_assert_eq!(ziezold_limcsup(&traj, burn).unwrap(), tail_limsup(&traj, burn).unwrap());
    }

    #[test]
    fn ziezold_contains_tail_limsup_on_pseudo_metrics(sets in trajectory(6, 2..20)) {
        // 0 ~ 1 and 2 ~ 3 are twins
        let units = |a: usize| [0u64, 0, 3, 3, 5, 9][a];
        let entries = (0..36).map(|k| units(k / 6).abs_diff(units(k % 6))).collect();
        let space = MatrixSpace::from_integer(6, entries, true).unwrap();
        prop_assert!(check_metric_axioms(&space).is_ok());
        let traj = SetTrajectory::new(&space, sets).unwrap();
        let burn = traj.len() / 2;
        let z: BTreeSet<_> = ziezold_limcsup(&traj, burn).unwrap().into_iter().collect();
        let t: BTreeSet<_> = tail_limsup(&traj, burn).unwrap().into_iter().collect();
        prop_assert!(t.is_subset(&z));
        // a point survives iff its twin class meets every block union
        let twin = |p: PointId| PointId(match p.0 { 0 => 1, 1 => 0, 2 => 3, 3 => 2, o => o });
        let blocks = tail_blocks(traj.len(), burn, DEFAULT_TAIL_BLOCKS);
        for p in (0..6).map(PointId) {
            let recurrent = blocks.iter().all(|b| {
                traj.sets()[b.clone()].iter().flatten().any(|&q| q == p || q == twin(p))
            });
            prop_assert_eq!(z.contains(&p), recurrent);
        }
    }

    #[test]
    fn empty_sets_never_admit(len in 1usize..20, eps in 0.0f64..10.0) {
        let grid = GridSpace::new(0, 5, 1).unwrap();
        let traj = SetTrajectory::new(&grid, vec![vec![]; len]).unwrap();
        prop_assert!(kuratowski_limsup(&traj, eps, 0, 1).unwrap().points.is_empty());
    }

    #[test]
    fn same_seed_same_sample(seed in any::<u64>(), n in 1usize..50) {
        let mu = DiscreteMeasure::from_counts([(PointId(1), 2), (PointId(5), 1), (PointId(9), 4)]).unwrap();
        prop_assert_eq!(sample_iid(&mu, n, seed).unwrap(), sample_iid(&mu, n, seed).unwrap());
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn sandwich_holds_for_any_seed(seed in any::<u64>(), r in 1u32..4, restricted in any::<bool>()) {
        let g4 = enumerate_space(GraphSpaceConfig::new(4)).unwrap();
        let mu = DiscreteMeasure::from_counts([(PointId(0b100101), 1), (PointId(0b101001), 2), (PointId(7), 1)]).unwrap();
        let cfg = ExperimentConfig {
            name: "prop".into(),
            space: LabSpace::Graph(g4),
            mu,
            r: Order::integer(r).unwrap(),
            n_max: 60,
            checkpoints: vec![1, 2, 5, 20, 60],
            replications: 4,
            seed,
            restricted,
            limits: LimitParams::default(),
        };
        let report = run_consistency_experiment(&cfg).unwrap();
        for rep in &report.replications {
            for cp in &rep.checkpoints {
                prop_assert!(cp.sandwich_ok && cp.variance_identity_ok);
                prop_assert!(cp.sample_variance >= 0.0 && !cp.mean_set.is_empty());
                if let Some(rc) = &cp.restricted {
                    prop_assert!(rc.sandwich_ok && rc.within_sample);
                }
            }
        }
    }
}
