mod common;

use frechet::lab::{oscillation_stats, run_consistency_experiment, ExperimentConfig, LabSpace, LimitParams};
use frechet::limits::{tail_limsup, SetTrajectory};
use frechet::metric::{DiscreteMeasure, GridSpace, Order, PointId};

fn interval(r: u32, checkpoints: Vec<u64>, replications: u32, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        name: "interval".into(),
        space: LabSpace::Grid(GridSpace::from_interval(-1.0, 1.0, 100).unwrap()),
        mu: DiscreteMeasure::uniform([PointId(0), PointId(200)]).unwrap(),
        r: Order::integer(r).unwrap(),
        n_max: *checkpoints.last().unwrap(),
        checkpoints,
        replications,
        seed,
        restricted: false,
        limits: LimitParams::default(),
    }
}

#[test]
fn minus_one_is_a_median_half_the_time_at_odd_n() {
    let report = run_consistency_experiment(&interval(1, vec![11, 101], 4000, 17)).unwrap();
    let rows = oscillation_stats(&report.replications, |c| c.mean_set.contains(&PointId(0))).unwrap();
    for row in rows {
        assert!((row.frequency - 0.5).abs() <= 3.0 * (0.25f64 / row.total as f64).sqrt(), "{row:?}");
    }
    // at odd n the sample is never balanced, so the mean is a single endpoint
    let full = oscillation_stats(&report.replications, |c| c.mean_set.len() > 1).unwrap();
    assert!(full.iter().all(|r| r.hits == 0));
}

#[test]
fn balanced_even_samples_give_the_whole_grid() {
    let report = run_consistency_experiment(&interval(1, vec![2, 4, 10], 3000, 5)).unwrap();
    let rows = oscillation_stats(&report.replications, |c| c.mean_set.len() == 201).unwrap();
    for (row, k) in rows.iter().zip([1, 2, 5]) {
        let p = common::binomial_probability(2 * k, k);
        let se = (p * (1.0 - p) / row.total as f64).sqrt();
        assert!((row.frequency - p).abs() <= 4.0 * se, "{row:?} vs {p}");
    }
}

#[test]
fn median_trajectory_stays_inside_the_grid_mean_set() {
    // The population mean set is the whole grid, so any outer-limit
    // estimate is included; the block estimate keeps the endpoints that
    // recur in both halves of the tail.
    let cfg = interval(1, (1..=60).map(|k| 25 * k).collect(), 20, 3);
    let report = run_consistency_experiment(&cfg).unwrap();
    assert_eq!(report.outer_limit_inclusion_rate(), 1.0);
    let grid = GridSpace::from_interval(-1.0, 1.0, 100).unwrap();
    for rep in &report.replications {
        let sets = rep.checkpoints.iter().map(|c| c.mean_set.clone()).collect();
        let traj = SetTrajectory::new(&grid, sets).unwrap();
        let est = tail_limsup(&traj, 30).unwrap();
        assert!(est.len() == 201 || est.iter().all(|p| *p == PointId(0) || *p == PointId(200)), "{est:?}");
    }
}

#[test]
fn mean_trajectory_concentrates_near_zero() {
    let mut cfg = interval(2, vec![10, 100, 1000, 10000], 100, 11);
    cfg.limits.epsilon = 0.05;
    let report = run_consistency_experiment(&cfg).unwrap();
    let grid = GridSpace::from_interval(-1.0, 1.0, 100).unwrap();
    for rep in &report.replications {
        for cp in &rep.checkpoints {
            // a tie only when the arithmetic mean sits halfway between two grid points
            match cp.mean_set[..] {
                [_] => {}
                [a, b] => assert_eq!(b.0, a.0 + 1),
                _ => panic!("{:?}", cp.mean_set),
            }
        }
        let last = rep.checkpoints.last().unwrap().mean_set[0];
        assert!(grid.value(last).abs() <= 0.05);
        assert!(rep.outer_limit.points.iter().all(|&p| grid.value(p).abs() < 0.1));
    }
    assert!(report.max_outer_limit_excess() < 0.1);
}
