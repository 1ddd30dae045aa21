//! Outer limits of sequences of finite sets, estimated from a finite
//! trajectory `A_1, ..., A_N`.
//!
//! True limits need infinite sequences. The estimators here look at the
//! tail `A_b, ..., A_N` after a burn-in index `b` and replace "infinitely
//! often" with "recurrently in the tail":
//!
//! * [`tail_limsup`] splits the tail into consecutive blocks and keeps the
//!   points that occur in every block. This is `∩_n ∪_{m≥n} A_m` with the
//!   tail starts taken at block boundaries and each union cut at the next
//!   boundary.
//! * [`ziezold_limcsup`] intersects the *closures* of the same block unions.
//!   In a metric space the closure of a finite set is the set itself, so the
//!   two agree; in a pseudo-metric space the closure also picks up points at
//!   distance zero.
//! * [`kuratowski_limsup`] counts the tail indices at which `d(x, A_n) < ε`
//!   and keeps the points with at least `min_visits` such indices.
//!
//! The defaults are `burn_in = N / 2`, two tail blocks, and
//! `min_visits = 2`.

use std::ops::Range;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::metric::{distance_to_set, ensure_point, MetricSpace, PointId};

pub const DEFAULT_TAIL_BLOCKS: usize = 2;
pub const DEFAULT_MIN_VISITS: usize = 2;

/// Default burn-in for a trajectory of length `n`.
pub fn default_burn_in(n: usize) -> usize {
    n / 2
}

/// A finite sequence of finite subsets of a space.
#[derive(Clone, Debug)]
pub struct SetTrajectory<'a, S: MetricSpace + ?Sized> {
    space: &'a S,
    sets: Vec<Vec<PointId>>,
}

impl<'a, S: MetricSpace + ?Sized> SetTrajectory<'a, S> {
    /// Each set is sorted and deduplicated.
    pub fn new(space: &'a S, sets: Vec<Vec<PointId>>) -> Result<Self> {
        if sets.is_empty() {
            return Err(domain("a trajectory needs at least one set"));
        }
        let sets = sets
            .into_iter()
            .map(|mut s| {
                s.iter().try_for_each(|&p| ensure_point(space, p))?;
                s.sort_unstable();
                s.dedup();
                Ok(s)
            })
            .collect::<Result<_>>()?;
        Ok(Self { space, sets })
    }

    pub fn space(&self) -> &'a S {
        self.space
    }

    pub fn sets(&self) -> &[Vec<PointId>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    fn check_burn_in(&self, burn_in: usize) -> Result<()> {
        if burn_in >= self.len() {
            return Err(domain(format!(
                "burn-in {burn_in} leaves no tail in a trajectory of length {}",
                self.len()
            )));
        }
        Ok(())
    }
}

/// Splits `burn_in .. len` into at most `blocks` non-empty consecutive ranges.
pub fn tail_blocks(len: usize, burn_in: usize, blocks: usize) -> Vec<Range<usize>> {
    let tail = len.saturating_sub(burn_in);
    let b = blocks.clamp(1, tail.max(1));
    (0..b)
        .map(|k| burn_in + k * tail / b..burn_in + (k + 1) * tail / b)
        .filter(|r| !r.is_empty())
        .collect()
}

/// Points occurring in every tail block, with the default block count.
pub fn tail_limsup<S: MetricSpace + ?Sized>(
    traj: &SetTrajectory<'_, S>,
    burn_in: usize,
) -> Result<Vec<PointId>> {
    tail_limsup_with(traj, burn_in, DEFAULT_TAIL_BLOCKS)
}

pub fn tail_limsup_with<S: MetricSpace + ?Sized>(
    traj: &SetTrajectory<'_, S>,
    burn_in: usize,
    blocks: usize,
) -> Result<Vec<PointId>> {
    traj.check_burn_in(burn_in)?;
    let ranges = tail_blocks(traj.len(), burn_in, blocks);
    // Number of blocks each point has been seen in, and the last block.
    let mut seen: std::collections::HashMap<PointId, (usize, usize)> = Default::default();
    for (k, range) in ranges.iter().enumerate() {
        for set in &traj.sets[range.clone()] {
            for &p in set {
                let entry = seen.entry(p).or_insert((0, usize::MAX));
                if entry.1 != k {
                    *entry = (entry.0 + 1, k);
                }
            }
        }
    }
    let mut out: Vec<PointId> = seen
        .into_iter()
        .filter(|&(_, (count, _))| count == ranges.len())
        .map(|(p, _)| p)
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Classical liminf surrogate: points in every set of the tail.
pub fn tail_liminf<S: MetricSpace + ?Sized>(
    traj: &SetTrajectory<'_, S>,
    burn_in: usize,
) -> Result<Vec<PointId>> {
    traj.check_burn_in(burn_in)?;
    let mut acc = traj.sets[burn_in].clone();
    for set in &traj.sets[burn_in + 1..] {
        acc.retain(|p| set.binary_search(p).is_ok());
    }
    Ok(acc)
}

/// Intersection over tail blocks of the closure of each block union.
pub fn ziezold_limcsup<S: MetricSpace + ?Sized>(
    traj: &SetTrajectory<'_, S>,
    burn_in: usize,
) -> Result<Vec<PointId>> {
    ziezold_limcsup_with(traj, burn_in, DEFAULT_TAIL_BLOCKS)
}

pub fn ziezold_limcsup_with<S: MetricSpace + ?Sized>(
    traj: &SetTrajectory<'_, S>,
    burn_in: usize,
    blocks: usize,
) -> Result<Vec<PointId>> {
    traj.check_burn_in(burn_in)?;
    let space = traj.space;
    let mut acc: Option<Vec<PointId>> = None;
    for range in tail_blocks(traj.len(), burn_in, blocks) {
        let mut union: Vec<PointId> = traj.sets[range].iter().flatten().copied().collect();
        union.sort_unstable();
        union.dedup();
        let closure = closure(space, &union);
        acc = Some(match acc {
            None => closure,
            Some(prev) => prev
                .into_iter()
                .filter(|p| closure.binary_search(p).is_ok())
                .collect(),
        });
    }
    Ok(acc.unwrap_or_default())
}

/// `{ x : d(x, A) = 0 }`.
pub fn closure<S: MetricSpace + ?Sized>(space: &S, set: &[PointId]) -> Vec<PointId> {
    if set.is_empty() {
        return Vec::new();
    }
    crate::metric::points(space)
        .filter(|&x| {
            set.iter().any(|&a| match space.lattice_distance(x, a) {
                Some(u) => u == 0,
                None => space.distance(x, a) == 0.0,
            })
        })
        .collect()
}

/// Visit-count estimate of the Kuratowski outer limit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OuterLimitEstimate {
    pub points: Vec<PointId>,
    pub epsilon: f64,
    pub burn_in: usize,
    pub min_visits: usize,
}

/// Points `x` with `#{ n >= burn_in : d(x, A_n) < ε } >= min_visits`.
///
/// `epsilon = 0` is accepted and means membership (`d(x, A_n) = 0`). Empty
/// sets are at distance `+∞` and never count as a visit.
pub fn kuratowski_limsup<S: MetricSpace + ?Sized>(
    traj: &SetTrajectory<'_, S>,
    epsilon: f64,
    burn_in: usize,
    min_visits: usize,
) -> Result<OuterLimitEstimate> {
    traj.check_burn_in(burn_in)?;
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(domain(format!("epsilon must be finite and >= 0, got {epsilon}")));
    }
    if min_visits == 0 {
        return Err(domain("min_visits must be at least 1"));
    }
    let space = traj.space;
    let tail = &traj.sets[burn_in..];
    let points = crate::metric::points(space)
        .filter(|&x| {
            let mut visits = 0;
            for set in tail {
                let hit = if epsilon == 0.0 {
                    closure_contains(space, set, x)
                } else {
                    distance_to_set(space, x, set) < epsilon
                };
                if hit {
                    visits += 1;
                    if visits >= min_visits {
                        return true;
                    }
                }
            }
            false
        })
        .collect();
    Ok(OuterLimitEstimate {
        points,
        epsilon,
        burn_in,
        min_visits,
    })
}

fn closure_contains<S: MetricSpace + ?Sized>(space: &S, set: &[PointId], x: PointId) -> bool {
    set.binary_search(&x).is_ok()
        || set.iter().any(|&a| match space.lattice_distance(x, a) {
            Some(u) => u == 0,
            None => space.distance(x, a) == 0.0,
        })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InclusionReport {
    pub included: bool,
    /// Points of the estimate outside the target, with their distance to it.
    pub violations: Vec<(PointId, f64)>,
}

/// Whether `estimate ⊆ target`.
pub fn inclusion_check<S: MetricSpace + ?Sized>(
    space: &S,
    estimate: &[PointId],
    target: &[PointId],
) -> InclusionReport {
    let mut sorted = target.to_vec();
    sorted.sort_unstable();
    let violations: Vec<(PointId, f64)> = estimate
        .iter()
        .filter(|p| sorted.binary_search(p).is_err())
        .map(|&p| (p, distance_to_set(space, p, &sorted)))
        .collect();
    InclusionReport {
        included: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{GridSpace, MatrixSpace};

    fn grid() -> GridSpace {
        GridSpace::new(0, 9, 1).unwrap()
    }

    fn p(i: usize) -> PointId {
        PointId(i)
    }

    #[test]
    fn blocks_cover_the_tail() {
        assert_eq!(tail_blocks(10, 4, 2), vec![4..7, 7..10]);
        assert_eq!(tail_blocks(5, 4, 2), vec![4..5]);
        assert_eq!(tail_blocks(10, 0, 3), vec![0..3, 3..6, 6..10]);
    }

    #[test]
    fn constant_and_alternating() {
        let g = grid();
        let constant = SetTrajectory::new(&g, vec![vec![p(1)]; 10]).unwrap();
        assert_eq!(tail_limsup(&constant, 5).unwrap(), vec![p(1)]);
        assert_eq!(ziezold_limcsup(&constant, 5).unwrap(), vec![p(1)]);
        assert_eq!(tail_liminf(&constant, 5).unwrap(), vec![p(1)]);
        for eps in [0.0, 0.5, 3.0] {
            assert!(kuratowski_limsup(&constant, eps, 5, 2).unwrap().points.contains(&p(1)));
        }

        let alternating: Vec<Vec<PointId>> =
            (0..20).map(|n| vec![if n % 2 == 0 { p(1) } else { p(2) }]).collect();
        let alt = SetTrajectory::new(&g, alternating).unwrap();
        assert_eq!(tail_limsup(&alt, 10).unwrap(), vec![p(1), p(2)]);
        assert_eq!(ziezold_limcsup(&alt, 10).unwrap(), vec![p(1), p(2)]);
        assert!(tail_liminf(&alt, 10).unwrap().is_empty());
    }

    #[test]
    fn diverging_windows_visit_each_point_at_most_twice() {
        // A_n = {n - 1, n + 1} on the integers 0..=N+1.
        let n_max = 200;
        let g = GridSpace::new(0, n_max as i64 + 1, 1).unwrap();
        let sets = (1..=n_max).map(|n| vec![p(n - 1), p(n + 1)]).collect();
        let traj = SetTrajectory::new(&g, sets).unwrap();
        let b = default_burn_in(traj.len());
        assert!(kuratowski_limsup(&traj, 0.5, b, 3).unwrap().points.is_empty());
        assert!(tail_limsup_with(&traj, b, 4).unwrap().is_empty());
        assert!(ziezold_limcsup_with(&traj, b, 4).unwrap().is_empty());
    }

    #[test]
    fn empty_sets_never_count() {
        let g = grid();
        let traj = SetTrajectory::new(&g, vec![vec![]; 6]).unwrap();
        let est = kuratowski_limsup(&traj, 100.0, 0, 1).unwrap();
        assert!(est.points.is_empty());
        assert!(tail_limsup(&traj, 0).unwrap().is_empty());
    }

    #[test]
    fn guards() {
        let g = grid();
        assert!(SetTrajectory::<GridSpace>::new(&g, vec![]).is_err());
        assert!(SetTrajectory::new(&g, vec![vec![p(99)]]).is_err());
        let traj = SetTrajectory::new(&g, vec![vec![p(0)]; 3]).unwrap();
        assert!(tail_limsup(&traj, 3).is_err());
        assert!(kuratowski_limsup(&traj, -1.0, 0, 1).is_err());
        assert!(kuratowski_limsup(&traj, 1.0, 0, 0).is_err());
    }

    #[test]
    fn inclusion() {
        let g = grid();
        assert!(inclusion_check(&g, &[], &[p(3)]).included);
        assert!(inclusion_check(&g, &[p(1)], &[p(1), p(2)]).included);
        let r = inclusion_check(&g, &[p(1), p(7)], &[p(2), p(1)]);
        assert!(!r.included);
        assert_eq!(r.violations, vec![(p(7), 5.0)]);
        let r = inclusion_check(&g, &[p(1)], &[]);
        assert_eq!(r.violations, vec![(p(1), f64::INFINITY)]);
    }

    #[test]
    fn pseudo_metric_closure_adds_twins() {
        #[rustfmt::skip]
        let m = MatrixSpace::from_integer(3, vec![
            0, 0, 1,
            0, 0, 1,
            1, 1, 0,
        ], true).unwrap();
        let traj = SetTrajectory::new(&m, vec![vec![p(0)]; 4]).unwrap();
        assert_eq!(tail_limsup(&traj, 0).unwrap(), vec![p(0)]);
        assert_eq!(ziezold_limcsup(&traj, 0).unwrap(), vec![p(0), p(1)]);
        assert_eq!(kuratowski_limsup(&traj, 0.0, 0, 1).unwrap().points, vec![p(0), p(1)]);
    }
}
