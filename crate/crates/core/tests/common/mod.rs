//! Independent oracles for the integration tests.
//!
//! Nothing here goes through the library's integer kernels: distances come
//! from edge sets or grid coordinates and functionals are summed in
//! `BigRational`.

#![allow(dead_code)]

use std::collections::BTreeSet;

use frechet::graph::HammingSpace;
use frechet::metric::{GridSpace, MetricSpace, PointId};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type Exact = BigRational;

pub fn int(v: i64) -> Exact {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Exact {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact distance oracle over the points of a space.
pub trait Oracle {
    fn size(&self) -> usize;
    fn dist(&self, a: PointId, b: PointId) -> Exact;
}

/// Hamming distances from explicit edge sets.
pub struct EdgeSets(Vec<BTreeSet<(usize, usize)>>);

impl EdgeSets {
    pub fn new(space: &HammingSpace) -> Self {
        Self(
            frechet::metric::points(space)
                .map(|p| space.graph(p).edges().into_iter().collect())
                .collect(),
        )
    }
}

impl Oracle for EdgeSets {
    fn size(&self) -> usize {
        self.0.len()
    }
    fn dist(&self, a: PointId, b: PointId) -> Exact {
        int(self.0[a.0].symmetric_difference(&self.0[b.0]).count() as i64)
    }
}

/// Grid distances from the coordinates `k / q`.
pub struct GridCoords {
    units: Vec<i64>,
    q: i64,
}

impl GridCoords {
    pub fn new(grid: &GridSpace) -> Self {
        Self {
            units: frechet::metric::points(grid).map(|p| grid.units(p)).collect(),
            q: grid.denominator() as i64,
        }
    }
}

impl Oracle for GridCoords {
    fn size(&self) -> usize {
        self.units.len()
    }
    fn dist(&self, a: PointId, b: PointId) -> Exact {
        ratio((self.units[a.0] - self.units[b.0]).abs(), self.q)
    }
}

/// An integer distance matrix.
pub struct Table {
    pub n: usize,
    pub entries: Vec<u64>,
}

impl Oracle for Table {
    fn size(&self) -> usize {
        self.n
    }
    fn dist(&self, a: PointId, b: PointId) -> Exact {
        int(self.entries[a.0 * self.n + b.0] as i64)
    }
}

pub fn pow(x: &Exact, r: u32) -> Exact {
    (0..r).fold(Exact::one(), |acc, _| acc * x)
}

/// `(1/n) Σ d(X_i, x)^r` with the sample given as a list (repeats allowed).
pub fn functional(o: &dyn Oracle, sample: &[PointId], x: PointId, r: u32) -> Exact {
    let sum = sample.iter().fold(Exact::zero(), |acc, &xi| acc + pow(&o.dist(xi, x), r));
    sum / int(sample.len() as i64)
}

/// `Σ w_i d(x_i, x)^r` for rational weights.
pub fn population_functional(o: &dyn Oracle, mu: &[(PointId, Exact)], x: PointId, r: u32) -> Exact {
    mu.iter().fold(Exact::zero(), |acc, (xi, w)| acc + w * pow(&o.dist(*xi, x), r))
}

/// Minimum and sorted minimizers of `f` over `candidates`.
pub fn argmin(candidates: impl IntoIterator<Item = PointId>, f: impl Fn(PointId) -> Exact) -> (Exact, Vec<PointId>) {
    let mut best: Option<Exact> = None;
    let mut set = Vec::new();
    for c in candidates {
        let v = f(c);
        match &best {
            Some(b) if v > *b => {}
            Some(b) if v == *b => set.push(c),
            _ => {
                best = Some(v);
                set = vec![c];
            }
        }
    }
    set.sort();
    (best.expect("non-empty candidates"), set)
}

pub fn sample_mean(o: &dyn Oracle, sample: &[PointId], r: u32) -> (Exact, Vec<PointId>) {
    argmin((0..o.size()).map(PointId), |x| functional(o, sample, x, r))
}

pub fn restricted_sample_mean(o: &dyn Oracle, sample: &[PointId], r: u32) -> (Exact, Vec<PointId>) {
    let distinct: BTreeSet<PointId> = sample.iter().copied().collect();
    argmin(distinct, |x| functional(o, sample, x, r))
}

/// `C(n, k) / 2^n` computed with big integers.
pub fn binomial_probability(n: u64, k: u64) -> f64 {
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    let p = BigRational::new(BigInt::from(c), BigInt::from(BigUint::one() << n as usize));
    p.to_f64().unwrap()
}

/// `sup_z sup_{d(x,y) < δ} |d(z,x)^r - d(z,y)^r|` by enumerating triples.
pub fn modulus(o: &dyn Oracle, support: &[PointId], delta: &Exact, r: u32) -> Exact {
    let mut best = Exact::zero();
    for &x in support {
        for &y in support {
            if o.dist(x, y) >= *delta {
                continue;
            }
            for &z in support {
                let diff = pow(&o.dist(z, x), r) - pow(&o.dist(z, y), r);
                let diff = if diff < Exact::zero() { -diff } else { diff };
                if diff > best {
                    best = diff;
                }
            }
        }
    }
    best
}

/// Point of `space` for an `nv:bits` line.
pub fn graph_point(space: &HammingSpace, line: &str) -> PointId {
    space.point_of(&frechet::graph::parse_graph(line).unwrap()).unwrap()
}

pub fn labels<S: MetricSpace + ?Sized>(space: &S, set: &[PointId]) -> Vec<String> {
    set.iter().map(|&p| space.label(p)).collect()
}
