//! The matroid `T(n,d)` on the lattice points of the `(d-1)`-simplex of size `n`.
//!
//! Ground elements are `d`-tuples of nonnegative integers summing to `n - 1`.
//! A set is independent when every sub-simplex of size `k` (a parallel
//! translate `T_{a_1..a_d}`, the points `x` with `x_i >= a_i`) holds at most
//! `k` of its points.

mod setsystem;

pub use setsystem::{
    all_blocks, dilworth_is_basis, dilworth_is_independent, hm_circuits, hm_dilworth_duality,
    hm_is_basis, hm_is_independent, hm_rank, DualityReport, SetSystem,
};

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::util::{binomial, compositions};
use crate::{Error, Result};

pub const DEFAULT_GROUND_LIMIT: usize = 10_000;
pub const DEFAULT_ORACLE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<usize>);

impl LatticePoint {
    pub fn new(coords: impl Into<Vec<usize>>) -> Self {
        LatticePoint(coords.into())
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    /// True when every coordinate is at least the matching anchor coordinate.
    pub fn dominates(&self, anchor: &[usize]) -> bool {
        self.0.iter().zip(anchor).all(|(x, a)| x >= a)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<&[usize]> for LatticePoint {
    fn from(c: &[usize]) -> Self {
        LatticePoint(c.to_vec())
    }
}

/// A parallel translate of `T(size, d)` inside `T(n, d)`, where
/// `n = size + sum(anchor)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SubSimplex {
    pub anchor: Vec<usize>,
    pub size: usize,
}

impl SubSimplex {
    pub fn new(anchor: impl Into<Vec<usize>>, size: usize) -> Self {
        SubSimplex { anchor: anchor.into(), size }
    }

    /// Size of the ambient simplex this one lives in.
    pub fn ambient_n(&self) -> usize {
        self.size + self.anchor.iter().sum::<usize>()
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        p.dim() == self.anchor.len() && p.dominates(&self.anchor)
    }

    /// Ground indices of the points inside this simplex.
    pub fn points(&self, ground: &GroundSet) -> Vec<usize> {
        (0..ground.len()).filter(|&i| self.contains(&ground.points[i])).collect()
    }

    pub fn count_in(&self, ground: &GroundSet, set: &[usize]) -> usize {
        set.iter().filter(|&&i| self.contains(&ground.points[i])).count()
    }
}

impl fmt::Display for SubSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{} of size {}", LatticePoint(self.anchor.clone()), self.size)
    }
}

/// Wire form of a point set: `{"n":4,"d":3,"points":[[3,0,0],[2,1,0]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    pub n: usize,
    pub d: usize,
    pub points: Vec<LatticePoint>,
}

impl PointSet {
    pub fn new(n: usize, d: usize, points: Vec<LatticePoint>) -> Self {
        PointSet { n, d, points }
    }

    pub fn from_coords(n: usize, d: usize, coords: &[&[usize]]) -> Self {
        PointSet::new(n, d, coords.iter().map(|c| LatticePoint::from(*c)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// All lattice points of `T(n,d)` in lexicographic order, with the
/// sub-simplex anchors grouped by size.
#[derive(Clone, Debug)]
pub struct GroundSet {
    n: usize,
    d: usize,
    pub points: Vec<LatticePoint>,
    index: HashMap<LatticePoint, usize>,
    // anchors[k] = anchors of the size-k sub-simplices, lexicographic
    anchors: Vec<Vec<Vec<usize>>>,
}

impl GroundSet {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        Self::with_limit(n, d, DEFAULT_GROUND_LIMIT)
    }

    pub fn with_limit(n: usize, d: usize, limit: usize) -> Result<Self> {
        if n < 1 || d < 2 {
            return Err(Error::InvalidParameters(format!(
                "need n >= 1 and d >= 2, got n = {n}, d = {d}"
            )));
        }
        let size = binomial(n + d - 2, d - 1);
        if size > limit as u128 {
            return Err(Error::GroundTooLarge { size: size.min(usize::MAX as u128) as usize, limit });
        }
        let points: Vec<LatticePoint> =
            compositions(n - 1, d).into_iter().map(LatticePoint).collect();
        let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let anchors = (0..=n).map(|k| compositions(n - k, d)).collect();
        Ok(GroundSet { n, d, points, index, anchors })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &LatticePoint {
        &self.points[i]
    }

    pub fn index_of(&self, p: &LatticePoint) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Anchors of all size-`k` sub-simplices, in lexicographic order.
    pub fn anchors(&self, k: usize) -> &[Vec<usize>] {
        &self.anchors[k]
    }

    pub fn whole(&self) -> SubSimplex {
        SubSimplex::new(vec![0; self.d], self.n)
    }

    /// Resolves a point set to sorted ground indices, rejecting foreign or
    /// repeated points.
    pub fn indices(&self, set: &PointSet) -> Result<Vec<usize>> {
        if set.n != self.n || set.d != self.d {
            return Err(Error::InvalidParameters(format!(
                "point set is over T({},{}), ground is T({},{})",
                set.n, set.d, self.n, self.d
            )));
        }
        self.indices_of(&set.points)
    }

    pub fn indices_of(&self, points: &[LatticePoint]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(points.len());
        for p in points {
            let i = self.index_of(p).ok_or_else(|| Error::PointOutsideGround(p.0.clone()))?;
            out.push(i);
        }
        out.sort_unstable();
        for w in out.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicatePoint(self.points[w[0]].0.clone()));
            }
        }
        Ok(out)
    }

    pub fn point_set(&self, set: &[usize]) -> PointSet {
        PointSet::new(self.n, self.d, set.iter().map(|&i| self.points[i].clone()).collect())
    }

    /// The canonical overfull simplex for `set`: smallest size first, then
    /// the lexicographically least anchor.
    ///
    /// A size-`k` simplex can only be overfull when `k < |set|`, so larger
    /// sizes are never scanned.
    pub fn find_violation(&self, set: &[usize]) -> Option<SubSimplex> {
        let max_k = self.n.min(set.len().saturating_sub(1));
        for k in 1..=max_k {
            for anchor in &self.anchors[k] {
                let count = set.iter().filter(|&&i| self.points[i].dominates(anchor)).count();
                if count > k {
                    return Some(SubSimplex::new(anchor.clone(), k));
                }
            }
        }
        None
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        self.find_violation(set).is_none()
    }

    /// Whether `set + e` stays independent, assuming `set` already is.
    /// Only simplices containing `e` can become overfull.
    pub fn can_extend(&self, set: &[usize], e: usize) -> bool {
        let p = &self.points[e];
        let max_k = self.n.min(set.len());
        for k in 1..=max_k {
            for anchor in &self.anchors[k] {
                if !p.dominates(anchor) {
                    continue;
                }
                let count = set.iter().filter(|&&i| self.points[i].dominates(anchor)).count();
                if count + 1 > k {
                    return false;
                }
            }
        }
        true
    }

    /// Matroid rank by greedy in canonical order.
    pub fn rank(&self, set: &[usize]) -> usize {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut basis: Vec<usize> = Vec::new();
        for e in sorted {
            if basis.len() == self.n {
                break;
            }
            if self.can_extend(&basis, e) {
                basis.push(e);
            }
        }
        basis.len()
    }

    /// A maximum independent subset of `set`, chosen greedily in canonical order.
    pub fn max_independent(&self, set: &[usize]) -> Vec<usize> {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut basis: Vec<usize> = Vec::new();
        for e in sorted {
            if basis.len() < self.n && self.can_extend(&basis, e) {
                basis.push(e);
            }
        }
        basis
    }

    pub fn is_basis(&self, set: &[usize]) -> bool {
        set.len() == self.n && self.is_independent(set)
    }

    /// Depth-first basis enumeration in canonical order. `budget` caps the
    /// number of oracle calls; the iterator yields an error once and stops
    /// when it runs out.
    pub fn bases(&self, budget: u64) -> Bases<'_> {
        Bases::new(self, 0..self.len(), budget, Arc::new(AtomicU64::new(0)))
    }

    /// Basis enumeration split across `threads` workers by first element.
    /// Output order matches [`GroundSet::bases`].
    pub fn bases_parallel(&self, budget: u64, threads: usize) -> Result<Vec<Vec<usize>>> {
        let calls = Arc::new(AtomicU64::new(0));
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| Error::InvalidParameters(e.to_string()))?;
        let chunks: Vec<Result<Vec<Vec<usize>>>> = pool.install(|| {
            (0..self.len())
                .into_par_iter()
                .map(|first| Bases::new(self, first..first + 1, budget, calls.clone()).collect())
                .collect()
        });
        let mut out = Vec::new();
        for chunk in chunks {
            out.extend(chunk?);
        }
        Ok(out)
    }
}

pub struct Bases<'a> {
    ground: &'a GroundSet,
    first: std::ops::Range<usize>,
    chosen: Vec<usize>,
    cursor: usize,
    backtrack: bool,
    calls: Arc<AtomicU64>,
    budget: u64,
    done: bool,
}

impl<'a> Bases<'a> {
    fn new(
        ground: &'a GroundSet,
        first: std::ops::Range<usize>,
        budget: u64,
        calls: Arc<AtomicU64>,
    ) -> Self {
        let cursor = first.start;
        Bases { ground, first, chosen: Vec::new(), cursor, backtrack: false, calls, budget, done: false }
    }

    fn pop(&mut self) -> bool {
        match self.chosen.pop() {
            Some(last) => {
                self.cursor = last + 1;
                true
            }
            None => false,
        }
    }
}

impl Iterator for Bases<'_> {
    type Item = Result<Vec<usize>>;

    fn next(&mut self) -> Option<Self::Item> {
        let n = self.ground.n;
        let total = self.ground.len();
        if self.done {
            return None;
        }
        if self.backtrack {
            self.backtrack = false;
            if !self.pop() {
                self.done = true;
                return None;
            }
        }
        loop {
            let limit = if self.chosen.is_empty() { self.first.end.min(total) } else { total };
            if self.cursor >= limit || self.cursor + (n - self.chosen.len()) > total {
                if !self.pop() {
                    self.done = true;
                    return None;
                }
                continue;
            }
            let calls = self.calls.fetch_add(1, Ordering::Relaxed) + 1;
            if calls > self.budget {
                self.done = true;
                return Some(Err(Error::BudgetExceeded {
                    what: "enumerating bases".into(),
                    budget: self.budget,
                }));
            }
            let e = self.cursor;
            if self.ground.can_extend(&self.chosen, e) {
                self.chosen.push(e);
                self.cursor = e + 1;
                if self.chosen.len() == n {
                    self.backtrack = true;
                    return Some(Ok(self.chosen.clone()));
                }
            } else {
                self.cursor += 1;
            }
        }
    }
}

pub fn enumerate_ground(n: usize, d: usize) -> Result<GroundSet> {
    GroundSet::new(n, d)
}

pub fn is_independent(ground: &GroundSet, set: &PointSet) -> Result<bool> {
    Ok(ground.is_independent(&ground.indices(set)?))
}

pub fn find_violation(ground: &GroundSet, set: &PointSet) -> Result<Option<SubSimplex>> {
    Ok(ground.find_violation(&ground.indices(set)?))
}

pub fn rank(ground: &GroundSet, set: &PointSet) -> Result<usize> {
    Ok(ground.rank(&ground.indices(set)?))
}

pub fn is_basis(ground: &GroundSet, set: &PointSet) -> Result<bool> {
    Ok(ground.is_basis(&ground.indices(set)?))
}

pub fn enumerate_bases(ground: &GroundSet, budget: u64) -> Result<Vec<PointSet>> {
    ground.bases(budget).map(|b| b.map(|b| ground.point_set(&b))).collect()
}

/// Meet (coordinatewise max anchor) and join (coordinatewise min anchor) of
/// two sub-simplices of the same `T(n,d)`.
pub fn meet_join(a: &SubSimplex, b: &SubSimplex) -> Result<(SubSimplex, SubSimplex)> {
    if a.anchor.len() != b.anchor.len() || a.ambient_n() != b.ambient_n() {
        return Err(Error::InvalidParameters(format!(
            "{a} and {b} live in different ground sets"
        )));
    }
    let n = a.ambient_n() as i64;
    let hi: Vec<usize> = a.anchor.iter().zip(&b.anchor).map(|(x, y)| *x.max(y)).collect();
    let lo: Vec<usize> = a.anchor.iter().zip(&b.anchor).map(|(x, y)| *x.min(y)).collect();
    let meet_size = n - hi.iter().sum::<usize>() as i64;
    if meet_size < 0 {
        return Err(Error::DisjointSimplices { anchor: hi, size: meet_size });
    }
    let join_size = (n - lo.iter().sum::<usize>() as i64) as usize;
    Ok((SubSimplex::new(hi, meet_size as usize), SubSimplex::new(lo, join_size)))
}
