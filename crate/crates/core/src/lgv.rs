//! The downward lattice-path graph `G_n` on the points of `T(n,3)`, path
//! vectors, determinant independence tests and vertex-disjoint routings.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{rank_of, Rational, RationalMatrix};
use crate::matroid::{GroundSet, LatticePoint, PointSet};
use crate::poly::{self, letter_name, Poly};
use crate::{Error, Result};

pub const SYMBOLIC_LIMIT: usize = 4;
pub const WEIGHT_MIN: u64 = 2;
pub const WEIGHT_MAX: u64 = 1 << 60;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum WeightMode {
    Random { seed: u64 },
    Symbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub side: Side,
}

#[derive(Clone, Debug)]
pub struct PathGraph {
    ground: GroundSet,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    weights: Option<Vec<BigInt>>,
}

/// Ground point of bottom vertex `label` (1-based, left to right).
pub fn bottom_vertex(n: usize, label: usize) -> LatticePoint {
    LatticePoint::new(vec![0, n - label, label - 1])
}

/// Left-to-right label of a bottom-row point.
pub fn bottom_label(p: &LatticePoint) -> Option<usize> {
    (p.coords()[0] == 0).then(|| p.coords()[2] + 1)
}

impl PathGraph {
    pub fn build(n: usize, mode: &WeightMode) -> Result<Self> {
        let ground = GroundSet::new(n, 3)?;
        let mut order: Vec<usize> = (0..ground.len()).filter(|&i| ground.point(i).coords()[0] > 0).collect();
        // rows from the top, then left to right
        order.sort_by_key(|&i| {
            let c = ground.point(i).coords();
            (std::cmp::Reverse(c[0]), c[2])
        });
        let mut edges = Vec::new();
        let mut out = vec![Vec::new(); ground.len()];
        for v in order {
            let c = ground.point(v).coords().to_vec();
            for (side, target) in [
                (Side::Left, vec![c[0] - 1, c[1] + 1, c[2]]),
                (Side::Right, vec![c[0] - 1, c[1], c[2] + 1]),
            ] {
                let to = ground.index_of(&LatticePoint::new(target)).expect("lower neighbour");
                out[v].push(edges.len());
                edges.push(Edge { from: v, to, side });
            }
        }
        let weights = match mode {
            WeightMode::Symbolic => None,
            WeightMode::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut seen = BTreeSet::new();
                let mut w = Vec::with_capacity(edges.len());
                while w.len() < edges.len() {
                    let x = rng.gen_range(WEIGHT_MIN..=WEIGHT_MAX);
                    if seen.insert(x) {
                        w.push(BigInt::from(x));
                    }
                }
                Some(w)
            }
        };
        Ok(PathGraph { ground, edges, out, weights })
    }

    pub fn n(&self) -> usize {
        self.ground.n()
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn is_symbolic(&self) -> bool {
        self.weights.is_none()
    }

    pub fn weights(&self) -> Option<&[BigInt]> {
        self.weights.as_deref()
    }

    pub fn edge_name(&self, e: usize) -> String {
        letter_name(e)
    }

    pub fn edge_between(&self, from: usize, to: usize) -> Option<usize> {
        self.out[from].iter().copied().find(|&e| self.edges[e].to == to)
    }

    fn vertex(&self, p: &LatticePoint) -> Result<usize> {
        self.ground.index_of(p).ok_or_else(|| Error::PointOutsideGround(p.0.clone()))
    }

    /// Vertices ordered by row from the bottom, then left to right.
    pub fn display_order(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.ground.len()).collect();
        v.sort_by_key(|&i| {
            let c = self.ground.point(i).coords();
            (c[0], c[2])
        });
        v
    }

    // Path vectors of all vertices, bottom rows first.
    fn all_vectors<T: Clone>(
        &self,
        zero: T,
        one: T,
        weight: &dyn Fn(usize) -> T,
        add: &dyn Fn(&T, &T) -> T,
        mul: &dyn Fn(&T, &T) -> T,
    ) -> Vec<Vec<T>> {
        let n = self.n();
        let mut vecs: Vec<Vec<T>> = vec![Vec::new(); self.ground.len()];
        for v in self.display_order() {
            let p = self.ground.point(v);
            let mut acc = vec![zero.clone(); n];
            if let Some(label) = bottom_label(p) {
                acc[label - 1] = one.clone();
            }
            for &e in &self.out[v] {
                let w = weight(e);
                let tail = &vecs[self.edges[e].to];
                for i in 0..n {
                    acc[i] = add(&acc[i], &mul(&w, &tail[i]));
                }
            }
            vecs[v] = acc;
        }
        vecs
    }

    /// Integer path vectors for every vertex, indexed like the ground set.
    pub fn integer_vectors(&self) -> Result<Vec<Vec<BigInt>>> {
        let w = self
            .weights
            .as_ref()
            .ok_or_else(|| Error::InvalidParameters("graph has symbolic weights".into()))?;
        Ok(self.all_vectors(BigInt::zero(), BigInt::one(), &|e| w[e].clone(), &|a, b| a + b, &|a, b| a * b))
    }

    /// Symbolic path vectors; edge `e` carries variable `e`.
    pub fn symbolic_vectors(&self) -> Vec<Vec<Poly>> {
        self.all_vectors(Poly::zero(), Poly::one(), &Poly::var, &|a, b| a + b, &|a, b| a * b)
    }

    pub fn path_vector(&self, d: &LatticePoint) -> Result<PathVector> {
        let v = self.vertex(d)?;
        Ok(match &self.weights {
            Some(_) => PathVector::Integer(self.integer_vectors()?.swap_remove(v)),
            None => PathVector::Symbolic(self.symbolic_vectors().swap_remove(v)),
        })
    }

    /// The `n x |T(n,3)|` path-vector matrix, columns in display order.
    pub fn matrix(&self) -> Result<(Vec<LatticePoint>, RationalMatrix)> {
        let vecs = self.integer_vectors()?;
        let order = self.display_order();
        let cols: Vec<Vec<Rational>> =
            order.iter().map(|&v| vecs[v].iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
        let pts = order.iter().map(|&v| self.ground.point(v).clone()).collect();
        Ok((pts, RationalMatrix::from_columns(self.n(), &cols)?))
    }

    /// Symbolic matrix rendered entrywise, columns in display order.
    pub fn symbolic_matrix(&self) -> Vec<(LatticePoint, Vec<String>)> {
        let vecs = self.symbolic_vectors();
        self.display_order()
            .into_iter()
            .map(|v| (self.ground.point(v).clone(), vecs[v].iter().map(Poly::to_string).collect()))
            .collect()
    }

    /// Linear independence of the path vectors of `dots`.
    pub fn independent(&self, dots: &PointSet) -> Result<bool> {
        if dots.d != 3 || dots.n != self.n() {
            return Err(Error::InvalidParameters(format!(
                "dots over T({},{}) on G_{}",
                dots.n,
                dots.d,
                self.n()
            )));
        }
        let idx = self.ground.indices(dots)?;
        if idx.len() > self.n() {
            return Ok(false);
        }
        match &self.weights {
            Some(_) => {
                let vecs = self.integer_vectors()?;
                let cols: Vec<Vec<Rational>> = idx
                    .iter()
                    .map(|&v| vecs[v].iter().map(|x| Rational::from_integer(x.clone())).collect())
                    .collect();
                Ok(rank_of(&RationalMatrix::from_columns(self.n(), &cols)?) == idx.len())
            }
            None => {
                if self.n() > SYMBOLIC_LIMIT {
                    return Err(Error::SymbolicTooLarge { n: self.n(), limit: SYMBOLIC_LIMIT });
                }
                let vecs = self.symbolic_vectors();
                let k = idx.len();
                // some k x k minor is a nonzero polynomial
                Ok((0..self.n()).combinations(k).any(|rows| {
                    let m: Vec<Vec<Poly>> =
                        rows.iter().map(|&r| idx.iter().map(|&v| vecs[v][r].clone()).collect()).collect();
                    !poly::det(&m).is_zero()
                }))
            }
        }
    }

    // Unit-capacity max flow on the vertex-split graph.
    fn max_flow(&self, sources: &[usize]) -> (usize, Vec<Vec<usize>>) {
        let nv = self.ground.len();
        let (s, t) = (2 * nv, 2 * nv + 1);
        let mut net = FlowNet::new(2 * nv + 2);
        for v in 0..nv {
            net.add(2 * v, 2 * v + 1);
        }
        for e in &self.edges {
            net.add(2 * e.from + 1, 2 * e.to);
        }
        for v in 0..nv {
            if bottom_label(self.ground.point(v)).is_some() {
                net.add(2 * v + 1, t);
            }
        }
        for &src in sources {
            net.add(s, 2 * src);
        }
        let value = net.run(s, t);
        let paths = if value == sources.len() {
            sources
                .iter()
                .map(|&src| {
                    let mut path = vec![src];
                    let mut v = src;
                    while bottom_label(self.ground.point(v)).is_none() {
                        v = self.out[v]
                            .iter()
                            .map(|&e| self.edges[e].to)
                            .find(|&w| net.flow_between(2 * v + 1, 2 * w))
                            .expect("flow leaves every saturated vertex");
                        path.push(v);
                    }
                    path
                })
                .collect()
        } else {
            Vec::new()
        };
        (value, paths)
    }

    /// Largest number of `sources` that can be routed disjointly to the bottom row.
    pub fn flow_rank(&self, sources: &PointSet) -> Result<usize> {
        Ok(self.max_flow(&self.ground.indices(sources)?).0)
    }

    pub fn routing_exists(&self, sources: &PointSet) -> Result<Option<Routing>> {
        let idx = self.ground.indices(sources)?;
        let (value, paths) = self.max_flow(&idx);
        if value < idx.len() {
            return Ok(None);
        }
        Ok(Some(Routing {
            n: self.n(),
            paths: paths
                .into_iter()
                .map(|p| p.into_iter().map(|v| self.ground.point(v).clone()).collect())
                .collect(),
        }))
    }
}

struct FlowNet {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i32>,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet { adj: vec![Vec::new(); nodes], to: Vec::new(), cap: Vec::new() }
    }

    fn add(&mut self, u: usize, v: usize) {
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(1);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    fn augment(&mut self, u: usize, t: usize, seen: &mut [bool]) -> bool {
        if u == t {
            return true;
        }
        seen[u] = true;
        for k in 0..self.adj[u].len() {
            let e = self.adj[u][k];
            let v = self.to[e];
            if self.cap[e] > 0 && !seen[v] && self.augment(v, t, seen) {
                self.cap[e] -= 1;
                self.cap[e ^ 1] += 1;
                return true;
            }
        }
        false
    }

    fn run(&mut self, s: usize, t: usize) -> usize {
        let mut value = 0;
        loop {
            let mut seen = vec![false; self.adj.len()];
            if !self.augment(s, t, &mut seen) {
                return value;
            }
            value += 1;
        }
    }

    fn flow_between(&self, u: usize, v: usize) -> bool {
        self.adj[u].iter().any(|&e| e % 2 == 0 && self.to[e] == v && self.cap[e] == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathVector {
    Integer(Vec<BigInt>),
    Symbolic(Vec<Poly>),
}

impl PathVector {
    pub fn render(&self) -> Vec<String> {
        match self {
            PathVector::Integer(v) => v.iter().map(BigInt::to_string).collect(),
            PathVector::Symbolic(v) => v.iter().map(Poly::to_string).collect(),
        }
    }
}

/// Vertex-disjoint downward paths, each listed from its source to the bottom row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Routing {
    pub n: usize,
    pub paths: Vec<Vec<LatticePoint>>,
}

impl Routing {
    pub fn sources(&self) -> Vec<LatticePoint> {
        self.paths.iter().map(|p| p[0].clone()).collect()
    }

    /// Checks edges, endpoints and disjointness against `G_n`.
    pub fn validate(&self) -> Result<()> {
        let g = GroundSet::new(self.n, 3)?;
        let mut used = BTreeSet::new();
        for path in &self.paths {
            let Some(last) = path.last() else {
                return Err(Error::MalformedRouting("empty path".into()));
            };
            for p in path {
                if g.index_of(p).is_none() {
                    return Err(Error::MalformedRouting(format!("{p} is not a vertex")));
                }
                if !used.insert(p.clone()) {
                    return Err(Error::MalformedRouting(format!("paths meet at {p}")));
                }
            }
            for w in path.windows(2) {
                let (a, b) = (w[0].coords(), w[1].coords());
                let step = a[0] == b[0] + 1
                    && ((b[1] == a[1] + 1 && b[2] == a[2]) || (b[1] == a[1] && b[2] == a[2] + 1));
                if !step {
                    return Err(Error::MalformedRouting(format!("{} -> {} is not an edge", w[0], w[1])));
                }
            }
            if bottom_label(last).is_none() {
                return Err(Error::MalformedRouting(format!("path ends at {last}, off the bottom row")));
            }
        }
        Ok(())
    }
}

/// Independence with three graphs of independent random weights; the
/// verdicts must agree.
pub fn lgv_independent_checked(n: usize, dots: &PointSet, seeds: [u64; 3]) -> Result<bool> {
    let mut verdicts = Vec::with_capacity(3);
    for seed in seeds {
        verdicts.push(PathGraph::build(n, &WeightMode::Random { seed })?.independent(dots)?);
    }
    if verdicts.iter().all_equal() {
        Ok(verdicts[0])
    } else {
        Err(Error::WeightCollision(dots.points.iter().map(|p| p.0.clone()).collect()))
    }
}

/// Three seeds derived from one.
pub fn seed_triple(seed: u64) -> [u64; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    [rng.gen(), rng.gen(), rng.gen()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::DEFAULT_ORACLE_BUDGET;

    fn ps(n: usize, pts: &[[usize; 3]]) -> PointSet {
        PointSet::new(n, 3, pts.iter().map(|p| LatticePoint::new(p.to_vec())).collect())
    }

    // Every downward path from each vertex, by explicit recursion.
    fn all_paths(g: &PathGraph, v: usize) -> Vec<Vec<usize>> {
        if g.out_edges(v).is_empty() {
            return vec![vec![v]];
        }
        g.out_edges(v)
            .iter()
            .flat_map(|&e| {
                all_paths(g, g.edges()[e].to).into_iter().map(move |mut p| {
                    p.insert(0, v);
                    p
                })
            })
            .collect()
    }

    fn path_weight(g: &PathGraph, path: &[usize]) -> Poly {
        path.windows(2).fold(Poly::one(), |acc, w| &acc * &Poly::var(g.edge_between(w[0], w[1]).unwrap()))
    }

    fn perm_sign(p: &[usize]) -> bool {
        let inv = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        inv % 2 == 1
    }

    #[test]
    fn graph_shape() {
        let g = PathGraph::build(1, &WeightMode::Symbolic).unwrap();
        assert_eq!((g.ground().len(), g.edges().len()), (1, 0));
        let g = PathGraph::build(4, &WeightMode::Random { seed: 3 }).unwrap();
        assert_eq!((g.ground().len(), g.edges().len()), (10, 12));
        let w = g.weights().unwrap();
        assert!(w.iter().all(|x| *x >= BigInt::from(WEIGHT_MIN) && *x <= BigInt::from(WEIGHT_MAX)));
        assert!(w.iter().all_unique());
    }

    #[test]
    fn edge_names_for_g4() {
        let g = PathGraph::build(4, &WeightMode::Symbolic).unwrap();
        let top = g.path_vector(&LatticePoint::new(vec![3, 0, 0])).unwrap();
        assert_eq!(top.render(), vec!["acg", "ach+adi+bei", "adj+bej+bfk", "bfl"]);
    }

    #[test]
    fn t33_representation() {
        let g = PathGraph::build(3, &WeightMode::Symbolic).unwrap();
        let cols: Vec<Vec<String>> = g.symbolic_matrix().into_iter().map(|(_, c)| c).collect();
        let expected = [
            ["1", "0", "0"],
            ["0", "1", "0"],
            ["0", "0", "1"],
            ["c", "d", "0"],
            ["0", "e", "f"],
            ["ac", "ad+be", "bf"],
        ];
        assert_eq!(cols, expected.map(|c| c.map(String::from).to_vec()).to_vec());
    }

    #[test]
    fn bottom_vertices_are_unit_vectors() {
        let g = PathGraph::build(4, &WeightMode::Random { seed: 1 }).unwrap();
        for label in 1..=4 {
            let PathVector::Integer(v) = g.path_vector(&bottom_vertex(4, label)).unwrap() else { panic!() };
            for (i, x) in v.iter().enumerate() {
                assert_eq!(*x, BigInt::from((i + 1 == label) as u8));
            }
        }
    }

    #[test]
    fn independence_examples() {
        for mode in [WeightMode::Symbolic, WeightMode::Random { seed: 5 }] {
            let g = PathGraph::build(3, &mode).unwrap();
            assert!(g.independent(&ps(3, &[[0, 2, 0], [0, 1, 1], [0, 0, 2]])).unwrap());
            assert!(!g.independent(&ps(3, &[[2, 0, 0], [1, 1, 0], [1, 0, 1]])).unwrap());
        }
        assert!(lgv_independent_checked(3, &ps(3, &[[2, 0, 0], [0, 2, 0], [0, 0, 2]]), seed_triple(1)).unwrap());
        let big = PathGraph::build(5, &WeightMode::Symbolic).unwrap();
        assert!(matches!(
            big.independent(&ps(5, &[[4, 0, 0]])),
            Err(Error::SymbolicTooLarge { n: 5, limit: 4 })
        ));
    }

    #[test]
    fn routing_examples() {
        let g = PathGraph::build(3, &WeightMode::Symbolic).unwrap();
        let r = g.routing_exists(&ps(3, &[[0, 2, 0], [0, 1, 1], [0, 0, 2]])).unwrap().unwrap();
        assert!(r.paths.iter().all(|p| p.len() == 1));
        assert!(g.routing_exists(&ps(3, &[[2, 0, 0], [1, 1, 0], [1, 0, 1]])).unwrap().is_none());
        assert_eq!(g.flow_rank(&ps(3, &[[2, 0, 0], [1, 1, 0], [1, 0, 1]])).unwrap(), 2);
    }

    #[test]
    fn every_t43_basis_routes() {
        let g = PathGraph::build(4, &WeightMode::Symbolic).unwrap();
        for b in g.ground().bases(DEFAULT_ORACLE_BUDGET) {
            let set = g.ground().point_set(&b.unwrap());
            let r = g.routing_exists(&set).unwrap().expect("basis admits a routing");
            r.validate().unwrap();
            assert_eq!(r.sources(), set.points);
        }
    }

    #[test]
    fn oracle_agreement_t43() {
        let g = PathGraph::build(4, &WeightMode::Random { seed: 17 }).unwrap();
        let ground = g.ground().clone();
        for k in 0..=4 {
            for s in (0..ground.len()).combinations(k) {
                let set = ground.point_set(&s);
                let ind = ground.is_independent(&s);
                assert_eq!(g.independent(&set).unwrap(), ind);
                assert_eq!(g.flow_rank(&set).unwrap(), ground.rank(&s));
                assert_eq!(g.routing_exists(&set).unwrap().is_some(), ind);
            }
        }
    }

    #[test]
    fn determinants_are_signed_routing_sums() {
        let g = PathGraph::build(3, &WeightMode::Symbolic).unwrap();
        let vecs = g.symbolic_vectors();
        let paths: Vec<Vec<Vec<usize>>> = (0..g.ground().len()).map(|v| all_paths(&g, v)).collect();
        for s in (0..g.ground().len()).combinations(3) {
            let m: Vec<Vec<Poly>> = (0..3).map(|r| s.iter().map(|&v| vecs[v][r].clone()).collect()).collect();
            let det = poly::det(&m);
            let mut signed = Poly::zero();
            for choice in s.iter().map(|&v| paths[v].iter()).multi_cartesian_product() {
                let verts: Vec<usize> = choice.iter().flat_map(|p| p.iter().copied()).collect();
                if !verts.iter().all_unique() {
                    continue;
                }
                let ends: Vec<usize> =
                    choice.iter().map(|p| bottom_label(g.ground().point(*p.last().unwrap())).unwrap()).collect();
                let w = choice.iter().fold(Poly::one(), |acc, p| &acc * &path_weight(&g, p));
                signed = if perm_sign(&ends) { &signed - &w } else { &signed + &w };
            }
            assert_eq!(det, signed, "columns {s:?}");
        }
    }

    #[test]
    fn malformed_routings_rejected() {
        let bad = Routing { n: 3, paths: vec![vec![LatticePoint::new(vec![2, 0, 0])]] };
        assert!(bad.validate().is_err());
        let jump = Routing {
            n: 3,
            paths: vec![vec![LatticePoint::new(vec![2, 0, 0]), LatticePoint::new(vec![0, 2, 0])]],
        };
        assert!(jump.validate().is_err());
    }
}
