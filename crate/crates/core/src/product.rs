//! Triangulations of `Δ_{n-1} × Δ_{d-1}` encoded as collections of spanning
//! trees of `K_{n,d}`, regular triangulations from edge weights, pure
//! simplices and their locations, and the poset colourings they induce.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Sub};

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{format_rational, parse_rational, rat, Rational};
use crate::matroid::{GroundSet, LatticePoint, SubSimplex};
use crate::util::{binomial, compositions};
use crate::{Error, Result};

pub const DEFAULT_TREE_BUDGET: u64 = 1_000_000;
pub const WEIGHT_BOUND: u64 = 1 << 32;

/// Edge `(i, j)` joins `v_i` and `w_j`; both 1-based.
pub type BEdge = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BipartiteTree {
    pub n: usize,
    pub d: usize,
    pub edges: Vec<BEdge>,
}

impl BipartiteTree {
    /// Sorts and range-checks the edges; does not require a spanning tree.
    pub fn new(n: usize, d: usize, mut edges: Vec<BEdge>) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::MalformedTree(format!("K_{{{n},{d}}} has an empty side")));
        }
        if let Some(&(i, j)) = edges.iter().find(|&&(i, j)| i == 0 || i > n || j == 0 || j > d) {
            return Err(Error::MalformedTree(format!("edge ({i},{j}) outside K_{{{n},{d}}}")));
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedTree("repeated edge".into()));
        }
        Ok(BipartiteTree { n, d, edges })
    }

    /// A checked spanning tree.
    pub fn spanning(n: usize, d: usize, edges: Vec<BEdge>) -> Result<Self> {
        let t = Self::new(n, d, edges)?;
        if !t.is_spanning_tree() {
            return Err(Error::MalformedTree(format!("{t} is not a spanning tree")));
        }
        Ok(t)
    }

    pub fn is_spanning_tree(&self) -> bool {
        if self.edges.len() != self.n + self.d - 1 {
            return false;
        }
        let mut uf = UnionFind::new(self.n + self.d);
        self.edges.iter().all(|&(i, j)| uf.union(i - 1, self.n + j - 1))
    }

    pub fn contains(&self, e: BEdge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn deg_v(&self, i: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == i).count()
    }

    pub fn deg_w(&self, j: usize) -> usize {
        self.edges.iter().filter(|e| e.1 == j).count()
    }

    /// Edges whose endpoints both have degree at least two.
    pub fn internal_edges(&self) -> Vec<BEdge> {
        self.edges.iter().copied().filter(|&(i, j)| self.deg_v(i) > 1 && self.deg_w(j) > 1).collect()
    }

    pub fn without(&self, e: BEdge) -> Vec<BEdge> {
        self.edges.iter().copied().filter(|&f| f != e).collect()
    }

    /// `(deg w_1 - 1, ..., deg w_d - 1)`.
    pub fn location(&self) -> LatticePoint {
        LatticePoint::new((1..=self.d).map(|j| self.deg_w(j).saturating_sub(1)).collect::<Vec<_>>())
    }

    /// The `i` for which this tree is `i`-pure, if any.
    pub fn pure_index(&self) -> Option<usize> {
        let full: Vec<usize> = (1..=self.n).filter(|&i| self.deg_v(i) == self.d).collect();
        match full.as_slice() {
            [i] if (1..=self.n).all(|k| k == *i || self.deg_v(k) == 1) => Some(*i),
            _ if self.n == 1 && self.deg_v(1) == self.d => Some(1),
            _ => None,
        }
    }

    pub fn cayley_cell(&self) -> FineMixedCell {
        FineMixedCell {
            d: self.d,
            summands: (1..=self.n)
                .map(|i| self.edges.iter().filter(|e| e.0 == i).map(|e| e.1).collect())
                .collect(),
        }
    }
}

impl fmt::Display for BipartiteTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges.iter().map(|(i, j)| format!("{i}{j}")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// Minkowski cell `B_1 + ... + B_n`, summand `i` listing the `w` indices of `B_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FineMixedCell {
    pub d: usize,
    pub summands: Vec<Vec<usize>>,
}

impl FineMixedCell {
    pub fn dimension(&self) -> usize {
        self.summands.iter().map(|s| s.len().saturating_sub(1)).sum()
    }

    /// Summands written with `w1`, `w2`, ...
    pub fn render(&self) -> String {
        self.summands
            .iter()
            .map(|s| s.iter().map(|j| format!("w{j}")).collect::<String>())
            .collect::<Vec<_>>()
            .join("+")
    }

    /// Summands written with `A`, `B`, ... (for `d <= 26`).
    pub fn render_letters(&self) -> String {
        self.summands
            .iter()
            .map(|s| s.iter().map(|&j| (b'A' + (j - 1) as u8) as char).collect::<String>())
            .collect::<Vec<_>>()
            .join("+")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeCollection {
    pub n: usize,
    pub d: usize,
    pub trees: Vec<Vec<BEdge>>,
}

impl TreeCollection {
    pub fn from_trees(n: usize, d: usize, trees: &[BipartiteTree]) -> Self {
        TreeCollection { n, d, trees: trees.iter().map(|t| t.edges.clone()).collect() }
    }

    pub fn parse(&self) -> Result<Vec<BipartiteTree>> {
        let trees: Vec<BipartiteTree> =
            self.trees.iter().map(|e| BipartiteTree::new(self.n, self.d, e.clone())).collect::<Result<_>>()?;
        let distinct: BTreeSet<&BipartiteTree> = trees.iter().collect();
        if distinct.len() != trees.len() {
            return Err(Error::MalformedTree("repeated tree in collection".into()));
        }
        Ok(trees)
    }
}

/// All spanning trees of `K_{n,d}` in lexicographic order of their edge lists.
pub fn enumerate_spanning_trees(n: usize, d: usize, budget: u64) -> Result<Vec<BipartiteTree>> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameters(format!("need n, d >= 1, got n = {n}, d = {d}")));
    }
    let count = (n as u128).pow(d as u32 - 1) * (d as u128).pow(n as u32 - 1);
    if count > budget as u128 {
        return Err(Error::BudgetExceeded { what: "enumerating spanning trees".into(), budget });
    }
    let all: Vec<BEdge> = (1..=n).flat_map(|i| (1..=d).map(move |j| (i, j))).collect();
    let need = n + d - 1;
    let mut out = Vec::with_capacity(count as usize);
    fn go(
        all: &[BEdge],
        start: usize,
        need: usize,
        n: usize,
        d: usize,
        chosen: &mut Vec<BEdge>,
        parent: &[usize],
        out: &mut Vec<BipartiteTree>,
    ) {
        if chosen.len() == need {
            out.push(BipartiteTree { n, d, edges: chosen.clone() });
            return;
        }
        if all.len() - start < need - chosen.len() {
            return;
        }
        for k in start..all.len() {
            if all.len() - k < need - chosen.len() {
                break;
            }
            let (i, j) = all[k];
            let mut uf = UnionFind(parent.to_vec());
            if uf.union(i - 1, n + j - 1) {
                chosen.push((i, j));
                go(all, k + 1, need, n, d, chosen, &uf.0, out);
                chosen.pop();
            }
        }
    }
    let parent: Vec<usize> = (0..n + d).collect();
    go(&all, 0, need, n, d, &mut Vec::new(), &parent, &mut out);
    Ok(out)
}

/// `n × d` edge weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMatrix {
    pub n: usize,
    pub d: usize,
    pub w: Vec<Vec<Rational>>,
}

impl WeightMatrix {
    pub fn new(w: Vec<Vec<Rational>>) -> Result<Self> {
        let n = w.len();
        let d = w.first().map_or(0, Vec::len);
        if n == 0 || d == 0 || w.iter().any(|r| r.len() != d) {
            return Err(Error::MalformedMatrix("weights must be a nonempty n x d table".into()));
        }
        Ok(WeightMatrix { n, d, w })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()).expect("rectangular")
    }

    pub fn zero(n: usize, d: usize) -> Self {
        WeightMatrix { n, d, w: vec![vec![Rational::zero(); d]; n] }
    }

    /// Distinct integers in `[0, 2^32)`.
    pub fn random<R: Rng>(n: usize, d: usize, rng: &mut R) -> Self {
        let mut seen = BTreeSet::new();
        let mut w = vec![vec![Rational::zero(); d]; n];
        for row in w.iter_mut() {
            for x in row.iter_mut() {
                let v = loop {
                    let v = rng.gen_range(0..WEIGHT_BOUND);
                    if seen.insert(v) {
                        break v;
                    }
                };
                *x = Rational::from_integer(v.into());
            }
        }
        WeightMatrix { n, d, w }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.w[i - 1][j - 1]
    }

    fn as_i128(&self) -> Option<Vec<Vec<i128>>> {
        self.w
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| if x.is_integer() { x.numer().to_i64().map(i128::from) } else { None })
                    .collect()
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct WeightWire {
    n: usize,
    d: usize,
    w: Vec<Vec<String>>,
}

impl Serialize for WeightMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WeightWire {
            n: self.n,
            d: self.d,
            w: self.w.iter().map(|r| r.iter().map(format_rational).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = WeightWire::deserialize(d)?;
        let rows = wire
            .w
            .iter()
            .map(|r| r.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let m = WeightMatrix::new(rows).map_err(D::Error::custom)?;
        if m.n != wire.n || m.d != wire.d {
            return Err(D::Error::custom("weight table shape differs from n, d"));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Tightness<T> {
    /// Every non-tree edge strictly slack.
    Tight { u: Vec<T>, v: Vec<T> },
    /// Dominating, but some non-tree edge is also tight.
    NonGeneric { u: Vec<T>, v: Vec<T>, edge: BEdge },
    NotTight { edge: BEdge },
}

impl<T> Tightness<T> {
    pub fn is_tight(&self) -> bool {
        matches!(self, Tightness::Tight { .. })
    }
}

fn tightness<T>(t: &BipartiteTree, w: &[Vec<T>]) -> Tightness<T>
where
    T: Clone + Ord + Zero + Add<Output = T> + Sub<Output = T>,
{
    let (n, d) = (t.n, t.d);
    let mut u: Vec<Option<T>> = vec![None; n];
    let mut v: Vec<Option<T>> = vec![None; d];
    u[0] = Some(T::zero());
    let mut changed = true;
    while changed {
        changed = false;
        for &(i, j) in &t.edges {
            let wij = w[i - 1][j - 1].clone();
            match (&u[i - 1], &v[j - 1]) {
                (Some(ui), None) => {
                    v[j - 1] = Some(wij - ui.clone());
                    changed = true;
                }
                (None, Some(vj)) => {
                    u[i - 1] = Some(wij - vj.clone());
                    changed = true;
                }
                _ => {}
            }
        }
    }
    let u: Vec<T> = u.into_iter().map(|x| x.expect("spanning tree reaches every vertex")).collect();
    let v: Vec<T> = v.into_iter().map(|x| x.expect("spanning tree reaches every vertex")).collect();
    let mut flagged = None;
    for i in 1..=n {
        for j in 1..=d {
            if t.contains((i, j)) {
                continue;
            }
            let slack = u[i - 1].clone() + v[j - 1].clone() - w[i - 1][j - 1].clone();
            if slack < T::zero() {
                return Tightness::NotTight { edge: (i, j) };
            }
            if slack.is_zero() && flagged.is_none() {
                flagged = Some((i, j));
            }
        }
    }
    match flagged {
        Some(edge) => Tightness::NonGeneric { u, v, edge },
        None => Tightness::Tight { u, v },
    }
}

/// Vertex weights with `u_1 = 0` making every tree edge tight, checked
/// against `u_i + v_j >= w_ij` on the remaining edges.
pub fn tight_weighting(t: &BipartiteTree, w: &WeightMatrix) -> Result<Tightness<Rational>> {
    if !t.is_spanning_tree() {
        return Err(Error::MalformedTree(format!("{t} is not a spanning tree")));
    }
    if (t.n, t.d) != (w.n, w.d) {
        return Err(Error::InvalidParameters("tree and weights have different shapes".into()));
    }
    Ok(tightness(t, &w.w))
}

fn tight_trees(trees: &[BipartiteTree], w: &WeightMatrix) -> (Vec<usize>, Option<BEdge>) {
    let mut keep = Vec::new();
    let mut flagged = None;
    let mut record = |k: usize, tight: bool, edge: Option<BEdge>| {
        if tight {
            keep.push(k);
        }
        if flagged.is_none() {
            flagged = edge;
        }
    };
    match w.as_i128() {
        Some(wi) => {
            for (k, t) in trees.iter().enumerate() {
                match tightness(t, &wi) {
                    Tightness::Tight { .. } => record(k, true, None),
                    Tightness::NonGeneric { edge, .. } => record(k, false, Some(edge)),
                    Tightness::NotTight { .. } => {}
                }
            }
        }
        None => {
            for (k, t) in trees.iter().enumerate() {
                match tightness(t, &w.w) {
                    Tightness::Tight { .. } => record(k, true, None),
                    Tightness::NonGeneric { edge, .. } => record(k, false, Some(edge)),
                    Tightness::NotTight { .. } => {}
                }
            }
        }
    }
    (keep, flagged)
}

fn regular_from(n: usize, d: usize, trees: &[BipartiteTree], w: &WeightMatrix) -> Result<Vec<BipartiteTree>> {
    if (w.n, w.d) != (n, d) {
        return Err(Error::InvalidParameters(format!("weights are {}x{}, expected {n}x{d}", w.n, w.d)));
    }
    let (keep, flagged) = tight_trees(trees, w);
    if let Some((i, j)) = flagged {
        return Err(Error::NonGenericWeights(i, j));
    }
    let cells = binomial(n + d - 2, d - 1);
    if keep.len() as u128 != cells {
        return Err(Error::NotTriangulation(format!("{} tight trees, expected {cells}", keep.len())));
    }
    Ok(keep.into_iter().map(|k| trees[k].clone()).collect())
}

/// The regular triangulation of `w`: the spanning trees that are `w`-tight.
pub fn regular_triangulation(n: usize, d: usize, w: &WeightMatrix) -> Result<Vec<BipartiteTree>> {
    let trees = enumerate_spanning_trees(n, d, DEFAULT_TREE_BUDGET)?;
    regular_from(n, d, &trees, w)
}

/// Exhaustive check that no circuit of `K_{n,d}` has zero alternating weight sum.
pub fn circuit_generic(w: &WeightMatrix) -> Result<bool> {
    let (n, d) = (w.n, w.d);
    if n + d > 8 {
        return Err(Error::BudgetExceeded { what: "enumerating circuits".into(), budget: 8 });
    }
    for k in 2..=n.min(d) {
        for vs in permutations_with_min_first(n, k) {
            for ws in k_permutations(d, k) {
                let mut s = Rational::zero();
                for t in 0..k {
                    s += w.get(vs[t], ws[t]);
                    s -= w.get(vs[(t + 1) % k], ws[t]);
                }
                if s.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn k_permutations(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in 1..=m {
            if !cur.contains(&x) {
                cur.push(x);
                go(m, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(m, k, &mut Vec::new(), &mut out);
    out
}

fn permutations_with_min_first(m: usize, k: usize) -> Vec<Vec<usize>> {
    k_permutations(m, k).into_iter().filter(|p| p.iter().all(|&x| x >= p[0])).collect()
}

// Vertex numbering for cycle searches: v_i -> i - 1, w_j -> n + j - 1.
fn vertex_label(n: usize, x: usize) -> String {
    if x < n {
        format!("v{}", x + 1)
    } else {
        format!("w{}", x - n + 1)
    }
}

/// A circuit of `K_{n,d}` alternating between edges of `a` (traversed
/// `v -> w`) and edges of `b` (traversed `w -> v`); shared edges may play
/// either role.
pub fn alternating_circuit(a: &BipartiteTree, b: &BipartiteTree) -> Option<Vec<String>> {
    let (n, d) = (a.n, a.d);
    let size = n + d;
    let mut adj = vec![Vec::new(); size];
    for &(i, j) in &a.edges {
        adj[i - 1].push(n + j - 1);
    }
    for &(i, j) in &b.edges {
        adj[n + j - 1].push(i - 1);
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
    }
    fn dfs(adj: &[Vec<usize>], start: usize, v: usize, path: &mut Vec<usize>, on: &mut [bool]) -> bool {
        for &w in &adj[v] {
            if w == start && path.len() >= 4 {
                return true;
            }
            if w > start && !on[w] {
                on[w] = true;
                path.push(w);
                if dfs(adj, start, w, path, on) {
                    return true;
                }
                path.pop();
                on[w] = false;
            }
        }
        false
    }
    for s in 0..size {
        let mut on = vec![false; size];
        on[s] = true;
        let mut path = vec![s];
        if dfs(&adj, s, s, &mut path, &mut on) {
            return Some(path.iter().map(|&x| vertex_label(n, x)).collect());
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum Violation {
    NotSpanningTree { tree: usize },
    MissingNeighbour { tree: usize, edge: BEdge },
    AlternatingCircuit { trees: (usize, usize), circuit: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub valid: bool,
    pub violation: Option<Violation>,
}

/// Checks the three tree conditions: spanning trees, every internal edge
/// flips to another tree of the collection, and no two trees overlap on an
/// alternating circuit. Reports the first failure found.
pub fn verify_triangulation(c: &TreeCollection) -> Result<Verification> {
    let trees = c.parse()?;
    if trees.is_empty() {
        return Err(Error::MalformedTree("empty collection".into()));
    }
    let fail = |v| Ok(Verification { valid: false, violation: Some(v) });
    if let Some(k) = trees.iter().position(|t| !t.is_spanning_tree()) {
        return fail(Violation::NotSpanningTree { tree: k });
    }
    if let Some(v) = condition_two(&trees) {
        return fail(v);
    }
    for a in 0..trees.len() {
        for b in a + 1..trees.len() {
            if let Some(circuit) = alternating_circuit(&trees[a], &trees[b]) {
                return fail(Violation::AlternatingCircuit { trees: (a, b), circuit });
            }
        }
    }
    Ok(Verification { valid: true, violation: None })
}

fn condition_two(trees: &[BipartiteTree]) -> Option<Violation> {
    for (k, t) in trees.iter().enumerate() {
        for e in t.internal_edges() {
            let rest = t.without(e);
            let found = trees.iter().enumerate().any(|(m, other)| m != k && rest.iter().all(|&f| other.contains(f)));
            if !found {
                return Some(Violation::MissingNeighbour { tree: k, edge: e });
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PureTree {
    pub i: usize,
    pub tree: BipartiteTree,
    pub location: LatticePoint,
}

/// The unique `i`-pure tree for each `i = 1..n`.
pub fn pure_trees(trees: &[BipartiteTree]) -> Result<Vec<PureTree>> {
    let Some(first) = trees.first() else {
        return Err(Error::NotTriangulation("empty collection".into()));
    };
    let n = first.n;
    let mut found: BTreeMap<usize, &BipartiteTree> = BTreeMap::new();
    for t in trees {
        if let Some(i) = t.pure_index() {
            if found.insert(i, t).is_some() {
                return Err(Error::NotTriangulation(format!("two {i}-pure trees")));
            }
        }
    }
    (1..=n)
        .map(|i| {
            let t = found.get(&i).ok_or_else(|| Error::NotTriangulation(format!("no {i}-pure tree")))?;
            Ok(PureTree { i, tree: (*t).clone(), location: t.location() })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocationCheck {
    pub locations: Vec<LatticePoint>,
    pub is_basis: bool,
}

/// Whether the pure-tree locations form a basis of `T(n,d)`. A `false`
/// answer contradicts the theory and means the input was not a triangulation.
pub fn locations_form_basis(trees: &[BipartiteTree]) -> Result<LocationCheck> {
    let pure = pure_trees(trees)?;
    let (n, d) = (pure[0].tree.n, pure[0].tree.d);
    let ground = GroundSet::new(n, d)?;
    let locations: Vec<LatticePoint> = pure.iter().map(|p| p.location.clone()).collect();
    let is_basis = ground.indices_of(&locations).map(|i| ground.is_basis(&i)).unwrap_or(false);
    Ok(LocationCheck { locations, is_basis })
}

/// Colouring of the ordered pairs of `[n]` by `[d]`; `color[u][v]` is 0 on the diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColoring {
    pub n: usize,
    pub d: usize,
    pub color: Vec<Vec<usize>>,
}

impl EdgeColoring {
    pub fn get(&self, u: usize, v: usize) -> usize {
        self.color[u - 1][v - 1]
    }

    pub fn outdegree(&self, u: usize, c: usize) -> usize {
        (1..=self.n).filter(|&v| v != u && self.get(u, v) == c).count()
    }
}

/// Edge `i -> j` gets colour `a` when `w_a` is the neighbour of `v_j` in the `i`-pure tree.
pub fn derived_coloring(trees: &[BipartiteTree]) -> Result<EdgeColoring> {
    let pure = pure_trees(trees)?;
    let (n, d) = (pure[0].tree.n, pure[0].tree.d);
    let mut color = vec![vec![0; n]; n];
    for p in &pure {
        for &(j, a) in &p.tree.edges {
            if j != p.i {
                color[p.i - 1][j - 1] = a;
            }
        }
    }
    Ok(EdgeColoring { n, d, color })
}

/// Antisymmetry of colours on opposite edges and transitivity within each colour.
pub fn check_poset_coloring(col: &EdgeColoring) -> bool {
    let n = col.n;
    for u in 1..=n {
        for v in 1..=n {
            if u == v {
                continue;
            }
            let c = col.get(u, v);
            if c == 0 || c > col.d || c == col.get(v, u) {
                return false;
            }
            for w in 1..=n {
                if w != u && w != v && col.get(v, w) == c && col.get(u, w) != c {
                    return false;
                }
            }
        }
    }
    true
}

/// Vertices with at least `a_i` outgoing edges of colour `i` for every `i`.
pub fn outgoing(col: &EdgeColoring, a: &[usize]) -> Vec<usize> {
    (1..=col.n).filter(|&v| a.iter().enumerate().all(|(i, &ai)| col.outdegree(v, i + 1) >= ai)).collect()
}

/// Partition `[n]` into consecutive blocks `A_1, ..., A_d, A` of sizes
/// `a_1, ..., a_d, n - sum(a)` and colour as in the optimality construction.
pub fn extremal_coloring(n: usize, a: &[usize]) -> Result<EdgeColoring> {
    let d = a.len();
    let total: usize = a.iter().sum();
    if d < 2 || n == 0 || total + 1 > n {
        return Err(Error::InvalidParameters(format!("need d >= 2 and sum(a) <= n - 1, got n = {n}, a = {a:?}")));
    }
    // block[x] = Some(i) for x in A_i, None for x in A
    let mut block = vec![None; n + 1];
    let mut next = 1;
    for (i, &ai) in a.iter().enumerate() {
        for _ in 0..ai {
            block[next] = Some(i + 1);
            next += 1;
        }
    }
    let mut color = vec![vec![0; n]; n];
    for u in 1..=n {
        for v in 1..=n {
            if u == v {
                continue;
            }
            let c = match (block[u], block[v]) {
                (None, Some(i)) => i,
                (Some(1), None) => d,
                (Some(_), None) => 1,
                _ if u < v => d,
                _ => 1,
            };
            color[u - 1][v - 1] = c;
        }
    }
    Ok(EdgeColoring { n, d, color })
}

/// For every sub-simplex `T_a`, the number of pure-tree locations inside it,
/// paired with its size.
pub fn pure_counts(trees: &[BipartiteTree]) -> Result<Vec<(SubSimplex, usize)>> {
    let pure = pure_trees(trees)?;
    let (n, d) = (pure[0].tree.n, pure[0].tree.d);
    let mut out = Vec::new();
    for k in 0..=n {
        for anchor in compositions(n - k, d) {
            let s = SubSimplex::new(anchor, k);
            let count = pure.iter().filter(|p| s.contains(&p.location)).count();
            out.push((s, count));
        }
    }
    Ok(out)
}

/// All triangulations by exhaustive search over collections of
/// `binomial(n+d-2, d-1)` pairwise compatible spanning trees.
pub fn all_triangulations(n: usize, d: usize, budget: u64) -> Result<Vec<Vec<BipartiteTree>>> {
    let trees = enumerate_spanning_trees(n, d, budget)?;
    let cells = binomial(n + d - 2, d - 1) as usize;
    let m = trees.len();
    let compat: Vec<Vec<bool>> = (0..m)
        .map(|a| (0..m).map(|b| a == b || alternating_circuit(&trees[a], &trees[b]).is_none()).collect())
        .collect();
    let mut out = Vec::new();
    let mut nodes = 0u64;
    fn go(
        start: usize,
        cells: usize,
        trees: &[BipartiteTree],
        compat: &[Vec<bool>],
        chosen: &mut Vec<usize>,
        nodes: &mut u64,
        budget: u64,
        out: &mut Vec<Vec<BipartiteTree>>,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::BudgetExceeded { what: "searching tree collections".into(), budget });
        }
        if chosen.len() == cells {
            let set: Vec<BipartiteTree> = chosen.iter().map(|&k| trees[k].clone()).collect();
            if condition_two(&set).is_none() {
                out.push(set);
            }
            return Ok(());
        }
        for k in start..trees.len() {
            if trees.len() - k < cells - chosen.len() {
                break;
            }
            if chosen.iter().all(|&c| compat[c][k]) {
                chosen.push(k);
                go(k + 1, cells, trees, compat, chosen, nodes, budget, out)?;
                chosen.pop();
            }
        }
        Ok(())
    }
    go(0, cells, &trees, &compat, &mut Vec::new(), &mut nodes, budget, &mut out)?;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurveyMode {
    RandomSeeds,
    ExhaustiveWeightsGrid,
    TreeSearch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisReport {
    pub basis: Vec<LatticePoint>,
    pub realized: bool,
    pub status: String,
    pub hits: u64,
    pub witness_weights: Option<WeightMatrix>,
    pub witness_triangulation: Option<Vec<Vec<BEdge>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub n: usize,
    pub d: usize,
    pub mode: SurveyMode,
    pub seed: Option<u64>,
    pub samples: u64,
    pub generic_samples: u64,
    pub total_bases: usize,
    pub realized: usize,
    pub open: usize,
    pub bases: Vec<BasisReport>,
}

impl SurveyReport {
    /// Structural consistency of the report.
    pub fn validate(&self) -> Result<()> {
        let ground = GroundSet::new(self.n, self.d)?;
        let bases: Vec<Vec<usize>> =
            ground.bases(crate::matroid::DEFAULT_ORACLE_BUDGET).collect::<Result<_>>()?;
        let bad = |m: &str| Err(Error::InvalidParameters(format!("survey report: {m}")));
        if bases.len() != self.total_bases || self.bases.len() != self.total_bases {
            return bad("basis count");
        }
        if self.realized + self.open != self.total_bases
            || self.bases.iter().filter(|b| b.realized).count() != self.realized
        {
            return bad("realized/open tallies");
        }
        for (b, r) in bases.iter().zip(&self.bases) {
            if ground.point_set(b).points != r.basis {
                return bad("basis order");
            }
            let expected = if r.realized { "realized" } else { "OPEN" };
            if r.status != expected || r.realized != (r.hits > 0) {
                return bad("status field");
            }
            if r.realized && r.witness_triangulation.is_none() {
                return bad("missing witness");
            }
        }
        if self.generic_samples > self.samples {
            return bad("sample counts");
        }
        Ok(())
    }
}

/// Records which bases of `T(n,d)` occur as pure-simplex locations of the
/// triangulations found; unrealized bases are reported OPEN.
pub fn survey_conjecture(n: usize, d: usize, mode: SurveyMode, samples: u64, seed: u64) -> Result<SurveyReport> {
    let trees_count = (n as u128).pow(d as u32 - 1) * (d as u128).pow(n as u32 - 1);
    if trees_count > DEFAULT_TREE_BUDGET as u128 {
        return Err(Error::BudgetExceeded { what: "survey".into(), budget: DEFAULT_TREE_BUDGET });
    }
    let ground = GroundSet::new(n, d)?;
    let bases: Vec<Vec<usize>> = ground.bases(crate::matroid::DEFAULT_ORACLE_BUDGET).collect::<Result<_>>()?;
    let index: BTreeMap<Vec<usize>, usize> = bases.iter().cloned().enumerate().map(|(k, b)| (b, k)).collect();
    let mut reports: Vec<BasisReport> = bases
        .iter()
        .map(|b| BasisReport {
            basis: ground.point_set(b).points,
            realized: false,
            status: "OPEN".into(),
            hits: 0,
            witness_weights: None,
            witness_triangulation: None,
        })
        .collect();

    let locate = |tri: &[BipartiteTree]| -> Result<usize> {
        let check = locations_form_basis(tri)?;
        let mut idx = ground.indices_of(&check.locations)?;
        idx.sort_unstable();
        index
            .get(&idx)
            .copied()
            .ok_or_else(|| Error::NotTriangulation("pure locations are not a basis".into()))
    };
    let mut record = |k: usize, w: Option<WeightMatrix>, tri: &[BipartiteTree]| {
        let r = &mut reports[k];
        r.hits += 1;
        if r.witness_triangulation.is_none() {
            r.witness_weights = w;
            r.witness_triangulation = Some(tri.iter().map(|t| t.edges.clone()).collect());
        }
    };

    let trees = enumerate_spanning_trees(n, d, DEFAULT_TREE_BUDGET)?;
    let (mut taken, mut generic) = (0u64, 0u64);
    match mode {
        SurveyMode::RandomSeeds => {
            let found: Vec<Option<(WeightMatrix, Vec<BipartiteTree>)>> = (0..samples)
                .into_par_iter()
                .map(|s| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(s);
                    let w = WeightMatrix::random(n, d, &mut rng);
                    regular_from(n, d, &trees, &w).ok().map(|tri| (w, tri))
                })
                .collect();
            for (w, tri) in found.into_iter().flatten() {
                generic += 1;
                let k = locate(&tri)?;
                record(k, Some(w), &tri);
            }
            taken = samples;
        }
        SurveyMode::ExhaustiveWeightsGrid => {
            // entries in 0..g for the smallest g with g^(nd) >= samples
            let cells = (n * d) as u32;
            let mut g: u64 = 2;
            while (g as u128).pow(cells) < samples as u128 && g < 1 << 16 {
                g += 1;
            }
            let total = (g as u128).pow(cells).min(samples as u128) as u64;
            for s in 0..total {
                let mut x = s;
                let rows: Vec<Vec<Rational>> = (0..n)
                    .map(|_| {
                        (0..d)
                            .map(|_| {
                                let v = x % g;
                                x /= g;
                                rat(v as i64)
                            })
                            .collect()
                    })
                    .collect();
                let w = WeightMatrix::new(rows)?;
                taken += 1;
                if let Ok(tri) = regular_from(n, d, &trees, &w) {
                    generic += 1;
                    let k = locate(&tri)?;
                    record(k, Some(w), &tri);
                }
            }
        }
        SurveyMode::TreeSearch => {
            for tri in all_triangulations(n, d, samples.max(1))? {
                taken += 1;
                let k = locate(&tri)?;
                record(k, None, &tri);
            }
        }
    }
    for r in reports.iter_mut() {
        r.realized = r.hits > 0;
        r.status = if r.realized { "realized" } else { "OPEN" }.into();
    }
    let realized = reports.iter().filter(|r| r.realized).count();
    Ok(SurveyReport {
        n,
        d,
        mode,
        seed: (mode == SurveyMode::RandomSeeds).then_some(seed),
        samples: taken,
        generic_samples: generic,
        total_bases: reports.len(),
        realized,
        open: reports.len() - realized,
        bases: reports,
    })
}

/// Regular triangulation for a seeded random weight matrix.
pub fn random_regular_triangulation(n: usize, d: usize, seed: u64) -> Result<(WeightMatrix, Vec<BipartiteTree>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = WeightMatrix::random(n, d, &mut rng);
    let tri = regular_triangulation(n, d, &w)?;
    Ok((w, tri))
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use proptest::prelude::*;

    fn tree(n: usize, d: usize, e: &[(usize, usize)]) -> BipartiteTree {
        BipartiteTree::spanning(n, d, e.to_vec()).unwrap()
    }

    fn prism() -> Vec<BipartiteTree> {
        vec![
            tree(2, 3, &[(1, 1), (1, 2), (1, 3), (2, 2)]),
            tree(2, 3, &[(1, 1), (1, 3), (2, 1), (2, 2)]),
            tree(2, 3, &[(2, 1), (2, 2), (2, 3), (1, 3)]),
        ]
    }

    #[test]
    fn spanning_tree_counts() {
        for (n, d, c) in [(2, 2, 4), (2, 3, 12), (1, 4, 1), (3, 3, 81), (3, 4, 432)] {
            let trees = enumerate_spanning_trees(n, d, DEFAULT_TREE_BUDGET).unwrap();
            assert_eq!(trees.len(), c);
            assert!(trees.windows(2).all(|w| w[0].edges < w[1].edges));
            assert!(trees.iter().all(BipartiteTree::is_spanning_tree));
        }
        assert!(matches!(enumerate_spanning_trees(3, 3, 10), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn prism_triangulation_verifies() {
        let c = TreeCollection::from_trees(2, 3, &prism());
        assert!(verify_triangulation(&c).unwrap().valid);
        let pure = pure_trees(&prism()).unwrap();
        assert_eq!(pure[0].location, LatticePoint::new(vec![0, 1, 0]));
        assert_eq!(pure[1].location, LatticePoint::new(vec![0, 0, 1]));
        assert!(locations_form_basis(&prism()).unwrap().is_basis);
        let cells: Vec<String> = prism().iter().map(|t| t.cayley_cell().render_letters()).collect();
        assert_eq!(cells, vec!["ABC+B", "AC+AB", "C+ABC"]);
    }

    #[test]
    fn lone_pure_tree_fails_condition_two() {
        let c = TreeCollection::from_trees(2, 3, &prism()[..1]);
        let v = verify_triangulation(&c).unwrap();
        assert!(matches!(v.violation, Some(Violation::MissingNeighbour { tree: 0, .. })));
    }

    #[test]
    fn two_pure_trees_for_one_vertex_overlap() {
        let a = tree(2, 3, &[(1, 1), (1, 2), (1, 3), (2, 2)]);
        let b = tree(2, 3, &[(1, 1), (1, 2), (1, 3), (2, 3)]);
        assert!(alternating_circuit(&a, &b).is_some());
        let c = TreeCollection::from_trees(2, 3, &[a, b]);
        let v = verify_triangulation(&c).unwrap();
        assert!(!v.valid);
    }

    #[test]
    fn cayley_cells_and_locations() {
        // v1:w1, v2:w1, v3:w3, v4:w1w2w3w4, v5:w2
        let t = tree(5, 4, &[(1, 1), (2, 1), (3, 3), (4, 1), (4, 2), (4, 3), (4, 4), (5, 2)]);
        assert_eq!(t.cayley_cell().render(), "w1+w1+w3+w1w2w3w4+w2");
        assert_eq!(t.location(), LatticePoint::new(vec![2, 1, 1, 0]));
        assert_eq!(t.pure_index(), Some(4));
        assert_eq!(t.cayley_cell().dimension(), 3);
        let claw = tree(4, 3, &[(1, 1), (1, 2), (1, 3), (2, 1), (3, 1), (4, 1)]);
        assert_eq!(claw.location(), LatticePoint::new(vec![3, 0, 0]));
    }

    #[test]
    fn tight_weighting_examples() {
        let w = WeightMatrix::from_i64(&[&[0, 0], &[0, 1]]);
        match tight_weighting(&tree(2, 2, &[(1, 1), (1, 2), (2, 2)]), &w).unwrap() {
            Tightness::Tight { u, v } => {
                assert_eq!(u, vec![rat(0), rat(1)]);
                assert_eq!(v, vec![rat(0), rat(0)]);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            tight_weighting(&tree(2, 2, &[(1, 1), (1, 2), (2, 1)]), &w).unwrap(),
            Tightness::NotTight { edge: (2, 2) }
        );
        let z = WeightMatrix::zero(2, 3);
        for t in enumerate_spanning_trees(2, 3, 100).unwrap() {
            assert!(matches!(tight_weighting(&t, &z).unwrap(), Tightness::NonGeneric { .. }));
        }
    }

    #[test]
    fn regular_examples() {
        let w = WeightMatrix::from_i64(&[&[0, 0], &[0, 1]]);
        let tri = regular_triangulation(2, 2, &w).unwrap();
        let edges: Vec<Vec<BEdge>> = tri.iter().map(|t| t.edges.clone()).collect();
        assert_eq!(edges, vec![vec![(1, 1), (1, 2), (2, 2)], vec![(1, 1), (2, 1), (2, 2)]]);
        let (_, tri) = random_regular_triangulation(2, 3, 3).unwrap();
        assert_eq!(tri.len(), 3);
        assert!(verify_triangulation(&TreeCollection::from_trees(2, 3, &tri)).unwrap().valid);
        assert_eq!(pure_trees(&tri).unwrap().len(), 2);
        assert!(matches!(regular_triangulation(2, 3, &WeightMatrix::zero(2, 3)), Err(Error::NonGenericWeights(..))));
    }

    #[test]
    fn trivial_n1() {
        let (_, tri) = random_regular_triangulation(1, 3, 0).unwrap();
        assert_eq!(tri.len(), 1);
        let pure = pure_trees(&tri).unwrap();
        assert_eq!(pure[0].location, LatticePoint::new(vec![0, 0, 0]));
        assert!(locations_form_basis(&tri).unwrap().is_basis);
    }

    #[test]
    fn random_weights_are_circuit_generic() {
        for seed in 0..5 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = WeightMatrix::random(3, 3, &mut rng);
            assert!(circuit_generic(&w).unwrap());
            assert!(regular_triangulation(3, 3, &w).is_ok());
        }
        assert!(!circuit_generic(&WeightMatrix::from_i64(&[&[0, 1], &[1, 2]])).unwrap());
    }

    #[test]
    fn genericity_modes_agree() {
        // small grid: the post-hoc check and the circuit check coincide
        for entries in (0..4).map(|_| 0i64..3).multi_cartesian_product().take(81) {
            let w = WeightMatrix::from_i64(&[&entries[..2], &entries[2..]]);
            let posthoc = regular_triangulation(2, 2, &w).is_ok();
            assert_eq!(posthoc, circuit_generic(&w).unwrap(), "{entries:?}");
        }
        for entries in (0..6).map(|_| 0i64..2).multi_cartesian_product() {
            let w = WeightMatrix::from_i64(&[&entries[..3], &entries[3..]]);
            assert_eq!(regular_triangulation(2, 3, &w).is_ok(), circuit_generic(&w).unwrap());
        }
    }

    #[test]
    fn square_compatibility() {
        // the two triangulations of the square are its two diagonals
        let trees = enumerate_spanning_trees(2, 2, 100).unwrap();
        let pairs: Vec<(String, String)> = trees
            .iter()
            .tuple_combinations()
            .filter(|(a, b)| alternating_circuit(a, b).is_none())
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(
            pairs,
            vec![
                ("{11,12,21}".to_string(), "{12,21,22}".to_string()),
                ("{11,12,22}".to_string(), "{11,21,22}".to_string())
            ]
        );
    }

    #[test]
    fn circuit_search_is_symmetric() {
        for (n, d) in [(2, 3), (3, 3)] {
            let trees = enumerate_spanning_trees(n, d, DEFAULT_TREE_BUDGET).unwrap();
            for a in &trees {
                assert!(alternating_circuit(a, a).is_none());
                for b in &trees {
                    assert_eq!(alternating_circuit(a, b).is_some(), alternating_circuit(b, a).is_some());
                }
            }
        }
    }

    #[test]
    fn prism_has_six_triangulations() {
        let all = all_triangulations(2, 3, DEFAULT_TREE_BUDGET).unwrap();
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(|t| t.len() == 3));
        let mut fig: Vec<BipartiteTree> = prism();
        fig.sort();
        assert!(all.contains(&fig));
        // diagonal oracle: on face {a,b} the diagonal v1w_a-v2w_b orients a -> b
        let mut tournaments = BTreeSet::new();
        for tri in &all {
            let mut arrows = Vec::new();
            for (a, b) in [(1, 2), (2, 3), (1, 3)] {
                let ab = tri.iter().any(|t| t.contains((1, a)) && t.contains((2, b)));
                let ba = tri.iter().any(|t| t.contains((1, b)) && t.contains((2, a)));
                assert!(ab != ba);
                arrows.push(ab);
            }
            let cyclic = (arrows[0] && arrows[1] && !arrows[2]) || (!arrows[0] && !arrows[1] && arrows[2]);
            assert!(!cyclic);
            tournaments.insert(arrows);
        }
        assert_eq!(tournaments.len(), 6);
    }

    #[test]
    fn extremal_examples() {
        let col = extremal_coloring(4, &[1, 1]).unwrap();
        assert!(check_poset_coloring(&col));
        assert_eq!(outgoing(&col, &[1, 1]).len(), 2);
        assert_eq!(outgoing(&extremal_coloring(2, &[0, 0]).unwrap(), &[0, 0]).len(), 2);
        assert_eq!(outgoing(&extremal_coloring(3, &[1, 1, 0]).unwrap(), &[1, 1, 0]).len(), 1);
        let one = extremal_coloring(1, &[0, 0]).unwrap();
        assert_eq!(outgoing(&one, &[0, 0]), vec![1]);
        assert!(extremal_coloring(3, &[2, 1]).is_err());
    }

    #[test]
    fn extremal_bound_is_attained() {
        for n in 1..=5 {
            for d in 2..=4 {
                for total in 0..n {
                    for a in compositions(total, d) {
                        let col = extremal_coloring(n, &a).unwrap();
                        assert!(check_poset_coloring(&col), "{n} {a:?}");
                        assert_eq!(outgoing(&col, &a).len(), n - total, "{n} {a:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn linear_orders_on_k2() {
        let col = EdgeColoring { n: 2, d: 2, color: vec![vec![0, 1], vec![2, 0]] };
        assert!(check_poset_coloring(&col));
        let bad = EdgeColoring { n: 2, d: 2, color: vec![vec![0, 1], vec![1, 0]] };
        assert!(!check_poset_coloring(&bad));
    }

    #[test]
    fn survey_small() {
        let r = survey_conjecture(2, 3, SurveyMode::RandomSeeds, 200, 1).unwrap();
        r.validate().unwrap();
        assert_eq!((r.total_bases, r.realized), (3, 3));
        let r = survey_conjecture(1, 3, SurveyMode::RandomSeeds, 3, 1).unwrap();
        assert_eq!((r.total_bases, r.realized), (1, 1));
        let r = survey_conjecture(2, 3, SurveyMode::TreeSearch, DEFAULT_TREE_BUDGET, 0).unwrap();
        r.validate().unwrap();
        assert_eq!(r.samples, 6);
        let r = survey_conjecture(2, 3, SurveyMode::ExhaustiveWeightsGrid, 729, 0).unwrap();
        r.validate().unwrap();
        assert_eq!(r.realized, 3);
    }

    #[test]
    fn pipeline_invariants() {
        for (n, d) in [(2, 3), (3, 3), (4, 3), (3, 4), (2, 5)] {
            for seed in 0..3 {
                let (_, tri) = random_regular_triangulation(n, d, seed).unwrap();
                assert!(verify_triangulation(&TreeCollection::from_trees(n, d, &tri)).unwrap().valid);
                assert_eq!(tri.len() as u128, binomial(n + d - 2, d - 1));
                assert_eq!(pure_trees(&tri).unwrap().len(), n);
                assert!(locations_form_basis(&tri).unwrap().is_basis);
                assert!(check_poset_coloring(&derived_coloring(&tri).unwrap()));
                assert!(pure_counts(&tri).unwrap().iter().all(|(s, c)| *c <= s.size));
            }
        }
    }

    #[test]
    fn json_schemas() {
        let t = tree(2, 3, &[(1, 1), (1, 2), (1, 3), (2, 2)]);
        assert_eq!(serde_json::to_string(&t).unwrap(), r#"{"n":2,"d":3,"edges":[[1,1],[1,2],[1,3],[2,2]]}"#);
        let w = WeightMatrix::from_i64(&[&[0, 0], &[0, 1]]);
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(serde_json::from_str::<WeightMatrix>(&s).unwrap(), w);
        assert!(BipartiteTree::new(2, 3, vec![(3, 1)]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn tightness_translation_invariant(seed in 0u64..1000, c in -50i64..50, rows in proptest::collection::vec(-20i64..20, 3), cols in proptest::collection::vec(-20i64..20, 3)) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = WeightMatrix::random(3, 3, &mut rng);
            let mut shifted = w.clone();
            for i in 0..3 {
                for j in 0..3 {
                    shifted.w[i][j] = &w.w[i][j] + rat(c + rows[i] + cols[j]);
                }
            }
            let trees = enumerate_spanning_trees(3, 3, DEFAULT_TREE_BUDGET).unwrap();
            for t in &trees {
                prop_assert_eq!(
                    tight_weighting(t, &w).unwrap().is_tight(),
                    tight_weighting(t, &shifted).unwrap().is_tight()
                );
            }
        }
    }
}
