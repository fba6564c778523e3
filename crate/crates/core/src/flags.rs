//! Complete flags over `Q^n`, their arrangements of one-dimensional
//! intersections, and generic hyperplane arrangements.

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{
    format_rational, intersect_all, nullspace, parse_rational, rank_of, span_of, Rational,
    RationalMatrix, Subspace,
};
use crate::matroid::{all_blocks, GroundSet, LatticePoint, PointSet, SetSystem};
use crate::util::binomial;
use crate::{Error, Result};

pub const ENTRY_BOUND: i64 = 10_000;
pub const SAMPLE_RETRIES: usize = 16;

/// `{0} = E_0 < E_1 < ... < E_n = Q^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    n: usize,
    subspaces: Vec<Subspace>,
}

impl Flag {
    /// The flag whose `E_i` is spanned by the first `i` columns.
    pub fn from_matrix(m: &RationalMatrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
        }
        let n = m.rows();
        let cols = m.columns();
        let subspaces: Vec<Subspace> =
            (0..=n).map(|i| span_of(n, &cols[..i])).collect::<Result<_>>()?;
        let flag = Flag { n, subspaces };
        flag.validate()?;
        Ok(flag)
    }

    pub fn from_subspaces(n: usize, subspaces: Vec<Subspace>) -> Result<Self> {
        let flag = Flag { n, subspaces };
        flag.validate()?;
        Ok(flag)
    }

    fn validate(&self) -> Result<()> {
        if self.subspaces.len() != self.n + 1 {
            return Err(Error::MalformedMatrix(format!(
                "flag in Q^{} needs {} subspaces",
                self.n,
                self.n + 1
            )));
        }
        for (i, e) in self.subspaces.iter().enumerate() {
            if e.ambient() != self.n {
                return Err(Error::AmbientMismatch(self.n, e.ambient()));
            }
            if e.dim() != i {
                return Err(Error::MalformedMatrix(format!("E_{i} has dimension {}", e.dim())));
            }
            if i > 0 && !self.subspaces[i - 1].is_subspace_of(e) {
                return Err(Error::MalformedMatrix(format!("E_{} is not inside E_{i}", i - 1)));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize) -> &Subspace {
        &self.subspaces[i]
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    /// A basis whose first `i` columns span `E_i`.
    pub fn adapted_basis(&self) -> RationalMatrix {
        let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(self.n);
        for i in 1..=self.n {
            let prev = &self.subspaces[i - 1];
            let v = self.subspaces[i]
                .basis_vectors()
                .iter()
                .find(|v| !prev.contains(v))
                .expect("dimensions increase by one")
                .clone();
            cols.push(v);
        }
        RationalMatrix::from_columns(self.n, &cols).expect("ambient n")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagFamily {
    n: usize,
    flags: Vec<Flag>,
}

impl FlagFamily {
    pub fn new(n: usize, flags: Vec<Flag>) -> Result<Self> {
        if let Some(f) = flags.iter().find(|f| f.n != n) {
            return Err(Error::AmbientMismatch(n, f.n));
        }
        if flags.len() < 2 {
            return Err(Error::InvalidParameters("a flag family needs d >= 2 flags".into()));
        }
        Ok(FlagFamily { n, flags })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.flags.len()
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyWire {
    n: usize,
    d: usize,
    flags: Vec<RationalMatrix>,
}

impl Serialize for FlagFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FamilyWire { n: self.n, d: self.d(), flags: self.flags.iter().map(Flag::adapted_basis).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FlagFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = FamilyWire::deserialize(d)?;
        if w.flags.len() != w.d {
            return Err(D::Error::custom("flag count differs from d"));
        }
        let flags = w
            .flags
            .iter()
            .map(Flag::from_matrix)
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        FlagFamily::new(w.n, flags).map_err(D::Error::custom)
    }
}

fn random_invertible(n: usize, rng: &mut ChaCha8Rng) -> Result<RationalMatrix> {
    for _ in 0..SAMPLE_RETRIES {
        let m = RationalMatrix::random_integer(n, n, ENTRY_BOUND, rng);
        if rank_of(&m) == n {
            return Ok(m);
        }
    }
    Err(Error::SingularSample(SAMPLE_RETRIES))
}

/// `d` flags from seeded random integer matrices with entries in `[-10^4, 10^4]`.
pub fn random_flag_family(n: usize, d: usize, seed: u64) -> Result<FlagFamily> {
    if n < 1 || d < 2 {
        return Err(Error::InvalidParameters(format!("need n >= 1 and d >= 2, got n = {n}, d = {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let flags = (0..d)
        .map(|_| Flag::from_matrix(&random_invertible(n, &mut rng)?))
        .collect::<Result<Vec<_>>>()?;
    FlagFamily::new(n, flags)
}

/// One line per ground point of `T(n,d)`, indexed like the ground set.
#[derive(Clone, Debug)]
pub struct LineArrangement {
    ground: GroundSet,
    lines: Vec<Subspace>,
}

impl LineArrangement {
    pub fn new(ground: GroundSet, lines: Vec<Subspace>) -> Result<Self> {
        if lines.len() != ground.len() {
            return Err(Error::InvalidParameters(format!(
                "{} lines for {} ground points",
                lines.len(),
                ground.len()
            )));
        }
        for (i, l) in lines.iter().enumerate() {
            if l.ambient() != ground.n() {
                return Err(Error::AmbientMismatch(ground.n(), l.ambient()));
            }
            if l.dim() != 1 {
                return Err(Error::NonGenericFamily { point: ground.point(i).0.clone(), dim: l.dim() });
            }
        }
        Ok(LineArrangement { ground, lines })
    }

    /// Lines spanned by the given vectors, one per ground point.
    pub fn from_vectors(ground: GroundSet, vectors: &[Vec<Rational>]) -> Result<Self> {
        let lines = vectors
            .iter()
            .map(|v| span_of(ground.n(), std::slice::from_ref(v)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ground, lines)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn line(&self, i: usize) -> &Subspace {
        &self.lines[i]
    }

    pub fn lines(&self) -> &[Subspace] {
        &self.lines
    }

    pub fn vector(&self, i: usize) -> &[Rational] {
        &self.lines[i].basis_vectors()[0]
    }

    pub fn linear_rank(&self, set: &[usize]) -> usize {
        let cols: Vec<Vec<Rational>> = set.iter().map(|&i| self.vector(i).to_vec()).collect();
        rank_of(&RationalMatrix::from_columns(self.ground.n(), &cols).expect("ambient n"))
    }

    /// Same lines pointwise over the same ground set.
    pub fn same_lines(&self, other: &LineArrangement) -> bool {
        self.ground.n() == other.ground.n()
            && self.ground.d() == other.ground.d()
            && self.lines == other.lines
    }
}

#[derive(Serialize, Deserialize)]
struct LineWire {
    point: LatticePoint,
    line: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct ArrangementWire {
    n: usize,
    d: usize,
    lines: Vec<LineWire>,
}

impl Serialize for LineArrangement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let lines = self
            .lines
            .iter()
            .enumerate()
            .map(|(i, l)| LineWire {
                point: self.ground.point(i).clone(),
                line: l.basis_vectors().iter().map(|v| v.iter().map(format_rational).collect()).collect(),
            })
            .collect();
        ArrangementWire { n: self.ground.n(), d: self.ground.d(), lines }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LineArrangement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = ArrangementWire::deserialize(d)?;
        let build = || -> Result<LineArrangement> {
            let ground = GroundSet::new(w.n, w.d)?;
            let mut slots: Vec<Option<Subspace>> = vec![None; ground.len()];
            for entry in &w.lines {
                let i = ground
                    .index_of(&entry.point)
                    .ok_or_else(|| Error::PointOutsideGround(entry.point.0.clone()))?;
                if slots[i].is_some() {
                    return Err(Error::DuplicatePoint(entry.point.0.clone()));
                }
                let vecs = entry
                    .line
                    .iter()
                    .map(|v| v.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                slots[i] = Some(span_of(w.n, &vecs)?);
            }
            let lines = slots
                .into_iter()
                .enumerate()
                .map(|(i, s)| s.ok_or_else(|| Error::Parse(format!("no line for {}", ground.point(i)))))
                .collect::<Result<Vec<_>>>()?;
            LineArrangement::new(ground, lines)
        };
        build().map_err(D::Error::custom)
    }
}

/// The line `E^1_{a_1} ∩ ... ∩ E^d_{a_d}` for each ground point, with
/// `a_i = n - p_i`.
pub fn line_arrangement(family: &FlagFamily) -> Result<LineArrangement> {
    let n = family.n();
    let ground = GroundSet::new(n, family.d())?;
    let mut lines = Vec::with_capacity(ground.len());
    for p in &ground.points {
        let line = intersect_all(
            n,
            family.flags().iter().zip(p.coords()).map(|(f, &x)| f.get(n - x)),
        )?;
        if line.dim() != 1 {
            return Err(Error::NonGenericFamily { point: p.0.clone(), dim: line.dim() });
        }
        lines.push(line);
    }
    LineArrangement::new(ground, lines)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidComparison {
    pub equal: bool,
    pub checked: u64,
    pub witness: Option<PointSet>,
    pub linear_rank: Option<usize>,
    pub matroid_rank: Option<usize>,
}

/// Compares linear rank against the `T(n,d)` rank on every subset of size
/// at most `n`, in order of size then lexicographically.
pub fn matroid_equals_tnd(arr: &LineArrangement, budget: u64) -> Result<MatroidComparison> {
    let g = arr.ground();
    let total: u128 = (1..=g.n()).map(|k| binomial(g.len(), k)).sum();
    if total > budget as u128 {
        return Err(Error::BudgetExceeded { what: "comparing subset ranks".into(), budget });
    }
    let mut checked = 0;
    for k in 1..=g.n().min(g.len()) {
        for set in (0..g.len()).combinations(k) {
            checked += 1;
            let lin = arr.linear_rank(&set);
            let mat = g.rank(&set);
            if lin != mat {
                return Ok(MatroidComparison {
                    equal: false,
                    checked,
                    witness: Some(g.point_set(&set)),
                    linear_rank: Some(lin),
                    matroid_rank: Some(mat),
                });
            }
        }
    }
    Ok(MatroidComparison { equal: true, checked, witness: None, linear_rank: None, matroid_rank: None })
}

/// Rebuilds `d` flags with `E^j_i = span{L_x : x_j >= n - i}`.
pub fn flags_from_arrangement(arr: &LineArrangement) -> Result<FlagFamily> {
    let g = arr.ground();
    let n = g.n();
    let mut flags = Vec::with_capacity(g.d());
    for j in 0..g.d() {
        let mut subspaces = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let vecs: Vec<Vec<Rational>> = (0..g.len())
                .filter(|&x| g.point(x).coords()[j] + i >= n)
                .map(|x| arr.vector(x).to_vec())
                .collect();
            let e = span_of(n, &vecs)?;
            if e.dim() != i {
                return Err(Error::NotRepresentation(format!(
                    "flag {} has E_{i} of dimension {}",
                    j + 1,
                    e.dim()
                )));
            }
            subspaces.push(e);
        }
        flags.push(Flag::from_subspaces(n, subspaces)?);
    }
    FlagFamily::new(n, flags)
}

/// Lines `H_A` of a random central arrangement of `m` hyperplanes in `Q^n`.
#[derive(Clone, Debug)]
pub struct HyperplaneLines {
    pub n: usize,
    pub m: usize,
    pub normals: Vec<Vec<Rational>>,
    /// 1-based `(n-1)`-subsets of `[m]`, lexicographic.
    pub blocks: Vec<Vec<usize>>,
    pub lines: Vec<Subspace>,
    pub comparison: MatroidComparisonH,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidComparisonH {
    pub equal: bool,
    pub checked: u64,
    pub witness: Option<Vec<Vec<usize>>>,
}

impl HyperplaneLines {
    pub fn line_of(&self, block: &[usize]) -> Option<&Subspace> {
        self.blocks.iter().position(|b| b == block).map(|i| &self.lines[i])
    }

    pub fn rank_of_blocks(&self, blocks: &[&[usize]]) -> Option<usize> {
        let vecs: Option<Vec<Vec<Rational>>> =
            blocks.iter().map(|b| self.line_of(b).map(|l| l.basis_vectors()[0].clone())).collect();
        Some(span_of(self.n, &vecs?).ok()?.dim())
    }
}

fn sample_hyperplanes(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Option<(Vec<Vec<Rational>>, Vec<Subspace>)> {
    let normals = RationalMatrix::random_integer(m, n, ENTRY_BOUND, rng).row_vectors();
    let mut lines = Vec::new();
    for block in all_blocks(m, n - 1) {
        let rows: Vec<Vec<Rational>> = block.iter().map(|&a| normals[a - 1].clone()).collect();
        let line = span_of(n, &nullspace(&rows, n)).ok()?;
        if line.dim() != 1 {
            return None;
        }
        lines.push(line);
    }
    Some((normals, lines))
}

pub fn hyperplane_lines(n: usize, m: usize, seed: u64) -> Result<HyperplaneLines> {
    if n < 2 || m < n || m > 64 {
        return Err(Error::InvalidParameters(format!("need 2 <= n <= m <= 64, got n = {n}, m = {m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (normals, lines) = (0..SAMPLE_RETRIES)
        .find_map(|_| sample_hyperplanes(n, m, &mut rng))
        .ok_or_else(|| Error::NonGenericHyperplanes(format!("no generic sample in {SAMPLE_RETRIES} tries")))?;
    let blocks = all_blocks(m, n - 1);
    let mut comparison = MatroidComparisonH { equal: true, checked: 0, witness: None };
    'outer: for k in 1..=n.min(blocks.len()) {
        for set in (0..blocks.len()).combinations(k) {
            comparison.checked += 1;
            let vecs: Vec<Vec<Rational>> = set.iter().map(|&i| lines[i].basis_vectors()[0].clone()).collect();
            let lin = span_of(n, &vecs)?.dim();
            let sys = SetSystem::new(m, n - 1, set.iter().map(|&i| blocks[i].clone()).collect());
            let comb = crate::matroid::hm_rank(n, m, &sys)?;
            if lin != comb {
                comparison.equal = false;
                comparison.witness = Some(sys.blocks);
                break 'outer;
            }
        }
    }
    Ok(HyperplaneLines { n, m, normals, blocks, lines, comparison })
}
