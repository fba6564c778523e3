//! Rank arrays of permutations, permutation-array floors and two vanishing
//! criteria for Schubert structure constants `c_{w^1 ... w^d}`.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};

use crate::matroid::{GroundSet, LatticePoint, SubSimplex};
use crate::util::binomial;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let seen: BTreeSet<usize> = images.iter().copied().collect();
        if n == 0 || seen.len() != n || seen.iter().any(|&x| x == 0 || x > n) {
            return Err(Error::InvalidParameters(format!("{images:?} is not a permutation of 1..{n}")));
        }
        Ok(Permutation { images })
    }

    /// One-line notation: `53124`, or comma-separated for `n >= 10`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let images: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad permutation entry {t:?}"))))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|x| x as usize).ok_or_else(|| Error::Parse(format!("bad digit {c:?}"))))
                .collect::<Result<_>>()?
        };
        Self::new(images)
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (1..=n).collect() }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `w(i)`, 1-based.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let w = &self.images;
        (0..w.len()).map(|i| (i + 1..w.len()).filter(|&j| w[i] > w[j]).count()).sum()
    }

    /// 1 in row `w(i)` of column `n - i + 1`.
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        let n = self.n();
        let mut m = vec![vec![0; n]; n];
        for i in 1..=n {
            m[self.apply(i) - 1][n - i] = 1;
        }
        m
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n() >= 10 { "," } else { "" };
        let parts: Vec<String> = self.images.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(sep))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankArray {
    pub n: usize,
    pub table: Vec<Vec<usize>>,
}

impl RankArray {
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.table[i - 1][j - 1]
    }

    /// Monotone with 0/1 steps along rows and columns, full rank in the corner.
    pub fn is_valid(&self) -> bool {
        let n = self.n;
        let t = &self.table;
        if t.len() != n || t.iter().any(|r| r.len() != n) || n == 0 || t[n - 1][n - 1] != n {
            return false;
        }
        let step = |a: usize, b: usize| b == a || b == a + 1;
        (0..n).all(|i| {
            (0..n).all(|j| {
                (i == 0 || step(t[i - 1][j], t[i][j])) && (j == 0 || step(t[i][j - 1], t[i][j]))
            })
        }) && step(0, t[0][0])
    }
}

impl fmt::Display for RankArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.table {
            let cells: Vec<String> = row.iter().map(usize::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Entry `(i, j)` is the rank of the upper-left `i × j` block of the permutation matrix.
pub fn rank_array(w: &Permutation) -> RankArray {
    let n = w.n();
    let m = w.matrix();
    let mut table = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let above = if i > 0 { table[i - 1][j] } else { 0 };
            let left = if j > 0 { table[i][j - 1] } else { 0 };
            let diag = if i > 0 && j > 0 { table[i - 1][j - 1] } else { 0 };
            table[i][j] = above + left - diag + m[i][j] as usize;
        }
    }
    RankArray { n, table }
}

pub fn length(w: &Permutation) -> usize {
    w.length()
}

/// Whether the lengths sum to `binomial(n, 2)`.
pub fn problem_dimension_ok(ws: &[Permutation]) -> Result<bool> {
    let Some(first) = ws.first() else {
        return Err(Error::InvalidParameters("no permutations given".into()));
    };
    let n = first.n();
    if ws.iter().any(|w| w.n() != n) {
        return Err(Error::InvalidParameters("permutations from different symmetric groups".into()));
    }
    Ok(ws.iter().map(Permutation::length).sum::<usize>() as u128 == binomial(n, 2))
}

/// Floors `P_1, ..., P_n` of a permutation array in `[n]^(d+1)`; floor `k`
/// holds the dots `(x_1, ..., x_d)` whose last coordinate is `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Floors {
    pub n: usize,
    pub d: usize,
    floors: Vec<Vec<Vec<usize>>>,
}

impl Floors {
    pub fn new(n: usize, d: usize, floors: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if n == 0 || d < 2 {
            return Err(Error::MalformedFloors(format!("need n >= 1 and d >= 2, got n = {n}, d = {d}")));
        }
        if floors.len() != n {
            return Err(Error::MalformedFloors(format!("{} floors, expected {n}", floors.len())));
        }
        let mut out = Vec::with_capacity(n);
        for (k, mut floor) in floors.into_iter().enumerate() {
            for dot in &floor {
                if dot.len() != d || dot.iter().any(|&x| x == 0 || x > n) {
                    return Err(Error::MalformedFloors(format!("dot {dot:?} on floor {} outside [{n}]^{d}", k + 1)));
                }
            }
            floor.sort();
            if let Some(w) = floor.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::MalformedFloors(format!("duplicate dot {:?} on floor {}", w[0], k + 1)));
            }
            out.push(floor);
        }
        Ok(Floors { n, d, floors: out })
    }

    /// Floor `k`, 1-based, sorted.
    pub fn floor(&self, k: usize) -> &[Vec<usize>] {
        &self.floors[k - 1]
    }

    pub fn floors(&self) -> &[Vec<Vec<usize>>] {
        &self.floors
    }

    /// `d = 3` boards, one per floor, written as in the text format.
    pub fn to_boards(&self) -> Result<String> {
        if self.d != 3 {
            return Err(Error::MalformedFloors("boards need d = 3".into()));
        }
        let n = self.n;
        let mut boards = Vec::new();
        for floor in &self.floors {
            let mut grid = vec![vec![".".to_string(); n]; n];
            for dot in floor {
                let cell = &mut grid[dot[0] - 1][dot[1] - 1];
                if cell != "." {
                    return Err(Error::MalformedFloors(format!("two dots share cell ({},{})", dot[0], dot[1])));
                }
                *cell = dot[2].to_string();
            }
            boards.push(grid.iter().map(|r| r.join(" ")).collect::<Vec<_>>().join("\n"));
        }
        Ok(boards.join("\n\n") + "\n")
    }
}

impl Serialize for Floors {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Map<'a>(&'a [Vec<Vec<usize>>]);
        impl Serialize for Map<'_> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(None)?;
                for (k, floor) in self.0.iter().enumerate().filter(|(_, f)| !f.is_empty()) {
                    m.serialize_entry(&(k + 1).to_string(), floor)?;
                }
                m.end()
            }
        }
        #[derive(Serialize)]
        struct Wire<'a> {
            n: usize,
            d: usize,
            floors: Map<'a>,
        }
        Wire { n: self.n, d: self.d, floors: Map(&self.floors) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Floors {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Wire {
            n: usize,
            d: usize,
            floors: std::collections::BTreeMap<String, Vec<Vec<usize>>>,
        }
        let wire = Wire::deserialize(de)?;
        let mut floors = vec![Vec::new(); wire.n];
        for (key, dots) in wire.floors {
            let k: usize = key.parse().map_err(|_| D::Error::custom(format!("floor key {key:?} is not a number")))?;
            if k == 0 || k > wire.n {
                return Err(D::Error::custom(format!("floor {k} outside 1..{}", wire.n)));
            }
            floors[k - 1] = dots;
        }
        Floors::new(wire.n, wire.d, floors).map_err(D::Error::custom)
    }
}

/// Parses either JSON floors or `d = 3` text boards: `n` lines of `n` tokens
/// per floor, floors separated by blank lines, `.` for an empty cell and a
/// number `k` in cell `(i, j)` for the dot `(i, j, k)`.
pub fn parse_floor_boards(input: &str) -> Result<Floors> {
    let trimmed = input.trim_start();
    if trimmed.starts_with('{') {
        return Ok(serde_json::from_str(trimmed)?);
    }
    let mut boards: Vec<Vec<Vec<&str>>> = Vec::new();
    let mut current: Vec<Vec<&str>> = Vec::new();
    for line in input.lines() {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            if !current.is_empty() {
                boards.push(std::mem::take(&mut current));
            }
        } else {
            current.push(tokens);
        }
    }
    if !current.is_empty() {
        boards.push(current);
    }
    let n = boards.len();
    if n == 0 {
        return Err(Error::MalformedFloors("no boards".into()));
    }
    let mut floors = Vec::with_capacity(n);
    for (b, board) in boards.iter().enumerate() {
        if board.len() != n || board.iter().any(|r| r.len() != n) {
            return Err(Error::MalformedFloors(format!("board {} is not {n} x {n}", b + 1)));
        }
        let mut dots = Vec::new();
        for (i, row) in board.iter().enumerate() {
            for (j, tok) in row.iter().enumerate() {
                if *tok == "." {
                    continue;
                }
                let k: usize = tok
                    .parse()
                    .map_err(|_| Error::MalformedFloors(format!("bad token {tok:?} on board {}", b + 1)))?;
                dots.push(vec![i + 1, j + 1, k]);
            }
        }
        floors.push(dots);
    }
    Floors::new(n, 3, floors)
}

/// `{x in [n]^d : sum x = (d-1)n + 1}` in lexicographic order.
pub fn transversal_array(n: usize, d: usize) -> Vec<Vec<usize>> {
    crate::util::compositions(n - 1, d)
        .into_iter()
        .map(|a| a.iter().map(|&x| n - x).collect::<Vec<usize>>())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Whether floor `k` is exactly the transversal permutation array.
pub fn is_transversal_floor(f: &Floors, k: usize) -> bool {
    k >= 1 && k <= f.n && f.floor(k) == transversal_array(f.n, f.d).as_slice()
}

/// `x -> (n - x_1, ..., n - x_d)`.
pub fn dot_to_point(n: usize, dot: &[usize]) -> LatticePoint {
    LatticePoint::new(dot.iter().map(|&x| n - x).collect::<Vec<_>>())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vanishing {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    /// Images in `T(n,d)` of the dots of `P_k ∩ P_n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<LatticePoint>>,
    /// `rank` independent points among them.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub independent: Option<Vec<LatticePoint>>,
    /// An overfull sub-simplex of the whole intersection, if it is dependent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<SubSimplex>,
}

impl Vanishing {
    pub fn vanishes(&self) -> bool {
        self.verdict == "VANISHES"
    }

    fn inconclusive() -> Self {
        Vanishing {
            verdict: "INCONCLUSIVE".into(),
            k: None,
            reason: None,
            rank: None,
            points: None,
            independent: None,
            violation: None,
        }
    }
}

/// Per-floor rank of `P_k ∩ P_n` in `T(n,d)`, for `k = 1..n-1`.
pub fn intersection_ranks(f: &Floors) -> Result<Vec<usize>> {
    let ground = GroundSet::new(f.n, f.d)?;
    (1..f.n).map(|k| Ok(ground.rank(&intersection_indices(f, &ground, k)?))).collect()
}

fn intersection_indices(f: &Floors, ground: &GroundSet, k: usize) -> Result<Vec<usize>> {
    let top: BTreeSet<&Vec<usize>> = f.floor(f.n).iter().collect();
    let points: Vec<LatticePoint> =
        f.floor(k).iter().filter(|x| top.contains(x)).map(|x| dot_to_point(f.n, x)).collect();
    for p in &points {
        assert_eq!(p.sum(), f.n - 1, "mapped dot {p} left the ground set");
    }
    ground.indices_of(&points)
}

/// First a non-transversal top floor, then the smallest `k` with
/// `rank(P_k ∩ P_n) > k`; otherwise INCONCLUSIVE. Neither criterion can
/// certify that a constant is nonzero.
pub fn vanishing_check(f: &Floors) -> Result<Vanishing> {
    if !is_transversal_floor(f, f.n) {
        return Ok(Vanishing {
            verdict: "VANISHES".into(),
            reason: Some("non-transversal top floor".into()),
            k: Some(f.n),
            ..Vanishing::inconclusive()
        });
    }
    let ground = GroundSet::new(f.n, f.d)?;
    for k in 1..f.n {
        let set = intersection_indices(f, &ground, k)?;
        let rank = ground.rank(&set);
        if rank > k {
            let independent = ground.max_independent(&set);
            return Ok(Vanishing {
                verdict: "VANISHES".into(),
                k: Some(k),
                reason: Some(format!("P_{k} ∩ P_{} has rank {rank} > {k}", f.n)),
                rank: Some(rank),
                points: Some(ground.point_set(&set).points),
                independent: Some(ground.point_set(&independent).points),
                violation: ground.find_violation(&set),
            });
        }
    }
    Ok(Vanishing::inconclusive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const C213: &str = "\
. . .
. . .
. . 1

. . 3
. . .
3 . 1

. . 3
. 3 2
3 2 1
";

    const C2134: &str = "\
. . . .
. . . .
. . . .
. 4 . .

. . . .
. . . .
. . . 4
. 4 . 1

. . . 4
. . . .
. 4 . 3
4 3 . 1

. . . 4
. . 4 3
. 4 3 2
4 3 2 1
";

    fn p(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    #[test]
    fn rank_array_53124() {
        let r = rank_array(&p("53124"));
        assert_eq!(
            r.table,
            vec![
                vec![0, 0, 1, 1, 1],
                vec![0, 1, 2, 2, 2],
                vec![0, 1, 2, 3, 3],
                vec![1, 2, 3, 4, 4],
                vec![1, 2, 3, 4, 5]
            ]
        );
        assert_eq!(
            p("53124").matrix(),
            vec![
                vec![0, 0, 1, 0, 0],
                vec![0, 1, 0, 0, 0],
                vec![0, 0, 0, 1, 0],
                vec![1, 0, 0, 0, 0],
                vec![0, 0, 0, 0, 1]
            ]
        );
        assert!(r.is_valid());
        assert_eq!(rank_array(&Permutation::identity(2)).table, vec![vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn lengths() {
        assert_eq!(p("213").length(), 1);
        assert_eq!(Permutation::identity(4).length(), 0);
        assert!(problem_dimension_ok(&[p("213"), p("213"), p("213")]).unwrap());
        assert_eq!(p("2134").length() + p("3142").length() + p("2314").length(), 6);
        assert!(problem_dimension_ok(&[p("2134"), p("3142"), p("2314")]).unwrap());
        assert!(!problem_dimension_ok(&[p("123"), p("213")]).unwrap());
        assert!(problem_dimension_ok(&[p("12"), p("213")]).is_err());
        assert!(Permutation::parse("1224").is_err());
        assert_eq!(p("10,1,2,3,4,5,6,7,8,9").to_string(), "10,1,2,3,4,5,6,7,8,9");
    }

    #[test]
    fn boards_213() {
        let f = parse_floor_boards(C213).unwrap();
        assert_eq!((f.n, f.d), (3, 3));
        assert_eq!(f.floor(1), &[vec![3, 3, 1]]);
        assert_eq!(f.floor(2), &[vec![1, 3, 3], vec![3, 1, 3], vec![3, 3, 1]]);
        assert!(is_transversal_floor(&f, 3));
        assert!(!is_transversal_floor(&f, 2));
        assert_eq!(f.to_boards().unwrap(), C213);
        let v = vanishing_check(&f).unwrap();
        assert!(v.vanishes());
        assert_eq!((v.k, v.rank), (Some(2), Some(3)));
        let pts: Vec<LatticePoint> = [[0, 0, 2], [0, 2, 0], [2, 0, 0]].iter().map(|c| LatticePoint::new(c.to_vec())).collect();
        assert_eq!(v.points.unwrap(), pts);
        assert_eq!(v.violation, None);
    }

    #[test]
    fn boards_2134_3142_2314() {
        let f = parse_floor_boards(C2134).unwrap();
        assert_eq!(f.floor(4).len(), 10);
        assert!(is_transversal_floor(&f, 4));
        let v = vanishing_check(&f).unwrap();
        assert_eq!((v.verdict.as_str(), v.k, v.rank), ("VANISHES", Some(3), Some(4)));
        let mut expected: Vec<LatticePoint> = [[3, 0, 0], [1, 2, 0], [0, 3, 0], [0, 2, 1], [0, 0, 3]]
            .iter()
            .map(|c| LatticePoint::new(c.to_vec()))
            .collect();
        expected.sort();
        assert_eq!(v.points.unwrap(), expected);
        assert_eq!(v.independent.unwrap().len(), 4);
        assert!(v.violation.is_some());
    }

    #[test]
    fn top_floor_criterion() {
        let mut floors = parse_floor_boards(C213).unwrap().floors().to_vec();
        floors[2].pop();
        let f = Floors::new(3, 3, floors).unwrap();
        let v = vanishing_check(&f).unwrap();
        assert_eq!(v.reason.as_deref(), Some("non-transversal top floor"));
    }

    #[test]
    fn inconclusive_when_lower_floors_empty() {
        let mut floors = vec![Vec::new(); 4];
        floors[3] = transversal_array(4, 3);
        let f = Floors::new(4, 3, floors).unwrap();
        assert_eq!(vanishing_check(&f).unwrap().verdict, "INCONCLUSIVE");
        assert_eq!(intersection_ranks(&f).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn parse_errors_and_json() {
        assert!(parse_floor_boards(". .\n. .\n\n. .\n. .\n").unwrap().floors().iter().all(Vec::is_empty));
        assert!(matches!(parse_floor_boards(". 3\n. .\n\n. .\n. .\n"), Err(Error::MalformedFloors(_))));
        assert!(parse_floor_boards("").is_err());
        assert!(Floors::new(2, 3, vec![vec![vec![1, 1, 1], vec![1, 1, 1]], vec![]]).is_err());
        let f = parse_floor_boards(C213).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.starts_with(r#"{"n":3,"d":3,"floors":{"1":[[3,3,1]],"2":"#));
        assert_eq!(parse_floor_boards(&json).unwrap(), f);
    }

    #[test]
    fn s6_plain_criterion_is_inconclusive() {
        let f = parse_floor_boards(include_str!("../../../fixtures/s6_boards.txt")).unwrap();
        assert_eq!((f.n, f.floors().len()), (6, 6));
        assert!(is_transversal_floor(&f, 6));
        let top: BTreeSet<&Vec<usize>> = f.floor(6).iter().collect();
        let meet: Vec<&Vec<usize>> = f.floor(4).iter().filter(|x| top.contains(x)).collect();
        assert_eq!(meet, vec![&vec![1, 6, 6], &vec![6, 1, 6], &vec![6, 6, 1]]);
        assert_eq!(intersection_ranks(&f).unwrap()[3], 3);
        assert_eq!(vanishing_check(&f).unwrap().verdict, "INCONCLUSIVE");
        let json = parse_floor_boards(include_str!("../../../fixtures/s6.json")).unwrap();
        assert_eq!(json, f);
    }

    #[test]
    fn transversal_sizes() {
        assert_eq!(transversal_array(4, 3).len(), 10);
        assert_eq!(transversal_array(3, 4).len(), 10);
        assert!(transversal_array(5, 3).iter().all(|x| x.iter().sum::<usize>() == 11));
    }

    proptest! {
        #[test]
        fn rank_arrays_are_valid(perm in Just((1..=7usize).collect::<Vec<_>>()).prop_shuffle()) {
            let w = Permutation::new(perm).unwrap();
            let r = rank_array(&w);
            prop_assert!(r.is_valid());
            prop_assert_eq!(r.get(w.n(), w.n()), w.n());
        }

        #[test]
        fn dots_map_into_ground(n in 1usize..7, d in 2usize..5) {
            for x in transversal_array(n, d) {
                prop_assert_eq!(dot_to_point(n, &x).sum(), n - 1);
            }
        }
    }
}
