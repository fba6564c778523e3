//! Exact linear algebra over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Dense row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::MalformedMatrix("ragged rows".into()));
        }
        Ok(RationalMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix with the given vectors as columns.
    pub fn from_columns(ambient: usize, cols: &[Vec<Rational>]) -> Result<Self> {
        if cols.iter().any(|c| c.len() != ambient) {
            return Err(Error::MalformedMatrix("column length differs from ambient".into()));
        }
        let mut m = Self::zeros(ambient, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn random_integer<R: Rng>(rows: usize, cols: usize, bound: i64, rng: &mut R) -> Self {
        let entries = (0..rows * cols).map(|_| rat(rng.gen_range(-bound..=bound))).collect();
        RationalMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Rational> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let cols: Vec<Vec<Rational>> = idx.iter().map(|&j| self.column(j)).collect();
        Self::from_columns(self.rows, &cols).expect("same ambient")
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::MalformedMatrix(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    // Each row scaled by the lcm of its denominators.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let rows = (0..self.rows)
            .map(|i| {
                let row = &self.entries[i * self.cols..(i + 1) * self.cols];
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                scale *= &l;
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect();
        (rows, scale)
    }
}

// Fraction-free elimination, first nonzero pivot in column order.
// Returns (rank, sign of row swaps, last pivot).
fn bareiss(a: &mut [Vec<BigInt>], cols: usize) -> (usize, i32, BigInt) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut sign = 1;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    (r, sign, prev)
}

pub fn rank_of(m: &RationalMatrix) -> usize {
    let (mut rows, _) = m.integer_rows();
    bareiss(&mut rows, m.cols).0
}

pub fn det(m: &RationalMatrix) -> Result<Rational> {
    if m.rows != m.cols {
        return Err(Error::NonSquare { rows: m.rows, cols: m.cols });
    }
    if m.rows == 0 {
        return Ok(Rational::one());
    }
    let (mut rows, scale) = m.integer_rows();
    let (rank, sign, last) = bareiss(&mut rows, m.cols);
    if rank < m.rows {
        return Ok(Rational::zero());
    }
    Ok(Rational::new(last * sign, scale))
}

/// Reduced row echelon form; returns the nonzero rows and pivot columns.
pub fn rref(rows: &[Vec<Rational>], cols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let delta = &f * &a[r][j];
                    a[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Basis of `{x : M x = 0}` for `M` given by rows over `cols` unknowns.
pub fn nullspace(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// A linear subspace of `Q^ambient`, stored by its canonical reduced basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new() }
    }

    pub fn whole(ambient: usize) -> Self {
        span_of(ambient, &RationalMatrix::identity(ambient).columns()).expect("identity")
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Canonical basis vectors (reduced echelon rows, leading entry 1).
    pub fn basis_vectors(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Basis as a matrix whose columns span the subspace.
    pub fn basis(&self) -> RationalMatrix {
        RationalMatrix::from_columns(self.ambient, &self.rows).expect("consistent ambient")
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut rows = self.rows.clone();
        rows.push(v.to_vec());
        rref(&rows, self.ambient).0.len() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.rows.iter().all(|v| other.contains(v))
    }

    /// Vectors `y` with `<x, y> = 0` for all `x` in the subspace.
    pub fn annihilator(&self) -> Vec<Vec<Rational>> {
        nullspace(&self.rows, self.ambient)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span[")?;
        for (i, v) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let parts: Vec<String> = v.iter().map(format_rational).collect();
            write!(f, "({})", parts.join(","))?;
        }
        write!(f, "]")
    }
}

pub fn span_of(ambient: usize, vectors: &[Vec<Rational>]) -> Result<Subspace> {
    if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
        return Err(Error::AmbientMismatch(ambient, v.len()));
    }
    Ok(Subspace { ambient, rows: rref(vectors, ambient).0 })
}

pub fn intersect(u: &Subspace, v: &Subspace) -> Result<Subspace> {
    if u.ambient != v.ambient {
        return Err(Error::AmbientMismatch(u.ambient, v.ambient));
    }
    let mut constraints = u.annihilator();
    constraints.extend(v.annihilator());
    span_of(u.ambient, &nullspace(&constraints, u.ambient))
}

pub fn sum(u: &Subspace, v: &Subspace) -> Result<Subspace> {
    if u.ambient != v.ambient {
        return Err(Error::AmbientMismatch(u.ambient, v.ambient));
    }
    let mut rows = u.rows.clone();
    rows.extend(v.rows.iter().cloned());
    span_of(u.ambient, &rows)
}

pub fn intersect_all<'a>(ambient: usize, spaces: impl IntoIterator<Item = &'a Subspace>) -> Result<Subspace> {
    let mut constraints = Vec::new();
    for s in spaces {
        if s.ambient != ambient {
            return Err(Error::AmbientMismatch(ambient, s.ambient));
        }
        constraints.extend(s.annihilator());
    }
    span_of(ambient, &nullspace(&constraints, ambient))
}

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixWire {
            rows: self.rows,
            cols: self.cols,
            entries: self.row_vectors().iter().map(|r| r.iter().map(format_rational).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = MatrixWire::deserialize(d)?;
        if w.entries.len() != w.rows || w.entries.iter().any(|r| r.len() != w.cols) {
            return Err(D::Error::custom("entry count does not match rows x cols"));
        }
        let rows = w
            .entries
            .iter()
            .map(|r| r.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let mut m = RationalMatrix::from_rows(rows).map_err(D::Error::custom)?;
        m.rows = w.rows;
        m.cols = w.cols;
        Ok(m)
    }
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn max_abs_numerator(m: &RationalMatrix) -> BigInt {
    m.entries.iter().map(|x| x.numer().abs()).max().unwrap_or_default()
}
