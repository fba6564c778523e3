//! Multivariate polynomials with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Sparse polynomial: exponent vector to coefficient, zero terms never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Vec<u32>, BigInt>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        let mut p = Poly::zero();
        p.terms.insert(e, BigInt::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = trim(e);
        let slot = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn eval(&self, values: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t *= &values[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Renders with `names[i]` for variable `i`; terms sorted by their
    /// variable-index sequence.
    pub fn render(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<(Vec<usize>, &BigInt)> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let seq = e.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize)).collect();
                (seq, c)
            })
            .collect();
        terms.sort();
        let mut out = String::new();
        for (idx, (seq, c)) in terms.iter().enumerate() {
            let mono: String = seq.iter().map(|&i| names(i)).collect();
            let mag = c.abs();
            if c.is_negative() {
                out.push('-');
            } else if idx > 0 {
                out.push('+');
            }
            if mono.is_empty() || !mag.is_one() {
                out.push_str(&mag.to_string());
            }
            out.push_str(&mono);
        }
        out
    }
}

/// `a`, `b`, ..., `z`, then `x26`, `x27`, ...
pub fn letter_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("x{i}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&letter_name))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let len = e1.len().max(e2.len());
                let e: Vec<u32> = (0..len)
                    .map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

/// Determinant by Leibniz expansion; intended for matrices up to 4x4.
pub fn det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    fn go(m: &[Vec<Poly>], row: usize, used: &mut Vec<bool>, sign: bool, acc: Poly, out: &mut Poly) {
        let n = m.len();
        if acc.is_zero() {
            return;
        }
        if row == n {
            *out = if sign { &*out - &acc } else { &*out + &acc };
            return;
        }
        for c in 0..n {
            if used[c] {
                continue;
            }
            // parity of the inversions added by placing column c
            let inv = (c + 1..n).filter(|&k| used[k]).count() % 2 == 1;
            used[c] = true;
            go(m, row + 1, used, sign ^ inv, &acc * &m[row][c], out);
            used[c] = false;
        }
    }
    let mut out = Poly::zero();
    go(m, 0, &mut vec![false; n], false, Poly::one(), &mut out);
    out
}
