//! Set-system matroids on `c`-subsets of `[m]`: the hyperplane-line matroid
//! `H(n,m)` and the Dilworth truncation of the free matroid.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Wire form: `{"m":5,"c":3,"blocks":[[1,2,4],[1,3,4]]}`. Elements are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetSystem {
    pub m: usize,
    pub c: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl SetSystem {
    pub fn new(m: usize, c: usize, blocks: Vec<Vec<usize>>) -> Self {
        SetSystem { m, c, blocks }
    }

    /// Validates the blocks and packs them as bitmasks (bit `i-1` for element `i`).
    pub fn masks(&self) -> Result<Vec<u64>> {
        if self.m == 0 || self.m > 64 {
            return Err(Error::MalformedBlocks(format!("m = {} must lie in 1..=64", self.m)));
        }
        let mut out = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            let mut mask = 0u64;
            for &x in b {
                if x == 0 || x > self.m {
                    return Err(Error::MalformedBlocks(format!("element {x} outside 1..={}", self.m)));
                }
                mask |= 1 << (x - 1);
            }
            if mask.count_ones() as usize != b.len() || b.len() != self.c {
                return Err(Error::MalformedBlocks(format!(
                    "block {b:?} does not have {} distinct elements",
                    self.c
                )));
            }
            out.push(mask);
        }
        let distinct: BTreeSet<u64> = out.iter().copied().collect();
        if distinct.len() != out.len() {
            return Err(Error::MalformedBlocks("repeated block".into()));
        }
        Ok(out)
    }
}

/// All `c`-subsets of `[m]`, lexicographic, 1-based.
pub fn all_blocks(m: usize, c: usize) -> Vec<Vec<usize>> {
    (1..=m).combinations(c).collect()
}

fn mask_of(block: &[usize]) -> u64 {
    block.iter().fold(0, |acc, &x| acc | 1 << (x - 1))
}

// True when `ok(size, intersection, union)` holds for every nonempty subcollection.
fn every_subcollection(masks: &[u64], full: u64, ok: &dyn Fn(usize, u64, u64) -> bool) -> bool {
    fn go(
        masks: &[u64],
        start: usize,
        size: usize,
        inter: u64,
        union: u64,
        ok: &dyn Fn(usize, u64, u64) -> bool,
    ) -> bool {
        for i in start..masks.len() {
            let (ni, nu) = (inter & masks[i], union | masks[i]);
            if !ok(size + 1, ni, nu) || !go(masks, i + 1, size + 1, ni, nu, ok) {
                return false;
            }
        }
        true
    }
    go(masks, 0, 0, full, 0, ok)
}

fn full_mask(m: usize) -> u64 {
    if m == 64 {
        u64::MAX
    } else {
        (1 << m) - 1
    }
}

fn hm_masks(n: usize, m: usize, sys: &SetSystem) -> Result<Vec<u64>> {
    if n < 2 || sys.m != m || sys.c != n - 1 || m < n - 1 {
        return Err(Error::MalformedBlocks(format!(
            "expected ({}-subsets of [{m}]) with m >= n - 1, got c = {}, m = {}",
            n.saturating_sub(1),
            sys.c,
            sys.m
        )));
    }
    sys.masks()
}

fn hm_indep_masks(n: usize, m: usize, masks: &[u64]) -> bool {
    masks.len() <= n
        && every_subcollection(masks, full_mask(m), &|s, inter, _| {
            inter.count_ones() as usize + s <= n
        })
}

/// Independence in `H(n,m)`: every subcollection `S` has `|meet S| <= n - |S|`.
pub fn hm_is_independent(n: usize, m: usize, sys: &SetSystem) -> Result<bool> {
    Ok(hm_indep_masks(n, m, &hm_masks(n, m, sys)?))
}

pub fn hm_is_basis(n: usize, m: usize, sys: &SetSystem) -> Result<bool> {
    Ok(sys.blocks.len() == n && hm_is_independent(n, m, sys)?)
}

pub fn hm_rank(n: usize, m: usize, sys: &SetSystem) -> Result<usize> {
    let masks = hm_masks(n, m, sys)?;
    let mut chosen = Vec::new();
    for &b in &masks {
        chosen.push(b);
        if !hm_indep_masks(n, m, &chosen) {
            chosen.pop();
        }
    }
    Ok(chosen.len())
}

/// All circuits of `H(n,m)` as lists of indices into [`all_blocks`]`(m, n-1)`.
pub fn hm_circuits(n: usize, m: usize) -> Vec<Vec<usize>> {
    let masks: Vec<u64> = all_blocks(m, n - 1).iter().map(|b| mask_of(b)).collect();
    let mut out = Vec::new();
    for size in 1..=n + 1 {
        for idx in (0..masks.len()).combinations(size) {
            let sub: Vec<u64> = idx.iter().map(|&i| masks[i]).collect();
            if hm_indep_masks(n, m, &sub) {
                continue;
            }
            let minimal = (0..size).all(|skip| {
                let rest: Vec<u64> =
                    sub.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, &b)| b).collect();
                hm_indep_masks(n, m, &rest)
            });
            if minimal {
                out.push(idx);
            }
        }
    }
    out
}

fn dilworth_indep_masks(m: usize, k: usize, masks: &[u64]) -> bool {
    masks.len() + k <= m + 1
        && every_subcollection(masks, full_mask(m), &|s, _, union| {
            union.count_ones() as usize + 1 >= s + k
        })
}

/// Independence in the `k`-th Dilworth truncation of the free matroid on
/// `[m]`: every subcollection `S` has `|union S| >= |S| + k - 1`.
pub fn dilworth_is_independent(m: usize, k: usize, sys: &SetSystem) -> Result<bool> {
    if k == 0 || sys.m != m || sys.c != k {
        return Err(Error::MalformedBlocks(format!(
            "expected {k}-subsets of [{m}], got c = {}, m = {}",
            sys.c, sys.m
        )));
    }
    Ok(dilworth_indep_masks(m, k, &sys.masks()?))
}

pub fn dilworth_is_basis(m: usize, k: usize, sys: &SetSystem) -> Result<bool> {
    Ok(sys.blocks.len() + k == m + 1 && dilworth_is_independent(m, k, sys)?)
}

/// Outcome of the exhaustive complementation check between `H(n,m)` and
/// the `(m-n+1)`-th Dilworth truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub candidates: usize,
    pub hm_bases: usize,
    /// `B` is an `H` basis iff `{[m]-A : A in B}` is a Dilworth basis.
    pub complement_mismatches: usize,
    /// `B` is an `H` basis iff `{[m]-A : A not in B}` is a basis of the dual
    /// of the Dilworth truncation.
    pub dual_mismatches: usize,
}

impl DualityReport {
    pub fn holds(&self) -> bool {
        self.complement_mismatches == 0 && self.dual_mismatches == 0
    }
}

pub fn hm_dilworth_duality(n: usize, m: usize) -> Result<DualityReport> {
    if n < 2 || m < n {
        return Err(Error::InvalidParameters(format!("need 2 <= n <= m, got n = {n}, m = {m}")));
    }
    let k = m - n + 1;
    let full = full_mask(m);
    let blocks: Vec<u64> = all_blocks(m, n - 1).iter().map(|b| mask_of(b)).collect();
    let comp: Vec<u64> = blocks.iter().map(|b| full & !b).collect();
    let dil_rank = m - k + 1;

    let dil_bases: BTreeSet<Vec<usize>> = (0..comp.len())
        .combinations(dil_rank)
        .filter(|idx| {
            let sub: Vec<u64> = idx.iter().map(|&i| comp[i]).collect();
            dilworth_indep_masks(m, k, &sub)
        })
        .collect();
    let dual_bases: BTreeSet<Vec<usize>> = dil_bases
        .iter()
        .map(|b| (0..comp.len()).filter(|i| !b.contains(i)).collect())
        .collect();

    let mut report = DualityReport {
        n,
        m,
        k,
        candidates: 0,
        hm_bases: 0,
        complement_mismatches: 0,
        dual_mismatches: 0,
    };
    for idx in (0..blocks.len()).combinations(n) {
        report.candidates += 1;
        let sub: Vec<u64> = idx.iter().map(|&i| blocks[i]).collect();
        let is_h = hm_indep_masks(n, m, &sub);
        report.hm_bases += is_h as usize;
        let images: Vec<u64> = idx.iter().map(|&i| comp[i]).collect();
        if is_h != (images.len() == dil_rank && dilworth_indep_masks(m, k, &images)) {
            report.complement_mismatches += 1;
        }
        let outside: Vec<usize> = (0..blocks.len()).filter(|i| !idx.contains(i)).collect();
        if is_h != dual_bases.contains(&outside) {
            report.dual_mismatches += 1;
        }
    }
    Ok(report)
}
