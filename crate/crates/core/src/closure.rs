//! Brute-force ground truth for `gen`, the strata `LC_p`, the linearity index
//! and γ-linear dependence.
//!
//! Vectors of `R^m` are encoded as mixed-radix integers `Σ v_i · |R|^i`, and
//! sets are flat membership bitmaps over that range, so everything here is
//! limited to `|R|^m` within the element budget.

use std::collections::BTreeMap;

use crate::error::{check_budget, Error, Result};
use crate::nearfield::{Elem, Nearfield};
use crate::nvspace::NfVector;

/// Index arithmetic on `R^m`.
#[derive(Clone, Copy)]
pub struct Space<'a> {
    nf: &'a Nearfield,
    m: usize,
    size: usize,
}

impl<'a> Space<'a> {
    pub fn new(nf: &'a Nearfield, m: usize, budget: u64) -> Result<Self> {
        let needed = (nf.order() as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
        check_budget(needed, budget)?;
        Ok(Space { nf, m, size: needed as usize })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn encode(&self, v: &NfVector) -> usize {
        let n = self.nf.order() as usize;
        v.entries().iter().rev().fold(0, |acc, e| acc * n + e.code() as usize)
    }

    pub fn decode(&self, mut idx: usize) -> NfVector {
        let n = self.nf.order() as usize;
        let mut out = Vec::with_capacity(self.m);
        for _ in 0..self.m {
            out.push(Elem((idx % n) as u32));
            idx /= n;
        }
        NfVector(out)
    }

    fn zip_with(&self, a: usize, b: usize, op: impl Fn(Elem, Elem) -> Elem) -> usize {
        let n = self.nf.order() as usize;
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.m {
            let e = op(Elem((a % n) as u32), Elem((b % n) as u32));
            out += e.code() as usize * place;
            place *= n;
            a /= n;
            b /= n;
        }
        out
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.zip_with(a, b, |x, y| self.nf.add(x, y))
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.zip_with(a, b, |x, y| self.nf.sub(x, y))
    }

    /// The module action `v ∘ r` on an encoded vector.
    pub fn scale(&self, a: usize, r: Elem) -> usize {
        self.zip_with(a, 0, |x, _| self.nf.mul(x, r))
    }
}

/// A deduplicated set of vectors of `R^m`, iterated in code order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorSet {
    m: usize,
    order: u32,
    members: Vec<usize>,
}

impl VectorSet {
    pub fn from_vectors(space: &Space<'_>, vectors: &[NfVector]) -> Result<Self> {
        if let Some(bad) = vectors.iter().find(|v| v.len() != space.m) {
            return Err(Error::DimensionMismatch { expected: space.m, found: bad.len() });
        }
        let mut members: Vec<usize> = vectors.iter().map(|v| space.encode(v)).collect();
        members.sort_unstable();
        members.dedup();
        Ok(VectorSet { m: space.m, order: space.nf.order(), members })
    }

    fn from_sorted(space: &Space<'_>, members: Vec<usize>) -> Self {
        VectorSet { m: space.m, order: space.nf.order(), members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_code(&self, idx: usize) -> bool {
        self.members.binary_search(&idx).is_ok()
    }

    pub fn codes(&self) -> &[usize] {
        &self.members
    }

    pub fn vectors(&self) -> Vec<NfVector> {
        let n = self.order as usize;
        self.members
            .iter()
            .map(|&idx| {
                let mut rest = idx;
                NfVector(
                    (0..self.m)
                        .map(|_| {
                            let e = Elem((rest % n) as u32);
                            rest /= n;
                            e
                        })
                        .collect(),
                )
            })
            .collect()
    }

    pub fn contains(&self, space: &Space<'_>, v: &NfVector) -> bool {
        v.len() == self.m && self.contains_code(space.encode(v))
    }
}

/// Additive subgroup generated by `gens`, grown one coset layer at a time:
/// a new generator `g ∉ H` of prime order `p` gives `H ∪ (H+g) ∪ … ∪ (H+(p−1)g)`.
fn additive_closure(space: &Space<'_>, gens: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let p = space.nf.p();
    let mut member = vec![false; space.size];
    member[0] = true;
    let mut list = vec![0usize];
    for g in gens {
        if member[g] {
            continue;
        }
        let base = list.len();
        let mut shift = g;
        for _ in 1..p {
            for i in 0..base {
                let x = space.add(list[i], shift);
                debug_assert!(!member[x]);
                member[x] = true;
                list.push(x);
            }
            shift = space.add(shift, g);
        }
    }
    list.sort_unstable();
    list
}

/// `LC_{n+1}` from `LC_n`: all finite sums of right-scaled members,
/// including the empty sum.
pub fn lc_step(space: &Space<'_>, set: &VectorSet) -> VectorSet {
    let nf = space.nf;
    let gens = set
        .members
        .iter()
        .flat_map(|&w| nf.nonzero().map(move |r| space.scale(w, r)));
    VectorSet::from_sorted(space, additive_closure(space, gens))
}

/// `LC_0 = V, LC_1, …` up to and including the first stratum that repeats
/// its predecessor.
pub fn lc_strata(space: &Space<'_>, vectors: &[NfVector]) -> Result<Vec<VectorSet>> {
    let mut strata = vec![VectorSet::from_vectors(space, vectors)?];
    loop {
        let next = lc_step(space, strata.last().unwrap());
        let done = strata.len() > 1 && next == *strata.last().unwrap();
        strata.push(next);
        if done {
            return Ok(strata);
        }
    }
}

/// The smallest R-subgroup containing `vectors`.
pub fn gen_closure(space: &Space<'_>, vectors: &[NfVector]) -> Result<VectorSet> {
    Ok(lc_strata(space, vectors)?.pop().unwrap())
}

/// Least positive `p` with `LC_p(V) = R^m`.
pub fn lc_index(space: &Space<'_>, vectors: &[NfVector]) -> Result<usize> {
    let strata = lc_strata(space, vectors)?;
    strata
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, s)| s.len() == space.size)
        .map(|(p, _)| p)
        .ok_or(Error::IndexUndefined { m: space.m })
}

/// `LC_γ` of a vector list.
pub fn lc_gamma(space: &Space<'_>, vectors: &[NfVector], gamma: usize) -> Result<VectorSet> {
    let mut set = VectorSet::from_vectors(space, vectors)?;
    for _ in 0..gamma {
        let next = lc_step(space, &set);
        if next == set {
            break;
        }
        set = next;
    }
    Ok(set)
}

/// The first index `i` with `v_i ∈ LC_γ(V ∖ {v_i})`, if any.
pub fn is_gamma_dependent(
    space: &Space<'_>,
    vectors: &[NfVector],
    gamma: usize,
) -> Result<Option<usize>> {
    if gamma == 0 {
        return Err(Error::InvalidInput("γ must be positive".into()));
    }
    for i in 0..vectors.len() {
        let rest: Vec<NfVector> = vectors
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| v.clone())
            .collect();
        if lc_gamma(space, &rest, gamma)?.contains(space, &vectors[i]) {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lc1Report {
    pub size: usize,
    /// `|R|^k`, saturated at `u128::MAX`.
    pub bound: u128,
    pub two_independent: bool,
    /// For 2-independent sets: `|LC_1| = |R|^k` and `k ≤ m` both held.
    pub cardinality_holds: bool,
}

/// Measures `|LC_1(V)|` and checks it against `|R|^k`.
pub fn check_lc1_cardinality(space: &Space<'_>, vectors: &[NfVector]) -> Result<Lc1Report> {
    let k = vectors.len() as u32;
    let bound = (space.nf.order() as u128).checked_pow(k).unwrap_or(u128::MAX);
    let size = lc_gamma(space, vectors, 1)?.len();
    let two_independent = is_gamma_dependent(space, vectors, 2)?.is_none();
    let cardinality_holds = (size as u128) <= bound
        && (!two_independent || (size as u128 == bound && vectors.len() <= space.m));
    Ok(Lc1Report { size, bound, two_independent, cardinality_holds })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSearch {
    pub examined: usize,
    pub generating: usize,
    /// index → number of generating sets with that index
    pub histogram: BTreeMap<usize, usize>,
    pub max_index: Option<usize>,
    pub example: Option<Vec<NfVector>>,
}

/// Scans `k`-subsets of nonzero vectors of `R^m` in lexicographic code order,
/// at most `bound` of them, and records the linearity index of those that
/// generate the whole space.
pub fn search_index(space: &Space<'_>, k: usize, bound: usize) -> Result<IndexSearch> {
    let mut report = IndexSearch {
        examined: 0,
        generating: 0,
        histogram: BTreeMap::new(),
        max_index: None,
        example: None,
    };
    let top = space.size;
    if k == 0 || k >= top {
        return Ok(report);
    }
    let mut combo: Vec<usize> = (1..=k).collect();
    while report.examined < bound {
        let vectors: Vec<NfVector> = combo.iter().map(|&c| space.decode(c)).collect();
        report.examined += 1;
        match lc_index(space, &vectors) {
            Ok(p) => {
                report.generating += 1;
                *report.histogram.entry(p).or_default() += 1;
                if report.max_index.is_none_or(|best| p > best) {
                    report.max_index = Some(p);
                    report.example = Some(vectors);
                }
            }
            Err(Error::IndexUndefined { .. }) => {}
            Err(e) => return Err(e),
        }
        // next combination of {1, …, top−1}
        let mut i = k;
        while i > 0 && combo[i - 1] == top - 1 - (k - i) {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        combo[i - 1] += 1;
        for j in i..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
    Ok(report)
}
