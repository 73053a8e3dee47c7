//! Seed numbers and seed sets of `R^m`.
//!
//! With `k` rows the construction provides `u_k = ((|R|−2)(k−1)+2)·k/2`
//! columns: the identity block plus, at stage `j`, `(j−1)(|R|−2)` columns
//! of the shape `(1,…,1,s,…,s,0,…,0)` with `s ∈ R∖{0,1}`.

use num_integer::Roots;

use crate::closure::{gen_closure, lc_index, Space};
use crate::ege::ege;
use crate::error::{Error, Result};
use crate::nearfield::{Elem, Nearfield, Style};
use crate::nvspace::{NfMatrix, NfVector};

/// Widest seed matrix [`build_seed`] will produce.
pub const MAX_SEED_WIDTH: usize = 1 << 16;

/// `u_k` by the recurrence `u_1 = 1`, `u_{k+1} = u_k + (|R|−2)k + 1`.
/// `u_0 = 0`.
pub fn u_max(k: u64, order: u64) -> u128 {
    let step = order as u128 - 2;
    let mut u: u128 = if k == 0 { 0 } else { 1 };
    for i in 1..k.max(1) as u128 {
        u += step * i + 1;
    }
    u
}

pub fn u_max_closed(k: u64, order: u64) -> u128 {
    let (k, t) = (k as u128, order as u128);
    if k == 0 {
        return 0;
    }
    ((t - 2) * (k - 1) + 2) * k / 2
}

/// The least `k` with `u_k ≥ m`, from the ceiling expression in exact
/// integer arithmetic.
pub fn seed_number(m: u64, order: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    if order < 3 {
        return Err(Error::Precondition(format!("seed number needs |R| ≥ 3, got {order}")));
    }
    let (t, mm) = (order as i128, m as i128);
    let disc = t * t + 8 * (t - 2) * mm - 8 * t + 16;
    let s = disc.sqrt();
    let num = t - 4 + s;
    let den = 2 * (t - 2);
    // for a non-square discriminant the true numerator lies strictly
    // between num and num + 1
    let k = if s * s == disc { (num + den - 1).div_euclid(den) } else { num.div_euclid(den) + 1 };
    let k = k as u64;
    let (lo, hi) = (u_max(k.saturating_sub(1), order), u_max(k, order));
    if !(lo < m as u128 && m as u128 <= hi) {
        return Err(Error::Internal(format!(
            "seed number {k} for m={m} fails u_(k-1) < m ≤ u_k ({lo}, {hi})"
        )));
    }
    Ok(k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedMatrix {
    pub matrix: NfMatrix,
    pub k: usize,
    /// `R∖{0,1}` in the order the construction walks it.
    pub s_order: Vec<Elem>,
}

impl SeedMatrix {
    /// Comment lines for the matrix file.
    pub fn header_comments(&self, nf: &Nearfield) -> Vec<String> {
        let s: Vec<String> = self.s_order.iter().map(|&e| nf.format_elem(e, Style::Poly)).collect();
        vec![
            format!("seed set of R^{} over DN({},{})", self.matrix.ncols(), nf.q(), nf.n()),
            format!("q={} n={} m={} k={}", nf.q(), nf.n(), self.matrix.ncols(), self.k),
            format!("s_order={}", s.join(",")),
        ]
    }
}

fn seed_columns(k: usize, s_order: &[Elem], m: usize) -> Vec<NfVector> {
    let mut cols: Vec<NfVector> = (0..k).map(|i| NfVector::unit(k, i)).collect();
    'stages: for j in 2..=k {
        for counter in 0..=j - 2 {
            for &s in s_order {
                if cols.len() >= m {
                    break 'stages;
                }
                let mut col = NfVector::zero(k);
                for row in 0..j {
                    col.0[row] = if row <= counter { Elem::ONE } else { s };
                }
                cols.push(col);
            }
        }
    }
    cols.truncate(m);
    cols
}

/// The `k × m` seed matrix with `k = seed_number(m)`.
pub fn build_seed(nf: &Nearfield, m: usize) -> Result<SeedMatrix> {
    if nf.is_field() {
        return Err(Error::Precondition("seed construction needs a proper nearfield".into()));
    }
    if nf.order() < 5 {
        return Err(Error::Precondition(format!("seed construction needs |R| ≥ 5, got {}", nf.order())));
    }
    if m == 0 || m > MAX_SEED_WIDTH {
        return Err(Error::InvalidInput(format!("m must be in 1..={MAX_SEED_WIDTH}, got {m}")));
    }
    let k = seed_number(m as u64, nf.order() as u64)? as usize;
    let s_order: Vec<Elem> = nf.elements().skip(2).collect();
    let cols = seed_columns(k, &s_order, m);
    let matrix = NfMatrix::new(k, cols)?.transpose();
    Ok(SeedMatrix { matrix, k, s_order })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedReport {
    pub rows: usize,
    pub columns: usize,
    pub dimension: usize,
    pub generates: bool,
    /// `|gen(V)| = |R|^m`, when `R^m` fits the closure budget.
    pub closure_agrees: Option<bool>,
    /// Linearity index of the rows, when the closure check ran.
    pub index: Option<usize>,
}

/// Decides `gen(V) = R^m` through EGE, cross-checked by brute-force closure
/// when `|R|^m ≤ closure_budget`.
pub fn seed_report(nf: &Nearfield, v: &NfMatrix, closure_budget: u64) -> Result<SeedReport> {
    let m = v.ncols();
    let dimension = ege(nf, v).dimension;
    let generates = dimension == m;
    let (closure_agrees, index) = match Space::new(nf, m, closure_budget) {
        Ok(space) => {
            let full = gen_closure(&space, v.rows())?.len() == space.size();
            let index = if full { Some(lc_index(&space, v.rows())?) } else { None };
            (Some(full == generates), index)
        }
        Err(Error::BudgetExceeded { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    Ok(SeedReport { rows: v.nrows(), columns: m, dimension, generates, closure_agrees, index })
}

pub fn verify_seed(nf: &Nearfield, v: &NfMatrix) -> bool {
    ege(nf, v).dimension == v.ncols()
}

/// Whether no set of fewer than `seed_number(m)` vectors generates `R^m`,
/// checked by trying every `(k−1)`-subset of nonzero vectors.
pub fn seed_is_minimal(nf: &Nearfield, m: usize, budget: u64) -> Result<bool> {
    let k = seed_number(m as u64, nf.order() as u64)? as usize;
    let space = Space::new(nf, m, budget)?;
    let smaller = k - 1;
    if smaller == 0 {
        return Ok(true);
    }
    let top = space.size();
    let mut combo: Vec<usize> = (1..=smaller).collect();
    loop {
        let vectors: Vec<NfVector> = combo.iter().map(|&c| space.decode(c)).collect();
        if gen_closure(&space, &vectors)?.len() == top {
            return Ok(false);
        }
        let mut i = smaller;
        while i > 0 && combo[i - 1] == top - 1 - (smaller - i) {
            i -= 1;
        }
        if i == 0 {
            return Ok(true);
        }
        combo[i - 1] += 1;
        for j in i..smaller {
            combo[j] = combo[j - 1] + 1;
        }
    }
}
