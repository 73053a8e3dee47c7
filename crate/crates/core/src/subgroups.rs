//! Counting R-subgroups of `R^m` of a given R-dimension.
//!
//! The count uses canonical EGE shapes with columns in fixed order: a
//! partition of `t ≤ m` into `k` parts fixes the block widths, and each row
//! carries a leading 1 followed by nonzero entries across its block.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::closure::{gen_closure, Space};
use crate::error::{check_budget, Error, Result};
use crate::nearfield::{Elem, Nearfield};
use crate::nvspace::{NfMatrix, NfVector};

/// Memoized `p_k(t)`, the number of partitions of `t` into exactly `k` parts.
#[derive(Debug, Clone)]
pub struct PartitionTable {
    // table[k][t]
    table: Vec<Vec<BigUint>>,
}

impl PartitionTable {
    pub fn new(max_t: usize) -> Self {
        let mut table = vec![vec![BigUint::default(); max_t + 1]; max_t + 1];
        table[0][0] = BigUint::from(1u32);
        for k in 1..=max_t {
            for t in k..=max_t {
                table[k][t] = &table[k - 1][t - 1] + &table[k][t - k];
            }
        }
        PartitionTable { table }
    }

    pub fn get(&self, t: usize, k: usize) -> BigUint {
        self.table
            .get(k)
            .and_then(|row| row.get(t))
            .cloned()
            .unwrap_or_default()
    }
}

pub fn partitions_into_parts(t: usize, k: usize) -> BigUint {
    if k > t {
        return BigUint::default();
    }
    PartitionTable::new(t).get(t, k)
}

/// `Σ_{t=k}^{m} p_k(t) (|R|−1)^{t−k}`.
pub fn count_subgroups(m: usize, k: usize, order: u64) -> Result<BigUint> {
    if k == 0 || k > m {
        return Err(Error::InvalidInput(format!("need 1 ≤ k ≤ m, got m={m}, k={k}")));
    }
    let table = PartitionTable::new(m);
    let base = BigUint::from(order.saturating_sub(1));
    Ok((k..=m).map(|t| table.get(t, k) * base.pow((t - k) as u32)).sum())
}

/// Partitions of `t` into exactly `k` parts, each with parts descending,
/// in lexicographically decreasing order.
pub fn partitions(t: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, k: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let hi = max.min(rest + 1 - k);
        for part in (1..=hi).rev() {
            if part * k < rest {
                break;
            }
            cur.push(part);
            go(rest - part, k - 1, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 && k <= t {
        go(t, k, t, &mut Vec::new(), &mut out);
    }
    out
}

/// Lists every canonical matrix counted by [`count_subgroups`], ordered by
/// `t`, then partition, then entry codes.
pub fn enumerate_canonical(nf: &Nearfield, m: usize, k: usize, budget: u64) -> Result<Vec<NfMatrix>> {
    let total = count_subgroups(m, k, nf.order() as u64)?;
    let needed = u128::try_from(&total).unwrap_or(u128::MAX);
    check_budget(needed, budget)?;
    let nonzero: Vec<Elem> = nf.nonzero().collect();
    let mut out = Vec::new();
    for t in k..=m {
        for parts in partitions(t, k) {
            let free = t - k;
            let combos = nonzero.len().pow(free as u32);
            for idx in 0..combos {
                // free entries in reading order, last position fastest
                let mut digits = vec![0usize; free];
                let mut rest = idx;
                for d in digits.iter_mut().rev() {
                    *d = rest % nonzero.len();
                    rest /= nonzero.len();
                }
                let mut next = digits.into_iter();
                let mut rows = Vec::with_capacity(k);
                let mut col = 0;
                for &part in &parts {
                    let mut row = NfVector::zero(m);
                    row.0[col] = Elem::ONE;
                    for c in col + 1..col + part {
                        row.0[c] = nonzero[next.next().unwrap()];
                    }
                    col += part;
                    rows.push(row);
                }
                out.push(NfMatrix::new(m, rows)?);
            }
        }
    }
    Ok(out)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Number of classes among the subgroups generated by the canonical
/// matrices when subgroups related by a coordinate permutation are merged.
/// Reported for comparison with [`count_subgroups`], which keeps columns
/// fixed.
pub fn orbit_count(nf: &Nearfield, m: usize, k: usize, budget: u64) -> Result<usize> {
    let space = Space::new(nf, m, budget)?;
    let perms = permutations(m);
    let mut seen = BTreeSet::new();
    for mat in enumerate_canonical(nf, m, k, budget)? {
        let group = gen_closure(&space, mat.rows())?;
        let key = perms
            .iter()
            .map(|p| {
                let mut codes: Vec<usize> = group
                    .vectors()
                    .into_iter()
                    .map(|v| space.encode(&NfVector(p.iter().map(|&i| v[i]).collect())))
                    .collect();
                codes.sort_unstable();
                codes
            })
            .min()
            .unwrap();
        seen.insert(key);
    }
    Ok(seen.len())
}
