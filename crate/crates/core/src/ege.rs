//! Expanded Gaussian Elimination.
//!
//! Ordinary row reduction keeps `gen` of the rows fixed, but over a proper
//! nearfield it can leave columns with several nonzero entries. Each such
//! conflict is removed with the distributivity trick: a right-distributivity
//! witness `(α, β, λ)` turns two conflicting rows into a new row `φ` whose
//! first nonzero entry sits in the conflict column. Alternating the two until
//! no column is shared yields `gen(V) = ⊕ u_i R` with support-disjoint rows.
//!
//! Every row operation is recorded as a [`Step`] so that the whole run can be
//! replayed with [`replay`].

use crate::error::{Error, Result};
use crate::nearfield::{Elem, Nearfield, Style, Witness};
use crate::nvspace::{NfMatrix, NfVector};

/// One recorded row operation. Row and column indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Swap { a: usize, b: usize },
    /// `row ← row ∘ by`
    Scale { row: usize, by: Elem },
    /// `target ← target − pivot ∘ by`
    Eliminate { target: usize, pivot: usize, by: Elem },
    /// Removes a zero row.
    Drop { row: usize },
    /// Distributivity trick on `column`; see [`distributivity_trick`].
    Trick { column: usize, witness: Witness },
}

/// The intermediate rows produced by a trick, kept for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrickRecord {
    pub column: usize,
    pub rows: (usize, usize),
    pub witness: Witness,
    pub theta: NfVector,
    pub phi: NfVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenDecomposition {
    /// Rows `u_i`: unit-led, sorted by leading column.
    pub basis: NfMatrix,
    pub dimension: usize,
    pub trace: Vec<Step>,
    pub tricks: Vec<TrickRecord>,
    /// False only over a field, where conflicts cannot be split and the
    /// basis is the plain reduced row-echelon form.
    pub canonical: bool,
}

fn apply_swap(m: &mut NfMatrix, a: usize, b: usize) {
    m.rows_mut().swap(a, b);
}

fn apply_scale(nf: &Nearfield, m: &mut NfMatrix, row: usize, by: Elem) {
    let scaled = nf.vec_scale(m.row(row), by);
    m.rows_mut()[row] = scaled;
}

fn apply_eliminate(nf: &Nearfield, m: &mut NfMatrix, target: usize, pivot: usize, by: Elem) {
    let sub = nf.vec_scale(m.row(pivot), by);
    let updated = nf.vec_sub_unchecked(m.row(target), &sub);
    m.rows_mut()[target] = updated;
}

/// Reduced row-echelon form in place, appending the operations to `trace`.
/// Zero rows are dropped.
fn rref_in_place(nf: &Nearfield, m: &mut NfMatrix, trace: &mut Vec<Step>) {
    let mut rank = 0;
    for col in 0..m.ncols() {
        if rank == m.nrows() {
            break;
        }
        let Some(pivot) = (rank..m.nrows()).find(|&i| !m.get(i, col).is_zero()) else {
            continue;
        };
        if pivot != rank {
            apply_swap(m, pivot, rank);
            trace.push(Step::Swap { a: pivot, b: rank });
        }
        let lead = m.get(rank, col);
        if lead != Elem::ONE {
            let by = nf.inv_nonzero(lead);
            apply_scale(nf, m, rank, by);
            trace.push(Step::Scale { row: rank, by });
        }
        for i in 0..m.nrows() {
            let a = m.get(i, col);
            if i != rank && !a.is_zero() {
                apply_eliminate(nf, m, i, rank, a);
                trace.push(Step::Eliminate { target: i, pivot: rank, by: a });
            }
        }
        rank += 1;
    }
    for row in (0..m.nrows()).rev() {
        if m.row(row).is_zero() {
            m.rows_mut().remove(row);
            trace.push(Step::Drop { row });
        }
    }
}

/// Reduced row-echelon form over the nearfield together with the steps taken.
pub fn rref(nf: &Nearfield, m: &NfMatrix) -> (NfMatrix, Vec<Step>) {
    let mut work = m.clone();
    let mut trace = Vec::new();
    rref_in_place(nf, &mut work, &mut trace);
    (work, trace)
}

/// The first column with two or more nonzero entries.
pub fn first_conflict(m: &NfMatrix) -> Option<usize> {
    (0..m.ncols()).find(|&j| m.column_weight(j) >= 2)
}

fn trick_in_place(
    nf: &Nearfield,
    m: &mut NfMatrix,
    column: usize,
    w: Witness,
) -> Result<TrickRecord> {
    if !nf.is_witness(&w) {
        return Err(Error::Precondition("witness does not violate right distributivity".into()));
    }
    if first_conflict(m) != Some(column) {
        return Err(Error::Precondition(format!(
            "column {column} is not the first column with two nonzero entries"
        )));
    }
    let mut hits = (0..m.nrows()).filter(|&i| !m.get(i, column).is_zero());
    let (r, s) = (hits.next().unwrap(), hits.next().unwrap());
    let (wr, ws) = (m.row(r).clone(), m.row(s).clone());
    let alpha_p = nf.mul(nf.inv_nonzero(wr[column]), w.alpha);
    let beta_p = nf.mul(nf.inv_nonzero(ws[column]), w.beta);

    // θ = (w_r α' + w_s β') λ − w_r (α' λ) − w_s (β' λ)
    let combined = nf.vec_add_unchecked(&nf.vec_scale(&wr, alpha_p), &nf.vec_scale(&ws, beta_p));
    let mut theta = nf.vec_scale(&combined, w.lambda);
    theta = nf.vec_sub_unchecked(&theta, &nf.vec_scale(&wr, nf.mul(alpha_p, w.lambda)));
    theta = nf.vec_sub_unchecked(&theta, &nf.vec_scale(&ws, nf.mul(beta_p, w.lambda)));
    debug_assert!(theta.0[..column].iter().all(|e| e.is_zero()));
    let lead = theta[column];
    if lead.is_zero() {
        return Err(Error::Internal("distributivity trick produced θ^j = 0".into()));
    }
    let phi = nf.vec_scale(&theta, nf.inv_nonzero(lead));

    // y = w − φ ∘ w^j for every row meeting the column, then append φ
    for i in 0..m.nrows() {
        let a = m.get(i, column);
        if !a.is_zero() {
            let updated = nf.vec_sub_unchecked(m.row(i), &nf.vec_scale(&phi, a));
            m.rows_mut()[i] = updated;
        }
    }
    m.rows_mut().push(phi.clone());
    Ok(TrickRecord { column, rows: (r, s), witness: w, theta, phi })
}

/// One application of the distributivity trick on `column`, which must be
/// the first column holding two nonzero entries. Every row meeting the
/// column is cleared against the new pivot row `φ`, which is appended.
pub fn distributivity_trick(
    nf: &Nearfield,
    m: &NfMatrix,
    column: usize,
    w: Witness,
) -> Result<(NfMatrix, TrickRecord)> {
    let mut work = m.clone();
    let record = trick_in_place(nf, &mut work, column, w)?;
    Ok((work, record))
}

/// Runs Expanded Gaussian Elimination with the nearfield's canonical witness.
pub fn ege(nf: &Nearfield, m: &NfMatrix) -> GenDecomposition {
    let mut work = m.clone();
    let mut trace = Vec::new();
    let mut tricks = Vec::new();
    let mut canonical = true;
    loop {
        rref_in_place(nf, &mut work, &mut trace);
        let Some(column) = first_conflict(&work) else { break };
        let Some(w) = nf.find_witness() else {
            canonical = false;
            break;
        };
        let record = trick_in_place(nf, &mut work, column, w)
            .expect("conflict column and canonical witness satisfy the trick preconditions");
        trace.push(Step::Trick { column, witness: w });
        tricks.push(record);
    }
    GenDecomposition { dimension: work.nrows(), basis: work, trace, tricks, canonical }
}

/// Applies a single step to `m`.
pub fn apply_step(nf: &Nearfield, m: &mut NfMatrix, step: &Step) -> Result<()> {
    let rows = m.nrows();
    let check = |i: usize| {
        if i < rows {
            Ok(())
        } else {
            Err(Error::Precondition(format!("row {i} out of range ({rows} rows)")))
        }
    };
    match *step {
        Step::Swap { a, b } => {
            check(a)?;
            check(b)?;
            apply_swap(m, a, b);
        }
        Step::Scale { row, by } => {
            check(row)?;
            if by.is_zero() {
                return Err(Error::Precondition("scaling by zero".into()));
            }
            apply_scale(nf, m, row, by);
        }
        Step::Eliminate { target, pivot, by } => {
            check(target)?;
            check(pivot)?;
            if target == pivot {
                return Err(Error::Precondition("row eliminated against itself".into()));
            }
            apply_eliminate(nf, m, target, pivot, by);
        }
        Step::Drop { row } => {
            check(row)?;
            if !m.row(row).is_zero() {
                return Err(Error::Precondition(format!("row {row} is not zero")));
            }
            m.rows_mut().remove(row);
        }
        Step::Trick { column, witness } => {
            if column >= m.ncols() {
                return Err(Error::Precondition(format!("column {column} out of range")));
            }
            trick_in_place(nf, m, column, witness)?;
        }
    }
    Ok(())
}

/// Replays a trace from the original input.
pub fn replay(nf: &Nearfield, input: &NfMatrix, trace: &[Step]) -> Result<NfMatrix> {
    let mut work = input.clone();
    for (i, step) in trace.iter().enumerate() {
        apply_step(nf, &mut work, step)
            .map_err(|e| Error::Replay { step: i, msg: e.to_string() })?;
    }
    Ok(work)
}

/// Renders one step per line: `SWAP a b`, `SCALE r c`, `ELIM t p c`,
/// `DROP r`, `TRICK j α β λ`.
pub fn format_trace(nf: &Nearfield, trace: &[Step]) -> String {
    let el = |a: Elem| nf.format_elem(a, Style::Poly);
    let mut out = String::new();
    for step in trace {
        let line = match *step {
            Step::Swap { a, b } => format!("SWAP {a} {b}"),
            Step::Scale { row, by } => format!("SCALE {row} {}", el(by)),
            Step::Eliminate { target, pivot, by } => format!("ELIM {target} {pivot} {}", el(by)),
            Step::Drop { row } => format!("DROP {row}"),
            Step::Trick { column, witness: w } => {
                format!("TRICK {column} {} {} {}", el(w.alpha), el(w.beta), el(w.lambda))
            }
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Parses the output of [`format_trace`]. Blank and `#` lines are skipped.
pub fn parse_trace(nf: &Nearfield, text: &str) -> Result<Vec<Step>> {
    let mut steps = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: no + 1, msg };
        let toks: Vec<&str> = line.split_whitespace().collect();
        let idx = |t: &str| t.parse::<usize>().map_err(|_| err(format!("bad index {t:?}")));
        let el = |t: &str| nf.parse_elem(t).map_err(|e| err(e.to_string()));
        let step = match toks.as_slice() {
            ["SWAP", a, b] => Step::Swap { a: idx(a)?, b: idx(b)? },
            ["SCALE", r, c] => Step::Scale { row: idx(r)?, by: el(c)? },
            ["ELIM", t, p, c] => Step::Eliminate { target: idx(t)?, pivot: idx(p)?, by: el(c)? },
            ["DROP", r] => Step::Drop { row: idx(r)? },
            ["TRICK", j, a, b, l] => Step::Trick {
                column: idx(j)?,
                witness: Witness { alpha: el(a)?, beta: el(b)?, lambda: el(l)? },
            },
            _ => return Err(err(format!("unrecognised step {line:?}"))),
        };
        steps.push(step);
    }
    Ok(steps)
}

/// `rel[a][b]` is true when column `a` is a left multiple of column `b`.
pub fn column_relations(nf: &Nearfield, m: &NfMatrix) -> Vec<Vec<bool>> {
    let cols = m.columns();
    cols.iter()
        .map(|a| {
            cols.iter()
                .map(|b| nf.left_multiple_of(a, b).expect("equal column heights").is_some())
                .collect()
        })
        .collect()
}

/// True when no column is a left multiple of another.
pub fn is_one_column_independent(nf: &Nearfield, m: &NfMatrix) -> Result<bool> {
    if m.ncols() < 2 {
        return Err(Error::InvalidInput("1-column independence needs at least 2 columns".into()));
    }
    let rel = column_relations(nf, m);
    let n = m.ncols();
    Ok((0..n).all(|i| (i + 1..n).all(|j| !rel[i][j] && !rel[j][i])))
}
