//! Vectors and matrices over a nearfield, with scalars acting on the right.
//!
//! Values do not carry their nearfield; every operation takes it explicitly.

use std::fmt;

use crate::error::{Error, Result};
use crate::nearfield::{Elem, Nearfield, Style};

/// An element of `R^m`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NfVector(pub Vec<Elem>);

impl NfVector {
    pub fn zero(m: usize) -> Self {
        NfVector(vec![Elem::ZERO; m])
    }

    /// The standard basis vector with a 1 in position `i`.
    pub fn unit(m: usize, i: usize) -> Self {
        let mut v = Self::zero(m);
        v.0[i] = Elem::ONE;
        v
    }

    pub fn from_codes(codes: &[u32]) -> Self {
        NfVector(codes.iter().map(|&c| Elem(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|e| e.is_zero())
    }

    /// Index of the first nonzero entry.
    pub fn leading(&self) -> Option<usize> {
        self.0.iter().position(|e| !e.is_zero())
    }

    pub fn support_len(&self) -> usize {
        self.0.iter().filter(|e| !e.is_zero()).count()
    }

    pub fn entries(&self) -> &[Elem] {
        &self.0
    }

    pub fn codes(&self) -> Vec<u32> {
        self.0.iter().map(|e| e.code()).collect()
    }
}

impl fmt::Debug for NfVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.codes())
    }
}

impl std::ops::Index<usize> for NfVector {
    type Output = Elem;

    fn index(&self, i: usize) -> &Elem {
        &self.0[i]
    }
}

/// A `k × m` matrix stored as rows. `k = 0` is allowed in intermediate
/// results; the column count is kept explicitly.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NfMatrix {
    cols: usize,
    rows: Vec<NfVector>,
}

impl NfMatrix {
    pub fn new(cols: usize, rows: Vec<NfVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: bad.len() });
        }
        Ok(NfMatrix { cols, rows })
    }

    pub(crate) fn from_rows_unchecked(cols: usize, rows: Vec<NfVector>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        NfMatrix { cols, rows }
    }

    pub fn from_codes(rows: &[&[u32]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::new(cols, rows.iter().map(|r| NfVector::from_codes(r)).collect())
    }

    pub fn identity(m: usize) -> Self {
        NfMatrix { cols: m, rows: (0..m).map(|i| NfVector::unit(m, i)).collect() }
    }

    pub fn zeros(k: usize, m: usize) -> Self {
        NfMatrix { cols: m, rows: vec![NfVector::zero(m); k] }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[NfVector] {
        &self.rows
    }

    pub(crate) fn rows_mut(&mut self) -> &mut Vec<NfVector> {
        &mut self.rows
    }

    pub fn into_rows(self) -> Vec<NfVector> {
        self.rows
    }

    pub fn row(&self, i: usize) -> &NfVector {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.rows[i].0[j] = v;
    }

    pub fn column(&self, j: usize) -> NfVector {
        NfVector(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn columns(&self) -> Vec<NfVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> NfMatrix {
        NfMatrix { cols: self.rows.len(), rows: self.columns() }
    }

    /// Nonzero entries in column `j`.
    pub fn column_weight(&self, j: usize) -> usize {
        self.rows.iter().filter(|r| !r[j].is_zero()).count()
    }

    /// True when every column has at most one nonzero entry.
    pub fn has_disjoint_supports(&self) -> bool {
        (0..self.cols).all(|j| self.column_weight(j) <= 1)
    }
}

impl Nearfield {
    fn same_len(u: &NfVector, v: &NfVector) -> Result<()> {
        if u.len() == v.len() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: u.len(), found: v.len() })
        }
    }

    pub fn vec_add(&self, u: &NfVector, v: &NfVector) -> Result<NfVector> {
        Self::same_len(u, v)?;
        Ok(self.vec_add_unchecked(u, v))
    }

    pub fn vec_sub(&self, u: &NfVector, v: &NfVector) -> Result<NfVector> {
        Self::same_len(u, v)?;
        Ok(self.vec_sub_unchecked(u, v))
    }

    pub(crate) fn vec_add_unchecked(&self, u: &NfVector, v: &NfVector) -> NfVector {
        NfVector(u.0.iter().zip(&v.0).map(|(&a, &b)| self.add(a, b)).collect())
    }

    pub(crate) fn vec_sub_unchecked(&self, u: &NfVector, v: &NfVector) -> NfVector {
        NfVector(u.0.iter().zip(&v.0).map(|(&a, &b)| self.sub(a, b)).collect())
    }

    pub fn vec_neg(&self, u: &NfVector) -> NfVector {
        NfVector(u.0.iter().map(|&a| self.neg(a)).collect())
    }

    /// The module action `v ∘ r`, applied componentwise.
    pub fn vec_scale(&self, v: &NfVector, r: Elem) -> NfVector {
        NfVector(v.0.iter().map(|&a| self.mul(a, r)).collect())
    }

    /// The left product `r ∘ v`, componentwise. Only used for left-multiple
    /// tests; the module action is [`vec_scale`](Self::vec_scale).
    pub fn vec_left_scale(&self, r: Elem, v: &NfVector) -> NfVector {
        NfVector(v.0.iter().map(|&a| self.mul(r, a)).collect())
    }

    /// Finds `r` with `u_i = r ∘ v_i` for every `i`.
    pub fn left_multiple_of(&self, u: &NfVector, v: &NfVector) -> Result<Option<Elem>> {
        Self::same_len(u, v)?;
        let r = match v.leading() {
            Some(i) => self.mul(u[i], self.inv_nonzero(v[i])),
            None => Elem::ZERO,
        };
        Ok((self.vec_left_scale(r, v) == *u).then_some(r))
    }

    pub fn format_vector(&self, v: &NfVector, style: Style) -> String {
        let parts: Vec<String> = v.0.iter().map(|&a| self.format_elem(a, style)).collect();
        format!("({})", parts.join(","))
    }

    pub fn parse_vector(&self, tokens: &[&str]) -> Result<NfVector> {
        tokens.iter().map(|t| self.parse_elem(t)).collect::<Result<Vec<_>>>().map(NfVector)
    }
}
