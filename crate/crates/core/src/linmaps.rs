//! Maps `R^n → R^n` given by the images of the standard basis.
//!
//! A [`MapRep`] stores an `n × n` matrix whose column `i` is the image `a_i`
//! of `e_i`; the induced map sends `v` to `Σ a_i ∘ v_i`. Every such map is an
//! additive homomorphism. Linearity and normality can be decided either from
//! the matrix shape or by brute force over `R^n`.

use num_bigint::BigUint;
use num_integer::binomial;

use crate::closure::Space;
use crate::ege;
use crate::error::{check_budget, Error, Result};
use crate::nearfield::{Elem, Nearfield};
use crate::nvspace::{NfMatrix, NfVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Decide from the sparsity pattern of the matrix.
    Criterion,
    /// Decide by exhaustive evaluation over `R^n`.
    Semantic,
}

/// Ordered from weakest to strongest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MapClass {
    HomOnly,
    Linear,
    NormalLinear,
    InvertibleNormal,
}

impl MapClass {
    pub fn name(self) -> &'static str {
        match self {
            MapClass::HomOnly => "hom_only",
            MapClass::Linear => "linear",
            MapClass::NormalLinear => "normal_linear",
            MapClass::InvertibleNormal => "invertible_normal",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    All,
    Linear,
    Normal,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MapRep {
    matrix: NfMatrix,
}

impl MapRep {
    pub fn from_matrix(matrix: NfMatrix) -> Result<Self> {
        if matrix.nrows() == 0 || matrix.nrows() != matrix.ncols() {
            return Err(Error::InvalidInput(format!(
                "map matrix must be square and nonempty, got {}×{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(MapRep { matrix })
    }

    /// Builds the map sending `e_i` to `columns[i]`.
    pub fn from_columns(columns: &[NfVector]) -> Result<Self> {
        let n = columns.len();
        Self::from_matrix(NfMatrix::new(n, columns.to_vec())?.transpose())
    }

    pub fn identity(n: usize) -> Self {
        MapRep { matrix: NfMatrix::identity(n) }
    }

    pub fn zero(n: usize) -> Self {
        MapRep { matrix: NfMatrix::zeros(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &NfMatrix {
        &self.matrix
    }

    /// The image of `e_i`.
    pub fn column(&self, i: usize) -> NfVector {
        self.matrix.column(i)
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), found: len })
        }
    }
}

/// `Σ_i a_i ∘ v_i`.
pub fn apply(nf: &Nearfield, t: &MapRep, v: &NfVector) -> Result<NfVector> {
    t.check_dim(v.len())?;
    Ok(apply_unchecked(nf, t, v))
}

fn apply_unchecked(nf: &Nearfield, t: &MapRep, v: &NfVector) -> NfVector {
    let rows = t.matrix.rows();
    NfVector(rows.iter().map(|row| row_value(nf, row.entries(), v.entries())).collect())
}

fn row_value(nf: &Nearfield, row: &[Elem], v: &[Elem]) -> Elem {
    row.iter().zip(v).fold(Elem::ZERO, |acc, (&m, &x)| nf.add(acc, nf.mul(m, x)))
}

fn linear_by_criterion(nf: &Nearfield, t: &MapRep) -> bool {
    nf.is_field() || t.matrix.rows().iter().all(|r| r.support_len() <= 1)
}

fn normal_by_criterion(nf: &Nearfield, t: &MapRep) -> bool {
    nf.is_field() || (linear_by_criterion(nf, t) && t.matrix.has_disjoint_supports())
}

/// Whether the scalar function `v ↦ Σ row_j ∘ v_j` commutes with every right
/// scaling. A map is linear exactly when each of its rows is.
fn row_is_linear(nf: &Nearfield, space: &Space<'_>, row: &[Elem]) -> bool {
    (0..space.size()).all(|idx| {
        let v = space.decode(idx);
        let fv = row_value(nf, row, v.entries());
        nf.nonzero()
            .all(|r| row_value(nf, row, nf.vec_scale(&v, r).entries()) == nf.mul(fv, r))
    })
}

/// The first `(v, r)` in code order with `T(v∘r) ≠ T(v)∘r`.
pub fn linearity_violation(
    nf: &Nearfield,
    t: &MapRep,
    budget: u64,
) -> Result<Option<(NfVector, Elem)>> {
    let space = Space::new(nf, t.dim(), budget)?;
    for idx in 0..space.size() {
        let v = space.decode(idx);
        let tv = apply_unchecked(nf, t, &v);
        for r in nf.nonzero() {
            if apply_unchecked(nf, t, &nf.vec_scale(&v, r)) != nf.vec_scale(&tv, r) {
                return Ok(Some((v, r)));
            }
        }
    }
    Ok(None)
}

pub fn is_linear(nf: &Nearfield, t: &MapRep, mode: Mode, budget: u64) -> Result<bool> {
    match mode {
        Mode::Criterion => Ok(linear_by_criterion(nf, t)),
        Mode::Semantic => {
            let space = Space::new(nf, t.dim(), budget)?;
            Ok(t.matrix.rows().iter().all(|r| row_is_linear(nf, &space, r.entries())))
        }
    }
}

/// A triple `(m, a, r)` with `a` in the image but `(m+a)∘r − m∘r` outside it,
/// or `None` when the image is a submodule.
pub fn normality_violation(
    nf: &Nearfield,
    t: &MapRep,
    budget: u64,
) -> Result<Option<(NfVector, NfVector, Elem)>> {
    let space = Space::new(nf, t.dim(), budget)?;
    Ok(submodule_violation(nf, &space, t).map(|(m, a, r)| (space.decode(m), space.decode(a), r)))
}

fn image_codes(nf: &Nearfield, space: &Space<'_>, t: &MapRep) -> (Vec<bool>, Vec<usize>) {
    // scaled[j][r] = code of a_j ∘ r
    let scaled: Vec<Vec<usize>> = (0..t.dim())
        .map(|j| {
            let col = t.column(j);
            nf.elements().map(|r| space.encode(&nf.vec_scale(&col, r))).collect()
        })
        .collect();
    let mut in_image = vec![false; space.size()];
    let mut image = Vec::new();
    for idx in 0..space.size() {
        let v = space.decode(idx);
        let tv = v
            .entries()
            .iter()
            .zip(&scaled)
            .fold(0, |acc, (x, s)| space.add(acc, s[x.code() as usize]));
        if !in_image[tv] {
            in_image[tv] = true;
            image.push(tv);
        }
    }
    (in_image, image)
}

fn submodule_violation(
    nf: &Nearfield,
    space: &Space<'_>,
    t: &MapRep,
) -> Option<(usize, usize, Elem)> {
    let (in_image, image) = image_codes(nf, space, t);
    // With m = m₀ + i for i in the image,
    //   (m+a)∘r − m∘r = [(m₀+(i+a))∘r − m₀∘r] − [(m₀+i)∘r − m₀∘r],
    // so one representative per coset of the image suffices.
    let mut covered = vec![false; space.size()];
    for m0 in 0..space.size() {
        if covered[m0] {
            continue;
        }
        for &a in &image {
            covered[space.add(m0, a)] = true;
        }
        let shifts: Vec<usize> = nf.nonzero().map(|r| space.scale(m0, r)).collect();
        for &a in &image {
            let ma = space.add(m0, a);
            for (r, &m0r) in nf.nonzero().zip(&shifts) {
                if !in_image[space.sub(space.scale(ma, r), m0r)] {
                    return Some((m0, a, r));
                }
            }
        }
    }
    None
}

/// Normality of a linear map. Non-linear input is rejected.
pub fn is_normal(nf: &Nearfield, t: &MapRep, mode: Mode, budget: u64) -> Result<bool> {
    if !is_linear(nf, t, mode, budget)? {
        return Err(Error::NotLinear);
    }
    match mode {
        Mode::Criterion => Ok(normal_by_criterion(nf, t)),
        Mode::Semantic => {
            let space = Space::new(nf, t.dim(), budget)?;
            Ok(submodule_violation(nf, &space, t).is_none())
        }
    }
}

fn is_scaled_permutation(t: &MapRep) -> bool {
    t.matrix.rows().iter().all(|r| r.support_len() == 1) && t.matrix.has_disjoint_supports()
}

fn full_rank_over_field(nf: &Nearfield, t: &MapRep) -> bool {
    ege::rref(nf, &t.matrix).0.nrows() == t.dim()
}

/// Bijectivity. Linear maps are decided from the matrix; other maps by
/// searching `R^n` for a nonzero kernel element.
pub fn is_bijective(nf: &Nearfield, t: &MapRep, budget: u64) -> Result<bool> {
    if nf.is_field() {
        return Ok(full_rank_over_field(nf, t));
    }
    if linear_by_criterion(nf, t) {
        return Ok(is_scaled_permutation(t));
    }
    let space = Space::new(nf, t.dim(), budget)?;
    Ok((1..space.size()).all(|idx| !apply_unchecked(nf, t, &space.decode(idx)).is_zero()))
}

/// Bijectivity by counting the image, for cross-checking [`is_bijective`].
pub fn image_size(nf: &Nearfield, t: &MapRep, budget: u64) -> Result<usize> {
    let space = Space::new(nf, t.dim(), budget)?;
    Ok(image_codes(nf, &space, t).1.len())
}

pub fn classify(nf: &Nearfield, t: &MapRep) -> MapClass {
    if !linear_by_criterion(nf, t) {
        MapClass::HomOnly
    } else if !normal_by_criterion(nf, t) {
        MapClass::Linear
    } else if (nf.is_field() && full_rank_over_field(nf, t)) || (!nf.is_field() && is_scaled_permutation(t)) {
        MapClass::InvertibleNormal
    } else {
        MapClass::NormalLinear
    }
}

/// Closed-form number of maps of the given kind on `R^n`.
///
/// Over a proper nearfield a linear map picks, per row, either nothing or
/// one column and a nonzero entry; a normal map is a partial scaled
/// permutation, counted by rook placements. Over a field every map counts.
pub fn count_maps(nf: &Nearfield, n: usize, kind: MapKind) -> BigUint {
    let t = BigUint::from(nf.order());
    let all = t.pow((n * n) as u32);
    if nf.is_field() {
        return all;
    }
    let nonzero = BigUint::from(nf.order() - 1);
    match kind {
        MapKind::All => all,
        MapKind::Linear => (BigUint::from(1u32) + BigUint::from(n) * &nonzero).pow(n as u32),
        MapKind::Normal => (0..=n)
            .map(|j| {
                let c = BigUint::from(binomial(n as u64, j as u64));
                let perms: BigUint = (1..=j as u64).map(BigUint::from).product();
                &c * &c * perms * nonzero.pow(j as u32)
            })
            .sum(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MapCounts {
    pub all: u64,
    pub linear: u64,
    pub normal: u64,
}

impl MapCounts {
    pub fn get(&self, kind: MapKind) -> u64 {
        match kind {
            MapKind::All => self.all,
            MapKind::Linear => self.linear,
            MapKind::Normal => self.normal,
        }
    }
}

/// Counts maps on `R^n` by visiting every matrix and testing it semantically.
pub fn enumerate_counts(nf: &Nearfield, n: usize, budget: u64) -> Result<MapCounts> {
    let order = nf.order() as u128;
    let total = order.checked_pow((n * n) as u32).unwrap_or(u128::MAX);
    check_budget(total, budget)?;
    let space = Space::new(nf, n, budget)?;
    let row_linear: Vec<bool> = (0..space.size())
        .map(|idx| row_is_linear(nf, &space, space.decode(idx).entries()))
        .collect();
    let mut counts = MapCounts { all: 0, linear: 0, normal: 0 };
    let mut digits = vec![0usize; n];
    for _ in 0..total {
        counts.all += 1;
        if digits.iter().all(|&d| row_linear[d]) {
            counts.linear += 1;
            let rows = digits.iter().map(|&d| space.decode(d)).collect();
            let t = MapRep { matrix: NfMatrix::from_rows_unchecked(n, rows) };
            if submodule_violation(nf, &space, &t).is_none() {
                counts.normal += 1;
            }
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < space.size() {
                break;
            }
            *d = 0;
        }
    }
    Ok(counts)
}

/// Apply `t1`, then `t2`. The result is represented by the matrix product
/// `M2·M1`, whose column `j` is `T2(a_j)`; this is the true composite
/// whenever `t2` is linear.
pub fn compose(nf: &Nearfield, t1: &MapRep, t2: &MapRep) -> Result<MapRep> {
    t2.check_dim(t1.dim())?;
    let cols: Vec<NfVector> =
        (0..t1.dim()).map(|j| apply_unchecked(nf, t2, &t1.column(j))).collect();
    MapRep::from_columns(&cols)
}

/// Replaces column `i` by `a_i ∘ r_i`. Requires a linear map.
pub fn scale_family(nf: &Nearfield, t: &MapRep, r: &[Elem]) -> Result<MapRep> {
    t.check_dim(r.len())?;
    if !linear_by_criterion(nf, t) {
        return Err(Error::NotLinear);
    }
    let cols: Vec<NfVector> =
        (0..t.dim()).map(|i| nf.vec_scale(&t.column(i), r[i])).collect();
    MapRep::from_columns(&cols)
}

/// Entrywise sum of two matrices.
pub fn column_sum(nf: &Nearfield, t1: &MapRep, t2: &MapRep) -> Result<MapRep> {
    t2.check_dim(t1.dim())?;
    let rows = t1
        .matrix
        .rows()
        .iter()
        .zip(t2.matrix.rows())
        .map(|(a, b)| nf.vec_add_unchecked(a, b))
        .collect();
    Ok(MapRep { matrix: NfMatrix::from_rows_unchecked(t1.dim(), rows) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nearfield::MAX_ORDER;
    use crate::DEFAULT_BUDGET;

    fn dn32() -> Nearfield {
        Nearfield::build(3, 2, MAX_ORDER).unwrap()
    }

    fn v(nf: &Nearfield, s: &str) -> NfVector {
        nf.parse_vector(&s.split(',').collect::<Vec<_>>()).unwrap()
    }

    fn map(nf: &Nearfield, cols: &[&str]) -> MapRep {
        MapRep::from_columns(&cols.iter().map(|c| v(nf, c)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn apply_examples() {
        let nf = dn32();
        let t = map(&nf, &["1,2", "1,1"]);
        assert_eq!(apply(&nf, &t, &v(&nf, "1,x")).unwrap(), v(&nf, "1+x,2+x"));
        assert_eq!(apply(&nf, &t, &NfVector::zero(2)).unwrap(), NfVector::zero(2));
        let u = v(&nf, "2x,1+2x");
        assert_eq!(apply(&nf, &MapRep::identity(2), &u).unwrap(), u);
        assert!(apply(&nf, &t, &NfVector::zero(3)).is_err());
    }

    #[test]
    fn counterexample_is_not_linear() {
        let nf = dn32();
        let t = map(&nf, &["1,2", "1,1"]);
        assert!(!is_linear(&nf, &t, Mode::Criterion, DEFAULT_BUDGET).unwrap());
        assert!(!is_linear(&nf, &t, Mode::Semantic, DEFAULT_BUDGET).unwrap());
        let x = nf.parse_elem("x").unwrap();
        let vx = v(&nf, "1,x");
        let lhs = apply(&nf, &t, &nf.vec_scale(&vx, x)).unwrap();
        let rhs = nf.vec_scale(&apply(&nf, &t, &vx).unwrap(), x);
        assert_eq!(rhs, v(&nf, "1+2x,1+x"));
        assert_eq!(lhs, v(&nf, "2+x,2+2x"));
        assert!(linearity_violation(&nf, &t, DEFAULT_BUDGET).unwrap().is_some());
        assert_eq!(classify(&nf, &t), MapClass::HomOnly);
        assert!(is_normal(&nf, &t, Mode::Criterion, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn row_of_ones_violates_via_witness() {
        let nf = dn32();
        let t = MapRep::from_matrix(NfMatrix::from_codes(&[&[1, 1], &[0, 0]]).unwrap()).unwrap();
        let w = nf.find_witness().unwrap();
        // T(α, β) ∘ λ differs from T((α, β) ∘ λ) in the first coordinate
        let u = NfVector(vec![w.alpha, w.beta]);
        let lhs = apply(&nf, &t, &nf.vec_scale(&u, w.lambda)).unwrap();
        let rhs = nf.vec_scale(&apply(&nf, &t, &u).unwrap(), w.lambda);
        assert_ne!(lhs, rhs);
        assert!(!is_linear(&nf, &t, Mode::Semantic, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn normality_examples() {
        let nf = dn32();
        let single = MapRep::from_matrix(NfMatrix::from_codes(&[&[0, 0], &[1, 0]]).unwrap()).unwrap();
        for mode in [Mode::Criterion, Mode::Semantic] {
            assert!(is_normal(&nf, &single, mode, DEFAULT_BUDGET).unwrap());
            assert!(is_normal(&nf, &MapRep::identity(2), mode, DEFAULT_BUDGET).unwrap());
        }
        let skew = map(&nf, &["1,x", "0,0"]);
        assert!(is_linear(&nf, &skew, Mode::Semantic, DEFAULT_BUDGET).unwrap());
        assert!(!is_normal(&nf, &skew, Mode::Criterion, DEFAULT_BUDGET).unwrap());
        assert!(!is_normal(&nf, &skew, Mode::Semantic, DEFAULT_BUDGET).unwrap());
        let (m, a, r) = normality_violation(&nf, &skew, DEFAULT_BUDGET).unwrap().unwrap();
        let image: Vec<NfVector> = nf
            .elements()
            .map(|s| apply(&nf, &skew, &NfVector(vec![s, Elem::ZERO])).unwrap())
            .collect();
        assert!(image.contains(&a));
        let d = nf
            .vec_sub(&nf.vec_scale(&nf.vec_add(&m, &a).unwrap(), r), &nf.vec_scale(&m, r))
            .unwrap();
        assert!(!image.contains(&d));
        assert_eq!(classify(&nf, &skew), MapClass::Linear);
    }

    #[test]
    fn classification_and_bijectivity() {
        let nf = dn32();
        let perm = map(&nf, &["0,x", "2+x,0"]);
        assert_eq!(classify(&nf, &perm), MapClass::InvertibleNormal);
        assert!(is_bijective(&nf, &perm, DEFAULT_BUDGET).unwrap());
        assert_eq!(image_size(&nf, &perm, DEFAULT_BUDGET).unwrap(), 81);
        let zero = MapRep::zero(2);
        assert_eq!(classify(&nf, &zero), MapClass::NormalLinear);
        assert!(!is_bijective(&nf, &zero, DEFAULT_BUDGET).unwrap());
        let ones = map(&nf, &["1,2", "1,1"]);
        assert_eq!(
            is_bijective(&nf, &ones, DEFAULT_BUDGET).unwrap(),
            image_size(&nf, &ones, DEFAULT_BUDGET).unwrap() == 81
        );
    }

    #[test]
    fn closed_forms() {
        let nf = dn32();
        assert_eq!(count_maps(&nf, 2, MapKind::All), BigUint::from(6561u32));
        assert_eq!(count_maps(&nf, 2, MapKind::Linear), BigUint::from(289u32));
        assert_eq!(count_maps(&nf, 2, MapKind::Normal), BigUint::from(161u32));
        assert_eq!(count_maps(&nf, 1, MapKind::Normal), BigUint::from(9u32));
    }

    #[test]
    fn enumeration_matches_closed_forms() {
        let nf = dn32();
        let counts = enumerate_counts(&nf, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(counts, MapCounts { all: 6561, linear: 289, normal: 161 });
        let gf5 = Nearfield::build(5, 1, MAX_ORDER).unwrap();
        let counts = enumerate_counts(&gf5, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(counts, MapCounts { all: 625, linear: 625, normal: 625 });
        assert_eq!(count_maps(&gf5, 2, MapKind::Normal), BigUint::from(625u32));
        assert!(enumerate_counts(&nf, 3, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn composition_and_scaling() {
        let nf = dn32();
        let t = map(&nf, &["0,x", "2,0"]);
        assert_eq!(compose(&nf, &t, &MapRep::identity(2)).unwrap(), t);
        assert_eq!(compose(&nf, &MapRep::identity(2), &t).unwrap(), t);
        let one = [Elem::ONE, Elem::ONE];
        assert_eq!(scale_family(&nf, &t, &one).unwrap(), t);
        let zeroed = scale_family(&nf, &t, &[Elem::ZERO, Elem::ONE]).unwrap();
        assert_eq!(zeroed.column(0), NfVector::zero(2));
        assert!(is_linear(&nf, &zeroed, Mode::Criterion, DEFAULT_BUDGET).unwrap());
        assert!(matches!(
            scale_family(&nf, &map(&nf, &["1,2", "1,1"]), &one),
            Err(Error::NotLinear)
        ));
    }

    #[test]
    fn linear_maps_not_closed_under_sum() {
        let nf = dn32();
        let a = MapRep::from_matrix(NfMatrix::from_codes(&[&[0, 0], &[0, 1]]).unwrap()).unwrap();
        let b = MapRep::from_matrix(NfMatrix::from_codes(&[&[0, 0], &[1, 0]]).unwrap()).unwrap();
        assert!(is_normal(&nf, &a, Mode::Semantic, DEFAULT_BUDGET).unwrap());
        assert!(is_normal(&nf, &b, Mode::Semantic, DEFAULT_BUDGET).unwrap());
        let sum = column_sum(&nf, &a, &b).unwrap();
        assert!(!is_linear(&nf, &sum, Mode::Semantic, DEFAULT_BUDGET).unwrap());
    }
}
