//! Exact sparse linear algebra: vectors keyed by any ordered type, an
//! incremental reduced-echelon span, row reduction, kernels and solving.
//!
//! Pivots are always the smallest key of a row, and ties between candidate
//! rows are broken by insertion order, so every derived basis is
//! reproducible.

use std::collections::BTreeMap;
use std::fmt;


use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// A sparse vector with coordinates indexed by `K`. Zero coordinates are
/// never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseVec<K: Ord> {
    entries: BTreeMap<K, Scalar>,
}

impl<K: Ord> Default for SparseVec<K> {
    fn default() -> Self {
        SparseVec { entries: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> SparseVec<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(key: K, field: Field) -> Self {
        let mut v = Self::new();
        v.entries.insert(key, Scalar::one(field));
        v
    }

    pub fn from_entries<I: IntoIterator<Item = (K, Scalar)>>(it: I) -> Self {
        let mut v = Self::new();
        for (k, c) in it {
            v.add_term(k, &c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, k: &K) -> Option<&Scalar> {
        self.entries.get(k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.entries.keys()
    }

    pub fn into_entries(self) -> BTreeMap<K, Scalar> {
        self.entries
    }

    pub fn first(&self) -> Option<(&K, &Scalar)> {
        self.entries.iter().next()
    }

    /// Adds `c` at `k`, dropping the entry if it cancels.
    pub fn add_term(&mut self, k: K, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.entries.get_mut(&k) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.entries.remove(&k);
                }
            }
            None => {
                self.entries.insert(k, c.clone());
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &SparseVec<K>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (k, v) in other.iter() {
            self.add_term(k.clone(), &(v * c));
        }
    }

    pub fn scaled(&self, c: &Scalar) -> SparseVec<K> {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn add(&self, other: &SparseVec<K>) -> SparseVec<K> {
        let mut r = self.clone();
        r.add_scaled(other, &one_like(other).unwrap_or_else(|| Scalar::one(Field::Rationals)));
        r
    }

    pub fn sub(&self, other: &SparseVec<K>) -> SparseVec<K> {
        let mut r = self.clone();
        if let Some(one) = one_like(other) {
            r.add_scaled(other, &-one);
        }
        r
    }

    pub fn neg(&self) -> SparseVec<K> {
        SparseVec { entries: self.entries.iter().map(|(k, v)| (k.clone(), -v)).collect() }
    }

    /// Field of the stored entries, if any.
    pub fn field(&self) -> Option<Field> {
        self.entries.values().next().map(|s| s.field())
    }

    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> SparseVec<L> {
        SparseVec::from_entries(self.entries.iter().map(|(k, v)| (f(k), v.clone())))
    }

    /// True if `self = c * other` for a single nonzero scalar `c`; returns it.
    pub fn proportional_to(&self, other: &SparseVec<K>) -> Option<Scalar> {
        if self.len() != other.len() {
            return None;
        }
        let ((k1, a), (k2, b)) = (self.first()?, other.first()?);
        if k1 != k2 {
            return None;
        }
        let c = a * &b.inv()?;
        if other.scaled(&c) == *self {
            Some(c)
        } else {
            None
        }
    }
}

fn one_like<K: Ord + Clone>(v: &SparseVec<K>) -> Option<Scalar> {
    v.field().map(Scalar::one)
}

impl<K: Ord + fmt::Debug> fmt::Debug for SparseVec<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter().map(|(k, v)| (k, v.to_string()))).finish()
    }
}

/// A subspace kept as a reduced row-echelon basis.
#[derive(Clone, Debug)]
pub struct Span<K: Ord> {
    field: Field,
    rows: Vec<SparseVec<K>>,
    pivots: BTreeMap<K, usize>,
}

impl<K: Ord + Clone> Span<K> {
    pub fn new(field: Field) -> Self {
        Span { field, rows: Vec::new(), pivots: BTreeMap::new() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// The echelon basis, each row with leading coefficient one.
    pub fn basis(&self) -> &[SparseVec<K>] {
        &self.rows
    }

    pub fn pivot_keys(&self) -> impl Iterator<Item = &K> {
        self.pivots.keys()
    }

    /// Remainder of `v` after elimination against the basis.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut r = v.clone();
        for (key, &row) in self.pivots.iter() {
            if let Some(c) = r.get(key).cloned() {
                r.add_scaled(&self.rows[row], &-c);
            }
        }
        r
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns true if the span grew.
    pub fn insert(&mut self, v: &SparseVec<K>) -> Result<bool> {
        if let Some(f) = v.field() {
            if f != self.field {
                return Err(Error::FieldMismatch { expected: self.field.to_string(), found: f.to_string() });
            }
        }
        let r = self.reduce(v);
        let Some((pk, lead)) = r.first() else {
            return Ok(false);
        };
        let pk = pk.clone();
        let r = r.scaled(&lead.inv().expect("nonzero lead"));
        for row in self.rows.iter_mut() {
            if let Some(c) = row.get(&pk).cloned() {
                row.add_scaled(&r, &-c);
            }
        }
        self.pivots.insert(pk, self.rows.len());
        self.rows.push(r);
        Ok(true)
    }

    pub fn extend<'a, I: IntoIterator<Item = &'a SparseVec<K>>>(&mut self, it: I) -> Result<usize>
    where
        K: 'a,
    {
        let mut grown = 0;
        for v in it {
            if self.insert(v)? {
                grown += 1;
            }
        }
        Ok(grown)
    }

    /// Coefficients of `v` in the echelon basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &SparseVec<K>) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(
            self.rows
                .iter()
                .map(|row| {
                    let pk = row.first().expect("nonzero row").0;
                    v.get(pk).cloned().unwrap_or_else(|| Scalar::zero(self.field))
                })
                .collect(),
        )
    }

    pub fn is_subspace_of(&self, other: &Span<K>) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }
}

/// Key for augmented systems: original coordinates sort before tags.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Aug<K> {
    Main(K),
    Tag(usize),
}

/// Basis of `{c : sum_i c_i v_i = 0}`, each kernel vector dense of length
/// `vectors.len()`.
pub fn kernel<K: Ord + Clone>(field: Field, vectors: &[SparseVec<K>]) -> Vec<Vec<Scalar>> {
    let mut span: Span<Aug<K>> = Span::new(field);
    for (i, v) in vectors.iter().enumerate() {
        let mut aug = v.map_keys(|k| Aug::Main(k.clone()));
        aug.add_term(Aug::Tag(i), &Scalar::one(field));
        span.insert(&aug).expect("single field");
    }
    span.basis()
        .iter()
        .filter(|row| matches!(row.first(), Some((Aug::Tag(_), _))))
        .map(|row| {
            let mut dense = vec![Scalar::zero(field); vectors.len()];
            for (k, c) in row.iter() {
                if let Aug::Tag(i) = k {
                    dense[*i] = c.clone();
                }
            }
            dense
        })
        .collect()
}

/// Rank of a family of vectors.
pub fn rank<K: Ord + Clone>(field: Field, vectors: &[SparseVec<K>]) -> usize {
    let mut s = Span::new(field);
    for v in vectors {
        s.insert(v).expect("single field");
    }
    s.dim()
}

/// A sparse matrix over a single field with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<SparseVec<usize>>,
}

impl SparseMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, field, data: vec![SparseVec::new(); rows] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(field));
        }
        m
    }

    /// Builds a matrix from dense rows, rejecting ragged or mixed-field input.
    pub fn from_dense(field: Field, rows: &[Vec<Scalar>]) -> Result<Self> {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            for (j, c) in r.iter().enumerate() {
                if c.field() != field {
                    return Err(Error::FieldMismatch { expected: field.to_string(), found: c.field().to_string() });
                }
                m.set(i, j, c.clone());
            }
        }
        Ok(m)
    }

    pub fn from_ints(field: Field, rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&v| field.int(v)).collect()).collect();
        Self::from_dense(field, &dense).expect("consistent integer matrix")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i].get(&j).cloned().unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        let row = &mut self.data[i];
        let old = row.get(&j).cloned().unwrap_or_else(|| Scalar::zero(self.field));
        row.add_term(j, &(&v - &old));
    }

    pub fn row(&self, i: usize) -> &SparseVec<usize> {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = SparseMatrix::zeros(self.field, self.cols, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            for (j, c) in r.iter() {
                t.set(*j, i, c.clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = SparseMatrix::zeros(self.field, self.rows, other.cols);
        for (i, r) in self.data.iter().enumerate() {
            let mut acc = SparseVec::new();
            for (k, c) in r.iter() {
                acc.add_scaled(&other.data[*k], c);
            }
            out.data[i] = acc;
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok(self
            .data
            .iter()
            .map(|r| {
                let mut acc = Scalar::zero(self.field);
                for (j, c) in r.iter() {
                    acc += &(c * &v[*j]);
                }
                acc
            })
            .collect())
    }

    fn check_field(&self) -> Result<()> {
        for r in &self.data {
            for (_, c) in r.iter() {
                if c.field() != self.field {
                    return Err(Error::FieldMismatch { expected: self.field.to_string(), found: c.field().to_string() });
                }
            }
        }
        Ok(())
    }

    /// Reduced row-echelon form and pivot columns. Pivot choice: lowest
    /// column first, then the lowest row index holding it.
    pub fn rref(&self) -> Result<(SparseMatrix, Vec<usize>)> {
        self.check_field()?;
        let mut rows: Vec<SparseVec<usize>> = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            let Some(pr) = (r..rows.len()).find(|&i| rows[i].get(&col).is_some()) else {
                continue;
            };
            rows.swap(r, pr);
            let inv = rows[r].get(&col).expect("pivot").inv().expect("nonzero");
            rows[r] = rows[r].scaled(&inv);
            let prow = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r {
                    continue;
                }
                if let Some(c) = row.get(&col).cloned() {
                    row.add_scaled(&prow, &-c);
                }
            }
            pivots.push(col);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        Ok((SparseMatrix { rows: self.rows, cols: self.cols, field: self.field, data: rows }, pivots))
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.rref()?.1.len())
    }

    /// Basis of the right null space `{x : M x = 0}`.
    pub fn null_space(&self) -> Result<Vec<Vec<Scalar>>> {
        let t = self.transpose();
        t.check_field()?;
        Ok(kernel(self.field, &t.data))
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Result<Option<SparseMatrix>> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut aug = SparseMatrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for (j, c) in self.data[i].iter() {
                aug.set(i, *j, c.clone());
            }
            aug.set(i, n + i, Scalar::one(self.field));
        }
        let (red, piv) = aug.rref()?;
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Ok(None);
        }
        let mut inv = SparseMatrix::zeros(self.field, n, n);
        for i in 0..n {
            for (j, c) in red.data[i].iter() {
                if *j >= n {
                    inv.set(i, j - n, c.clone());
                }
            }
        }
        Ok(Some(inv))
    }

    pub fn determinant(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        self.check_field()?;
        let n = self.rows;
        let mut rows: Vec<SparseVec<usize>> = self.data.clone();
        let mut det = Scalar::one(self.field);
        for col in 0..n {
            let Some(pr) = (col..n).find(|&i| rows[i].get(&col).is_some()) else {
                return Ok(Scalar::zero(self.field));
            };
            if pr != col {
                rows.swap(pr, col);
                det = -det;
            }
            let piv = rows[col].get(&col).cloned().expect("pivot");
            det = &det * &piv;
            let inv = piv.inv().expect("nonzero");
            let prow = rows[col].clone();
            for row in rows.iter_mut().skip(col + 1) {
                if let Some(c) = row.get(&col).cloned() {
                    row.add_scaled(&prow, &-(&c * &inv));
                }
            }
        }
        Ok(det)
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).collect()).collect()
    }
}

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Scalar>),
    /// A particular solution together with a null-space basis.
    Family { particular: Vec<Scalar>, null_space: Vec<Vec<Scalar>> },
    Inconsistent,
}

impl Solution {
    pub fn particular(&self) -> Option<&[Scalar]> {
        match self {
            Solution::Unique(x) => Some(x),
            Solution::Family { particular, .. } => Some(particular),
            Solution::Inconsistent => None,
        }
    }
}

#[allow(clippy::needless_range_loop)]
pub fn solve_linear(a: &SparseMatrix, b: &[Scalar]) -> Result<Solution> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch { expected: a.rows, found: b.len() });
    }
    let n = a.cols;
    let mut aug = SparseMatrix::zeros(a.field, a.rows, n + 1);
    for i in 0..a.rows {
        for (j, c) in a.data[i].iter() {
            aug.set(i, *j, c.clone());
        }
        if b[i].field() != a.field {
            return Err(Error::FieldMismatch { expected: a.field.to_string(), found: b[i].field().to_string() });
        }
        aug.set(i, n, b[i].clone());
    }
    let (red, piv) = aug.rref()?;
    if piv.last() == Some(&n) {
        return Ok(Solution::Inconsistent);
    }
    let mut x = vec![Scalar::zero(a.field); n];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = red.get(r, n);
    }
    let ns = a.null_space()?;
    if ns.is_empty() {
        Ok(Solution::Unique(x))
    } else {
        Ok(Solution::Family { particular: x, null_space: ns })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn rref_identity() {
        let m = SparseMatrix::identity(q(), 2);
        let (r, p) = m.rref().unwrap();
        assert_eq!(r, m);
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn rref_dependent_rows() {
        let m = SparseMatrix::from_ints(q(), &[&[1, 2], &[2, 4]]);
        assert_eq!(m.rank().unwrap(), 1);
    }

    #[test]
    fn rref_mod_two() {
        // [[1,2],[2,4]] mod 2 is [[1,0],[0,0]].
        let f2 = Field::Prime(2);
        let m = SparseMatrix::from_ints(f2, &[&[1, 2], &[2, 4]]);
        let (r, p) = m.rref().unwrap();
        assert_eq!(p, vec![0]);
        assert_eq!(r.nnz(), 1);
    }

    #[test]
    fn mixed_field_rejected() {
        let rows = vec![vec![q().one(), Field::Prime(3).one()]];
        assert!(matches!(SparseMatrix::from_dense(q(), &rows), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn span_insert_cases() {
        let mut s: Span<usize> = Span::new(q());
        assert!(s.insert(&SparseVec::unit(0, q())).unwrap());
        assert_eq!(s.dim(), 1);
        assert!(!s.insert(&SparseVec::unit(0, q()).scaled(&q().int(2))).unwrap());
        let e12 = SparseVec::from_entries([(0, q().one()), (1, q().one())]);
        assert!(s.insert(&e12).unwrap());
        assert_eq!(s.dim(), 2);
        assert!(s.insert(&SparseVec::unit(0, Field::Prime(3))).is_err());
    }

    #[test]
    fn solve_cases() {
        let id = SparseMatrix::identity(q(), 3);
        let b = vec![q().int(4), q().int(-1), q().ratio(2, 3).unwrap()];
        assert_eq!(solve_linear(&id, &b).unwrap(), Solution::Unique(b.clone()));
        let z = SparseMatrix::zeros(q(), 2, 2);
        assert_eq!(solve_linear(&z, &[q().one(), q().zero()]).unwrap(), Solution::Inconsistent);
        let two = SparseMatrix::from_ints(q(), &[&[2]]);
        assert_eq!(solve_linear(&two, &[q().one()]).unwrap(), Solution::Unique(vec![q().ratio(1, 2).unwrap()]));
        assert!(solve_linear(&two, &[q().one(), q().one()]).is_err());
    }

    #[test]
    fn kernel_and_inverse() {
        let m = SparseMatrix::from_ints(q(), &[&[1, 2, 3], &[2, 4, 6]]);
        let ns = m.null_space().unwrap();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).unwrap().iter().all(|c| c.is_zero()));
        }
        let a = SparseMatrix::from_ints(q(), &[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), SparseMatrix::identity(q(), 2));
        assert_eq!(a.determinant().unwrap(), q().one());
        assert!(m.transpose().mul(&m).unwrap().inverse().unwrap().is_none());
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..4, c), r))
    }

    proptest! {
        #[test]
        fn rref_idempotent(m in small_matrix()) {
            let rows: Vec<&[i64]> = m.iter().map(|r| r.as_slice()).collect();
            let a = SparseMatrix::from_ints(q(), &rows);
            let (r1, p1) = a.rref().unwrap();
            let (r2, p2) = r1.rref().unwrap();
            prop_assert_eq!(r1, r2);
            prop_assert_eq!(p1, p2);
        }

        #[test]
        fn rank_of_transpose(m in small_matrix(), pi in 0usize..3) {
            let f = [Field::Rationals, Field::Prime(2), Field::Prime(5)][pi];
            let rows: Vec<&[i64]> = m.iter().map(|r| r.as_slice()).collect();
            let a = SparseMatrix::from_ints(f, &rows);
            prop_assert_eq!(a.rank().unwrap(), a.transpose().rank().unwrap());
        }

        #[test]
        fn span_matches_rref_rank(m in small_matrix()) {
            let rows: Vec<&[i64]> = m.iter().map(|r| r.as_slice()).collect();
            let a = SparseMatrix::from_ints(q(), &rows);
            let vecs: Vec<SparseVec<usize>> = (0..a.nrows()).map(|i| a.row(i).clone()).collect();
            prop_assert_eq!(rank(q(), &vecs), a.rank().unwrap());
            prop_assert_eq!(kernel(q(), &vecs).len(), a.nrows() - a.rank().unwrap());
        }
    }
}
