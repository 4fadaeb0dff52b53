//! The simple n-Lie algebras: vector products `Oⁿ`, the Jacobian brackets
//! `Sⁿ` and `Wⁿ`, the tagged bracket `SWⁿ`, and their versions over
//! arbitrary polynomial derivation sets.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{sign, Field, Scalar};
use crate::linalg::{SparseMatrix, SparseVec, Span};
use crate::nlie::{FiniteAlgebra, NAryAlgebra, Sample};
use crate::poly::{mono_list, Mono, Poly, VectorField};
use crate::superspace::{Parity, SuperSpace};

/// Sign of a permutation given as a sequence of distinct indices; `None`
/// on a repeat.
pub fn permutation_sign(perm: &[usize]) -> Option<bool> {
    let mut neg = false;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            match perm[i].cmp(&perm[j]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Greater => neg = !neg,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    Some(neg)
}

/// A nondegenerate symmetric bilinear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    matrix: SparseMatrix,
}

impl BilinearForm {
    pub fn new(matrix: SparseMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        if matrix.transpose() != matrix {
            return Err(Error::NonSymmetricForm);
        }
        if matrix.determinant()?.is_zero() {
            return Err(Error::DegenerateForm);
        }
        Ok(BilinearForm { matrix })
    }

    pub fn identity(field: Field, dim: usize) -> Self {
        BilinearForm { matrix: SparseMatrix::identity(field, dim) }
    }

    /// One row per line, entries separated by whitespace.
    pub fn parse(field: Field, text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let row = line.split_whitespace().map(|t| Scalar::parse(field, t)).collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Parse("empty form".into()));
        }
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: r.len() });
        }
        Self::new(SparseMatrix::from_dense(field, &rows)?)
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// `Oⁿ` for the form `b` on an `(n+1)`-dimensional space:
/// `[e_{i_1},…,e_{i_n}] = ε_{i_1…i_n k} a^k` with `ε_{1…n+1} = 1` and `a^k`
/// the dual basis.
pub fn vector_product(b: &SparseMatrix) -> Result<FiniteAlgebra> {
    let form = BilinearForm::new(b.clone())?;
    let dim = form.dim();
    if dim < 3 {
        return Err(Error::InvalidParameter(format!("vector product needs dimension ≥ 3, got {dim}")));
    }
    let field = b.field();
    let inv = b.inverse()?.ok_or(Error::DegenerateForm)?;
    let dual: Vec<SparseVec<usize>> = (0..dim)
        .map(|k| SparseVec::from_entries((0..dim).map(|l| (l, inv.get(l, k)))))
        .collect();
    let space = Arc::new(SuperSpace::standard(field, dim, 0));
    FiniteAlgebra::from_fn(space, dim - 1, Parity::Even, |t| {
        let Some(k) = (0..dim).find(|k| !t.contains(k)) else { return SparseVec::new() };
        let mut perm = t.to_vec();
        perm.push(k);
        match permutation_sign(&perm) {
            None => SparseVec::new(),
            Some(neg) => dual[k].scaled(&sign(field, neg)),
        }
    })
}

/// `Oⁿ` with the standard form.
pub fn on(field: Field, n: usize) -> Result<FiniteAlgebra> {
    vector_product(&SparseMatrix::identity(field, n + 1))
}

/// Derivations `D_1..D_r` of `F[x_1..x_m]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationSet {
    fields: Vec<VectorField>,
}

impl DerivationSet {
    pub fn new(fields: Vec<VectorField>) -> Result<Self> {
        let Some(first) = fields.first() else {
            return Err(Error::InvalidParameter("empty derivation set".into()));
        };
        let (m, f) = (first.nx(), first.field());
        for v in &fields {
            if v.nxi() != 0 {
                return Err(Error::InvalidParameter("derivations of a commutative algebra take no odd variables".into()));
            }
            if v.nx() != m {
                return Err(Error::DimensionMismatch { expected: m, found: v.nx() });
            }
            if v.field() != f {
                return Err(Error::FieldMismatch { expected: f.to_string(), found: v.field().to_string() });
            }
        }
        Ok(DerivationSet { fields })
    }

    /// `∂/∂x_1, …, ∂/∂x_m`.
    pub fn partials(field: Field, m: usize) -> Self {
        let one = Poly::one(field, m, 0);
        DerivationSet { fields: (0..m).map(|i| VectorField::single(one.clone(), i)).collect() }
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.fields[0].nx()
    }

    pub fn field(&self) -> Field {
        self.fields[0].field()
    }

    pub fn apply(&self, i: usize, f: &Poly) -> Poly {
        self.fields[i].apply(f)
    }
}

impl fmt::Display for DerivationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.fields.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Whether `Σ F D_i` is closed under the commutator.
pub fn dzhumadildaev_closed(d: &DerivationSet) -> bool {
    let mut span: Span<(usize, Mono)> = Span::new(d.field());
    for v in d.fields() {
        span.insert(&v.coords()).expect("same field");
    }
    let fs = d.fields();
    (0..fs.len()).all(|i| (i + 1..fs.len()).all(|j| span.contains(&fs[i].bracket(&fs[j]).coords())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BracketKind {
    S,
    W,
    SW,
}

impl BracketKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "S" => Ok(BracketKind::S),
            "W" => Ok(BracketKind::W),
            "SW" => Ok(BracketKind::SW),
            _ => Err(Error::Parse(format!("unknown bracket kind `{s}`"))),
        }
    }
}

impl fmt::Display for BracketKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BracketKind::S => "S",
            BracketKind::W => "W",
            BracketKind::SW => "SW",
        })
    }
}

/// Determinant of a square matrix of polynomials, by cofactor expansion.
pub fn poly_det(rows: &[Vec<Poly>]) -> Poly {
    let n = rows.len();
    let cols: Vec<usize> = (0..n).collect();
    det_rec(rows, 0, &cols)
}

fn det_rec(rows: &[Vec<Poly>], r: usize, cols: &[usize]) -> Poly {
    if cols.len() == 1 {
        return rows[r][cols[0]].clone();
    }
    let mut acc = rows[r][cols[0]].zero_like();
    let f = acc.field();
    for (i, &c) in cols.iter().enumerate() {
        if rows[r][c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = det_rec(rows, r + 1, &rest);
        if !minor.is_zero() {
            acc.add_scaled(&rows[r][c].mul(&minor), &sign(f, i % 2 == 1));
        }
    }
    acc
}

/// The determinant brackets on `F[x_1..x_m]`:
/// kind S, `det(D_i f_j)` with `n` derivations; kind W, the same matrix
/// bordered by the row `f_1..f_n` on top, with `n − 1` derivations.
#[derive(Clone, Debug)]
pub struct DeterminantAlgebra {
    kind: BracketKind,
    arity: usize,
    derivations: DerivationSet,
    quotient: bool,
}

impl DeterminantAlgebra {
    pub fn new(kind: BracketKind, arity: usize, derivations: DerivationSet, quotient: bool) -> Result<Self> {
        let expected = match kind {
            BracketKind::S => arity,
            BracketKind::W => arity.checked_sub(1).ok_or_else(|| Error::InvalidParameter("arity 0".into()))?,
            BracketKind::SW => return Err(Error::InvalidParameter("SW brackets are tagged; use TaggedAlgebra".into())),
        };
        if derivations.len() != expected {
            return Err(Error::ArityMismatch { expected, found: derivations.len() });
        }
        if arity == 0 {
            return Err(Error::InvalidParameter("arity 0".into()));
        }
        Ok(DeterminantAlgebra { kind, arity, derivations, quotient })
    }

    /// `Sⁿ` on `F[x_1..x_n]/F·1`.
    pub fn sn(field: Field, n: usize) -> Result<Self> {
        Self::new(BracketKind::S, n, DerivationSet::partials(field, n), true)
    }

    /// `Wⁿ` on `F[x_1..x_{n−1}]`.
    pub fn wn(field: Field, n: usize) -> Result<Self> {
        Self::new(BracketKind::W, n, DerivationSet::partials(field, n.saturating_sub(1)), false)
    }

    pub fn kind(&self) -> BracketKind {
        self.kind
    }

    pub fn derivations(&self) -> &DerivationSet {
        &self.derivations
    }

    pub fn nvars(&self) -> usize {
        self.derivations.nvars()
    }

    pub fn is_quotient(&self) -> bool {
        self.quotient
    }

    fn normalize(&self, p: Poly) -> Poly {
        if self.quotient {
            p.without_constant()
        } else {
            p
        }
    }

    /// Monomials of degree at most `window` (positive degree on the
    /// quotient).
    pub fn monomials(&self, window: u32) -> Vec<Poly> {
        let f = self.field();
        let m = self.nvars();
        mono_list(m, 0, window, 0)
            .into_iter()
            .filter(|mono| !(self.quotient && mono.total_degree() == 0))
            .map(|mono| Poly::term(f, m, 0, mono, f.one()))
            .collect()
    }

    pub fn sample(&self, window: u32) -> Sample<Poly> {
        let elems: Vec<(Poly, Parity)> = self.monomials(window).into_iter().map(|p| (p, Parity::Even)).collect();
        Sample::sorted(elems)
    }
}

impl NAryAlgebra for DeterminantAlgebra {
    type Elem = Poly;

    fn arity(&self) -> usize {
        self.arity
    }

    fn parity(&self) -> Parity {
        Parity::Even
    }

    fn field(&self) -> Field {
        self.derivations.field()
    }

    fn bracket(&self, args: &[Poly]) -> Poly {
        assert_eq!(args.len(), self.arity, "bracket arity");
        let mut rows: Vec<Vec<Poly>> = Vec::with_capacity(self.arity);
        if self.kind == BracketKind::W {
            rows.push(args.to_vec());
        }
        for i in 0..self.derivations.len() {
            rows.push(args.iter().map(|f| self.derivations.apply(i, f)).collect());
        }
        self.normalize(poly_det(&rows))
    }

    fn zero(&self) -> Poly {
        Poly::zero(self.field(), self.nvars(), 0)
    }

    fn add_scaled(&self, acc: &mut Poly, x: &Poly, c: &Scalar) {
        acc.add_scaled(x, c);
    }

    fn is_zero(&self, x: &Poly) -> bool {
        self.normalize(x.clone()).is_zero()
    }

    fn describe(&self, x: &Poly) -> String {
        x.to_string()
    }
}

/// An element of `A^{⊕(n−1)}`; `copies[k]` is the copy tagged `k + 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tagged {
    pub copies: Vec<Poly>,
}

impl Tagged {
    pub fn single(tag: usize, p: Poly, ncopies: usize) -> Self {
        let mut copies = vec![p.zero_like(); ncopies];
        copies[tag - 1] = p;
        Tagged { copies }
    }

    pub fn is_zero(&self) -> bool {
        self.copies.iter().all(Poly::is_zero)
    }
}

impl fmt::Display for Tagged {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .copies
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, p)| format!("({p})<{}>", k + 1))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// The bracket on `n − 1` copies of `F[x_1..x_m]` built from one derivation
/// `D`: zero unless the tags cover `1..n−1`; on the sorted pattern with tag
/// `k` repeated it is
/// `±(f_1…f_{k−1}(D f_k f_{k+1} − D f_{k+1} f_k) f_{k+2}…f_n)^{⟨k⟩}`.
#[derive(Clone, Debug)]
pub struct TaggedAlgebra {
    arity: usize,
    derivation: VectorField,
    appendix_sign: bool,
}

impl TaggedAlgebra {
    /// Sign `(−1)^{k+n}`; with `appendix_sign` set, `(−1)^{k+n−1}`.
    pub fn new(arity: usize, derivation: VectorField, appendix_sign: bool) -> Result<Self> {
        if arity < 2 {
            return Err(Error::InvalidParameter(format!("tagged bracket needs n ≥ 2, got {arity}")));
        }
        DerivationSet::new(vec![derivation.clone()])?;
        Ok(TaggedAlgebra { arity, derivation, appendix_sign })
    }

    /// `SWⁿ` on `n − 1` copies of `F[x]`.
    pub fn swn(field: Field, n: usize) -> Result<Self> {
        Self::new(n, VectorField::single(Poly::one(field, 1, 0), 0), false)
    }

    pub fn from_set(arity: usize, d: &DerivationSet, appendix_sign: bool) -> Result<Self> {
        if d.len() != 1 {
            return Err(Error::ArityMismatch { expected: 1, found: d.len() });
        }
        Self::new(arity, d.fields()[0].clone(), appendix_sign)
    }

    pub fn ncopies(&self) -> usize {
        self.arity - 1
    }

    pub fn nvars(&self) -> usize {
        self.derivation.nx()
    }

    pub fn derivation(&self) -> &VectorField {
        &self.derivation
    }

    /// Bracket of single-copy arguments `(tag, poly)`, tags 1-based.
    pub fn bracket_tagged(&self, args: &[(usize, &Poly)]) -> Option<(usize, Poly)> {
        let n = self.arity;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| args[i].0);
        let tags: Vec<usize> = order.iter().map(|&i| args[i].0).collect();
        // sorted tags must read 1, 2, …, k, k, …, n−1
        let mut k = None;
        let mut expect = 1;
        for (pos, &t) in tags.iter().enumerate() {
            if t == expect {
                expect += 1;
            } else if pos > 0 && t == tags[pos - 1] && k.is_none() {
                k = Some(t);
            } else {
                return None;
            }
        }
        let k = k?;
        if expect != n {
            return None;
        }
        let f = self.derivation.field();
        let neg_perm = permutation_sign(&order).expect("distinct positions");
        let fs: Vec<&Poly> = order.iter().map(|&i| args[i].1).collect();
        let (a, b) = (fs[k - 1], fs[k]);
        let core = self.derivation.apply(a).mul(b).sub(&self.derivation.apply(b).mul(a));
        let mut v = core;
        for (i, p) in fs.iter().enumerate() {
            if i != k - 1 && i != k {
                if v.is_zero() {
                    break;
                }
                v = v.mul(p);
            }
        }
        let exp = k + n + usize::from(self.appendix_sign);
        let s = sign(f, neg_perm ^ (exp % 2 == 1));
        Some((k, v.scaled(&s)))
    }

    pub fn monomials(&self, window: u32) -> Vec<Tagged> {
        let f = self.derivation.field();
        let m = self.nvars();
        let mut out = Vec::new();
        for tag in 1..=self.ncopies() {
            for mono in mono_list(m, 0, window, 0) {
                out.push(Tagged::single(tag, Poly::term(f, m, 0, mono, f.one()), self.ncopies()));
            }
        }
        out
    }

    pub fn sample(&self, window: u32) -> Sample<Tagged> {
        Sample::sorted(self.monomials(window).into_iter().map(|t| (t, Parity::Even)).collect())
    }
}

impl NAryAlgebra for TaggedAlgebra {
    type Elem = Tagged;

    fn arity(&self) -> usize {
        self.arity
    }

    fn parity(&self) -> Parity {
        Parity::Even
    }

    fn field(&self) -> Field {
        self.derivation.field()
    }

    fn bracket(&self, args: &[Tagged]) -> Tagged {
        assert_eq!(args.len(), self.arity, "bracket arity");
        let mut out = self.zero();
        let c = self.ncopies();
        let mut choice = vec![0usize; self.arity];
        // every choice of copy per argument
        loop {
            let parts: Vec<(usize, &Poly)> = choice.iter().zip(args).map(|(&t, a)| (t + 1, &a.copies[t])).collect();
            if parts.iter().all(|(_, p)| !p.is_zero()) {
                if let Some((k, v)) = self.bracket_tagged(&parts) {
                    out.copies[k - 1].add_scaled(&v, &self.field().one());
                }
            }
            let mut i = 0;
            loop {
                if i == self.arity {
                    return out;
                }
                choice[i] += 1;
                if choice[i] < c {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    fn zero(&self) -> Tagged {
        Tagged { copies: vec![Poly::zero(self.field(), self.nvars(), 0); self.ncopies()] }
    }

    fn add_scaled(&self, acc: &mut Tagged, x: &Tagged, c: &Scalar) {
        for (a, b) in acc.copies.iter_mut().zip(&x.copies) {
            a.add_scaled(b, c);
        }
    }

    fn is_zero(&self, x: &Tagged) -> bool {
        x.is_zero()
    }

    fn describe(&self, x: &Tagged) -> String {
        x.to_string()
    }
}

/// Either generalized bracket over a derivation set.
#[derive(Clone, Debug)]
pub enum Generalized {
    Determinant(DeterminantAlgebra),
    Tagged(TaggedAlgebra),
}

/// The bracket of `kind` with arity `n` over `F[x]` and the derivations `d`
/// (`n` of them for S, `n − 1` for W, one for SW).
pub fn generalized_brackets(kind: BracketKind, n: usize, d: DerivationSet) -> Result<Generalized> {
    match kind {
        BracketKind::SW => Ok(Generalized::Tagged(TaggedAlgebra::from_set(n, &d, false)?)),
        _ => Ok(Generalized::Determinant(DeterminantAlgebra::new(kind, n, d, false)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nlie::{check_anticommutative, check_fj, FjForm};

    const Q: Field = Field::Rationals;

    fn x(m: usize, i: usize) -> Poly {
        Poly::x(Q, m, 0, i)
    }

    #[test]
    fn vector_product_examples() {
        let o3 = on(Q, 3).unwrap();
        assert_eq!(o3.eval_basis(&[0, 1, 2]), SparseVec::unit(3, Q));
        assert_eq!(o3.eval_basis(&[0, 1, 3]), SparseVec::unit(2, Q).neg());
        assert!(o3.eval_basis(&[0, 0, 2]).is_zero());
        assert_eq!(o3.eval_basis(&[1, 0, 2]), SparseVec::unit(3, Q).neg());
    }

    #[test]
    fn vector_product_rescales_with_form() {
        let b = SparseMatrix::from_ints(Q, &[&[1, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 1, 1], &[0, 0, 1, 3]]);
        let a = vector_product(&b).unwrap();
        let a3 = vector_product(&SparseMatrix::from_ints(Q, &[&[3, 0, 0, 0], &[0, 6, 0, 0], &[0, 0, 3, 3], &[0, 0, 3, 9]])).unwrap();
        let third = Q.ratio(1, 3).unwrap();
        for t in crate::multilinear::all_tuples(4, 3) {
            assert_eq!(a3.eval_basis(&t), a.eval_basis(&t).scaled(&third));
        }
        assert!(check_fj(&a, &a.default_sample(), FjForm::Literal).passed());
    }

    #[test]
    fn degenerate_and_asymmetric_forms_rejected() {
        let deg = SparseMatrix::from_ints(Q, &[&[1, 1, 0, 0], &[1, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert!(matches!(vector_product(&deg), Err(Error::DegenerateForm)));
        let asym = SparseMatrix::from_ints(Q, &[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert!(matches!(vector_product(&asym), Err(Error::NonSymmetricForm)));
        let parsed = BilinearForm::parse(Q, "1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 -1\n").unwrap();
        assert_eq!(parsed.dim(), 4);
        assert!(BilinearForm::parse(Q, "1 0\n0").is_err());
    }

    #[test]
    fn o4_passes_fj_exhaustively() {
        let o4 = on(Q, 4).unwrap();
        let out = check_fj(&o4, &o4.default_sample(), FjForm::Literal);
        assert!(out.passed());
        assert_eq!(out.checked, 5usize.pow(7));
    }

    #[test]
    fn sn_examples() {
        let s3 = DeterminantAlgebra::sn(Q, 3).unwrap();
        assert!(s3.bracket(&[x(3, 0), x(3, 1), x(3, 2)]).is_zero());
        assert_eq!(s3.bracket(&[x(3, 0).pow(2), x(3, 1), x(3, 2)]), x(3, 0).scaled(&Q.int(2)));
        let c = Poly::one(Q, 3, 0);
        assert!(s3.bracket(&[c.clone(), x(3, 1), x(3, 2)]).is_zero());
        // representatives differing by constants
        let f = x(3, 0).mul(&x(3, 1)).add(&x(3, 2).pow(2));
        let g = x(3, 1).pow(3);
        let h = x(3, 0).mul(&x(3, 2));
        assert_eq!(s3.bracket(&[f.clone(), g.clone(), h.clone()]), s3.bracket(&[f.add(&c.scaled(&Q.int(5))), g, h]));
    }

    #[test]
    fn wn_examples() {
        let w3 = DeterminantAlgebra::wn(Q, 3).unwrap();
        let one = Poly::one(Q, 2, 0);
        assert_eq!(w3.bracket(&[one.clone(), x(2, 0), x(2, 1)]), one);
        assert!(w3.bracket(&[one.clone(), one.clone(), x(2, 0)]).is_zero());
        // det [[x1, x2, x1x2], [1, 0, x2], [0, 1, x1]] expanded by hand
        let x1x2 = x(2, 0).mul(&x(2, 1));
        assert_eq!(w3.bracket(&[x(2, 0), x(2, 1), x1x2.clone()]), x1x2.neg());
    }

    #[test]
    fn swn_examples() {
        let sw3 = TaggedAlgebra::swn(Q, 3).unwrap();
        let one = Poly::one(Q, 1, 0);
        let xx = x(1, 0);
        let t = |k, p: &Poly| Tagged::single(k, p.clone(), 2);
        assert_eq!(sw3.bracket(&[t(1, &xx), t(1, &one), t(2, &one)]), t(1, &one));
        assert!(sw3.bracket(&[t(1, &xx), t(1, &one), t(1, &one)]).is_zero());
        assert!(sw3.bracket(&[t(1, &xx), t(1, &xx), t(2, &one)]).is_zero());
        // reordering follows anticommutativity
        assert_eq!(sw3.bracket(&[t(2, &one), t(1, &xx), t(1, &one)]), t(1, &one));
        let flipped = TaggedAlgebra::new(3, sw3.derivation().clone(), true).unwrap();
        assert_eq!(flipped.bracket(&[t(1, &xx), t(1, &one), t(2, &one)]), t(1, &one.neg()));
    }

    #[test]
    fn catalog_algebras_pass_fj_on_small_windows() {
        let w3 = DeterminantAlgebra::wn(Q, 3).unwrap();
        let s = w3.sample(2);
        assert!(check_anticommutative(&w3, &s).is_none());
        assert!(check_fj(&w3, &s, FjForm::Literal).passed());
        let sw3 = TaggedAlgebra::swn(Q, 3).unwrap();
        let s = sw3.sample(2);
        assert!(check_anticommutative(&sw3, &s).is_none());
        assert!(check_fj(&sw3, &s, FjForm::Literal).passed());
        let s3 = DeterminantAlgebra::sn(Q, 3).unwrap();
        let s = s3.sample(2);
        assert!(check_fj(&s3, &s, FjForm::Literal).passed());
    }

    #[test]
    fn closure_predicate() {
        let one = Poly::one(Q, 1, 0);
        let d = VectorField::single(one.clone(), 0);
        let xd = VectorField::single(x(1, 0), 0);
        let x2d = VectorField::single(x(1, 0).pow(2), 0);
        assert!(dzhumadildaev_closed(&DerivationSet::partials(Q, 3)));
        assert!(dzhumadildaev_closed(&DerivationSet::new(vec![d.clone(), xd]).unwrap()));
        assert!(!dzhumadildaev_closed(&DerivationSet::new(vec![d, x2d]).unwrap()));
    }

    #[test]
    fn non_closed_set_gives_a_rescaled_jacobian_bracket() {
        let one = Poly::one(Q, 2, 0);
        let x1 = x(2, 0);
        let a = VectorField::single(x1.clone(), 0);
        let b = VectorField::single(x1.clone(), 1).add(&VectorField::single(one, 0));
        let set = DerivationSet::new(vec![a, b]).unwrap();
        assert!(!dzhumadildaev_closed(&set));
        let Generalized::Determinant(alg) = generalized_brackets(BracketKind::W, 3, set).unwrap() else { panic!() };
        let w3 = DeterminantAlgebra::wn(Q, 3).unwrap();
        let s = alg.monomials(2);
        let x1sq = x1.pow(2);
        for t in crate::multilinear::all_tuples(s.len(), 3) {
            let args: Vec<Poly> = t.iter().map(|&i| s[i].clone()).collect();
            assert_eq!(alg.bracket(&args), x1sq.mul(&w3.bracket(&args)));
        }
        assert!(check_fj(&alg, &alg.sample(2), FjForm::Literal).passed());
    }

    #[test]
    fn generalized_sw_matches_catalog() {
        let d = DerivationSet::partials(Q, 1);
        let Generalized::Tagged(g) = generalized_brackets(BracketKind::SW, 4, d).unwrap() else { panic!() };
        let sw4 = TaggedAlgebra::swn(Q, 4).unwrap();
        let s = sw4.monomials(1);
        for t in crate::multilinear::all_tuples(s.len(), 4) {
            let args: Vec<Tagged> = t.iter().map(|&i| s[i].clone()).collect();
            assert_eq!(g.bracket(&args), sw4.bracket(&args));
        }
        assert!(generalized_brackets(BracketKind::S, 3, DerivationSet::partials(Q, 2)).is_err());
    }
}
