//! Derivation algebras of finite-dimensional n-ary superalgebras: the
//! Leibniz linear system, inner derivations and the ideal property.

use rayon::prelude::*;
use serde::Serialize;

use crate::field::{sign, Field};
use crate::linalg::{kernel, SparseMatrix, SparseVec, Span};
use crate::multilinear::sorted_tuples;
use crate::nlie::{apply_matrix, FiniteAlgebra, NAryAlgebra};
use crate::superspace::Parity;

type Entry = (usize, usize);

fn to_vec(m: &SparseMatrix) -> SparseVec<Entry> {
    let mut v = SparseVec::new();
    for i in 0..m.nrows() {
        for (j, c) in m.row(i).iter() {
            v.add_term((i, *j), c);
        }
    }
    v
}

fn to_matrix(field: Field, d: usize, v: &SparseVec<Entry>) -> SparseMatrix {
    let mut m = SparseMatrix::zeros(field, d, d);
    for ((i, j), c) in v.iter() {
        m.set(*i, *j, c.clone());
    }
    m
}

/// A homogeneous endomorphism with its parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endo {
    pub matrix: SparseMatrix,
    pub parity: Parity,
}

/// `Der g` and the span of inner derivations.
#[derive(Clone, Debug)]
pub struct DerivationSpace {
    pub basis: Vec<Endo>,
    pub inner: Vec<Endo>,
    dim: usize,
    field: Field,
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn inner_dim(&self) -> usize {
        self.inner.len()
    }

    fn span(&self, es: &[Endo]) -> Span<Entry> {
        let mut s = Span::new(self.field);
        for e in es {
            s.insert(&to_vec(&e.matrix)).expect("same field");
        }
        s
    }

    /// `Inder ⊆ Der`, and equality of dimensions.
    pub fn all_inner(&self) -> bool {
        let der = self.span(&self.basis);
        self.inner.iter().all(|e| der.contains(&to_vec(&e.matrix))) && self.inner_dim() == self.dim()
    }

    pub fn carrier_dim(&self) -> usize {
        self.dim
    }
}

/// Leibniz defect of `D` on a tuple, as in [`crate::nlie::is_derivation`].
fn defect(alg: &FiniteAlgebra, d: &SparseMatrix, delta: Parity, t: &[usize]) -> SparseVec<usize> {
    let f = alg.field();
    let space = alg.space();
    let mut res = apply_matrix(d, &alg.eval_basis(t));
    let mut rhs = SparseVec::new();
    let mut prefix = Parity::Even;
    let args: Vec<SparseVec<usize>> = t.iter().map(|&i| SparseVec::unit(i, f)).collect();
    for k in 0..t.len() {
        let mut v = args.clone();
        v[k] = apply_matrix(d, &args[k]);
        if !v[k].is_zero() {
            rhs.add_scaled(&alg.bracket(&v), &sign(f, (delta * prefix).is_odd()));
        }
        prefix = prefix + space.parity(t[k]);
    }
    res.add_scaled(&rhs, &-sign(f, (delta * alg.parity()).is_odd()));
    res
}

fn tuples(alg: &FiniteAlgebra, k: usize) -> Vec<Vec<usize>> {
    sorted_tuples(alg.dim(), k, &alg.space().parities(), Parity::Even)
}

/// Solves the Leibniz system over all sorted basis tuples, one parity at a
/// time.
pub fn derivation_space(alg: &FiniteAlgebra) -> DerivationSpace {
    let f = alg.field();
    let d = alg.dim();
    let space = alg.space();
    let ts = tuples(alg, alg.arity());
    let mut basis = Vec::new();
    for delta in [Parity::Even, Parity::Odd] {
        let unknowns: Vec<Entry> =
            (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).filter(|&(i, j)| space.parity(i) + space.parity(j) == delta).collect();
        let images: Vec<SparseVec<Entry>> = unknowns
            .par_iter()
            .map(|&(i, j)| {
                let mut e = SparseMatrix::zeros(f, d, d);
                e.set(i, j, f.one());
                let mut img = SparseVec::new();
                for (ti, t) in ts.iter().enumerate() {
                    for (k, c) in defect(alg, &e, delta, t).iter() {
                        img.add_term((ti, *k), c);
                    }
                }
                img
            })
            .collect();
        for kv in kernel(f, &images) {
            let mut v = SparseVec::new();
            for (u, c) in unknowns.iter().zip(&kv) {
                if !c.is_zero() {
                    v.add_term(*u, c);
                }
            }
            basis.push(Endo { matrix: to_matrix(f, d, &v), parity: delta });
        }
    }
    let inner = inder_span(alg);
    DerivationSpace { basis, inner, dim: d, field: f }
}

/// A basis of the span of `D_{a_1..a_{n−1}}` over basis source tuples.
pub fn inder_span(alg: &FiniteAlgebra) -> Vec<Endo> {
    let f = alg.field();
    let space = alg.space();
    let mats: Vec<Endo> = tuples(alg, alg.arity() - 1)
        .par_iter()
        .map(|src| {
            let m = alg.matrix_of(|x| {
                let mut args: Vec<SparseVec<usize>> = src.iter().map(|&i| SparseVec::unit(i, f)).collect();
                args.push(x.clone());
                alg.bracket(&args)
            });
            let parity = alg.parity() + Parity::sum(src.iter().map(|&i| space.parity(i)));
            Endo { matrix: m, parity }
        })
        .collect();
    let mut out = Vec::new();
    let mut span = Span::new(f);
    for e in mats {
        if span.insert(&to_vec(&e.matrix)).expect("same field") {
            out.push(e);
        }
    }
    out
}

/// Supercommutator `AB − (−1)^{|A||B|} BA`.
pub fn supercommutator(a: &Endo, b: &Endo) -> SparseMatrix {
    let ab = a.matrix.mul(&b.matrix).expect("square");
    let ba = b.matrix.mul(&a.matrix).expect("square");
    let s = -sign(a.matrix.field(), (a.parity * b.parity).is_odd());
    let mut v = to_vec(&ab);
    v.add_scaled(&to_vec(&ba), &s);
    to_matrix(a.matrix.field(), a.matrix.nrows(), &v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealWitness {
    pub der: usize,
    pub inner: usize,
}

/// `[Der, Inder] ⊆ Inder` on basis pairs.
pub fn ideal_check(space: &DerivationSpace) -> Option<IdealWitness> {
    let inner = space.span(&space.inner);
    space.basis.iter().enumerate().find_map(|(a, d)| {
        space.inner.iter().enumerate().find_map(|(b, i)| {
            let c = supercommutator(d, i);
            (!inner.contains(&to_vec(&c))).then_some(IdealWitness { der: a, inner: b })
        })
    })
}

/// `Dᵀ B + B D = 0`.
pub fn is_skew_wrt(d: &SparseMatrix, b: &SparseMatrix) -> bool {
    let lhs = d.transpose().mul(b).expect("square");
    let rhs = b.mul(d).expect("square");
    let mut v = to_vec(&lhs);
    v.add_scaled(&to_vec(&rhs), &b.field().one());
    v.is_zero()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivationReport {
    pub carrier_dim: usize,
    pub der_dim: usize,
    pub inder_dim: usize,
    pub der_equals_inder: bool,
    pub ideal: bool,
    pub basis: Vec<String>,
}

fn render(m: &SparseMatrix) -> String {
    let rows: Vec<String> = m
        .to_dense()
        .iter()
        .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

pub fn derivation_report(alg: &FiniteAlgebra) -> DerivationReport {
    let space = derivation_space(alg);
    DerivationReport {
        carrier_dim: space.carrier_dim(),
        der_dim: space.dim(),
        inder_dim: space.inner_dim(),
        der_equals_inder: space.all_inner(),
        ideal: ideal_check(&space).is_none(),
        basis: space.basis.iter().map(|e| render(&e.matrix)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{on, vector_product, BilinearForm};
    use crate::nlie::{is_derivation, matrix_parity};
    use crate::superspace::SuperSpace;
    use std::sync::Arc;

    const Q: Field = Field::Rationals;

    #[test]
    fn vector_product_derivations_are_skew_and_inner() {
        for (n, expect) in [(3, 6), (4, 10)] {
            let a = on(Q, n).unwrap();
            let s = derivation_space(&a);
            assert_eq!(s.dim(), expect);
            assert_eq!(s.dim(), (n + 1) * n / 2);
            assert_eq!(s.inner_dim(), expect);
            assert!(s.all_inner());
            assert!(ideal_check(&s).is_none());
            let id = SparseMatrix::identity(Q, n + 1);
            assert!(s.basis.iter().all(|e| is_skew_wrt(&e.matrix, &id)));
        }
    }

    #[test]
    fn derivations_pass_the_leibniz_predicate() {
        let a = on(Q, 3).unwrap();
        let s = derivation_space(&a);
        let sample = a.default_sample();
        for e in s.basis.iter().chain(&s.inner) {
            assert!(is_derivation(&a, |x| apply_matrix(&e.matrix, x), e.parity, &sample).is_none());
            assert_eq!(matrix_parity(a.space(), &e.matrix), Some(e.parity));
        }
    }

    #[test]
    fn skewness_follows_the_form() {
        let b = BilinearForm::new(SparseMatrix::from_ints(Q, &[&[1, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 1, 1], &[0, 0, 1, 3]])).unwrap();
        let a = vector_product(b.matrix()).unwrap();
        let s = derivation_space(&a);
        assert_eq!(s.dim(), 6);
        assert!(s.all_inner());
        assert!(s.basis.iter().all(|e| is_skew_wrt(&e.matrix, b.matrix())));
        assert!(!s.basis.iter().all(|e| is_skew_wrt(&e.matrix, &SparseMatrix::identity(Q, 4))));
    }

    #[test]
    fn abelian_bracket() {
        let space = Arc::new(SuperSpace::standard(Q, 2, 1));
        let a = FiniteAlgebra::abelian(space, 3);
        let s = derivation_space(&a);
        assert_eq!(s.dim(), 9);
        assert_eq!(s.basis.iter().filter(|e| e.parity == Parity::Odd).count(), 4);
        assert_eq!(s.inner_dim(), 0);
        assert!(ideal_check(&s).is_none());
    }

    #[test]
    fn report_fields() {
        let r = derivation_report(&on(Q, 3).unwrap());
        assert_eq!((r.der_dim, r.inder_dim, r.der_equals_inder, r.ideal), (6, 6, true, true));
        assert_eq!(r.basis.len(), 6);
    }
}
