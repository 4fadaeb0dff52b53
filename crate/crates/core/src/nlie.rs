//! n-ary anticommutative superalgebras: the Filippov-Jacobi check,
//! derivation predicates, inner derivations, and finite structure tables.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{sign, Field, Scalar};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::multilinear::{all_tuples, anti_sort, anticomm_to_comm, format_vec, parse_vec, sorted_tuples, AntiMultiMap, SuperMultiMap};
use crate::superspace::{Parity, SuperSpace};

/// An n-ary anticommutative superalgebra with a multilinear bracket on
/// arbitrary (linear-combination) elements.
pub trait NAryAlgebra: Sync {
    type Elem: Clone + PartialEq + Send + Sync;

    fn arity(&self) -> usize;
    /// Parity of the bracket.
    fn parity(&self) -> Parity;
    fn field(&self) -> Field;
    fn bracket(&self, args: &[Self::Elem]) -> Self::Elem;
    fn zero(&self) -> Self::Elem;
    fn add_scaled(&self, acc: &mut Self::Elem, x: &Self::Elem, c: &Scalar);
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn describe(&self, x: &Self::Elem) -> String;
}

/// Homogeneous sample elements with their parities.
#[derive(Clone, Debug)]
pub struct Sample<E> {
    pub elems: Vec<(E, Parity)>,
    pub exhaustive: bool,
}

impl<E: Clone> Sample<E> {
    /// Every ordered tuple is checked.
    pub fn exhaustive(elems: Vec<(E, Parity)>) -> Self {
        Sample { elems, exhaustive: true }
    }

    /// Only nondecreasing tuples (even entries never repeat). Sound for
    /// identities alternating in each argument group once anticommutativity
    /// has been checked separately.
    pub fn sorted(elems: Vec<(E, Parity)>) -> Self {
        Sample { elems, exhaustive: false }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    fn parities(&self) -> Vec<Parity> {
        self.elems.iter().map(|(_, p)| *p).collect()
    }

    fn tuples(&self, k: usize) -> Vec<Vec<usize>> {
        if self.exhaustive {
            all_tuples(self.elems.len(), k)
        } else {
            sorted_tuples(self.elems.len(), k, &self.parities(), Parity::Even)
        }
    }
}

/// Which sign convention is used on the right-hand side of the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FjForm {
    /// Prefactor `(−1)^{α Σp(a)}`, term signs `(−1)^{(p(b_1)+…+p(b_{k−1})) Σp(a)}`.
    Literal,
    /// Leibniz rule for `D_a` of parity `α + Σp(a)`.
    Derivation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FjWitness {
    pub sources: Vec<String>,
    pub args: Vec<String>,
    pub residue: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FjOutcome {
    pub checked: usize,
    pub witness: Option<FjWitness>,
}

impl FjOutcome {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// `LHS − RHS` of the Filippov-Jacobi identity on one tuple.
pub fn fj_residue<A: NAryAlgebra>(
    alg: &A,
    sources: &[(A::Elem, Parity)],
    args: &[(A::Elem, Parity)],
    form: FjForm,
) -> A::Elem {
    let pa = Parity::sum(sources.iter().map(|(_, p)| *p));
    let inner = |x: &A::Elem| {
        let mut v: Vec<A::Elem> = sources.iter().map(|(e, _)| e.clone()).collect();
        v.push(x.clone());
        alg.bracket(&v)
    };
    let images: Vec<A::Elem> = args.iter().map(|(e, _)| inner(e)).collect();
    residue_with(alg, pa, args, &images, inner, form)
}

/// Core of the residue with the images `D_a(b_k)` supplied by the caller.
fn residue_with<A: NAryAlgebra>(
    alg: &A,
    pa: Parity,
    args: &[(A::Elem, Parity)],
    images: &[A::Elem],
    inner: impl Fn(&A::Elem) -> A::Elem,
    form: FjForm,
) -> A::Elem {
    let f = alg.field();
    let alpha = alg.parity();
    let bs: Vec<A::Elem> = args.iter().map(|(e, _)| e.clone()).collect();
    let lhs = inner(&alg.bracket(&bs));
    let (pref, weight) = match form {
        FjForm::Literal => (alpha * pa, pa),
        FjForm::Derivation => ((alpha + pa) * alpha, alpha + pa),
    };
    let mut rhs = alg.zero();
    let mut prefix = Parity::Even;
    let mut v = bs.clone();
    for k in 0..bs.len() {
        if !alg.is_zero(&images[k]) {
            v[k] = images[k].clone();
            let t = alg.bracket(&v);
            alg.add_scaled(&mut rhs, &t, &sign(f, (prefix * weight).is_odd()));
            v[k] = bs[k].clone();
        }
        prefix = prefix + args[k].1;
    }
    let mut res = lhs;
    alg.add_scaled(&mut res, &rhs, &-sign(f, pref.is_odd()));
    res
}

/// Checks the Filippov-Jacobi identity on every sampled `(a; b)` pair. The
/// witness is the first failure in lexicographic tuple order.
pub fn check_fj<A: NAryAlgebra>(alg: &A, sample: &Sample<A::Elem>, form: FjForm) -> FjOutcome {
    let n = alg.arity();
    if n == 0 {
        return FjOutcome { checked: 0, witness: None };
    }
    let a_tuples = sample.tuples(n - 1);
    let b_tuples = sample.tuples(n);
    let checked = a_tuples.len() * b_tuples.len();
    let witness = a_tuples.par_iter().find_map_first(|at| {
        let sources: Vec<(A::Elem, Parity)> = at.iter().map(|&i| sample.elems[i].clone()).collect();
        let pa = Parity::sum(sources.iter().map(|(_, p)| *p));
        let inner = |x: &A::Elem| {
            let mut v: Vec<A::Elem> = sources.iter().map(|(e, _)| e.clone()).collect();
            v.push(x.clone());
            alg.bracket(&v)
        };
        let cache: Vec<A::Elem> = sample.elems.iter().map(|(e, _)| inner(e)).collect();
        let mut images = Vec::with_capacity(n);
        for bt in &b_tuples {
            let args: Vec<(A::Elem, Parity)> = bt.iter().map(|&i| sample.elems[i].clone()).collect();
            images.clear();
            images.extend(bt.iter().map(|&i| cache[i].clone()));
            let r = residue_with(alg, pa, &args, &images, inner, form);
            if !alg.is_zero(&r) {
                return Some(FjWitness {
                    sources: sources.iter().map(|(e, _)| alg.describe(e)).collect(),
                    args: args.iter().map(|(e, _)| alg.describe(e)).collect(),
                    residue: alg.describe(&r),
                });
            }
        }
        None
    });
    FjOutcome { checked, witness }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnticommWitness {
    pub args: Vec<String>,
    pub value: String,
    pub expected: String,
}

/// Verifies on every ordered sample tuple that the bracket agrees with the
/// sign-adjusted bracket of the sorted tuple (zero on repeated even
/// entries).
pub fn check_anticommutative<A: NAryAlgebra>(alg: &A, sample: &Sample<A::Elem>) -> Option<AnticommWitness> {
    let n = alg.arity();
    let pars = sample.parities();
    let f = alg.field();
    all_tuples(sample.len(), n).into_par_iter().find_map_first(|t| {
        let args: Vec<A::Elem> = t.iter().map(|&i| sample.elems[i].0.clone()).collect();
        let value = alg.bracket(&args);
        let expected = match anti_sort(&t, &pars) {
            None => alg.zero(),
            Some((s, neg)) => {
                let sorted: Vec<A::Elem> = s.iter().map(|&i| sample.elems[i].0.clone()).collect();
                let mut e = alg.zero();
                alg.add_scaled(&mut e, &alg.bracket(&sorted), &sign(f, neg));
                e
            }
        };
        (value != expected).then(|| AnticommWitness {
            args: args.iter().map(|e| alg.describe(e)).collect(),
            value: alg.describe(&value),
            expected: alg.describe(&expected),
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeibnizWitness {
    pub args: Vec<String>,
    pub residue: String,
}

/// Leibniz rule for a map `d` of parity `delta`:
/// `d[a_1..a_n] = (−1)^{δα} Σ_k (−1)^{δ(p(a_1)+…+p(a_{k−1}))} [a_1..d a_k..a_n]`.
pub fn is_derivation<A, D>(alg: &A, d: D, delta: Parity, sample: &Sample<A::Elem>) -> Option<LeibnizWitness>
where
    A: NAryAlgebra,
    D: Fn(&A::Elem) -> A::Elem + Sync,
{
    let n = alg.arity();
    let f = alg.field();
    let alpha = alg.parity();
    sample.tuples(n).into_par_iter().find_map_first(|t| {
        let args: Vec<A::Elem> = t.iter().map(|&i| sample.elems[i].0.clone()).collect();
        let mut res = d(&alg.bracket(&args));
        let mut rhs = alg.zero();
        let mut prefix = Parity::Even;
        for k in 0..n {
            let mut v = args.clone();
            v[k] = d(&args[k]);
            alg.add_scaled(&mut rhs, &alg.bracket(&v), &sign(f, (delta * prefix).is_odd()));
            prefix = prefix + sample.elems[t[k]].1;
        }
        alg.add_scaled(&mut res, &rhs, &-sign(f, (delta * alpha).is_odd()));
        (!alg.is_zero(&res)).then(|| LeibnizWitness {
            args: args.iter().map(|e| alg.describe(e)).collect(),
            residue: alg.describe(&res),
        })
    })
}

/// `D_{a_1..a_{n−1}}: x ↦ [a_1, …, a_{n−1}, x]`.
#[derive(Clone, Debug)]
pub struct InnerDerivation<E> {
    pub sources: Vec<E>,
    pub parity: Parity,
}

impl<E: Clone> InnerDerivation<E> {
    pub fn new<A: NAryAlgebra<Elem = E>>(alg: &A, sources: Vec<(E, Parity)>) -> Result<Self> {
        if sources.len() + 1 != alg.arity() {
            return Err(Error::ArityMismatch { expected: alg.arity() - 1, found: sources.len() });
        }
        let parity = alg.parity() + Parity::sum(sources.iter().map(|(_, p)| *p));
        Ok(InnerDerivation { sources: sources.into_iter().map(|(e, _)| e).collect(), parity })
    }

    pub fn apply<A: NAryAlgebra<Elem = E>>(&self, alg: &A, x: &E) -> E {
        let mut v = self.sources.clone();
        v.push(x.clone());
        alg.bracket(&v)
    }
}

/// A finite-dimensional n-ary anticommutative superalgebra given by its
/// structure constants on sorted basis tuples.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    table: AntiMultiMap,
    parity: Parity,
}

impl FiniteAlgebra {
    pub fn new(table: AntiMultiMap, parity: Parity) -> Result<Self> {
        match table.parity() {
            Some(p) if !table.table().is_empty() && p != parity => {
                Err(Error::InvalidParameter(format!("table has parity {p}, declared {parity}")))
            }
            None => Err(Error::InvalidParameter("bracket mixes parities".into())),
            _ => Ok(FiniteAlgebra { table, parity }),
        }
    }

    /// Builds the table from values on every basis tuple; fails on the first
    /// tuple where the values are not anticommutative.
    pub fn from_fn<F>(space: Arc<SuperSpace>, n: usize, parity: Parity, f: F) -> Result<Self>
    where
        F: Fn(&[usize]) -> SparseVec<usize>,
    {
        // reuse the transport's exhaustive anticommutativity check
        anticomm_to_comm(&space, n, &f)?;
        let mut table = AntiMultiMap::zero(space.clone(), n);
        for t in sorted_tuples(space.dim(), n, &space.parities(), Parity::Even) {
            let v = f(&t);
            if !v.is_zero() {
                table.set(&t, v)?;
            }
        }
        FiniteAlgebra::new(table, parity)
    }

    /// The zero bracket.
    pub fn abelian(space: Arc<SuperSpace>, n: usize) -> Self {
        FiniteAlgebra { table: AntiMultiMap::zero(space, n), parity: Parity::Even }
    }

    pub fn space(&self) -> &Arc<SuperSpace> {
        self.table.space()
    }

    pub fn dim(&self) -> usize {
        self.space().dim()
    }

    pub fn table(&self) -> &AntiMultiMap {
        &self.table
    }

    pub fn eval_basis(&self, args: &[usize]) -> SparseVec<usize> {
        self.table.eval_indices(args)
    }

    /// Basis vectors with their parities.
    pub fn basis_sample(&self) -> Vec<(SparseVec<usize>, Parity)> {
        let f = self.field();
        (0..self.dim()).map(|i| (SparseVec::unit(i, f), self.space().parity(i))).collect()
    }

    /// Exhaustive up to dimension 6, sorted tuples above.
    pub fn default_sample(&self) -> Sample<SparseVec<usize>> {
        if self.dim() <= 6 {
            Sample::exhaustive(self.basis_sample())
        } else {
            Sample::sorted(self.basis_sample())
        }
    }

    /// The commutative product on the parity-reversed space.
    pub fn mu_bar(&self) -> Result<SuperMultiMap> {
        anticomm_to_comm(self.space(), self.arity(), |t| self.table.eval_indices(t))
    }

    /// Matrix of a linear map given on basis vectors; column `j` is the image
    /// of `e_j`.
    pub fn matrix_of<F: Fn(&SparseVec<usize>) -> SparseVec<usize>>(&self, f: F) -> SparseMatrix {
        let d = self.dim();
        let mut m = SparseMatrix::zeros(self.field(), d, d);
        for j in 0..d {
            for (i, c) in f(&SparseVec::unit(j, self.field())).iter() {
                m.set(*i, j, c.clone());
            }
        }
        m
    }

    /// Text form: header `n field dim parities`, then `i_1 … i_n -> Σ c*e_k`
    /// on sorted 1-based index tuples.
    pub fn to_table_text(&self) -> String {
        let space = self.space();
        let pars: String = (0..space.dim()).map(|i| if space.parity(i).is_odd() { 'o' } else { 'e' }).collect();
        let mut s = format!("{} {} {} {}\n", self.arity(), self.field(), space.dim(), pars);
        for (idx, v) in self.table.table() {
            let lhs: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
            s.push_str(&format!("{} -> {}\n", lhs.join(" "), format_vec(space, v)));
        }
        s
    }

    pub fn from_table_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty bracket table".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 4 {
            return Err(Error::Parse(format!("bad header `{header}`, expected `n field dim parities`")));
        }
        let n: usize = h[0].parse().map_err(|_| Error::Parse(format!("bad arity `{}`", h[0])))?;
        let field = Field::parse(h[1])?;
        let dim: usize = h[2].parse().map_err(|_| Error::Parse(format!("bad dimension `{}`", h[2])))?;
        let pars: Vec<Parity> = h[3]
            .chars()
            .map(|c| match c {
                'e' | '0' => Ok(Parity::Even),
                'o' | '1' => Ok(Parity::Odd),
                other => Err(Error::Parse(format!("bad parity character `{other}`"))),
            })
            .collect::<Result<_>>()?;
        if pars.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: pars.len() });
        }
        let space = Arc::new(SuperSpace::new(field, (0..dim).map(|i| (format!("e{}", i + 1), pars[i])).collect())?);
        let mut table = AntiMultiMap::zero(space.clone(), n);
        for line in lines {
            let (lhs, rhs) = line.split_once("->").ok_or_else(|| Error::Parse(format!("missing `->` in `{line}`")))?;
            let idx: Vec<usize> = lhs
                .split_whitespace()
                .map(|t| match t.parse::<usize>() {
                    Ok(i) if i >= 1 && i <= dim => Ok(i - 1),
                    _ => Err(Error::Parse(format!("bad index `{t}`"))),
                })
                .collect::<Result<_>>()?;
            if idx.len() != n {
                return Err(Error::ArityMismatch { expected: n, found: idx.len() });
            }
            match anti_sort(&idx, &pars) {
                Some((s, false)) if s == idx => {}
                _ => return Err(Error::Parse(format!("index tuple `{}` is not sorted", lhs.trim()))),
            }
            let v = parse_vec(&space, rhs)?;
            let mut cur = table.eval_indices(&idx);
            cur.add_scaled(&v, &field.one());
            table.set(&idx, cur)?;
        }
        let parity = table.parity().ok_or_else(|| Error::Parse("bracket mixes parities".into()))?;
        FiniteAlgebra::new(table, parity)
    }
}

impl fmt::Debug for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteAlgebra({})", self.to_table_text().trim_end())
    }
}

impl NAryAlgebra for FiniteAlgebra {
    type Elem = SparseVec<usize>;

    fn arity(&self) -> usize {
        self.table.arity()
    }

    fn parity(&self) -> Parity {
        self.parity
    }

    fn field(&self) -> Field {
        self.space().field()
    }

    fn bracket(&self, args: &[SparseVec<usize>]) -> SparseVec<usize> {
        let mut acc = SparseVec::new();
        let mut idx = Vec::with_capacity(args.len());
        let f = self.field();
        fn rec(
            alg: &FiniteAlgebra,
            args: &[SparseVec<usize>],
            k: usize,
            coeff: Scalar,
            idx: &mut Vec<usize>,
            acc: &mut SparseVec<usize>,
        ) {
            if k == args.len() {
                let v = alg.table.eval_indices(idx);
                acc.add_scaled(&v, &coeff);
                return;
            }
            for (i, c) in args[k].iter() {
                idx.push(*i);
                rec(alg, args, k + 1, &coeff * c, idx, acc);
                idx.pop();
            }
        }
        rec(self, args, 0, f.one(), &mut idx, &mut acc);
        acc
    }

    fn zero(&self) -> SparseVec<usize> {
        SparseVec::new()
    }

    fn add_scaled(&self, acc: &mut SparseVec<usize>, x: &SparseVec<usize>, c: &Scalar) {
        acc.add_scaled(x, c);
    }

    fn is_zero(&self, x: &SparseVec<usize>) -> bool {
        x.is_zero()
    }

    fn describe(&self, x: &SparseVec<usize>) -> String {
        format_vec(self.space(), x)
    }
}

/// Applies a matrix (columns = images of basis vectors) to a sparse vector.
pub fn apply_matrix(m: &SparseMatrix, v: &SparseVec<usize>) -> SparseVec<usize> {
    let mut out = SparseVec::new();
    for (j, c) in v.iter() {
        for i in 0..m.nrows() {
            let e = m.get(i, *j);
            if !e.is_zero() {
                out.add_term(i, &(&e * c));
            }
        }
    }
    out
}

/// Parity of a homogeneous endomorphism, `None` for mixed or zero maps.
pub fn matrix_parity(space: &SuperSpace, m: &SparseMatrix) -> Option<Parity> {
    let mut seen = None;
    for i in 0..m.nrows() {
        for (j, _) in m.row(i).iter() {
            let p = space.parity(i) + space.parity(*j);
            match seen {
                None => seen = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::vector_product;

    fn q() -> Field {
        Field::Rationals
    }

    fn o3() -> FiniteAlgebra {
        vector_product(&SparseMatrix::identity(q(), 4)).unwrap()
    }

    #[test]
    fn o3_passes_exhaustively() {
        let a = o3();
        let out = check_fj(&a, &a.default_sample(), FjForm::Literal);
        assert_eq!(out.checked, 1024);
        assert!(out.passed(), "{:?}", out.witness);
        assert!(check_anticommutative(&a, &a.default_sample()).is_none());
    }

    #[test]
    fn corrupted_table_fails_with_witness() {
        let a = o3();
        let mut t = a.table().clone();
        t.set(&[0, 1, 2], SparseVec::unit(3, q()).add(&SparseVec::unit(0, q()))).unwrap();
        let bad = FiniteAlgebra::new(t, Parity::Even).unwrap();
        let out = check_fj(&bad, &bad.default_sample(), FjForm::Literal);
        let w = out.witness.expect("corruption detected");
        assert_ne!(w.residue, "0");
    }

    #[test]
    fn inner_derivation_of_o3() {
        let a = o3();
        let e = |i| SparseVec::unit(i, q());
        let d = InnerDerivation::new(&a, vec![(e(0), Parity::Even), (e(1), Parity::Even)]).unwrap();
        // independent evaluation through the permutation sign: ε_{1 2 3 4} = 1, ε_{1 2 4 3} = −1
        assert_eq!(d.apply(&a, &e(2)), e(3));
        assert_eq!(d.apply(&a, &e(3)), e(2).neg());
        assert!(d.apply(&a, &e(0)).is_zero());
        assert!(d.apply(&a, &e(1)).is_zero());
        let sample = a.default_sample();
        assert!(is_derivation(&a, |x| d.apply(&a, x), d.parity, &sample).is_none());
    }

    #[test]
    fn scaling_is_not_a_derivation() {
        let a = o3();
        let sample = a.default_sample();
        let c = q().int(2);
        assert!(is_derivation(&a, |x| x.scaled(&c), Parity::Even, &sample).is_some());
        assert!(is_derivation(&a, |_| SparseVec::new(), Parity::Even, &sample).is_none());
    }

    #[test]
    fn table_text_roundtrip_and_errors() {
        let a = o3();
        let t = a.to_table_text();
        assert!(t.starts_with("3 q 4 eeee\n1 2 3 -> 1*e4\n"));
        assert_eq!(FiniteAlgebra::from_table_text(&t).unwrap(), a);
        assert!(FiniteAlgebra::from_table_text("3 q 4 eee\n").is_err());
        assert!(FiniteAlgebra::from_table_text("3 q 4 eeee\n2 1 3 -> 1*e4\n").is_err());
        assert!(FiniteAlgebra::from_table_text("3 q 4 eeee\n1 2 3 => 1*e4\n").is_err());
        assert!(FiniteAlgebra::from_table_text("3 q 4 eeee\n1 2 9 -> 1*e4\n").is_err());
    }

    #[test]
    fn non_anticommutative_input_is_rejected() {
        let g = Arc::new(SuperSpace::uniform(q(), "e", 2, Parity::Even));
        let r = FiniteAlgebra::from_fn(g, 2, Parity::Even, |t| SparseVec::unit(t[0], q()));
        assert!(matches!(r, Err(Error::NotAnticommutative(_))));
    }

    #[test]
    fn odd_lie_superalgebra_identity() {
        // osp-like toy: g = <h | x>, [x, x] = h, everything else zero.
        let g = Arc::new(SuperSpace::new(q(), vec![("h".into(), Parity::Even), ("x".into(), Parity::Odd)]).unwrap());
        let a = FiniteAlgebra::from_fn(g, 2, Parity::Even, |t| {
            if t == [1, 1] {
                SparseVec::unit(0, q())
            } else {
                SparseVec::new()
            }
        })
        .unwrap();
        let s = a.default_sample();
        assert!(check_fj(&a, &s, FjForm::Literal).passed());
        assert!(check_fj(&a, &s, FjForm::Derivation).passed());
    }
}
