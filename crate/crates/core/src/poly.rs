//! Polynomials in commuting `x_1..x_m` and anticommuting `ξ_1..ξ_n`, and
//! polynomial vector fields acting on them as superderivations.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::field::{sign, Field, Scalar};
use crate::linalg::SparseVec;
use crate::superspace::Parity;

/// `x^α ξ_S` with `S` stored as a bit mask (bit `j` is `ξ_{j+1}`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono {
    pub x: SmallVec<[u16; 6]>,
    pub xi: u64,
}

impl Mono {
    pub fn one(m: usize) -> Self {
        Mono { x: SmallVec::from_elem(0, m), xi: 0 }
    }

    pub fn x_degree(&self) -> u32 {
        self.x.iter().map(|&e| e as u32).sum()
    }

    pub fn xi_degree(&self) -> u32 {
        self.xi.count_ones()
    }

    pub fn total_degree(&self) -> u32 {
        self.x_degree() + self.xi_degree()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.xi.count_ones() % 2 == 1)
    }

    /// Weighted degree: `Σ k_i α_i + Σ_{j∈S} s_j`.
    pub fn weighted_degree(&self, grading: &Grading) -> i64 {
        let mut d = 0i64;
        for (i, &e) in self.x.iter().enumerate() {
            d += grading.x[i] * e as i64;
        }
        for (j, &s) in grading.xi.iter().enumerate() {
            if self.xi >> j & 1 == 1 {
                d += s;
            }
        }
        d
    }
}

/// Lower total degree first, then larger x-exponents first, then ξ-mask.
impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.x.cmp(&self.x))
            .then_with(|| self.xi.cmp(&other.xi))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sign of `ξ_S ξ_T → ξ_{S∪T}`: one factor −1 for each pair `s ∈ S, t ∈ T`
/// with `s > t`. `None` when `S ∩ T ≠ ∅`.
pub fn grassmann_sign(s: u64, t: u64) -> Option<bool> {
    if s & t != 0 {
        return None;
    }
    let mut neg = false;
    let mut tt = t;
    while tt != 0 {
        let j = tt.trailing_zeros();
        // elements of S above j
        let above = s >> (j + 1);
        neg ^= above.count_ones() % 2 == 1;
        tt &= tt - 1;
    }
    Some(neg)
}

/// Degrees of `x_i` and `ξ_j` defining a ℤ-grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub x: Vec<i64>,
    pub xi: Vec<i64>,
}

impl Grading {
    pub fn new(x: Vec<i64>, xi: Vec<i64>) -> Self {
        Grading { x, xi }
    }

    /// Parses `k1,…,km|s1,…,sn`.
    pub fn parse(s: &str) -> crate::Result<Self> {
        let (a, b) = s.split_once('|').ok_or_else(|| crate::Error::Parse(format!("grading `{s}` lacks `|`")))?;
        let nums = |t: &str| -> crate::Result<Vec<i64>> {
            t.split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(|x| x.parse::<i64>().map_err(|_| crate::Error::Parse(format!("bad degree `{x}`"))))
                .collect()
        };
        Ok(Grading { x: nums(a)?, xi: nums(b)? })
    }
}

/// An element of `F[x_1..x_m] ⊗ Λ(ξ_1..ξ_n)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    m: usize,
    n: usize,
    field: Field,
    terms: SparseVec<Mono>,
}

impl Poly {
    pub fn zero(field: Field, m: usize, n: usize) -> Self {
        Poly { m, n, field, terms: SparseVec::new() }
    }

    pub fn constant(field: Field, m: usize, n: usize, c: Scalar) -> Self {
        Self::term(field, m, n, Mono::one(m), c)
    }

    pub fn one(field: Field, m: usize, n: usize) -> Self {
        Self::constant(field, m, n, field.one())
    }

    pub fn term(field: Field, m: usize, n: usize, mono: Mono, c: Scalar) -> Self {
        let mut p = Self::zero(field, m, n);
        p.terms.add_term(mono, &c);
        p
    }

    pub fn monomial(field: Field, m: usize, n: usize, xexp: &[u16], xis: &[usize]) -> Self {
        let mut mono = Mono::one(m);
        mono.x.copy_from_slice(xexp);
        let mut p = Self::one(field, m, n);
        p.terms = SparseVec::unit(mono, field);
        for &j in xis {
            p = p.mul(&Self::xi(field, m, n, j));
        }
        p
    }

    pub fn x(field: Field, m: usize, n: usize, i: usize) -> Self {
        let mut mono = Mono::one(m);
        mono.x[i] = 1;
        Self::term(field, m, n, mono, field.one())
    }

    pub fn xi(field: Field, m: usize, n: usize, j: usize) -> Self {
        let mut mono = Mono::one(m);
        mono.xi = 1 << j;
        Self::term(field, m, n, mono, field.one())
    }

    pub fn from_terms(field: Field, m: usize, n: usize, terms: SparseVec<Mono>) -> Self {
        Poly { m, n, field, terms }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nx(&self) -> usize {
        self.m
    }

    pub fn nxi(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &SparseVec<Mono> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn zero_like(&self) -> Self {
        Self::zero(self.field, self.m, self.n)
    }

    pub fn coeff(&self, mono: &Mono) -> Scalar {
        self.terms.get(mono).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Mono::one(self.m))
    }

    /// Drops the constant term (the class modulo constants).
    pub fn without_constant(&self) -> Self {
        let mut r = self.clone();
        let c = self.constant_term();
        if !c.is_zero() {
            r.terms.add_term(Mono::one(self.m), &-c);
        }
        r
    }

    pub fn parity(&self) -> Option<Parity> {
        let mut seen = None;
        for m in self.terms.keys() {
            let p = m.parity();
            match seen {
                None => seen = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        Some(seen.unwrap_or(Parity::Even))
    }

    pub fn homogeneous_parts(&self) -> [(Parity, Poly); 2] {
        let mut e = self.zero_like();
        let mut o = self.zero_like();
        for (m, c) in self.terms.iter() {
            if m.parity().is_odd() {
                o.terms.add_term(m.clone(), c);
            } else {
                e.terms.add_term(m.clone(), c);
            }
        }
        [(Parity::Even, e), (Parity::Odd, o)]
    }

    /// Components by weighted degree.
    pub fn graded_parts(&self, grading: &Grading) -> std::collections::BTreeMap<i64, Poly> {
        let mut out: std::collections::BTreeMap<i64, Poly> = std::collections::BTreeMap::new();
        for (m, c) in self.terms.iter() {
            out.entry(m.weighted_degree(grading)).or_insert_with(|| self.zero_like()).terms.add_term(m.clone(), c);
        }
        out
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        r.terms.add_scaled(&o.terms, &self.field.one());
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        r.terms.add_scaled(&o.terms, &-self.field.one());
        r
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.neg(), ..self.clone() }
    }

    pub fn scaled(&self, c: &Scalar) -> Poly {
        Poly { terms: self.terms.scaled(c), ..self.clone() }
    }

    pub fn add_scaled(&mut self, o: &Poly, c: &Scalar) {
        self.terms.add_scaled(&o.terms, c);
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = self.zero_like();
        for (a, ca) in self.terms.iter() {
            for (b, cb) in o.terms.iter() {
                let Some(neg) = grassmann_sign(a.xi, b.xi) else { continue };
                let mut x = a.x.clone();
                for (xi, &e) in x.iter_mut().zip(b.x.iter()) {
                    *xi += e;
                }
                let c = ca * cb;
                r.terms.add_term(Mono { x, xi: a.xi | b.xi }, &if neg { -c } else { c });
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut r = Self::one(self.field, self.m, self.n);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// `∂/∂x_i`.
    pub fn dx(&self, i: usize) -> Poly {
        let mut r = self.zero_like();
        for (m, c) in self.terms.iter() {
            let e = m.x[i];
            if e == 0 {
                continue;
            }
            let mut nm = m.clone();
            nm.x[i] -= 1;
            r.terms.add_term(nm, &(c * &self.field.int(e as i64)));
        }
        r
    }

    /// Left derivative `∂/∂ξ_j`: moves `ξ_j` to the front, then deletes it.
    pub fn dxi(&self, j: usize) -> Poly {
        let mut r = self.zero_like();
        let bit = 1u64 << j;
        for (m, c) in self.terms.iter() {
            if m.xi & bit == 0 {
                continue;
            }
            let before = (m.xi & (bit - 1)).count_ones();
            let mut nm = m.clone();
            nm.xi &= !bit;
            r.terms.add_term(nm, &if before % 2 == 1 { -c.clone() } else { c.clone() });
        }
        r
    }

    /// Derivative in the `k`-th generator, x's first then ξ's.
    pub fn d(&self, k: usize) -> Poly {
        if k < self.m {
            self.dx(k)
        } else {
            self.dxi(k - self.m)
        }
    }

    /// Euler operator `Σ x_i ∂_{x_i} + Σ ξ_j ∂_{ξ_j}` restricted to the first
    /// `mx` x-variables and the first `mxi` ξ-variables.
    pub fn euler(&self, mx: usize, mxi: usize) -> Poly {
        let mut r = self.zero_like();
        for (m, c) in self.terms.iter() {
            let k: u32 = m.x.iter().take(mx).map(|&e| e as u32).sum::<u32>() + (m.xi & ((1u64 << mxi) - 1)).count_ones();
            if k > 0 {
                r.terms.add_term(m.clone(), &(c * &self.field.int(k as i64)));
            }
        }
        r
    }

    /// Monomial basis elements: all `x^α ξ_S` with `|α| ≤ xmax` and the
    /// ξ-degree at most `ximax`.
    pub fn monomials(field: Field, m: usize, n: usize, xmax: u32, ximax: u32) -> Vec<Poly> {
        let mut out = Vec::new();
        for mono in mono_list(m, n, xmax, ximax) {
            out.push(Poly::term(field, m, n, mono, field.one()));
        }
        out
    }
}

/// All monomials with x-degree ≤ `xmax` and ξ-degree ≤ `ximax`, sorted.
pub fn mono_list(m: usize, n: usize, xmax: u32, ximax: u32) -> Vec<Mono> {
    let mut xs: Vec<SmallVec<[u16; 6]>> = vec![SmallVec::new()];
    for _ in 0..m {
        let mut next = Vec::new();
        for v in &xs {
            let used: u32 = v.iter().map(|&e| e as u32).sum();
            for e in 0..=(xmax - used) {
                let mut w = v.clone();
                w.push(e as u16);
                next.push(w);
            }
        }
        xs = next;
    }
    let mut out = Vec::new();
    for x in xs {
        for mask in 0u64..(1u64 << n) {
            if mask.count_ones() <= ximax {
                out.push(Mono { x: x.clone(), xi: mask });
            }
        }
    }
    out.sort();
    out
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &e) in self.x.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{}", i + 1)),
                _ => parts.push(format!("x{}^{}", i + 1, e)),
            }
        }
        for j in 0..64 {
            if self.xi >> j & 1 == 1 {
                parts.push(format!("xi{}", j + 1));
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| if c.is_one() { m.to_string() } else { format!("{c}*{m}") })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// `Σ P_i ∂/∂x_i + Σ Q_j ∂/∂ξ_j` with coefficients stored x-first.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    coeffs: Vec<Poly>,
}

impl VectorField {
    pub fn zero(field: Field, m: usize, n: usize) -> Self {
        VectorField { coeffs: vec![Poly::zero(field, m, n); m + n] }
    }

    pub fn from_coeffs(coeffs: Vec<Poly>) -> Self {
        VectorField { coeffs }
    }

    /// `f ∂/∂(generator k)`.
    pub fn single(f: Poly, k: usize) -> Self {
        let mut v = Self::zero(f.field(), f.nx(), f.nxi());
        v.coeffs[k] = f;
        v
    }

    pub fn field(&self) -> Field {
        self.coeffs[0].field()
    }

    pub fn nx(&self) -> usize {
        self.coeffs[0].nx()
    }

    pub fn nxi(&self) -> usize {
        self.coeffs[0].nxi()
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// Parity: coefficient parity, flipped on ξ-components.
    pub fn parity(&self) -> Option<Parity> {
        let m = self.nx();
        let mut seen: Option<Parity> = None;
        for (k, c) in self.coeffs.iter().enumerate() {
            for mono in c.terms().keys() {
                let p = if k < m { mono.parity() } else { mono.parity().flip() };
                match seen {
                    None => seen = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
        Some(seen.unwrap_or(Parity::Even))
    }

    pub fn homogeneous_parts(&self) -> [(Parity, VectorField); 2] {
        let m = self.nx();
        let f = self.field();
        let mut e = Self::zero(f, m, self.nxi());
        let mut o = Self::zero(f, m, self.nxi());
        for (k, c) in self.coeffs.iter().enumerate() {
            let [(_, ce), (_, co)] = c.homogeneous_parts();
            if k < m {
                e.coeffs[k] = ce;
                o.coeffs[k] = co;
            } else {
                e.coeffs[k] = co;
                o.coeffs[k] = ce;
            }
        }
        [(Parity::Even, e), (Parity::Odd, o)]
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        VectorField { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scaled(&self, c: &Scalar) -> VectorField {
        VectorField { coeffs: self.coeffs.iter().map(|a| a.scaled(c)).collect() }
    }

    pub fn add_scaled(&mut self, o: &VectorField, c: &Scalar) {
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            a.add_scaled(b, c);
        }
    }

    /// Action on a polynomial, coefficients on the left.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut r = f.zero_like();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let df = f.d(k);
            if !df.is_zero() {
                r = r.add(&c.mul(&df));
            }
        }
        r
    }

    /// Supercommutator, componentwise `X(Y_k) − (−1)^{p(X)p(Y)} Y(X_k)`.
    pub fn bracket(&self, o: &VectorField) -> VectorField {
        let f = self.field();
        let mut acc = Self::zero(f, self.nx(), self.nxi());
        for (px, x) in self.homogeneous_parts() {
            if x.is_zero() {
                continue;
            }
            for (py, y) in o.homogeneous_parts() {
                if y.is_zero() {
                    continue;
                }
                let s = -sign(f, (px * py).is_odd());
                for k in 0..acc.coeffs.len() {
                    let t = x.apply(&y.coeffs[k]);
                    let u = y.apply(&x.coeffs[k]);
                    acc.coeffs[k].add_scaled(&t, &f.one());
                    acc.coeffs[k].add_scaled(&u, &s);
                }
            }
        }
        acc
    }

    /// `Σ ∂P_i/∂x_i + Σ (−1)^{p(Q_j)} ∂Q_j/∂ξ_j`.
    pub fn divergence(&self) -> Poly {
        let m = self.nx();
        let mut r = self.coeffs[0].zero_like();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k < m {
                r = r.add(&c.dx(k));
            } else {
                for (p, part) in c.homogeneous_parts() {
                    let d = part.dxi(k - m);
                    r.add_scaled(&d, &sign(self.field(), p.is_odd()));
                }
            }
        }
        r
    }

    /// Weighted degree components (degree of `f ∂_k` is `deg f − deg(gen k)`).
    pub fn graded_parts(&self, grading: &Grading) -> std::collections::BTreeMap<i64, VectorField> {
        let m = self.nx();
        let mut out: std::collections::BTreeMap<i64, VectorField> = std::collections::BTreeMap::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            let gdeg = if k < m { grading.x[k] } else { grading.xi[k - m] };
            for (mono, s) in c.terms().iter() {
                let d = mono.weighted_degree(grading) - gdeg;
                let e = out.entry(d).or_insert_with(|| Self::zero(self.field(), m, self.nxi()));
                e.coeffs[k].add_scaled(&Poly::term(self.field(), m, self.nxi(), mono.clone(), s.clone()), &self.field().one());
            }
        }
        out
    }

    /// Coordinates keyed by (generator, monomial).
    pub fn coords(&self) -> SparseVec<(usize, Mono)> {
        let mut v = SparseVec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            for (mono, s) in c.terms().iter() {
                v.add_term((k, mono.clone()), s);
            }
        }
        v
    }

    pub fn from_coords(field: Field, m: usize, n: usize, v: &SparseVec<(usize, Mono)>) -> Self {
        let mut r = Self::zero(field, m, n);
        for ((k, mono), s) in v.iter() {
            r.coeffs[*k].add_scaled(&Poly::term(field, m, n, mono.clone(), s.clone()), &field.one());
        }
        r
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.nx();
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let g = if k < m { format!("d/dx{}", k + 1) } else { format!("d/dxi{}", k - m + 1) };
                format!("({c})*{g}")
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: Field = Field::Rationals;

    fn x(i: usize) -> Poly {
        Poly::x(Q, 2, 3, i)
    }
    fn xi(j: usize) -> Poly {
        Poly::xi(Q, 2, 3, j)
    }

    #[test]
    fn grassmann_relations() {
        assert!(xi(0).mul(&xi(0)).is_zero());
        assert_eq!(xi(0).mul(&xi(1)), xi(1).mul(&xi(0)).neg());
        assert_eq!(x(0).mul(&xi(1)), xi(1).mul(&x(0)));
        assert_eq!(grassmann_sign(0b10, 0b01), Some(true));
        assert_eq!(grassmann_sign(0b01, 0b10), Some(false));
        assert_eq!(grassmann_sign(0b11, 0b01), None);
    }

    #[test]
    fn left_derivative_signs() {
        let f = xi(0).mul(&xi(1));
        assert_eq!(f.dxi(0), xi(1));
        assert_eq!(f.dxi(1), xi(0).neg());
        assert!(f.dxi(2).is_zero());
        assert_eq!(x(0).pow(3).dx(0), x(0).pow(2).scaled(&Q.int(3)));
    }

    #[test]
    fn vector_field_brackets() {
        let one = Poly::one(Q, 2, 3);
        let d1 = VectorField::single(one.clone(), 0);
        let x1d1 = VectorField::single(x(0), 0);
        assert_eq!(d1.bracket(&x1d1), d1);
        let dxi1 = VectorField::single(one.clone(), 2);
        let xidxi = VectorField::single(xi(0), 2);
        assert_eq!(dxi1.bracket(&xidxi), dxi1);
        assert!(dxi1.bracket(&dxi1).is_zero());
    }

    #[test]
    fn divergence_examples() {
        let one = Poly::one(Q, 2, 3);
        assert!(VectorField::single(one, 0).divergence().is_zero());
        assert_eq!(VectorField::single(x(0), 0).divergence(), Poly::one(Q, 2, 3));
        assert_eq!(VectorField::single(xi(0), 2).divergence(), Poly::one(Q, 2, 3).neg());
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec((0u16..3, 0u16..2, 0u64..8, -2i64..3), 0..4).prop_map(|ts| {
            let mut p = Poly::zero(Q, 2, 3);
            for (a, b, mask, c) in ts {
                let mut m = Mono::one(2);
                m.x[0] = a;
                m.x[1] = b;
                m.xi = mask;
                p.add_scaled(&Poly::term(Q, 2, 3, m, Q.int(c)), &Q.one());
            }
            p
        })
    }

    fn homogeneous(p: Poly, odd: bool) -> Poly {
        let [(_, e), (_, o)] = p.homogeneous_parts();
        if odd { o } else { e }
    }

    fn small_field() -> impl Strategy<Value = VectorField> {
        proptest::collection::vec(small_poly(), 5).prop_map(VectorField::from_coeffs)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn multiplication_is_associative(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn derivatives_are_superderivations(a in small_poly(), b in small_poly(), oa in any::<bool>(), k in 0usize..5) {
            let a = homogeneous(a, oa);
            let dk = |p: &Poly| p.d(k);
            let lhs = dk(&a.mul(&b));
            let s = if k >= 2 && oa { Q.int(-1) } else { Q.one() };
            let rhs = dk(&a).mul(&b).add(&a.mul(&dk(&b)).scaled(&s));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn field_bracket_is_super_lie(x in small_field(), y in small_field(), z in small_field(), px in any::<bool>(), py in any::<bool>(), pz in any::<bool>(), f in small_poly()) {
            let pick = |v: VectorField, odd: bool| { let [(_, e), (_, o)] = v.homogeneous_parts(); if odd { o } else { e } };
            let (x, y, z) = (pick(x, px), pick(y, py), pick(z, pz));
            let s = sign(Q, px && py);
            prop_assert!(x.bracket(&y).add(&y.bracket(&x).scaled(&s)).is_zero());
            let lhs = x.bracket(&y.bracket(&z));
            let rhs = x.bracket(&y).bracket(&z).add(&y.bracket(&x.bracket(&z)).scaled(&s));
            prop_assert_eq!(lhs, rhs);
            // the bracket acts as the commutator of operators
            let comm = x.apply(&y.apply(&f)).sub(&y.apply(&x.apply(&f)).scaled(&s));
            prop_assert_eq!(x.bracket(&y).apply(&f), comm);
        }
    }
}
