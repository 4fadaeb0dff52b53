//! Polynomial realizations of the linearly compact Lie superalgebras used
//! in the classification: `W(m,n)`, `S'(m,n)`, Poisson `H'`, Buttin
//! `HO`/`SHO'`, contact `KO`/`SKO'`, their gradings, divergences and
//! decompositions, and the four admissible pairs.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{on, DeterminantAlgebra, Tagged, TaggedAlgebra};
use crate::error::{Error, Result};
use crate::field::{sign, Field, Scalar};
use crate::linalg::{kernel, SparseMatrix, SparseVec, Span};
use crate::nlie::NAryAlgebra;
use crate::poly::{mono_list, Grading, Mono, Poly, VectorField};
use crate::superspace::Parity;
use crate::universal_w::transitivity_kernel;

pub type ElemKey = (usize, Mono);

/// An element of a realization: a vector field or a generating function.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Element {
    Field(VectorField),
    Function(Poly),
}

impl Element {
    pub fn is_zero(&self) -> bool {
        match self {
            Element::Field(v) => v.is_zero(),
            Element::Function(f) => f.is_zero(),
        }
    }

    pub fn coords(&self) -> SparseVec<ElemKey> {
        match self {
            Element::Field(v) => v.coords(),
            Element::Function(f) => f.terms().map_keys(|m| (0, m.clone())),
        }
    }

    pub fn as_field(&self) -> Option<&VectorField> {
        match self {
            Element::Field(v) => Some(v),
            Element::Function(_) => None,
        }
    }

    pub fn as_function(&self) -> Option<&Poly> {
        match self {
            Element::Function(f) => Some(f),
            Element::Field(_) => None,
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Element {
        match self {
            Element::Field(v) => Element::Field(v.scaled(c)),
            Element::Function(f) => Element::Function(f.scaled(c)),
        }
    }

    pub fn add(&self, o: &Element) -> Element {
        match (self, o) {
            (Element::Field(a), Element::Field(b)) => Element::Field(a.add(b)),
            (Element::Function(a), Element::Function(b)) => Element::Function(a.add(b)),
            _ => panic!("mixed element kinds"),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Field(v) => write!(f, "{v}"),
            Element::Function(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Kind {
    /// All polynomial vector fields.
    W,
    /// Divergence-free vector fields.
    SPrime,
    /// Poisson functions modulo constants.
    HPrime,
    /// Buttin bracket modulo constants (`HO`).
    PO,
    /// Buttin functions with `Δf = 0`, modulo constants.
    SHOPrime,
    /// Contact bracket (`KO`).
    KO,
    /// Contact functions with `div_β f = 0`.
    SKOPrime,
}

/// A concrete realization with its carrier `F[x_1..x_m] ⊗ Λ(ξ_1..ξ_n)`.
#[derive(Clone, Debug)]
pub struct Realization {
    kind: Kind,
    field: Field,
    nx: usize,
    nxi: usize,
    /// Odd part of the Poisson form (`{ξ_i, ξ_j} = b_ij`).
    form: Option<SparseMatrix>,
    beta: Option<Scalar>,
}

impl Realization {
    pub fn w(field: Field, m: usize, n: usize) -> Self {
        Realization { kind: Kind::W, field, nx: m, nxi: n, form: None, beta: None }
    }

    pub fn s_prime(field: Field, m: usize, n: usize) -> Self {
        Realization { kind: Kind::SPrime, field, nx: m, nxi: n, form: None, beta: None }
    }

    /// `P(m,n)/F·1` with `{p_i, q_i} = 1` and `{ξ_i, ξ_j} = b_ij`.
    pub fn poisson(field: Field, m: usize, b: SparseMatrix) -> Result<Self> {
        if m % 2 == 1 {
            return Err(Error::InvalidParameter(format!("Poisson realization needs an even number of x's, got {m}")));
        }
        if b.nrows() != b.ncols() || b.transpose() != b {
            return Err(Error::NonSymmetricForm);
        }
        let n = b.nrows();
        Ok(Realization { kind: Kind::HPrime, field, nx: m, nxi: n, form: Some(b), beta: None })
    }

    /// `H'(0,n)` with the form `b = I`.
    pub fn h_prime(field: Field, n: usize) -> Self {
        Self::poisson(field, 0, SparseMatrix::identity(field, n)).expect("identity form")
    }

    /// `H'(m,n)` with `{ξ_i, ξ_{n−i+1}} = 1`.
    pub fn h_prime_split(field: Field, m: usize, n: usize) -> Result<Self> {
        let mut b = SparseMatrix::zeros(field, n, n);
        for i in 0..n {
            b.set(i, n - 1 - i, field.one());
        }
        Self::poisson(field, m, b)
    }

    pub fn po(field: Field, n: usize) -> Self {
        Realization { kind: Kind::PO, field, nx: n, nxi: n, form: None, beta: None }
    }

    pub fn sho_prime(field: Field, n: usize) -> Self {
        Realization { kind: Kind::SHOPrime, field, nx: n, nxi: n, form: None, beta: None }
    }

    /// `PO(n,n+1)` with the contact bracket.
    pub fn ko(field: Field, n: usize) -> Self {
        Realization { kind: Kind::KO, field, nx: n, nxi: n + 1, form: None, beta: None }
    }

    pub fn sko_prime(field: Field, n: usize, beta: Scalar) -> Self {
        Realization { kind: Kind::SKOPrime, field, nx: n, nxi: n + 1, form: None, beta: Some(beta) }
    }

    /// Parses `W(m,n)`, `S'(m,n)`, `H'(0,n)`, `PO(n,n)`, `SHO'(n,n)`,
    /// `PO(n,n+1)`, `SKO'(n,n+1;beta)`.
    pub fn parse(field: Field, s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unrecognized realization `{s}`"));
        let open = s.find('(').ok_or_else(bad)?;
        if !s.ends_with(')') {
            return Err(bad());
        }
        let name = &s[..open];
        let inner = &s[open + 1..s.len() - 1];
        let (dims, beta) = match inner.split_once(';') {
            Some((d, b)) => (d, Some(Scalar::parse(field, b.trim())?)),
            None => (inner, None),
        };
        let nums: Vec<usize> =
            dims.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<_>>()?;
        let [m, n] = nums[..] else { return Err(bad()) };
        let r = match (name, beta) {
            ("W", None) => Self::w(field, m, n),
            ("S'", None) => Self::s_prime(field, m, n),
            ("H'", None) if m == 0 => Self::h_prime(field, n),
            ("H'", None) => Self::h_prime_split(field, m, n)?,
            ("PO", None) if m == n => Self::po(field, m),
            ("PO", None) if n == m + 1 => Self::ko(field, m),
            ("SHO'", None) if m == n => Self::sho_prime(field, m),
            ("SKO'", Some(b)) if n == m + 1 => Self::sko_prime(field, m, b),
            _ => return Err(bad()),
        };
        Ok(r)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nxi(&self) -> usize {
        self.nxi
    }

    pub fn beta(&self) -> Option<&Scalar> {
        self.beta.as_ref()
    }

    fn is_field_kind(&self) -> bool {
        matches!(self.kind, Kind::W | Kind::SPrime)
    }

    fn quotient(&self) -> bool {
        matches!(self.kind, Kind::HPrime | Kind::PO | Kind::SHOPrime)
    }

    pub fn x(&self, i: usize) -> Poly {
        Poly::x(self.field, self.nx, self.nxi, i)
    }

    pub fn xi(&self, j: usize) -> Poly {
        Poly::xi(self.field, self.nx, self.nxi, j)
    }

    pub fn one(&self) -> Poly {
        Poly::one(self.field, self.nx, self.nxi)
    }

    /// `ξ_1 … ξ_k`.
    pub fn xi_product(&self, k: usize) -> Poly {
        (0..k).fold(self.one(), |acc, j| acc.mul(&self.xi(j)))
    }

    pub fn function(&self, f: Poly) -> Element {
        Element::Function(f)
    }

    pub fn zero(&self) -> Element {
        if self.is_field_kind() {
            Element::Field(VectorField::zero(self.field, self.nx, self.nxi))
        } else {
            Element::Function(Poly::zero(self.field, self.nx, self.nxi))
        }
    }

    pub fn from_coords(&self, v: &SparseVec<ElemKey>) -> Element {
        if self.is_field_kind() {
            Element::Field(VectorField::from_coords(self.field, self.nx, self.nxi, v))
        } else {
            Element::Function(Poly::from_terms(self.field, self.nx, self.nxi, v.map_keys(|(_, m)| m.clone())))
        }
    }

    fn check_elem(&self, e: &Element) -> Result<()> {
        let ok = match e {
            Element::Field(v) => self.is_field_kind() && v.nx() == self.nx && v.nxi() == self.nxi,
            Element::Function(f) => !self.is_field_kind() && f.nx() == self.nx && f.nxi() == self.nxi,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Incompatible(format!("element {e} does not belong to the {:?} carrier", self.kind)))
        }
    }

    /// Drops constants in realizations taken modulo `F·1`.
    pub fn normalize(&self, e: Element) -> Element {
        match e {
            Element::Function(f) if self.quotient() => Element::Function(f.without_constant()),
            other => other,
        }
    }

    /// Parity as an element of the Lie superalgebra.
    pub fn parity(&self, e: &Element) -> Option<Parity> {
        match e {
            Element::Field(v) => v.parity(),
            Element::Function(f) => {
                let p = f.parity()?;
                Some(if matches!(self.kind, Kind::HPrime) { p } else { p.flip() })
            }
        }
    }

    fn function_parts(&self, f: &Poly) -> Vec<(Parity, Poly)> {
        f.homogeneous_parts()
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(p, part)| (if matches!(self.kind, Kind::HPrime) { p } else { p.flip() }, part))
            .collect()
    }

    /// The Lie bracket of the realization.
    pub fn bracket(&self, a: &Element, b: &Element) -> Element {
        match (a, b) {
            (Element::Field(x), Element::Field(y)) => Element::Field(x.bracket(y)),
            (Element::Function(f), Element::Function(g)) => {
                let mut acc = Poly::zero(self.field, self.nx, self.nxi);
                for (pf, fp) in self.function_parts(f) {
                    let r = match self.kind {
                        Kind::HPrime => self.poisson_homogeneous(&fp, pf, g),
                        Kind::PO | Kind::SHOPrime => self.buttin_homogeneous(&fp, pf, g),
                        Kind::KO | Kind::SKOPrime => self.contact_homogeneous(&fp, pf, g),
                        Kind::W | Kind::SPrime => unreachable!(),
                    };
                    acc = acc.add(&r);
                }
                self.normalize(Element::Function(acc))
            }
            _ => panic!("mixed element kinds"),
        }
    }

    fn poisson_homogeneous(&self, f: &Poly, pf: Parity, g: &Poly) -> Poly {
        let k = self.nx / 2;
        let mut r = Poly::zero(self.field, self.nx, self.nxi);
        for i in 0..k {
            r = r.add(&f.dx(i).mul(&g.dx(k + i))).sub(&f.dx(k + i).mul(&g.dx(i)));
        }
        let b = self.form.as_ref().expect("Poisson form");
        let s = -sign(self.field, pf.is_odd());
        for i in 0..self.nxi {
            let df = f.dxi(i);
            if df.is_zero() {
                continue;
            }
            for (j, c) in b.row(i).iter() {
                r.add_scaled(&df.mul(&g.dxi(*j)), &(&s * c));
            }
        }
        r
    }

    fn buttin_sum(&self, f: &Poly, pf: Parity, g: &Poly, n: usize) -> Poly {
        let mut r = Poly::zero(self.field, self.nx, self.nxi);
        let s = sign(self.field, pf.is_odd());
        for i in 0..n {
            r = r.add(&f.dx(i).mul(&g.dxi(i)));
            r.add_scaled(&f.dxi(i).mul(&g.dx(i)), &-s.clone());
        }
        r
    }

    fn buttin_homogeneous(&self, f: &Poly, pf: Parity, g: &Poly) -> Poly {
        self.buttin_sum(f, pf, g, self.nx)
    }

    /// `E = Σ_{i≤n} (x_i ∂_{x_i} + ξ_i ∂_{ξ_i})`.
    fn euler(&self, f: &Poly) -> Poly {
        f.euler(self.nx, self.nx)
    }

    fn two_minus_e(&self, f: &Poly) -> Poly {
        f.scaled(&self.field.int(2)).sub(&self.euler(f))
    }

    fn contact_homogeneous(&self, f: &Poly, pf: Parity, g: &Poly) -> Poly {
        let t = self.nx; // index of ξ_{n+1}
        let s = sign(self.field, pf.is_odd());
        let a = self.two_minus_e(f).mul(&g.dxi(t));
        let b = f.dxi(t).mul(&self.two_minus_e(g));
        let mut r = a;
        r.add_scaled(&b, &-s);
        r.sub(&self.buttin_sum(f, pf, g, self.nx))
    }

    /// `Δ = Σ_{i≤n} ∂_{x_i} ∂_{ξ_i}`.
    pub fn odd_laplacian(&self, f: &Poly) -> Poly {
        let mut r = f.zero_like();
        for i in 0..self.nx.min(self.nxi) {
            r = r.add(&f.dxi(i).dx(i));
        }
        r
    }

    /// `div_β f = Δf + (E − nβ) ∂f/∂ξ_{n+1}`.
    pub fn div_beta(&self, f: &Poly, beta: &Scalar) -> Poly {
        let d = f.dxi(self.nx);
        let nb = &self.field.int(self.nx as i64) * beta;
        self.odd_laplacian(f).add(&self.euler(&d)).sub(&d.scaled(&nb))
    }

    /// The vector field of a generating function (identity on fields).
    pub fn to_vector_field(&self, e: &Element) -> VectorField {
        match e {
            Element::Field(v) => v.clone(),
            Element::Function(f) => {
                let mut out = VectorField::zero(self.field, self.nx, self.nxi);
                for (pf, fp) in self.function_parts(f) {
                    let v = match self.kind {
                        Kind::HPrime => self.hamiltonian_field(&fp, pf),
                        Kind::PO | Kind::SHOPrime => self.buttin_field(&fp, pf, self.nx),
                        _ => self.contact_field(&fp, pf),
                    };
                    out = out.add(&v);
                }
                out
            }
        }
    }

    fn single(&self, c: Poly, k: usize) -> VectorField {
        VectorField::single(c, k)
    }

    fn hamiltonian_field(&self, f: &Poly, pf: Parity) -> VectorField {
        let k = self.nx / 2;
        let mut v = VectorField::zero(self.field, self.nx, self.nxi);
        for i in 0..k {
            v = v.add(&self.single(f.dx(i), k + i)).add(&self.single(f.dx(k + i).neg(), i));
        }
        let b = self.form.as_ref().expect("Poisson form");
        let s = -sign(self.field, pf.is_odd());
        for i in 0..self.nxi {
            let df = f.dxi(i);
            for (j, c) in b.row(i).iter() {
                v = v.add(&self.single(df.scaled(&(&s * c)), self.nx + j));
            }
        }
        v
    }

    fn buttin_field(&self, f: &Poly, pf: Parity, n: usize) -> VectorField {
        let s = sign(self.field, pf.is_odd());
        let mut v = VectorField::zero(self.field, self.nx, self.nxi);
        for i in 0..n {
            v = v.add(&self.single(f.dx(i), self.nx + i)).add(&self.single(f.dxi(i).scaled(&-s.clone()), i));
        }
        v
    }

    fn contact_field(&self, f: &Poly, pf: Parity) -> VectorField {
        let t = self.nx;
        let s = sign(self.field, pf.is_odd());
        let d = f.dxi(t).scaled(&s);
        let mut v = self.single(self.two_minus_e(f), self.nx + t);
        for i in 0..self.nx {
            v = v.add(&self.single(d.mul(&self.x(i)), i));
            v = v.add(&self.single(d.mul(&self.xi(i)), self.nx + i));
        }
        let b = self.buttin_field(f, pf, self.nx);
        v.add(&b.scaled(&self.field.int(-1)))
    }

    /// The linear condition cutting the realization out of its ambient
    /// (`div`, `Δ`, `div_β`); `None` for the ambient kinds.
    pub fn constraint(&self, e: &Element) -> Option<SparseVec<ElemKey>> {
        match (self.kind, e) {
            (Kind::SPrime, Element::Field(v)) => Some(v.divergence().terms().map_keys(|m| (0, m.clone()))),
            (Kind::SHOPrime, Element::Function(f)) => Some(self.odd_laplacian(f).terms().map_keys(|m| (0, m.clone()))),
            (Kind::SKOPrime, Element::Function(f)) => {
                let b = self.beta.as_ref().expect("beta");
                Some(self.div_beta(f, b).terms().map_keys(|m| (0, m.clone())))
            }
            _ => None,
        }
    }

    pub fn is_member(&self, e: &Element) -> Result<bool> {
        self.check_elem(e)?;
        Ok(self.constraint(e).is_none_or(|c| c.is_zero()))
    }

    /// Degree of `f ∂_k` is `deg f − deg(generator k)`; a generating
    /// function has degree `deg f − shift`.
    pub fn shift(&self, g: &Grading) -> Result<i64> {
        if g.x.len() != self.nx || g.xi.len() != self.nxi {
            return Err(Error::DimensionMismatch { expected: self.nx + self.nxi, found: g.x.len() + g.xi.len() });
        }
        Ok(match self.kind {
            Kind::W | Kind::SPrime => 0,
            Kind::HPrime => {
                if self.nx > 0 {
                    g.x[0] + g.x[self.nx / 2]
                } else {
                    let b = self.form.as_ref().expect("form");
                    let (i, j) = (0..self.nxi)
                        .find_map(|i| b.row(i).first().map(|(j, _)| (i, *j)))
                        .ok_or(Error::DegenerateForm)?;
                    g.xi[i] + g.xi[j]
                }
            }
            Kind::PO | Kind::SHOPrime => g.x[0] + g.xi[0],
            Kind::KO | Kind::SKOPrime => g.xi[self.nx],
        })
    }

    /// Spanning set of the degree-`degree` component, restricted to
    /// x-degree at most `xwindow`.
    pub fn graded_component(&self, g: &Grading, degree: i64, xwindow: u32) -> Result<Vec<Element>> {
        let shift = self.shift(g)?;
        let monos = mono_list(self.nx, self.nxi, xwindow, self.nxi as u32);
        let f = self.field;
        let mut cands: Vec<Element> = Vec::new();
        if self.is_field_kind() {
            for k in 0..self.nx + self.nxi {
                let gd = if k < self.nx { g.x[k] } else { g.xi[k - self.nx] };
                for m in &monos {
                    if m.weighted_degree(g) - gd == degree {
                        cands.push(Element::Field(VectorField::single(Poly::term(f, self.nx, self.nxi, m.clone(), f.one()), k)));
                    }
                }
            }
        } else {
            for m in &monos {
                if self.quotient() && m.total_degree() == 0 {
                    continue;
                }
                if m.weighted_degree(g) - shift == degree {
                    cands.push(Element::Function(Poly::term(f, self.nx, self.nxi, m.clone(), f.one())));
                }
            }
        }
        if !matches!(self.kind, Kind::SPrime | Kind::SHOPrime | Kind::SKOPrime) {
            return Ok(cands);
        }
        let images: Vec<SparseVec<ElemKey>> = cands.iter().map(|c| self.constraint(c).expect("constrained")).collect();
        let ker = kernel(f, &images);
        let mut out = Vec::with_capacity(ker.len());
        for kv in ker {
            let mut acc = SparseVec::new();
            for (c, s) in cands.iter().zip(&kv) {
                if !s.is_zero() {
                    acc.add_scaled(&c.coords(), s);
                }
            }
            out.push(self.from_coords(&acc));
        }
        Ok(out)
    }

    /// Components in degrees `lo..=hi`.
    pub fn graded_components(&self, g: &Grading, lo: i64, hi: i64, xwindow: u32) -> Result<BTreeMap<i64, Vec<Element>>> {
        (lo..=hi).map(|d| Ok((d, self.graded_component(g, d, xwindow)?))).collect()
    }
}

/// Checks `π_λ([X,Y]) f = [π_λ(X), π_λ(Y)] f` for `π_λ(X)f = Xf +
/// (−1)^{p(X)p(f)} λ f Div X`. Returns the residue when nonzero.
pub fn verify_pi_lambda<D>(x: &VectorField, y: &VectorField, f: &Poly, lambda: &Scalar, div: D) -> Option<Poly>
where
    D: Fn(&VectorField) -> Poly,
{
    let field = f.field();
    let act = |v: &VectorField, g: &Poly| -> Poly {
        let mut out = g.zero_like();
        for (pv, vp) in v.homogeneous_parts() {
            if vp.is_zero() {
                continue;
            }
            for (pg, gp) in g.homogeneous_parts() {
                if gp.is_zero() {
                    continue;
                }
                let t = vp.apply(&gp);
                let u = gp.mul(&div(&vp)).scaled(&(lambda * &sign(field, (pv * pg).is_odd())));
                out = out.add(&t).add(&u);
            }
        }
        out
    };
    let mut residue = act(&x.bracket(y), f);
    for (px, xp) in x.homogeneous_parts() {
        for (py, yp) in y.homogeneous_parts() {
            if xp.is_zero() || yp.is_zero() {
                continue;
            }
            let comm = act(&xp, &act(&yp, f)).sub(&act(&yp, &act(&xp, f)).scaled(&sign(field, (px * py).is_odd())));
            residue = residue.sub(&comm);
        }
    }
    (!residue.is_zero()).then_some(residue)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub name: String,
    pub complement: String,
    pub complement_degree: i64,
    pub ambient_dims: BTreeMap<i64, usize>,
    pub derived_dims: BTreeMap<i64, usize>,
    pub complement_in_ambient: bool,
    pub complement_in_derived: bool,
    pub codimension: usize,
    pub ideal_witness: Option<String>,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.complement_in_ambient && !self.complement_in_derived && self.codimension == 1 && self.ideal_witness.is_none()
    }
}

/// Lowest degree a generating function or field can have.
fn lowest_degree(r: &Realization, g: &Grading) -> Result<i64> {
    let gens = g.x.iter().chain(&g.xi).copied();
    Ok(match r.kind {
        Kind::W | Kind::SPrime => -gens.max().unwrap_or(0),
        _ => {
            let lo = if r.quotient() { g.x.iter().chain(&g.xi).copied().min().unwrap_or(0) } else { 0 };
            lo - r.shift(g)?
        }
    })
}

/// Checks `L = [L, L] ⊕ F·c` degree by degree up to `max_degree` for a
/// grading with positive generator degrees, where every component is
/// finite. The derived component in degree `d` is spanned by brackets
/// `[L_a, L_b]`, `a + b = d`.
pub fn check_decomposition(
    name: &str,
    r: &Realization,
    g: &Grading,
    complement: &Element,
    max_degree: i64,
) -> Result<DecompositionReport> {
    if g.x.iter().chain(&g.xi).any(|&d| d <= 0) {
        return Err(Error::InvalidParameter("decomposition checks need positive generator degrees".into()));
    }
    let lo = lowest_degree(r, g)?;
    let hi = max_degree - lo;
    let shift = r.shift(g)?;
    let xwin = (hi + shift.max(0) + g.x.iter().chain(&g.xi).copied().max().unwrap_or(1)).max(0) as u32;
    let comps = r.graded_components(g, lo, hi, xwin)?;
    let field = r.field();
    let mut ambient_dims = BTreeMap::new();
    let mut derived_dims = BTreeMap::new();
    let mut derived: BTreeMap<i64, Span<ElemKey>> = BTreeMap::new();
    let mut codimension = 0;
    for d in lo..=max_degree {
        let mut pairs = Vec::new();
        for a in lo..=d - lo {
            let b = d - a;
            if a > b {
                break;
            }
            let (la, lb) = (&comps[&a], &comps[&b]);
            for (i, x) in la.iter().enumerate() {
                let start = if a == b { i } else { 0 };
                for y in &lb[start..] {
                    pairs.push((x, y));
                }
            }
        }
        let brackets: Vec<SparseVec<ElemKey>> = pairs.par_iter().map(|(x, y)| r.bracket(x, y).coords()).collect();
        let mut span = Span::new(field);
        for z in &brackets {
            span.insert(z)?;
        }
        let amb = comps[&d].len();
        if amb > 0 {
            ambient_dims.insert(d, amb);
        }
        if span.dim() > 0 {
            derived_dims.insert(d, span.dim());
        }
        codimension += amb.saturating_sub(span.dim());
        derived.insert(d, span);
    }
    let comp_coords = complement.coords();
    let complement_degree = {
        let key = comp_coords.keys().next().ok_or_else(|| Error::InvalidParameter("zero complement".into()))?;
        let gd = if r.is_field_kind() {
            if key.0 < r.nx { g.x[key.0] } else { g.xi[key.0 - r.nx] }
        } else {
            shift
        };
        key.1.weighted_degree(g) - gd
    };
    let mut amb_span = Span::new(field);
    if let Some(c) = comps.get(&complement_degree) {
        for e in c {
            amb_span.insert(&e.coords())?;
        }
    }
    let complement_in_ambient = r.is_member(complement)? && amb_span.contains(&comp_coords);
    let complement_in_derived = derived.get(&complement_degree).is_some_and(|s| s.contains(&comp_coords));

    // ideal property on a sample: [L_a, D_b] ⊆ D_{a+b}
    let mut ideal_witness = None;
    'outer: for (&b, span) in &derived {
        for a in lo..=max_degree - b {
            for x in comps[&a].iter().take(4) {
                for y in span.basis().iter().take(4) {
                    let ye = r.from_coords(y);
                    let z = r.bracket(x, &ye);
                    if !z.is_zero() && !derived.get(&(a + b)).is_some_and(|s| s.contains(&z.coords())) {
                        ideal_witness = Some(format!("[{x}, {ye}] = {z}"));
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(DecompositionReport {
        name: name.to_string(),
        complement: complement.to_string(),
        complement_degree,
        ambient_dims,
        derived_dims,
        complement_in_ambient,
        complement_in_derived,
        codimension,
        ideal_witness,
    })
}

/// The four decompositions with their standard positive gradings.
pub fn standard_decompositions(field: Field) -> Result<Vec<DecompositionReport>> {
    let mut out = Vec::new();
    let h = Realization::h_prime(field, 4);
    out.push(check_decomposition("H'(0,4) = H(0,4) + F xi1xi2xi3xi4", &h, &Grading::new(vec![], vec![1; 4]), &h.function(h.xi_product(4)), 2)?);
    let s = Realization::s_prime(field, 1, 2);
    let mu = Element::Field(VectorField::single(s.xi_product(2), 0));
    out.push(check_decomposition("S'(1,2) = S(1,2) + F xi1xi2 d/dx1", &s, &Grading::new(vec![1], vec![1, 1]), &mu, 1)?);
    let sho = Realization::sho_prime(field, 3);
    out.push(check_decomposition("SHO'(3,3) = SHO(3,3) + F xi1xi2xi3", &sho, &Grading::new(vec![1; 3], vec![1; 3]), &sho.function(sho.xi_product(3)), 1)?);
    let sko = Realization::sko_prime(field, 3, field.one());
    out.push(check_decomposition(
        "SKO'(3,4;1) = SKO(3,4;1) + F xi1xi2xi3xi4",
        &sko,
        &Grading::new(vec![1; 3], vec![1, 1, 1, 2]),
        &sko.function(sko.xi_product(4)),
        3,
    )?);
    let sko = Realization::sko_prime(field, 3, field.ratio(1, 3)?);
    out.push(check_decomposition(
        "SKO'(3,4;1/3) = SKO(3,4;1/3) + F xi1xi2xi3",
        &sko,
        &Grading::new(vec![1; 3], vec![1, 1, 1, 2]),
        &sko.function(sko.xi_product(3)),
        3,
    )?);
    Ok(out)
}

/// Which of the four admissible pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Pair {
    I,
    II,
    III,
    IV,
}

impl Pair {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "1" => Ok(Pair::I),
            "ii" | "2" => Ok(Pair::II),
            "iii" | "3" => Ok(Pair::III),
            "iv" | "4" => Ok(Pair::IV),
            _ => Err(Error::Parse(format!("unknown pair `{s}`"))),
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pair::I => "i",
            Pair::II => "ii",
            Pair::III => "iii",
            Pair::IV => "iv",
        })
    }
}

/// Realization, grading and `μ` for a pair at arity `n`.
pub fn pair_setup(field: Field, which: Pair, n: usize) -> Result<(Realization, Grading, Element)> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("pairs need n ≥ 3, got {n}")));
    }
    Ok(match which {
        Pair::I => {
            let r = Realization::h_prime(field, n + 1);
            let mu = r.function(r.xi_product(n + 1));
            (r, Grading::new(vec![], vec![1; n + 1]), mu)
        }
        Pair::II => {
            let r = Realization::sho_prime(field, n);
            let mu = r.function(r.xi_product(n));
            (r, Grading::new(vec![0; n], vec![1; n]), mu)
        }
        Pair::III => {
            let r = Realization::sko_prime(field, n - 1, field.one());
            let mu = r.function(r.xi_product(n));
            (r, Grading::new(vec![0; n - 1], vec![1; n]), mu)
        }
        Pair::IV => {
            let r = Realization::s_prime(field, 1, n - 1);
            let mu = Element::Field(VectorField::single(r.xi_product(n - 1), 0));
            (r, Grading::new(vec![0], vec![1; n - 1]), mu)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub pair: String,
    pub n: usize,
    pub xwindow: u32,
    pub dims: BTreeMap<i64, usize>,
    pub top_is_line: bool,
    pub mu_centralizes_l0: bool,
    pub l3_witness: Option<String>,
    pub transitive: bool,
    pub transitivity_witness: Option<String>,
    pub compared: usize,
    pub scalar: Option<String>,
    pub bracket_match: bool,
    pub mismatch: Option<String>,
    /// Dimension of `L_0` against the dimension of the expected `L_0`
    /// (only where it is finite and window-independent).
    pub l0_dim_check: Option<(usize, usize)>,
}

impl PairReport {
    pub fn passed(&self) -> bool {
        self.top_is_line
            && self.mu_centralizes_l0
            && self.transitive
            && self.bracket_match
            && self.l0_dim_check.is_none_or(|(a, b)| a == b)
    }
}

/// Left-normed `[...[μ, a_1], …, a_n]`.
pub fn induced_bracket(r: &Realization, mu: &Element, args: &[Element]) -> Element {
    args.iter().fold(mu.clone(), |acc, a| r.bracket(&acc, a))
}

/// Compares two families of vectors up to one global nonzero scalar fitted
/// from the first nonzero reference value.
pub fn compare_up_to_scalar<K: Ord + Clone>(
    field: Field,
    pairs: &[(SparseVec<K>, SparseVec<K>)],
) -> (Option<Scalar>, Option<usize>) {
    let mut scalar: Option<Scalar> = None;
    for (idx, (got, want)) in pairs.iter().enumerate() {
        if scalar.is_none() {
            if want.is_zero() {
                if !got.is_zero() {
                    return (None, Some(idx));
                }
                continue;
            }
            match got.proportional_to(want) {
                Some(c) if !c.is_zero() => scalar = Some(c),
                _ => return (None, Some(idx)),
            }
            continue;
        }
        let c = scalar.as_ref().expect("fitted");
        if *got != want.scaled(c) {
            return (scalar, Some(idx));
        }
    }
    let _ = field;
    (scalar, None)
}

/// Window-level verification of one admissible pair: `L_{n−1} = Fμ`,
/// `[μ, L_0] = 0`, transitivity, and the induced bracket on `ΠL_{−1}`
/// against the catalog algebra up to one scalar.
pub fn verify_theorem_4_1_pair(field: Field, which: Pair, n: usize, xwindow: u32) -> Result<PairReport> {
    let (r, g, mu) = pair_setup(field, which, n)?;
    let top = n as i64 - 1;
    let comps = r.graded_components(&g, -1, n as i64, xwindow)?;
    let dims: BTreeMap<i64, usize> = comps.iter().filter(|(_, v)| !v.is_empty()).map(|(d, v)| (*d, v.len())).collect();

    let mut top_span = Span::new(field);
    for e in &comps[&top] {
        top_span.insert(&e.coords())?;
    }
    let top_is_line = top_span.dim() == 1 && top_span.contains(&mu.coords()) && r.is_member(&mu)?;

    let l3 = comps[&0].par_iter().map(|b| (b, r.bracket(&mu, b))).find_first(|(_, z)| !z.is_zero());
    let l3_witness = l3.map(|(b, z)| format!("[mu, {b}] = {z}"));

    let lm1 = &comps[&-1];
    let mut transitivity_witness = None;
    for j in 0..=top {
        let basis = &comps[&j];
        if basis.is_empty() {
            continue;
        }
        let images: Vec<SparseVec<(usize, ElemKey)>> = basis
            .par_iter()
            .map(|b| {
                let mut img = SparseVec::new();
                for (i, e) in lm1.iter().enumerate() {
                    for (k, s) in r.bracket(b, e).coords().iter() {
                        img.add_term((i, k.clone()), s);
                    }
                }
                img
            })
            .collect();
        if let Some(kv) = transitivity_kernel(field, &images) {
            let mut acc = SparseVec::new();
            for (b, c) in basis.iter().zip(&kv) {
                acc.add_scaled(&b.coords(), c);
            }
            transitivity_witness = Some(format!("degree {j}: {}", r.from_coords(&acc)));
            break;
        }
    }

    let (compared, pairs) = induced_vs_catalog(&r, &mu, which, n, xwindow)?;
    let (scalar, bad) = compare_up_to_scalar(field, &pairs);
    let mismatch = bad.map(|i| format!("tuple #{i}: induced {:?} vs catalog {:?}", pairs[i].0, pairs[i].1));
    let l0_dim_check = match which {
        Pair::I => Some((comps[&0].len(), (n + 1) * n / 2)),
        _ => None,
    };
    Ok(PairReport {
        pair: which.to_string(),
        n,
        xwindow,
        dims,
        top_is_line,
        mu_centralizes_l0: l3_witness.is_none(),
        l3_witness,
        transitive: transitivity_witness.is_none(),
        transitivity_witness,
        compared,
        scalar: scalar.as_ref().map(|s| s.to_string()),
        bracket_match: bad.is_none() && scalar.is_some(),
        mismatch,
        l0_dim_check,
    })
}

type KeyedPair = (SparseVec<ElemKey>, SparseVec<ElemKey>);

fn induced_vs_catalog(r: &Realization, mu: &Element, which: Pair, n: usize, window: u32) -> Result<(usize, Vec<KeyedPair>)> {
    let field = r.field();
    let poly_key = |p: &Poly| p.terms().map_keys(|m| (0usize, m.clone()));
    match which {
        Pair::I => {
            let cat = on(field, n)?;
            let args: Vec<Element> = (0..=n).map(|i| r.function(r.xi(i))).collect();
            let tuples = crate::multilinear::sorted_tuples(n + 1, n, &vec![Parity::Even; n + 1], Parity::Even);
            let out: Vec<KeyedPair> = tuples
                .par_iter()
                .map(|t| {
                    let a: Vec<Element> = t.iter().map(|&i| args[i].clone()).collect();
                    let got = induced_bracket(r, mu, &a).as_function().expect("function").clone();
                    // ξ_i ↔ e_i
                    let got = got.terms().map_keys(|m| (m.xi.trailing_zeros() as usize, Mono::one(0)));
                    let want = cat.eval_basis(t).map_keys(|&i| (i, Mono::one(0)));
                    (got, want)
                })
                .collect();
            Ok((out.len(), out))
        }
        Pair::II | Pair::III => {
            let cat = if which == Pair::II { DeterminantAlgebra::sn(field, n)? } else { DeterminantAlgebra::wn(field, n)? };
            let m = cat.nvars();
            let mons = cat.monomials(window);
            let lift = |p: &Poly| -> Poly {
                let mut q = Poly::zero(field, r.nx(), r.nxi());
                for (mono, c) in p.terms().iter() {
                    let mut mm = Mono::one(r.nx());
                    mm.x[..m].copy_from_slice(&mono.x[..m]);
                    q.add_scaled(&Poly::term(field, r.nx(), r.nxi(), mm, c.clone()), &field.one());
                }
                q
            };
            let lifted: Vec<Element> = mons.iter().map(|p| r.function(lift(p))).collect();
            let tuples = crate::multilinear::sorted_tuples(mons.len(), n, &vec![Parity::Even; mons.len()], Parity::Even);
            let out: Vec<KeyedPair> = tuples
                .par_iter()
                .map(|t| {
                    let a: Vec<Element> = t.iter().map(|&i| lifted[i].clone()).collect();
                    let got = induced_bracket(r, mu, &a);
                    let want = cat.bracket(&t.iter().map(|&i| mons[i].clone()).collect::<Vec<_>>());
                    (got.coords(), poly_key(&lift(&want)))
                })
                .collect();
            Ok((out.len(), out))
        }
        Pair::IV => {
            let cat = TaggedAlgebra::swn(field, n)?;
            let mons = cat.monomials(window);
            let to_field = |t: &Tagged| -> Element {
                let mut v = VectorField::zero(field, 1, n - 1);
                for (k, p) in t.copies.iter().enumerate() {
                    let mut q = Poly::zero(field, 1, n - 1);
                    for (mono, c) in p.terms().iter() {
                        let mut mm = Mono::one(1);
                        mm.x[0] = mono.x[0];
                        q.add_scaled(&Poly::term(field, 1, n - 1, mm, c.clone()), &field.one());
                    }
                    v = v.add(&VectorField::single(q, 1 + k));
                }
                Element::Field(v)
            };
            let lifted: Vec<Element> = mons.iter().map(to_field).collect();
            let tuples = crate::multilinear::sorted_tuples(mons.len(), n, &vec![Parity::Even; mons.len()], Parity::Even);
            let out: Vec<KeyedPair> = tuples
                .par_iter()
                .map(|t| {
                    let a: Vec<Element> = t.iter().map(|&i| lifted[i].clone()).collect();
                    let got = induced_bracket(r, mu, &a);
                    let want = cat.bracket(&t.iter().map(|&i| mons[i].clone()).collect::<Vec<_>>());
                    (got.coords(), to_field(&want).coords())
                })
                .collect();
            Ok((out.len(), out))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: Field = Field::Rationals;

    fn fld(r: &Realization, c: Poly, k: usize) -> Element {
        let _ = r;
        Element::Field(VectorField::single(c, k))
    }

    #[test]
    fn operator_brackets() {
        let w = Realization::w(Q, 2, 2);
        let one = w.one();
        let d1 = fld(&w, one.clone(), 0);
        assert_eq!(w.bracket(&d1, &fld(&w, w.x(0), 0)), d1);
        let dxi = fld(&w, one.clone(), 2);
        assert_eq!(w.bracket(&dxi, &fld(&w, w.xi(0), 2)), dxi);
        assert!(w.bracket(&dxi, &dxi).is_zero());
    }

    #[test]
    fn membership_examples() {
        let s = Realization::s_prime(Q, 2, 0);
        assert!(s.is_member(&fld(&s, s.x(1), 0)).unwrap());
        assert!(!s.is_member(&fld(&s, s.x(0), 0)).unwrap());
        let s1 = Realization::s_prime(Q, 1, 3);
        assert!(s1.is_member(&fld(&s1, s1.xi_product(3), 0)).unwrap());
        let sho = Realization::sho_prime(Q, 2);
        assert!(sho.is_member(&sho.function(sho.xi(0).mul(&sho.xi(1)))).unwrap());
        assert!(!sho.is_member(&sho.function(sho.x(0).mul(&sho.xi(0)))).unwrap());
        assert!(sho.is_member(&Element::Field(VectorField::zero(Q, 2, 2))).is_err());
    }

    #[test]
    fn bracket_examples() {
        let h = Realization::h_prime(Q, 4);
        let xi = |i| h.function(h.xi(i));
        // {ξ1, ξ1} = 1, which is 0 modulo constants
        assert_eq!(h.poisson_homogeneous(&h.xi(0), Parity::Odd, &h.xi(0)), h.one());
        assert!(h.bracket(&xi(0), &xi(0)).is_zero());
        assert!(h.poisson_homogeneous(&h.xi(0), Parity::Odd, &h.xi(1)).is_zero());
        let po = Realization::po(Q, 2);
        assert_eq!(po.buttin_homogeneous(&po.x(0), Parity::Odd, &po.xi(0)), po.one());
        let ko = Realization::ko(Q, 2);
        assert!(ko.bracket(&ko.function(ko.one()), &ko.function(ko.one())).is_zero());
    }

    #[test]
    fn graded_component_examples() {
        let h = Realization::h_prime(Q, 4);
        let g = Grading::new(vec![], vec![1; 4]);
        let dims: Vec<usize> = (-1..=2).map(|d| h.graded_component(&g, d, 0).unwrap().len()).collect();
        assert_eq!(dims, vec![4, 6, 4, 1]);
        let sho = Realization::sho_prime(Q, 3);
        let top = sho.graded_component(&Grading::new(vec![0; 3], vec![1; 3]), 2, 0).unwrap();
        assert_eq!(top, vec![sho.function(sho.xi_product(3))]);
        let s = Realization::s_prime(Q, 1, 2);
        let top = s.graded_component(&Grading::new(vec![0], vec![1, 1]), 2, 2).unwrap();
        let mu = fld(&s, s.xi_product(2), 0).coords();
        let mut span = Span::new(Q);
        for e in &top {
            span.insert(&e.coords()).unwrap();
        }
        assert!(span.contains(&mu));
    }

    #[test]
    fn handle_parsing() {
        assert_eq!(Realization::parse(Q, "W(2,1)").unwrap().kind(), Kind::W);
        assert_eq!(Realization::parse(Q, "S'(1,2)").unwrap().kind(), Kind::SPrime);
        assert_eq!(Realization::parse(Q, "H'(0,4)").unwrap().kind(), Kind::HPrime);
        assert_eq!(Realization::parse(Q, "SHO'(3,3)").unwrap().kind(), Kind::SHOPrime);
        let sko = Realization::parse(Q, "SKO'(2,3;1/3)").unwrap();
        assert_eq!(sko.beta(), Some(&Q.ratio(1, 3).unwrap()));
        assert!(Realization::parse(Q, "SKO'(2,4;1)").is_err());
        assert!(Realization::parse(Q, "X(1,1)").is_err());
    }

    #[test]
    fn divergence_representation_and_mutation() {
        let w = Realization::w(Q, 1, 2);
        let x = VectorField::single(w.x(0).mul(&w.xi(0)), 1).add(&VectorField::single(w.x(0).pow(2), 0));
        let y = VectorField::single(w.xi(1), 0).add(&VectorField::single(w.x(0).mul(&w.xi(1)), 2));
        let f = w.x(0).mul(&w.xi(0)).add(&w.xi(1));
        for l in [0, 1, 3] {
            assert!(verify_pi_lambda(&x, &y, &f, &Q.int(l), |v| v.divergence()).is_none());
        }
        let wrong = |v: &VectorField| {
            let mut r = v.coeffs()[0].dx(0);
            for j in 0..2 {
                r = r.add(&v.coeffs()[1 + j].dxi(j));
            }
            r
        };
        assert!(verify_pi_lambda(&x, &y, &f, &Q.one(), wrong).is_some());
    }

    #[test]
    fn laplacian_properties() {
        let sho = Realization::sho_prime(Q, 2);
        let f = sho.x(0).pow(2).add(&sho.x(1)).mul(&sho.xi(0)).mul(&sho.xi(1));
        assert!(sho.odd_laplacian(&sho.odd_laplacian(&f)).is_zero());
        assert_eq!(sho.odd_laplacian(&f).parity(), Some(Parity::Odd));
        let sko = Realization::sko_prime(Q, 2, Q.one());
        let g = sko.x(0).mul(&sko.xi(0)).add(&sko.x(1).pow(2).mul(&sko.xi(1)));
        assert_eq!(sko.div_beta(&g, &Q.int(7)), sko.odd_laplacian(&g));
    }

    fn poly_strategy(m: usize, n: usize) -> impl Strategy<Value = Poly> {
        proptest::collection::vec((proptest::collection::vec(0u16..3, m), 0u64..(1 << n), -2i64..3), 0..4).prop_map(
            move |ts| {
                let mut p = Poly::zero(Q, m, n);
                for (xs, mask, c) in ts {
                    let mut mono = Mono::one(m);
                    mono.x.copy_from_slice(&xs);
                    mono.xi = mask;
                    p.add_scaled(&Poly::term(Q, m, n, mono, Q.int(c)), &Q.one());
                }
                p
            },
        )
    }

    fn homogeneous(r: &Realization, f: Poly, odd: bool) -> Element {
        let parts = r.function_parts(&f);
        let p = parts.into_iter().find(|(p, _)| p.is_odd() == odd).map(|(_, q)| q).unwrap_or_else(|| f.zero_like());
        r.function(p)
    }

    fn lie_checks(r: &Realization, a: Element, b: Element, c: Element, pa: bool, pb: bool) -> std::result::Result<(), TestCaseError> {
        let s = sign(Q, pa && pb);
        let ab = r.bracket(&a, &b);
        let ba = r.bracket(&b, &a);
        prop_assert!(ab.add(&ba.scaled(&s)).is_zero(), "antisymmetry");
        let lhs = r.bracket(&a, &r.bracket(&b, &c));
        let rhs = r.bracket(&ab, &c).add(&r.bracket(&b, &r.bracket(&a, &c)).scaled(&s));
        prop_assert_eq!(r.normalize(lhs), r.normalize(rhs));
        // the field map is a homomorphism (modulo its kernel F·1)
        let vf = r.to_vector_field(&ab);
        let comm = r.to_vector_field(&a).bracket(&r.to_vector_field(&b));
        prop_assert_eq!(vf, comm);
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn poisson_is_lie(f in poly_strategy(2, 2), g in poly_strategy(2, 2), h in poly_strategy(2, 2), pa in any::<bool>(), pb in any::<bool>(), pc in any::<bool>()) {
            let r = Realization::h_prime_split(Q, 2, 2).unwrap();
            lie_checks(&r, homogeneous(&r, f, pa), homogeneous(&r, g, pb), homogeneous(&r, h, pc), pa, pb)?;
        }

        #[test]
        fn grassmann_poisson_is_lie(f in poly_strategy(0, 4), g in poly_strategy(0, 4), h in poly_strategy(0, 4), pa in any::<bool>(), pb in any::<bool>(), pc in any::<bool>()) {
            let r = Realization::h_prime(Q, 4);
            lie_checks(&r, homogeneous(&r, f, pa), homogeneous(&r, g, pb), homogeneous(&r, h, pc), pa, pb)?;
        }

        #[test]
        fn buttin_is_lie(f in poly_strategy(2, 2), g in poly_strategy(2, 2), h in poly_strategy(2, 2), pa in any::<bool>(), pb in any::<bool>(), pc in any::<bool>()) {
            let r = Realization::po(Q, 2);
            lie_checks(&r, homogeneous(&r, f, pa), homogeneous(&r, g, pb), homogeneous(&r, h, pc), pa, pb)?;
        }

        #[test]
        fn contact_is_lie(f in poly_strategy(1, 2), g in poly_strategy(1, 2), h in poly_strategy(1, 2), pa in any::<bool>(), pb in any::<bool>(), pc in any::<bool>()) {
            let r = Realization::ko(Q, 1);
            lie_checks(&r, homogeneous(&r, f, pa), homogeneous(&r, g, pb), homogeneous(&r, h, pc), pa, pb)?;
        }

        #[test]
        fn divergence_free_fields_close(f in poly_strategy(1, 2), g in poly_strategy(1, 2)) {
            // ∂-potentials give divergence-free fields: X_f = f_ξ1 ∂x − f_x ∂ξ1 style
            let s = Realization::s_prime(Q, 1, 2);
            let a = VectorField::single(f.dxi(0), 0).add(&VectorField::single(f.dx(0).scaled(&Q.int(-1)), 1));
            let b = VectorField::single(g.dxi(1), 0).add(&VectorField::single(g.dx(0).scaled(&Q.int(-1)), 2));
            for (pa, ea) in a.homogeneous_parts() {
                for (pb, eb) in b.homogeneous_parts() {
                    let ea = Element::Field(ea.clone());
                    let eb = Element::Field(eb.clone());
                    if s.is_member(&ea).unwrap() && s.is_member(&eb).unwrap() {
                        prop_assert!(s.is_member(&s.bracket(&ea, &eb)).unwrap(), "{:?} {:?}", pa, pb);
                    }
                }
            }
        }
    }

    #[test]
    fn pairs_at_n3() {
        for (which, xw) in [(Pair::I, 0), (Pair::II, 2), (Pair::III, 2), (Pair::IV, 2)] {
            let rep = verify_theorem_4_1_pair(Q, which, 3, xw).unwrap();
            assert!(rep.passed(), "{which}: {rep:?}");
        }
    }

    #[test]
    fn decompositions() {
        for rep in standard_decompositions(Q).unwrap() {
            assert!(rep.passed(), "{rep:?}");
        }
    }
}
