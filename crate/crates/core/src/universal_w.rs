//! The graded Lie superalgebra `W(V) = ∏ Hom(S^{k+1}V, V)` with its
//! insertion product, bracket, and finite graded subalgebras.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{sign, Field, Scalar};
use crate::linalg::{kernel, SparseVec, Span};
use crate::multilinear::{odd_inversions, symmetric_basis, MapKey, SuperMultiMap};
use crate::superspace::{Parity, SuperSpace};

/// Increasing `k`-subsets of `0..r`.
pub fn combinations(r: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > r {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < r - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn same_space(f: &SuperMultiMap, g: &SuperMultiMap) -> Result<()> {
    if !Arc::ptr_eq(f.space(), g.space()) && **f.space() != **g.space() {
        return Err(Error::Incompatible("elements of W(V) over different spaces".into()));
    }
    Ok(())
}

/// The insertion product `f □ g`: `g` is fed a shuffle of the arguments
/// and its value is plugged into the first slot of `f`, with the Koszul
/// sign of the shuffle. A constant `f` gives zero; the result is zero
/// whenever its degree would fall below −1.
#[allow(clippy::needless_range_loop)]
pub fn box_product(f: &SuperMultiMap, g: &SuperMultiMap) -> Result<SuperMultiMap> {
    same_space(f, g)?;
    let space = f.space().clone();
    let (fa, ga) = (f.arity(), g.arity());
    if fa == 0 {
        return Ok(SuperMultiMap::zero(space, ga.saturating_sub(1)));
    }
    let r = fa + ga - 1;
    if ga == 0 {
        let a = g.table().get(&Vec::new()).cloned().unwrap_or_default();
        let mut out = SuperMultiMap::zero(space.clone(), r);
        for idx in symmetric_basis(&space, r) {
            let v = f.eval_first_vector(&a, &idx);
            if !v.is_zero() {
                out.set(&idx, v)?;
            }
        }
        return Ok(out);
    }
    if f.is_zero() || g.is_zero() {
        return Ok(SuperMultiMap::zero(space, r));
    }
    let pars = space.parities();
    let field = space.field();
    let splits = combinations(r, ga);
    let entries: Vec<(Vec<usize>, SparseVec<usize>)> = symmetric_basis(&space, r)
        .into_par_iter()
        .filter_map(|idx| {
            let pos_par: Vec<Parity> = idx.iter().map(|&i| pars[i]).collect();
            let mut acc = SparseVec::new();
            let mut inner_args = Vec::with_capacity(ga);
            let mut outer_args = Vec::with_capacity(fa - 1);
            for chosen in &splits {
                inner_args.clear();
                outer_args.clear();
                let mut perm = Vec::with_capacity(r);
                let mut c = 0;
                for s in 0..r {
                    if c < chosen.len() && chosen[c] == s {
                        c += 1;
                    } else {
                        outer_args.push(idx[s]);
                    }
                }
                perm.extend_from_slice(chosen);
                for s in 0..r {
                    if !chosen.contains(&s) {
                        perm.push(s);
                    }
                }
                inner_args.extend(chosen.iter().map(|&s| idx[s]));
                let inner = g.eval_indices(&inner_args);
                if inner.is_zero() {
                    continue;
                }
                let v = f.eval_first_vector(&inner, &outer_args);
                if v.is_zero() {
                    continue;
                }
                acc.add_scaled(&v, &sign(field, odd_inversions(&perm, &pos_par)));
            }
            (!acc.is_zero()).then_some((idx, acc))
        })
        .collect();
    let mut out = SuperMultiMap::zero(space, r);
    for (idx, v) in entries {
        out.set(&idx, v)?;
    }
    Ok(out)
}

/// `[f, g] = f □ g − (−1)^{p(f)p(g)} g □ f`, extended bilinearly over the
/// homogeneous components.
pub fn w_bracket(f: &SuperMultiMap, g: &SuperMultiMap) -> Result<SuperMultiMap> {
    same_space(f, g)?;
    let field = f.field();
    let r = (f.arity() + g.arity()).saturating_sub(1);
    let mut acc = SuperMultiMap::zero(f.space().clone(), r);
    for (pf, fp) in f.homogeneous_parts() {
        if fp.is_zero() {
            continue;
        }
        for (pg, gp) in g.homogeneous_parts() {
            if gp.is_zero() {
                continue;
            }
            let fg = box_product(&fp, &gp)?;
            let gf = box_product(&gp, &fp)?;
            let s = sign(field, (pf * pg).is_odd());
            acc = add_any(&acc, &fg)?;
            acc = add_any(&acc, &gf.scaled(&-s))?;
        }
    }
    Ok(acc)
}

fn add_any(a: &SuperMultiMap, b: &SuperMultiMap) -> Result<SuperMultiMap> {
    if a.is_zero() {
        return Ok(b.clone());
    }
    if b.is_zero() {
        return Ok(a.clone());
    }
    a.add(b)
}

/// Iterated bracket `[...[f, a_1], ..., a_k]` with basis vectors `a_i`.
pub fn iterated_bracket(f: &SuperMultiMap, args: &[usize]) -> Result<SuperMultiMap> {
    let mut cur = f.clone();
    for &a in args {
        let c = SuperMultiMap::constant(f.space().clone(), SparseVec::unit(a, f.field()));
        cur = w_bracket(&cur, &c)?;
    }
    Ok(cur)
}

/// Unit maps spanning `W_k(V)`.
pub fn w_basis(space: &Arc<SuperSpace>, degree: i64) -> Vec<SuperMultiMap> {
    if degree < -1 {
        return Vec::new();
    }
    let arity = (degree + 1) as usize;
    let mut out = Vec::new();
    for idx in symmetric_basis(space, arity) {
        for o in 0..space.dim() {
            let mut m = SuperMultiMap::zero(space.clone(), arity);
            m.set(&idx, SparseVec::unit(o, space.field())).expect("canonical index");
            out.push(m);
        }
    }
    out
}

/// `dim W_k(V)`.
pub fn w_dim(space: &SuperSpace, degree: i64) -> usize {
    if degree < -1 {
        return 0;
    }
    symmetric_basis(space, (degree + 1) as usize).len() * space.dim()
}

/// A graded subspace of `W(V)` truncated at a degree cap, one exact span
/// per degree.
#[derive(Clone, Debug)]
pub struct GradedSubalgebra {
    space: Arc<SuperSpace>,
    cap: i64,
    components: BTreeMap<i64, Span<MapKey>>,
}

impl GradedSubalgebra {
    pub fn new(space: Arc<SuperSpace>, cap: i64) -> Self {
        GradedSubalgebra { space, cap, components: BTreeMap::new() }
    }

    /// All of `W(V)` in degrees −1..=cap.
    pub fn full(space: Arc<SuperSpace>, cap: i64) -> Result<Self> {
        let mut a = Self::new(space.clone(), cap);
        for d in -1..=cap {
            for m in w_basis(&space, d) {
                a.insert(&m)?;
            }
        }
        Ok(a)
    }

    pub fn space(&self) -> &Arc<SuperSpace> {
        &self.space
    }

    pub fn field(&self) -> Field {
        self.space.field()
    }

    pub fn cap(&self) -> i64 {
        self.cap
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.components.get(&degree).map_or(0, Span::dim)
    }

    /// Nonzero component dimensions.
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.components.iter().filter(|(_, s)| s.dim() > 0).map(|(d, s)| (*d, s.dim())).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.components.values().map(Span::dim).sum()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.components.iter().filter(|(_, s)| s.dim() > 0).map(|(d, _)| *d)
    }

    pub fn component(&self, degree: i64) -> Option<&Span<MapKey>> {
        self.components.get(&degree)
    }

    /// Echelon basis of one component as maps.
    pub fn basis(&self, degree: i64) -> Vec<SuperMultiMap> {
        let arity = (degree + 1).max(0) as usize;
        self.components
            .get(&degree)
            .map(|s| s.basis().iter().map(|row| SuperMultiMap::from_coords(self.space.clone(), arity, row)).collect())
            .unwrap_or_default()
    }

    pub fn contains(&self, f: &SuperMultiMap) -> bool {
        if f.is_zero() {
            return true;
        }
        self.components.get(&f.degree()).is_some_and(|s| s.contains(&f.coords()))
    }

    /// Inserts `f` into its degree component; returns whether the dimension
    /// grew. Elements above the cap are rejected.
    pub fn insert(&mut self, f: &SuperMultiMap) -> Result<bool> {
        if f.is_zero() {
            return Ok(false);
        }
        let d = f.degree();
        if d > self.cap {
            return Err(Error::InvalidParameter(format!("degree {d} exceeds cap {}", self.cap)));
        }
        let field = self.field();
        self.components.entry(d).or_insert_with(|| Span::new(field)).insert(&f.coords())
    }

    /// Transitivity up to `up_to`: every nonzero element of degree `j ≥ 0`
    /// has a nonzero bracket with some vector of `V`. On failure returns the
    /// degree and a kernel element.
    pub fn transitivity(&self, up_to: i64) -> Result<Option<(i64, SuperMultiMap)>> {
        let constants: Vec<SuperMultiMap> = (0..self.space.dim())
            .map(|i| SuperMultiMap::constant(self.space.clone(), SparseVec::unit(i, self.field())))
            .collect();
        for j in 0..=up_to.min(self.cap) {
            let basis = self.basis(j);
            if basis.is_empty() {
                continue;
            }
            let images = basis
                .iter()
                .map(|b| {
                    let mut img: SparseVec<(usize, MapKey)> = SparseVec::new();
                    for (i, c) in constants.iter().enumerate() {
                        let v = w_bracket(b, c)?;
                        for (k, s) in v.coords().iter() {
                            img.add_term((i, k.clone()), s);
                        }
                    }
                    Ok(img)
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(kv) = transitivity_kernel(self.field(), &images) {
                let mut w = SuperMultiMap::zero(self.space.clone(), (j + 1) as usize);
                for (b, c) in basis.iter().zip(&kv) {
                    w = w.add(&b.scaled(c))?;
                }
                return Ok(Some((j, w)));
            }
        }
        Ok(None)
    }

    pub fn is_transitive(&self, up_to: i64) -> Result<bool> {
        Ok(self.transitivity(up_to)?.is_none())
    }

    /// First pair of basis elements whose bracket leaves the subspace
    /// (within the cap), if any.
    pub fn closure_witness(&self) -> Result<Option<(SuperMultiMap, SuperMultiMap)>> {
        let degs: Vec<i64> = self.degrees().collect();
        for (a, &da) in degs.iter().enumerate() {
            for &db in &degs[a..] {
                if da + db > self.cap {
                    continue;
                }
                let ba = self.basis(da);
                let bb = self.basis(db);
                for x in &ba {
                    for y in &bb {
                        let z = w_bracket(x, y)?;
                        if !self.contains(&z) {
                            return Ok(Some((x.clone(), y.clone())));
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Transitivity in one degree of an abstract graded algebra: `images[b]`
/// holds the brackets of basis element `b` with the degree −1 basis, keyed by
/// (vector index, coordinate). Returns coefficients of a nonzero element
/// killing degree −1, if one exists.
pub fn transitivity_kernel<K: Ord + Clone>(field: Field, images: &[SparseVec<(usize, K)>]) -> Option<Vec<Scalar>> {
    kernel(field, images).into_iter().next()
}

/// Text form of an element of `W(V)`: a `degree k` header followed by the
/// map's entries.
pub fn w_to_text(f: &SuperMultiMap) -> String {
    format!("degree {}\n{}", f.degree(), f.to_text())
}

pub fn w_from_text(space: Arc<SuperSpace>, text: &str) -> Result<SuperMultiMap> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty element".into()))?;
    let degree: i64 = header
        .strip_prefix("degree ")
        .and_then(|d| d.trim().parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad degree header `{header}`")))?;
    if degree < -1 {
        return Err(Error::Parse(format!("degree {degree} below -1")));
    }
    let body: Vec<&str> = lines.collect();
    SuperMultiMap::from_text(space, (degree + 1) as usize, &body.join("\n"))
}
