//! Supersymmetric multilinear maps `S^k V -> V` stored on sorted
//! multi-indices, anticommutative maps `Λ^k V -> V`, and the transport
//! between the two across parity reversal.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{sign, Field, Scalar};
use crate::linalg::SparseVec;
use crate::superspace::{Parity, SuperSpace, SuperVector};

/// Coordinates of a multilinear map: (sorted input indices, output index).
pub type MapKey = (Vec<usize>, usize);

/// Sorts `args` into canonical order for the symmetric algebra. Returns the
/// sorted tuple and whether the Koszul sign is negative, or `None` when an
/// odd index repeats (odd elements square to zero in `S(V)`).
pub fn koszul_sort(args: &[usize], parities: &[Parity]) -> Option<(Vec<usize>, bool)> {
    let mut v = args.to_vec();
    let mut neg = false;
    // insertion sort, counting odd-odd transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            if parities[v[j - 1]].is_odd() && parities[v[j]].is_odd() {
                neg = !neg;
            }
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1] && parities[w[0]].is_odd()) {
        return None;
    }
    Some((v, neg))
}

/// Sorting for the exterior algebra: each adjacent swap of `a, b` costs
/// `-(-1)^{p(a)p(b)}`; `None` when an even index repeats.
pub fn anti_sort(args: &[usize], parities: &[Parity]) -> Option<(Vec<usize>, bool)> {
    let mut v = args.to_vec();
    let mut neg = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            let both_odd = parities[v[j - 1]].is_odd() && parities[v[j]].is_odd();
            if !both_odd {
                neg = !neg;
            }
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1] && !parities[w[0]].is_odd()) {
        return None;
    }
    Some((v, neg))
}

/// Parity of `(-1)^N` where `N` counts inversions between odd entries of a
/// sequence of parities taken in the order given by `perm`.
pub fn odd_inversions(perm: &[usize], parities: &[Parity]) -> bool {
    let mut neg = false;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] && parities[perm[a]].is_odd() && parities[perm[b]].is_odd() {
                neg = !neg;
            }
        }
    }
    neg
}

/// All nondecreasing index tuples of length `k` over `0..dim`, skipping
/// repeated indices whose parity is in `no_repeat`.
pub fn sorted_tuples(dim: usize, k: usize, parities: &[Parity], no_repeat: Parity) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, dim: usize, k: usize, par: &[Parity], nr: Parity, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            if let Some(&last) = cur.last() {
                if last == i && par[i] == nr {
                    continue;
                }
            }
            cur.push(i);
            rec(i, dim, k, par, nr, cur, out);
            cur.pop();
        }
    }
    rec(0, dim, k, parities, no_repeat, &mut cur, &mut out);
    out
}

/// Basis multi-indices of `S^k V`.
pub fn symmetric_basis(space: &SuperSpace, k: usize) -> Vec<Vec<usize>> {
    sorted_tuples(space.dim(), k, &space.parities(), Parity::Odd)
}

/// Basis multi-indices of `Λ^k V`.
pub fn exterior_basis(space: &SuperSpace, k: usize) -> Vec<Vec<usize>> {
    sorted_tuples(space.dim(), k, &space.parities(), Parity::Even)
}

/// Every tuple in `0..dim` of length `k`, in lexicographic order.
pub fn all_tuples(dim: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * dim);
        for t in &out {
            for i in 0..dim {
                let mut u = t.clone();
                u.push(i);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// The sign relating commutative and anticommutative products across parity
/// reversal: `(-1)^{p(a_{n-1}) + p(a_{n-3}) + ...}` with positions counted
/// from 1, using parities of the anticommutative side.
pub fn conversion_sign(field: Field, sig: &[Parity]) -> Result<Scalar> {
    let n = sig.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("conversion sign needs n >= 2, got {n}")));
    }
    let mut odd = false;
    for k in 0..=((n - 2) / 2) {
        let pos = n - 1 - 2 * k; // 1-based
        odd ^= sig[pos - 1].is_odd();
    }
    Ok(sign(field, odd))
}

/// An element of `Hom(S^k V, V)`, stored on sorted multi-indices.
#[derive(Clone, PartialEq, Eq)]
pub struct SuperMultiMap {
    space: Arc<SuperSpace>,
    arity: usize,
    table: BTreeMap<Vec<usize>, SparseVec<usize>>,
}

impl SuperMultiMap {
    pub fn zero(space: Arc<SuperSpace>, arity: usize) -> Self {
        SuperMultiMap { space, arity, table: BTreeMap::new() }
    }

    /// A constant (arity 0), i.e. an element of `V`.
    pub fn constant(space: Arc<SuperSpace>, v: SparseVec<usize>) -> Self {
        let mut m = Self::zero(space, 0);
        if !v.is_zero() {
            m.table.insert(Vec::new(), v);
        }
        m
    }

    pub fn identity(space: Arc<SuperSpace>) -> Self {
        let f = space.field();
        let mut m = Self::zero(space.clone(), 1);
        for i in 0..space.dim() {
            m.table.insert(vec![i], SparseVec::unit(i, f));
        }
        m
    }

    /// Builds a map from its coordinates.
    pub fn from_coords(space: Arc<SuperSpace>, arity: usize, coords: &SparseVec<MapKey>) -> Self {
        let mut m = Self::zero(space, arity);
        for ((idx, out), c) in coords.iter() {
            m.table.entry(idx.clone()).or_default().add_term(*out, c);
        }
        m.table.retain(|_, v| !v.is_zero());
        m
    }

    pub fn space(&self) -> &Arc<SuperSpace> {
        &self.space
    }

    pub fn field(&self) -> Field {
        self.space.field()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Degree in `W(V)`: arity minus one.
    pub fn degree(&self) -> i64 {
        self.arity as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn table(&self) -> &BTreeMap<Vec<usize>, SparseVec<usize>> {
        &self.table
    }

    /// Sets the value on the tuple `args` (any order); the stored entry is
    /// normalized by the Koszul sign. Odd repeats are rejected.
    pub fn set(&mut self, args: &[usize], value: SparseVec<usize>) -> Result<()> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: args.len() });
        }
        let pars = self.space.parities();
        let (idx, neg) = koszul_sort(args, &pars)
            .ok_or_else(|| Error::InvalidParameter("odd basis vector repeated in a symmetric argument".into()))?;
        let v = if neg { value.neg() } else { value };
        if v.is_zero() {
            self.table.remove(&idx);
        } else {
            self.table.insert(idx, v);
        }
        Ok(())
    }

    /// Value on basis vectors given by index.
    pub fn eval_indices(&self, args: &[usize]) -> SparseVec<usize> {
        debug_assert_eq!(args.len(), self.arity);
        let pars = self.space.parities();
        match koszul_sort(args, &pars) {
            None => SparseVec::new(),
            Some((idx, neg)) => match self.table.get(&idx) {
                None => SparseVec::new(),
                Some(v) if neg => v.neg(),
                Some(v) => v.clone(),
            },
        }
    }

    /// Value on basis vectors given by label.
    pub fn evaluate(&self, args: &[&str]) -> Result<SuperVector> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: args.len() });
        }
        let idx = args.iter().map(|l| self.space.index_of(l)).collect::<Result<Vec<_>>>()?;
        Ok(SuperVector::from_coords(self.space.clone(), self.eval_indices(&idx)))
    }

    /// Multilinear extension: first argument an arbitrary vector, the rest
    /// basis indices.
    pub fn eval_first_vector(&self, first: &SparseVec<usize>, rest: &[usize]) -> SparseVec<usize> {
        let mut acc = SparseVec::new();
        let mut args = Vec::with_capacity(rest.len() + 1);
        for (i, c) in first.iter() {
            args.clear();
            args.push(*i);
            args.extend_from_slice(rest);
            acc.add_scaled(&self.eval_indices(&args), c);
        }
        acc
    }

    /// Parity as a map, `None` if zero-free entries disagree.
    pub fn parity(&self) -> Option<Parity> {
        let mut seen = None;
        for (idx, v) in &self.table {
            let pin = Parity::sum(idx.iter().map(|&i| self.space.parity(i)));
            for (o, _) in v.iter() {
                let p = pin + self.space.parity(*o);
                match seen {
                    None => seen = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
        Some(seen.unwrap_or(Parity::Even))
    }

    /// Even and odd components.
    pub fn homogeneous_parts(&self) -> [(Parity, SuperMultiMap); 2] {
        let mut even = Self::zero(self.space.clone(), self.arity);
        let mut odd = Self::zero(self.space.clone(), self.arity);
        for (idx, v) in &self.table {
            let pin = Parity::sum(idx.iter().map(|&i| self.space.parity(i)));
            for (o, c) in v.iter() {
                let target = if (pin + self.space.parity(*o)).is_odd() { &mut odd } else { &mut even };
                target.table.entry(idx.clone()).or_default().add_term(*o, c);
            }
        }
        [(Parity::Even, even), (Parity::Odd, odd)]
    }

    pub fn coords(&self) -> SparseVec<MapKey> {
        let mut out = SparseVec::new();
        for (idx, v) in &self.table {
            for (o, c) in v.iter() {
                out.add_term((idx.clone(), *o), c);
            }
        }
        out
    }

    pub fn add(&self, other: &SuperMultiMap) -> Result<SuperMultiMap> {
        self.check_compatible(other)?;
        let mut r = self.clone();
        for (idx, v) in &other.table {
            let e = r.table.entry(idx.clone()).or_default();
            e.add_scaled(v, &Scalar::one(self.field()));
        }
        r.table.retain(|_, v| !v.is_zero());
        Ok(r)
    }

    pub fn scaled(&self, c: &Scalar) -> SuperMultiMap {
        let mut r = Self::zero(self.space.clone(), self.arity);
        if c.is_zero() {
            return r;
        }
        for (idx, v) in &self.table {
            r.table.insert(idx.clone(), v.scaled(c));
        }
        r
    }

    pub fn check_compatible(&self, other: &SuperMultiMap) -> Result<()> {
        if !Arc::ptr_eq(&self.space, &other.space) && *self.space != *other.space {
            return Err(Error::Incompatible("maps live on different superspaces".into()));
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: other.arity });
        }
        Ok(())
    }

    /// Verifies that the stored table is consistent with supersymmetry on
    /// every permutation of every tuple of the given length (test aid).
    pub fn parity_consistent(&self, declared: Parity) -> bool {
        self.table.iter().all(|(idx, v)| {
            let pin = Parity::sum(idx.iter().map(|&i| self.space.parity(i)));
            v.keys().all(|o| pin + self.space.parity(*o) == declared)
        })
    }

    /// One line per entry: `a,b,c -> 1*d + -2*e`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (idx, v) in &self.table {
            let args: Vec<&str> = idx.iter().map(|&i| self.space.label(i)).collect();
            s.push_str(&args.join(","));
            s.push_str(" -> ");
            s.push_str(&format_vec(&self.space, v));
            s.push('\n');
        }
        s
    }

    pub fn from_text(space: Arc<SuperSpace>, arity: usize, text: &str) -> Result<Self> {
        let mut m = Self::zero(space.clone(), arity);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("missing `->` in `{line}`")))?;
            let args: Vec<usize> = lhs
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|l| space.index_of(l))
                .collect::<Result<_>>()?;
            let value = parse_vec(&space, rhs)?;
            let mut cur = m.eval_indices(&args);
            if args.len() != arity {
                return Err(Error::ArityMismatch { expected: arity, found: args.len() });
            }
            cur.add_scaled(&value, &Scalar::one(space.field()));
            m.set(&args, cur)?;
        }
        Ok(m)
    }
}

impl fmt::Debug for SuperMultiMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperMultiMap(arity {}) {{\n{}}}", self.arity, self.to_text())
    }
}

pub(crate) fn format_vec(space: &SuperSpace, v: &SparseVec<usize>) -> String {
    if v.is_zero() {
        return "0".into();
    }
    v.iter().map(|(i, c)| format!("{}*{}", c, space.label(*i))).collect::<Vec<_>>().join(" + ")
}

pub(crate) fn parse_vec(space: &SuperSpace, s: &str) -> Result<SparseVec<usize>> {
    let mut v = SparseVec::new();
    let t = s.trim();
    if t == "0" || t.is_empty() {
        return Ok(v);
    }
    for term in t.split(" + ") {
        let term = term.trim();
        let (c, l) = match term.split_once('*') {
            Some((c, l)) => (Scalar::parse(space.field(), c)?, l.trim()),
            None => match term.strip_prefix('-') {
                Some(l) => (space.field().int(-1), l.trim()),
                None => (space.field().one(), term),
            },
        };
        v.add_term(space.index_of(l)?, &c);
    }
    Ok(v)
}

/// An element of `Hom(Λ^k V, V)`: an anticommutative `k`-ary product stored
/// on sorted tuples (even indices never repeat).
#[derive(Clone, PartialEq, Eq)]
pub struct AntiMultiMap {
    space: Arc<SuperSpace>,
    arity: usize,
    table: BTreeMap<Vec<usize>, SparseVec<usize>>,
}

impl AntiMultiMap {
    pub fn zero(space: Arc<SuperSpace>, arity: usize) -> Self {
        AntiMultiMap { space, arity, table: BTreeMap::new() }
    }

    pub fn space(&self) -> &Arc<SuperSpace> {
        &self.space
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &BTreeMap<Vec<usize>, SparseVec<usize>> {
        &self.table
    }

    pub fn set(&mut self, args: &[usize], value: SparseVec<usize>) -> Result<()> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: args.len() });
        }
        let pars = self.space.parities();
        let (idx, neg) = anti_sort(args, &pars)
            .ok_or_else(|| Error::InvalidParameter("even basis vector repeated in an alternating argument".into()))?;
        let v = if neg { value.neg() } else { value };
        if v.is_zero() {
            self.table.remove(&idx);
        } else {
            self.table.insert(idx, v);
        }
        Ok(())
    }

    pub fn eval_indices(&self, args: &[usize]) -> SparseVec<usize> {
        let pars = self.space.parities();
        match anti_sort(args, &pars) {
            None => SparseVec::new(),
            Some((idx, neg)) => match self.table.get(&idx) {
                None => SparseVec::new(),
                Some(v) if neg => v.neg(),
                Some(v) => v.clone(),
            },
        }
    }

    /// Parity of the product; `None` if the table mixes parities.
    pub fn parity(&self) -> Option<Parity> {
        let mut seen = None;
        for (idx, v) in &self.table {
            let pin = Parity::sum(idx.iter().map(|&i| self.space.parity(i)));
            for (o, _) in v.iter() {
                let p = pin + self.space.parity(*o);
                match seen {
                    None => seen = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
        Some(seen.unwrap_or(Parity::Even))
    }
}

impl fmt::Debug for AntiMultiMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "AntiMultiMap(arity {}) {{", self.arity)?;
        for (idx, v) in &self.table {
            writeln!(f, "  {:?} -> {}", idx, format_vec(&self.space, v))?;
        }
        write!(f, "}}")
    }
}

/// Transports an anticommutative `n`-ary product on `g` (given by its values
/// on basis tuples) to the commutative product on `Πg`. Anticommutativity is
/// checked on every tuple; the first violation is reported.
pub fn anticomm_to_comm<F>(g: &Arc<SuperSpace>, n: usize, bracket: F) -> Result<SuperMultiMap>
where
    F: Fn(&[usize]) -> SparseVec<usize>,
{
    let pars = g.parities();
    let pi = Arc::new(g.reverse_parity());
    let mut out = SuperMultiMap::zero(pi.clone(), n);
    let mut sorted_values: BTreeMap<Vec<usize>, SparseVec<usize>> = BTreeMap::new();
    for t in all_tuples(g.dim(), n) {
        let v = bracket(&t);
        match anti_sort(&t, &pars) {
            None => {
                if !v.is_zero() {
                    return Err(Error::NotAnticommutative(tuple_label(g, &t)));
                }
            }
            Some((idx, neg)) => {
                let normalized = if neg { v.neg() } else { v };
                match sorted_values.get(&idx) {
                    Some(prev) if *prev != normalized => {
                        return Err(Error::NotAnticommutative(tuple_label(g, &t)));
                    }
                    Some(_) => {}
                    None => {
                        sorted_values.insert(idx, normalized);
                    }
                }
            }
        }
    }
    for (idx, v) in sorted_values {
        if v.is_zero() || n < 2 {
            if n < 2 && !v.is_zero() {
                out.set(&idx, v)?;
            }
            continue;
        }
        let sig: Vec<Parity> = idx.iter().map(|&i| pars[i]).collect();
        let s = conversion_sign(g.field(), &sig)?;
        out.set(&idx, v.scaled(&s))?;
    }
    Ok(out)
}

/// Inverse transport: from a commutative product on `V` to the
/// anticommutative product on `ΠV`.
pub fn comm_to_anticomm(mu: &SuperMultiMap) -> Result<AntiMultiMap> {
    let n = mu.arity();
    let g = Arc::new(mu.space().reverse_parity());
    let gp = g.parities();
    let mut out = AntiMultiMap::zero(g, n);
    for (idx, v) in mu.table() {
        // sorted in V's symmetric order is also a valid exterior index on ΠV
        let sig: Vec<Parity> = idx.iter().map(|&i| gp[i]).collect();
        let s = if n >= 2 { conversion_sign(mu.field(), &sig)? } else { mu.field().one() };
        out.set(idx, v.scaled(&s))?;
    }
    Ok(out)
}

fn tuple_label(space: &SuperSpace, t: &[usize]) -> String {
    let parts: Vec<&str> = t.iter().map(|&i| space.label(i)).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn conversion_sign_examples() {
        use Parity::*;
        assert_eq!(conversion_sign(q(), &[Even, Even, Even]).unwrap(), q().one());
        assert_eq!(conversion_sign(q(), &[Odd, Odd, Odd]).unwrap(), q().int(-1));
        assert_eq!(conversion_sign(q(), &[Odd, Odd, Odd, Odd]).unwrap(), q().one());
        assert!(conversion_sign(q(), &[Odd]).is_err());
    }

    #[test]
    fn conversion_sign_matches_parity_cases() {
        // even n: positions 1,3,..,n-1; odd n: positions 2,4,..,n-1
        for n in 2..8usize {
            for mask in 0u32..(1 << n) {
                let sig: Vec<Parity> = (0..n).map(|i| Parity::from_bit(mask >> i & 1 == 1)).collect();
                let positions: Vec<usize> = if n % 2 == 0 { (1..n).step_by(2).collect() } else { (2..n).step_by(2).collect() };
                let odd = positions.iter().fold(false, |a, &p| a ^ sig[p - 1].is_odd());
                assert_eq!(conversion_sign(q(), &sig).unwrap(), sign(q(), odd));
            }
        }
    }

    #[test]
    fn evaluate_examples() {
        let v = Arc::new(SuperSpace::uniform(q(), "e", 3, Parity::Odd));
        let id = SuperMultiMap::identity(Arc::new(SuperSpace::standard(q(), 1, 0)));
        assert_eq!(id.evaluate(&["e1"]).unwrap().coords(), &SparseVec::unit(0, q()));
        let mut f = SuperMultiMap::zero(v.clone(), 2);
        f.set(&[0, 1], SparseVec::unit(2, q())).unwrap();
        assert_eq!(f.evaluate(&["e2", "e1"]).unwrap().coords(), &SparseVec::unit(2, q()).neg());
        assert!(f.evaluate(&["e1", "e1"]).unwrap().is_zero());
        assert!(f.evaluate(&["e1"]).is_err());
        assert!(f.evaluate(&["e1", "zz"]).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let v = Arc::new(SuperSpace::standard(q(), 1, 2));
        let mut f = SuperMultiMap::zero(v.clone(), 2);
        f.set(&[0, 0], SparseVec::from_entries([(0, q().int(2)), (1, q().ratio(-1, 3).unwrap())])).unwrap();
        f.set(&[2, 1], SparseVec::unit(0, q())).unwrap();
        let t = f.to_text();
        assert_eq!(SuperMultiMap::from_text(v, 2, &t).unwrap(), f);
    }

    /// Brute-force Koszul sign of a permutation: product of the signs of
    /// adjacent transpositions in a bubble sort.
    fn brute_sign(perm: &[usize], pars: &[Parity]) -> bool {
        let mut v = perm.to_vec();
        let mut neg = false;
        loop {
            let mut swapped = false;
            for i in 0..v.len().saturating_sub(1) {
                if v[i] > v[i + 1] {
                    if pars[v[i]].is_odd() && pars[v[i + 1]].is_odd() {
                        neg = !neg;
                    }
                    v.swap(i, i + 1);
                    swapped = true;
                }
            }
            if !swapped {
                return neg;
            }
        }
    }

    proptest! {
        #[test]
        fn odd_inversions_match_bubble_sort(perm in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle(), mask in 0u8..64) {
            let pars: Vec<Parity> = (0..6).map(|i| Parity::from_bit(mask >> i & 1 == 1)).collect();
            prop_assert_eq!(odd_inversions(&perm, &pars), brute_sign(&perm, &pars));
        }

        #[test]
        fn supersymmetry_on_permutations(perm in Just((0..4usize).collect::<Vec<_>>()).prop_shuffle(), mask in 0u8..16, seed in 0i64..100) {
            let pars: Vec<Parity> = (0..4).map(|i| Parity::from_bit(mask >> i & 1 == 1)).collect();
            let space = Arc::new(SuperSpace::new(q(), (0..4).map(|i| (format!("v{i}"), pars[i])).collect()).unwrap());
            let mut f = SuperMultiMap::zero(space.clone(), 4);
            f.set(&[0, 1, 2, 3], SparseVec::unit((seed % 4) as usize, q()).scaled(&q().int(seed + 1))).unwrap();
            let base = f.eval_indices(&[0, 1, 2, 3]);
            let permuted: Vec<usize> = perm.clone();
            let val = f.eval_indices(&permuted);
            let expected = if odd_inversions(&permuted, &pars) { base.neg() } else { base };
            prop_assert_eq!(val, expected);
        }

        #[test]
        fn adjacent_swap_identity(mask in 0u32..256, n in 2usize..8, i in 0usize..7) {
            prop_assume!(i + 1 < n);
            let sig: Vec<Parity> = (0..n).map(|k| Parity::from_bit(mask >> k & 1 == 1)).collect();
            let mut swapped = sig.clone();
            swapped.swap(i, i + 1);
            let prod = &conversion_sign(q(), &sig).unwrap() * &conversion_sign(q(), &swapped).unwrap();
            prop_assert_eq!(prod, sign(q(), sig[i].is_odd() ^ sig[i + 1].is_odd()));
        }
    }
}
