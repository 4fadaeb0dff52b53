//! The graded Lie superalgebra generated by `V` and `μ̄` inside `W(V)`, and
//! the structural checks run on it.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{SparseMatrix, SparseVec, Span};
use crate::multilinear::{all_tuples, SuperMultiMap};
use crate::superspace::SuperSpace;
use crate::universal_w::{box_product, w_bracket, w_to_text, GradedSubalgebra};

/// Degree −1 element for basis vector `i`.
pub fn constant(space: &Arc<SuperSpace>, i: usize) -> SuperMultiMap {
    SuperMultiMap::constant(space.clone(), SparseVec::unit(i, space.field()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationTrace {
    pub cap: i64,
    pub rounds: usize,
    pub dims_per_round: Vec<BTreeMap<i64, usize>>,
}

/// Smallest subspace of `W(V)` in degrees `≤ cap` containing `V` and `μ̄`
/// and stable under `ad V` and `ad μ̄`. Words that leave the cap are not
/// followed.
pub fn generate_lie(mu: &SuperMultiMap, cap: i64) -> Result<(GradedSubalgebra, GenerationTrace)> {
    let space = mu.space().clone();
    if mu.degree() > cap {
        return Err(Error::InvalidParameter(format!("cap {cap} is below the degree {} of the seed", mu.degree())));
    }
    let mut gens: Vec<SuperMultiMap> = (0..space.dim()).map(|i| constant(&space, i)).collect();
    if !mu.is_zero() {
        gens.push(mu.clone());
    }
    let mut alg = GradedSubalgebra::new(space, cap);
    let mut frontier = Vec::new();
    for g in &gens {
        if alg.insert(g)? {
            frontier.push(g.clone());
        }
    }
    let mut trace = GenerationTrace { cap, rounds: 0, dims_per_round: vec![alg.dims()] };
    while !frontier.is_empty() {
        let pairs: Vec<(usize, usize)> =
            (0..frontier.len()).flat_map(|x| (0..gens.len()).map(move |g| (x, g))).collect();
        let products: Vec<SuperMultiMap> = pairs
            .par_iter()
            .filter(|&&(x, g)| frontier[x].degree() + gens[g].degree() <= cap)
            .map(|&(x, g)| w_bracket(&gens[g], &frontier[x]))
            .collect::<Result<_>>()?;
        let mut next = Vec::new();
        for z in products {
            if alg.insert(&z)? {
                next.push(z);
            }
        }
        frontier = next;
        trace.rounds += 1;
        trace.dims_per_round.push(alg.dims());
    }
    Ok((alg, trace))
}

/// Outcome of the absolute irreducibility test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Irreducibility {
    Irreducible { envelope_dim: usize },
    Reducible { envelope_dim: usize, invariant_subspace: Vec<String> },
    NotDecided { envelope_dim: usize, reason: String },
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible { .. })
    }

    pub fn envelope_dim(&self) -> usize {
        match self {
            Irreducibility::Irreducible { envelope_dim }
            | Irreducibility::Reducible { envelope_dim, .. }
            | Irreducibility::NotDecided { envelope_dim, .. } => *envelope_dim,
        }
    }
}

fn mat_key(m: &SparseMatrix) -> SparseVec<(usize, usize)> {
    let mut v = SparseVec::new();
    for i in 0..m.nrows() {
        for (j, c) in m.row(i).iter() {
            v.add_term((i, *j), c);
        }
    }
    v
}

fn apply(m: &SparseMatrix, v: &SparseVec<usize>) -> SparseVec<usize> {
    let mut out = SparseVec::new();
    for i in 0..m.nrows() {
        let mut acc = m.field().zero();
        for (j, c) in m.row(i).iter() {
            if let Some(x) = v.get(j) {
                acc += &(c * x);
            }
        }
        out.add_term(i, &acc);
    }
    out
}

/// Dimension of the unital associative algebra generated by `mats`.
pub fn envelope_dim(field: Field, dim: usize, mats: &[SparseMatrix]) -> Result<usize> {
    let id = SparseMatrix::identity(field, dim);
    let mut span: Span<(usize, usize)> = Span::new(field);
    span.insert(&mat_key(&id))?;
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for m in &frontier {
            for g in mats {
                let p = g.mul(m)?;
                if span.insert(&mat_key(&p))? {
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    Ok(span.dim())
}

/// Burnside test for the module given by `mats` on `F^dim`; on failure,
/// spins basis vectors looking for a proper invariant subspace.
pub fn burnside(field: Field, labels: &[String], mats: &[SparseMatrix]) -> Result<Irreducibility> {
    let dim = labels.len();
    let env = envelope_dim(field, dim, mats)?;
    if env == dim * dim {
        return Ok(Irreducibility::Irreducible { envelope_dim: env });
    }
    for i in 0..dim {
        let mut span: Span<usize> = Span::new(field);
        let start = SparseVec::unit(i, field);
        span.insert(&start)?;
        let mut frontier = vec![start];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for v in &frontier {
                for g in mats {
                    let w = apply(g, v);
                    if span.insert(&w)? {
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        if span.dim() < dim {
            let basis = span.basis().iter().map(|v| label_vec(v, labels)).collect();
            return Ok(Irreducibility::Reducible { envelope_dim: env, invariant_subspace: basis });
        }
    }
    Ok(Irreducibility::NotDecided {
        envelope_dim: env,
        reason: format!("envelope dimension {env} < {} and every basis vector generates the module", dim * dim),
    })
}

fn label_vec(v: &SparseVec<usize>, labels: &[String]) -> String {
    let parts: Vec<String> = v.iter().map(|(k, c)| format!("{c}*{}", labels[*k])).collect();
    parts.join(" + ")
}

/// Matrix of a degree-0 element acting on `V`.
pub fn action_matrix(b: &SuperMultiMap) -> SparseMatrix {
    let dim = b.space().dim();
    let mut m = SparseMatrix::zeros(b.field(), dim, dim);
    for i in 0..dim {
        for (k, c) in b.eval_indices(&[i]).iter() {
            m.set(*k, i, c.clone());
        }
    }
    m
}

/// Irreducibility of `L_{−1}` under `L_0`.
pub fn check_irreducible(a: &GradedSubalgebra) -> Result<Irreducibility> {
    let mats: Vec<SparseMatrix> = a.basis(0).iter().map(action_matrix).collect();
    let labels: Vec<String> = (0..a.space().dim()).map(|i| a.space().label(i).to_string()).collect();
    burnside(a.field(), &labels, &mats)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissiblePairReport {
    pub transitive: bool,
    pub transitivity_witness: Option<String>,
    pub generated_by_v_and_mu: bool,
    pub mu_centralizes_l0: bool,
    pub l3_witness: Option<String>,
    pub irreducible: Irreducibility,
    pub graded_dims: BTreeMap<i64, usize>,
    pub top_is_line: bool,
}

impl AdmissiblePairReport {
    pub fn admissible(&self) -> bool {
        self.transitive && self.generated_by_v_and_mu && self.mu_centralizes_l0
    }
}

/// Transitivity, `[μ, L_0] = 0`, irreducibility and the top component of an
/// algebra produced by [`generate_lie`].
pub fn check_admissible(a: &GradedSubalgebra, mu: &SuperMultiMap) -> Result<AdmissiblePairReport> {
    let transitivity = a.transitivity(a.cap())?;
    let l0 = a.basis(0);
    let l3 = l0
        .par_iter()
        .map(|b| w_bracket(mu, b).map(|z| (!z.is_zero()).then(|| (b.clone(), z))))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .next();
    let top = mu.degree();
    let top_is_line = !mu.is_zero() && a.dim(top) == 1 && a.contains(mu);
    Ok(AdmissiblePairReport {
        transitive: transitivity.is_none(),
        transitivity_witness: transitivity.map(|(j, w)| format!("degree {j}: {}", w.to_text())),
        generated_by_v_and_mu: true,
        mu_centralizes_l0: l3.is_none(),
        l3_witness: l3.map(|(b, z)| format!("b = {} ; [mu, b] = {}", b.to_text(), z.to_text())),
        irreducible: check_irreducible(a)?,
        graded_dims: a.dims(),
        top_is_line,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem02Report {
    pub n: usize,
    pub nonzero_above: Vec<i64>,
    pub top_is_line: bool,
    pub powers_mismatch: Vec<i64>,
    pub pairing_witness: Option<String>,
    pub ideal_witness: Option<String>,
}

impl Theorem02Report {
    pub fn passed(&self) -> bool {
        self.nonzero_above.is_empty()
            && self.top_is_line
            && self.powers_mismatch.is_empty()
            && self.pairing_witness.is_none()
            && self.ideal_witness.is_none()
    }
}

/// Spans of `(ad V)^k μ̄` for `k = 0..=max_k`, as a list indexed by `k`.
pub fn ad_powers(mu: &SuperMultiMap, max_k: usize) -> Result<Vec<Vec<SuperMultiMap>>> {
    let space = mu.space().clone();
    let field = space.field();
    let mut out = vec![vec![mu.clone()]];
    for _ in 0..max_k {
        let prev = out.last().expect("nonempty");
        let mut span = Span::new(field);
        let mut next = Vec::new();
        for p in prev {
            for i in 0..space.dim() {
                let z = w_bracket(&constant(&space, i), p)?;
                if span.insert(&z.coords())? {
                    next.push(z);
                }
            }
        }
        out.push(next);
    }
    Ok(out)
}

/// The structure statements for an admissible pair in characteristic 0:
/// nothing above degree `n−1`, `L_{n−1} = Fμ̄`,
/// `L_j = (ad L_{−1})^{n−j−1} μ̄`, `[L_j, L_{n−1−j}] = 0`, and
/// `⊕_{j≤n−2} L_j` is an ideal.
pub fn check_theorem_0_2(a: &GradedSubalgebra, mu: &SuperMultiMap) -> Result<Theorem02Report> {
    let n = mu.arity();
    let top = n as i64 - 1;
    if a.cap() < n as i64 + 1 {
        return Err(Error::InvalidParameter(format!("cap {} must be at least n + 1 = {}", a.cap(), n + 1)));
    }
    let nonzero_above: Vec<i64> = a.degrees().filter(|&d| d > top).collect();
    let top_is_line = !mu.is_zero() && a.dim(top) == 1 && a.contains(mu);

    let powers = ad_powers(mu, n)?;
    let mut powers_mismatch = Vec::new();
    for j in 0..=top {
        let k = (top - j) as usize;
        let mut span = Span::new(a.field());
        for p in &powers[k] {
            span.insert(&p.coords())?;
        }
        let same = a.component(j).is_some_and(|c| span.is_subspace_of(c) && c.is_subspace_of(&span))
            || (a.dim(j) == 0 && span.dim() == 0);
        if !same {
            powers_mismatch.push(j);
        }
    }

    let mut pairing_witness = None;
    'outer: for j in 0..=top {
        let left = a.basis(j);
        let right = a.basis(top - j);
        for x in &left {
            for y in &right {
                let z = w_bracket(x, y)?;
                if !z.is_zero() {
                    pairing_witness = Some(format!("[{} , {}] = {}", w_to_text(x), w_to_text(y), w_to_text(&z)));
                    break 'outer;
                }
            }
        }
    }

    let all: Vec<SuperMultiMap> = a.degrees().flat_map(|d| a.basis(d)).collect();
    let small: Vec<SuperMultiMap> = a.degrees().filter(|&d| d < top).flat_map(|d| a.basis(d)).collect();
    let pairs: Vec<(usize, usize)> = (0..all.len()).flat_map(|x| (0..small.len()).map(move |y| (x, y))).collect();
    let ideal_witness = pairs
        .par_iter()
        .map(|&(x, y)| {
            let z = w_bracket(&all[x], &small[y])?;
            let inside = z.is_zero() || (z.degree() < top && a.contains(&z));
            Ok((!inside).then(|| format!("[{} , {}] leaves the ideal", w_to_text(&all[x]), w_to_text(&small[y]))))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .next();

    Ok(Theorem02Report { n, nonzero_above, top_is_line, powers_mismatch, pairing_witness, ideal_witness })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma31Row {
    pub j: usize,
    pub tuples: usize,
    pub bracket_zero: bool,
    /// The stronger `μ̄ □ D = 0` form is asserted for `j ≥ 1` only.
    pub box_zero: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma31Report {
    pub rows: Vec<Lemma31Row>,
    pub master_equation: bool,
    pub witness: Option<String>,
}

impl Lemma31Report {
    pub fn passed(&self) -> bool {
        self.master_equation
            && self.witness.is_none()
            && self.rows.iter().all(|r| r.bracket_zero && r.box_zero.unwrap_or(true))
    }
}

/// For `j = 0..n−1` and every ordered tuple `x_1..x_{n−j−1}` of basis
/// vectors: `[D, μ̄] = 0` with `D = [x_1,[…,[x_{n−j−1}, μ̄]…]]`, and
/// `μ̄ □ D = 0` when `j ≥ 1`. The case `j = n−1` is `[μ̄, μ̄] = 0`.
pub fn check_lemma_3_1(mu: &SuperMultiMap) -> Result<Lemma31Report> {
    let space = mu.space().clone();
    let n = mu.arity();
    let consts: Vec<SuperMultiMap> = (0..space.dim()).map(|i| constant(&space, i)).collect();
    let mut rows = Vec::new();
    let mut witness = None;
    for j in 0..n {
        let k = n - j - 1;
        let tuples = all_tuples(space.dim(), k);
        let results = tuples
            .par_iter()
            .map(|t| {
                let mut d = mu.clone();
                for &x in t.iter().rev() {
                    d = w_bracket(&consts[x], &d)?;
                }
                let br = w_bracket(&d, mu)?;
                let bx = if j >= 1 { Some(box_product(mu, &d)?) } else { None };
                Ok((t.clone(), br, bx))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut bracket_zero = true;
        let mut box_zero = (j >= 1).then_some(true);
        for (t, br, bx) in results {
            let labels: Vec<&str> = t.iter().map(|&i| space.label(i)).collect();
            if !br.is_zero() {
                bracket_zero = false;
                witness.get_or_insert_with(|| format!("j = {j}, x = ({}): [D, mu] = {}", labels.join(", "), br.to_text()));
            }
            if let Some(b) = bx {
                if !b.is_zero() {
                    box_zero = Some(false);
                    witness.get_or_insert_with(|| format!("j = {j}, x = ({}): mu box D = {}", labels.join(", "), b.to_text()));
                }
            }
        }
        rows.push(Lemma31Row { j, tuples: tuples.len(), bracket_zero, box_zero });
    }
    let master_equation = w_bracket(mu, mu)?.is_zero();
    Ok(Lemma31Report { rows, master_equation, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::on;
    use crate::field::Field;
    use crate::multilinear::comm_to_anticomm;
    use crate::nlie::{is_derivation, FiniteAlgebra, NAryAlgebra};
    use crate::superspace::Parity;

    const Q: Field = Field::Rationals;

    fn o3_mu() -> (FiniteAlgebra, SuperMultiMap) {
        let a = on(Q, 3).unwrap();
        let mu = a.mu_bar().unwrap();
        (a, mu)
    }

    #[test]
    fn o3_generation_matches_grassmann_count() {
        let (_, mu) = o3_mu();
        let (l, trace) = generate_lie(&mu, 4).unwrap();
        let expect: BTreeMap<i64, usize> = [(-1, 4), (0, 6), (1, 4), (2, 1)].into_iter().collect();
        assert_eq!(l.dims(), expect);
        assert!(trace.rounds <= 3 + 2);
        for w in trace.dims_per_round.windows(2) {
            for (d, n) in &w[0] {
                assert!(w[1].get(d).copied().unwrap_or(0) >= *n);
            }
        }
        assert!(l.closure_witness().unwrap().is_none());
    }

    #[test]
    fn abelian_seed_gives_only_v() {
        let v = Arc::new(SuperSpace::standard(Q, 0, 3));
        let mu = SuperMultiMap::zero(v, 3);
        let (l, _) = generate_lie(&mu, 3).unwrap();
        assert_eq!(l.dims(), [(-1, 3)].into_iter().collect());
        let rep = check_admissible(&l, &mu).unwrap();
        assert!(rep.mu_centralizes_l0);
        assert!(!rep.top_is_line);
        assert!(matches!(rep.irreducible, Irreducibility::Reducible { .. }));
        assert!(generate_lie(&mu, 1).is_err());
    }

    #[test]
    fn lie_bracket_seed() {
        // sl2: [h,e] = 2e, [h,f] = −2f, [e,f] = h
        let g = Arc::new(SuperSpace::standard(Q, 3, 0));
        let alg = FiniteAlgebra::from_fn(g, 2, Parity::Even, |t| {
            let v = |i: usize, c: i64| SparseVec::unit(i, Q).scaled(&Q.int(c));
            match (t[0], t[1]) {
                (0, 1) => v(1, 2),
                (1, 0) => v(1, -2),
                (0, 2) => v(2, -2),
                (2, 0) => v(2, 2),
                (1, 2) => v(0, 1),
                (2, 1) => v(0, -1),
                _ => SparseVec::new(),
            }
        })
        .unwrap();
        let mu = alg.mu_bar().unwrap();
        let (l, _) = generate_lie(&mu, 3).unwrap();
        assert_eq!(l.dims(), [(-1, 3), (0, 3), (1, 1)].into_iter().collect());
        assert!(check_theorem_0_2(&l, &mu).unwrap().passed());
    }

    #[test]
    fn o3_admissible_and_irreducible() {
        let (_, mu) = o3_mu();
        let (l, _) = generate_lie(&mu, 4).unwrap();
        let rep = check_admissible(&l, &mu).unwrap();
        assert!(rep.admissible(), "{rep:?}");
        assert!(rep.top_is_line);
        assert_eq!(rep.irreducible, Irreducibility::Irreducible { envelope_dim: 16 });
    }

    #[test]
    fn theorem_0_2_on_o3_and_o4() {
        for n in [3, 4] {
            let mu = on(Q, n).unwrap().mu_bar().unwrap();
            let (l, _) = generate_lie(&mu, n as i64 + 1).unwrap();
            let rep = check_theorem_0_2(&l, &mu).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn lemma_3_1_on_o3_and_mutation() {
        let (a, mu) = o3_mu();
        let rep = check_lemma_3_1(&mu).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.rows.iter().map(|r| r.tuples).collect::<Vec<_>>(), vec![16, 4, 1]);
        let mut t = a.table().clone();
        t.set(&[0, 1, 2], SparseVec::unit(3, Q).add(&SparseVec::unit(0, Q))).unwrap();
        let bad = FiniteAlgebra::new(t, Parity::Even).unwrap().mu_bar().unwrap();
        let rep = check_lemma_3_1(&bad).unwrap();
        assert!(!rep.passed());
        assert!(rep.witness.is_some());
    }

    #[test]
    fn corrupted_bracket_breaks_l3() {
        let a = on(Q, 3).unwrap();
        let mut t = a.table().clone();
        t.set(&[0, 1, 2], SparseVec::unit(3, Q).add(&SparseVec::unit(0, Q))).unwrap();
        let mu = FiniteAlgebra::new(t, Parity::Even).unwrap().mu_bar().unwrap();
        let (l, _) = generate_lie(&mu, 3).unwrap();
        let rep = check_admissible(&l, &mu).unwrap();
        assert!(!rep.mu_centralizes_l0);
        assert!(rep.l3_witness.is_some());
    }

    #[test]
    fn reducible_direct_sum() {
        let (_, mu) = o3_mu();
        let (l, _) = generate_lie(&mu, 3).unwrap();
        let mats: Vec<SparseMatrix> = l
            .basis(0)
            .iter()
            .map(|b| {
                let m = action_matrix(b);
                let mut d = SparseMatrix::zeros(Q, 8, 8);
                for i in 0..4 {
                    for j in 0..4 {
                        d.set(i, j, m.get(i, j));
                        d.set(i + 4, j + 4, m.get(i, j));
                    }
                }
                d
            })
            .collect();
        let labels: Vec<String> = (1..=8).map(|i| format!("v{i}")).collect();
        let r = burnside(Q, &labels, &mats).unwrap();
        assert!(matches!(r, Irreducibility::Reducible { ref invariant_subspace, .. } if invariant_subspace.len() == 4));
    }

    #[test]
    fn degree_zero_elements_are_derivations_iff_they_commute_with_mu() {
        let (a, mu) = o3_mu();
        let (l, _) = generate_lie(&mu, 3).unwrap();
        let sample = a.default_sample();
        let check = |m: &SparseMatrix| {
            let as_map = {
                let mut f = SuperMultiMap::zero(mu.space().clone(), 1);
                for i in 0..4 {
                    let col: SparseVec<usize> = SparseVec::from_entries((0..4).map(|k| (k, m.get(k, i))));
                    f.set(&[i], col).unwrap();
                }
                f
            };
            let commutes = w_bracket(&mu, &as_map).unwrap().is_zero();
            let der = is_derivation(&a, |x| crate::nlie::apply_matrix(m, x), Parity::Even, &sample).is_none();
            (commutes, der)
        };
        for b in l.basis(0) {
            assert_eq!(check(&action_matrix(&b)), (true, true));
        }
        let two = SparseMatrix::identity(Q, 4);
        assert_eq!(check(&two), (false, false));
        let mut m = SparseMatrix::zeros(Q, 4, 4);
        m.set(0, 1, Q.one());
        assert_eq!(check(&m), (false, false));
        assert_eq!(a.arity(), 3);
    }

    #[test]
    fn transport_roundtrip_recovers_bracket() {
        let (a, mu) = o3_mu();
        let back = comm_to_anticomm(&mu).unwrap();
        assert_eq!(back.table(), a.table().table());
    }
}
