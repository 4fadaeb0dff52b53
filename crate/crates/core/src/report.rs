//! Verification suites and their machine-readable reports.
//!
//! JSON output is deterministic: checks are sorted by name, maps are
//! ordered, and no timings are recorded.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::catalog::{BracketKind, DeterminantAlgebra, TaggedAlgebra};
use crate::charp::{charp_report, CharPSeed};
use crate::derivations::derivation_report;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::liegen::{check_admissible, check_lemma_3_1, check_theorem_0_2, generate_lie, Irreducibility};
use crate::linalg::SparseVec;
use crate::nlie::{check_anticommutative, check_fj, FiniteAlgebra, FjForm, NAryAlgebra, Sample};
use crate::superalgebras::{standard_decompositions, verify_theorem_4_1_pair, Pair};
use crate::superspace::Parity;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotDecided,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotDecided => "not_decided",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub details: Value,
}

impl Check {
    pub fn new(name: &str, status: Status, witness: Option<String>, details: Value) -> Self {
        Check { name: name.to_string(), status, witness: witness.map(|w| one_line(&w)), details }
    }
}

fn one_line(s: &str) -> String {
    s.lines().map(str::trim).filter(|l| !l.is_empty()).collect::<Vec<_>>().join(" | ")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, config: BTreeMap<String, String>) -> Self {
        Report {
            tool: "nlie".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// One line per check plus an overall verdict.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let cfg: Vec<String> = self.config.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "{} {} [{}]", self.tool, self.command, cfg.join(" "));
        for c in &self.checks {
            let _ = write!(out, "  {:<12} {}", c.status.as_str().to_uppercase(), c.name);
            if let Some(d) = brief(&c.details) {
                let _ = write!(out, "  {d}");
            }
            out.push('\n');
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "      witness: {w}");
            }
        }
        let _ = writeln!(out, "overall: {}", if self.failed() { "FAIL" } else { "PASS" });
        out
    }
}

fn brief(v: &Value) -> Option<String> {
    let obj = v.as_object()?;
    let dims = obj.get("dims").or_else(|| obj.get("graded_dims"))?;
    Some(format!("dims {}", dims))
}

/// Random homogeneous integer combinations of basis vectors.
pub fn random_elements(alg: &FiniteAlgebra, seed: u64, count: usize) -> Vec<(SparseVec<usize>, Parity)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = alg.field();
    let space = alg.space();
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let parity = if space.sdim().1 == 0 {
            Parity::Even
        } else if space.sdim().0 == 0 {
            Parity::Odd
        } else {
            Parity::from_bit(k % 2 == 1)
        };
        let mut v = SparseVec::new();
        for i in (0..alg.dim()).filter(|&i| space.parity(i) == parity) {
            v.add_term(i, &f.int(rng.gen_range(-3..=3)));
        }
        out.push((v, parity));
    }
    out
}

fn fj_check(name: &str, outcome: crate::nlie::FjOutcome) -> Check {
    let witness = outcome.witness.as_ref().map(|w| {
        format!("a = ({}), b = ({}), residue {}", w.sources.join(", "), w.args.join(", "), w.residue)
    });
    Check::new(name, Status::from_bool(outcome.passed()), witness, json!({ "checked": outcome.checked }))
}

/// The full suite for a finite-dimensional n-ary algebra.
pub fn verify_finite(alg: &FiniteAlgebra, cap: i64, seed: u64, config: BTreeMap<String, String>) -> Result<Report> {
    let n = alg.arity();
    let mut rep = Report::new("verify", config);
    rep.push(fj_check("fj_identity", check_fj(alg, &alg.default_sample(), FjForm::Literal)));
    let rnd = Sample::sorted(random_elements(alg, seed, n + 1));
    rep.push(fj_check("fj_identity_random", check_fj(alg, &rnd, FjForm::Literal)));

    let mu = alg.mu_bar()?;
    let (sub, trace) = generate_lie(&mu, cap)?;
    rep.push(Check::new(
        "generation",
        Status::Pass,
        None,
        json!({ "dims": sub.dims(), "rounds": trace.rounds, "cap": cap }),
    ));

    let adm = check_admissible(&sub, &mu)?;
    let ok = adm.admissible() && adm.top_is_line;
    let witness = adm.transitivity_witness.clone().or_else(|| adm.l3_witness.clone());
    let irreducible = adm.irreducible.clone();
    rep.push(Check::new("admissible_pair", Status::from_bool(ok), witness, serde_json::to_value(&adm).expect("json")));
    let (st, w) = match &irreducible {
        Irreducibility::Irreducible { .. } => (Status::Pass, None),
        Irreducibility::Reducible { invariant_subspace, .. } => {
            (Status::Fail, Some(format!("invariant subspace [{}]", invariant_subspace.join(", "))))
        }
        Irreducibility::NotDecided { reason, .. } => (Status::NotDecided, Some(reason.clone())),
    };
    rep.push(Check::new("irreducibility", st, w, serde_json::to_value(&irreducible).expect("json")));

    if cap > n as i64 {
        let t = check_theorem_0_2(&sub, &mu)?;
        let w = t
            .pairing_witness
            .clone()
            .or_else(|| t.ideal_witness.clone())
            .or_else(|| (!t.nonzero_above.is_empty()).then(|| format!("nonzero components in degrees {:?}", t.nonzero_above)));
        rep.push(Check::new("graded_structure", Status::from_bool(t.passed()), w, serde_json::to_value(&t).expect("json")));
    }

    let l = check_lemma_3_1(&mu)?;
    rep.push(Check::new("master_identities", Status::from_bool(l.passed()), l.witness.clone(), serde_json::to_value(&l).expect("json")));

    let d = derivation_report(alg);
    rep.push(Check::new(
        "derivations",
        Status::from_bool(d.ideal),
        None,
        json!({ "der_dim": d.der_dim, "inder_dim": d.inder_dim, "der_equals_inder": d.der_equals_inder, "basis": d.basis }),
    ));
    Ok(rep)
}

fn poly_suite<A: NAryAlgebra>(alg: &A, sample: Sample<A::Elem>, config: BTreeMap<String, String>) -> Report {
    let mut rep = Report::new("verify", config);
    let anti = check_anticommutative(alg, &sample);
    rep.push(Check::new(
        "anticommutativity",
        Status::from_bool(anti.is_none()),
        anti.map(|w| format!("{w:?}")),
        json!({ "elements": sample.len() }),
    ));
    rep.push(fj_check("fj_identity", check_fj(alg, &sample, FjForm::Literal)));
    rep
}

/// Window-level suite for `Sⁿ`, `Wⁿ`, `SWⁿ`.
pub fn verify_polynomial(
    field: Field,
    kind: BracketKind,
    n: usize,
    window: u32,
    config: BTreeMap<String, String>,
) -> Result<Report> {
    Ok(match kind {
        BracketKind::S => {
            let a = DeterminantAlgebra::sn(field, n)?;
            poly_suite(&a, a.sample(window), config)
        }
        BracketKind::W => {
            let a = DeterminantAlgebra::wn(field, n)?;
            poly_suite(&a, a.sample(window), config)
        }
        BracketKind::SW => {
            let a = TaggedAlgebra::swn(field, n)?;
            poly_suite(&a, a.sample(window), config)
        }
    })
}

pub fn pairs_report(field: Field, which: Pair, n: usize, xwindow: u32, config: BTreeMap<String, String>) -> Result<Report> {
    let r = verify_theorem_4_1_pair(field, which, n, xwindow)?;
    let mut rep = Report::new("pairs", config);
    let details = serde_json::to_value(&r).expect("json");
    rep.push(Check::new("pair_top_is_line", Status::from_bool(r.top_is_line), None, json!({ "dims": r.dims })));
    rep.push(Check::new("pair_mu_centralizes_l0", Status::from_bool(r.mu_centralizes_l0), r.l3_witness.clone(), json!({})));
    rep.push(Check::new("pair_transitive", Status::from_bool(r.transitive), r.transitivity_witness.clone(), json!({})));
    rep.push(Check::new(
        "pair_induced_bracket",
        Status::from_bool(r.bracket_match),
        r.mismatch.clone(),
        json!({ "compared": r.compared, "scalar": r.scalar }),
    ));
    if let Some((got, want)) = r.l0_dim_check {
        rep.push(Check::new("pair_l0_dimension", Status::from_bool(got == want), None, json!({ "dim": got, "expected": want })));
    }
    rep.push(Check::new("pair_summary", Status::from_bool(r.passed()), None, details));
    Ok(rep)
}

pub fn decompositions_report(field: Field, config: BTreeMap<String, String>) -> Result<Report> {
    let mut rep = Report::new("decompositions", config);
    for (i, d) in standard_decompositions(field)?.into_iter().enumerate() {
        let name = format!("decomposition_{}", i + 1);
        let w = d.ideal_witness.clone();
        rep.push(Check::new(&name, Status::from_bool(d.passed()), w, serde_json::to_value(&d).expect("json")));
    }
    Ok(rep)
}

/// The characteristic-p lab. The identity is asserted only for odd `n`;
/// even `n` is reported as undecided with both residues.
pub fn charp_lab(seed: &CharPSeed, cap: i64, config: BTreeMap<String, String>) -> Result<Report> {
    let r = charp_report(seed, cap)?;
    let mut rep = Report::new("charp", config);
    let fj_status = if seed.n % 2 == 1 {
        Status::from_bool(r.fj.passed)
    } else {
        Status::NotDecided
    };
    let fj_witness = (!r.fj.passed).then(|| format!("residue {}", r.fj.literal_residue));
    rep.push(Check::new("charp_fj_identity", fj_status, fj_witness, serde_json::to_value(&r.fj).expect("json")));
    let exceeds = !r.generation.within_bound();
    rep.push(Check::new(
        "charp_grading_exceeds_bound",
        Status::from_bool(exceeds),
        None,
        serde_json::to_value(&r.generation).expect("json"),
    ));
    rep.push(Check::new(
        "control_q_within_bound",
        Status::from_bool(r.control.within_bound()),
        r.control.first_excess.clone(),
        json!({ "generation": r.control, "fj": r.control_fj }),
    ));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::on;

    const Q: Field = Field::Rationals;

    fn cfg() -> BTreeMap<String, String> {
        BTreeMap::from([("n".to_string(), "3".to_string())])
    }

    #[test]
    fn vector_product_suite_passes() {
        let rep = verify_finite(&on(Q, 3).unwrap(), 4, 0, cfg()).unwrap();
        assert!(!rep.failed(), "{}", rep.summary());
        let names: Vec<&str> = rep.checks.iter().map(|c| c.name.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        let gen = rep.checks.iter().find(|c| c.name == "generation").unwrap();
        assert_eq!(gen.details["dims"], json!({"-1": 4, "0": 6, "1": 4, "2": 1}));
    }

    #[test]
    fn json_roundtrip_and_determinism() {
        let a = verify_finite(&on(Q, 3).unwrap(), 4, 7, cfg()).unwrap();
        let b = verify_finite(&on(Q, 3).unwrap(), 4, 7, cfg()).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(Report::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn random_elements_are_seeded() {
        let a = on(Q, 3).unwrap();
        assert_eq!(random_elements(&a, 1, 3), random_elements(&a, 1, 3));
        assert_ne!(random_elements(&a, 1, 3), random_elements(&a, 2, 3));
    }

    #[test]
    fn charp_lab_statuses() {
        let rep = charp_lab(&CharPSeed::new(3, 7).unwrap(), 15, cfg()).unwrap();
        let st: BTreeMap<&str, Status> = rep.checks.iter().map(|c| (c.name.as_str(), c.status)).collect();
        assert_eq!(st["charp_fj_identity"], Status::Pass);
        assert_eq!(st["charp_grading_exceeds_bound"], Status::Pass);
        let even = charp_lab(&CharPSeed::new(3, 4).unwrap(), 8, cfg()).unwrap();
        assert_eq!(even.checks.iter().find(|c| c.name == "charp_fj_identity").unwrap().status, Status::NotDecided);
    }
}
