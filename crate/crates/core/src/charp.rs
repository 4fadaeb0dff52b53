//! The one-dimensional odd n-algebra `F_p·a` with `[a,…,a] = a`, and the
//! unbounded grading of the Lie algebra it generates.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{is_prime, Field, Scalar};
use crate::linalg::SparseVec;
use crate::multilinear::AntiMultiMap;
use crate::nlie::{fj_residue, FiniteAlgebra, FjForm, NAryAlgebra};
use crate::superspace::{Parity, SuperSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CharPSeed {
    pub p: u64,
    pub n: usize,
    pub s: usize,
}

impl CharPSeed {
    pub fn new(p: u64, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if n < 2 || !(n as u64 - 1).is_multiple_of(p) {
            return Err(Error::InvalidParameter(format!("n = {n} is not of the form s·{p} + 1")));
        }
        Ok(CharPSeed { p, n, s: (n - 1) / p as usize })
    }

    pub fn from_s(p: u64, s: usize) -> Result<Self> {
        Self::new(p, s * p as usize + 1)
    }

    pub fn field(&self) -> Field {
        Field::prime(self.p).expect("checked prime")
    }

    pub fn algebra(&self) -> Result<FiniteAlgebra> {
        one_dim_odd(self.field(), self.n)
    }
}

/// `F·a`, `a` odd, with `[a,…,a] = a` in arity `n`, over any field.
pub fn one_dim_odd(field: Field, n: usize) -> Result<FiniteAlgebra> {
    let space = Arc::new(SuperSpace::uniform(field, "a", 1, Parity::Odd));
    let mut table = AntiMultiMap::zero(space, n);
    table.set(&vec![0; n], SparseVec::unit(0, field))?;
    // |μ| + n·|a| = |a|
    FiniteAlgebra::new(table, Parity::from_bit(n.is_multiple_of(2)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharPFjReport {
    pub p: u64,
    pub n: usize,
    /// Residue of the identity with the literal super signs.
    pub literal_residue: String,
    /// Residue when the identity is read as the Leibniz rule for `D_a`.
    pub derivation_residue: String,
    pub passed: bool,
}

/// Evaluates the super Filippov-Jacobi identity on the unique basis tuple.
pub fn charp_fj_check(seed: &CharPSeed) -> Result<CharPFjReport> {
    let alg = seed.algebra()?;
    let a = (SparseVec::unit(0, alg.field()), Parity::Odd);
    let sources = vec![a.clone(); seed.n - 1];
    let args = vec![a; seed.n];
    let lit = fj_residue(&alg, &sources, &args, FjForm::Literal);
    let der = fj_residue(&alg, &sources, &args, FjForm::Derivation);
    Ok(CharPFjReport {
        p: seed.p,
        n: seed.n,
        literal_residue: alg.describe(&lit),
        derivation_residue: alg.describe(&der),
        passed: lit.is_zero(),
    })
}

/// Degrees carried by the closure of `{∂, x^n ∂}` in `W(1)` over `field`,
/// where `x^k ∂` has degree `k − 1` and `[x^a∂, x^b∂] = (b − a) x^{a+b−1}∂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationProfile {
    pub field: String,
    pub n: usize,
    pub cap: i64,
    pub degrees: Vec<i64>,
    /// The first bracket reaching a degree above `n − 1`.
    pub first_excess: Option<String>,
}

impl GenerationProfile {
    pub fn max_degree(&self) -> i64 {
        *self.degrees.last().expect("contains ∂")
    }

    /// Every component vanishes above `n − 1`.
    pub fn within_bound(&self) -> bool {
        self.max_degree() < self.n as i64
    }

    pub fn has_degree(&self, d: i64) -> bool {
        self.degrees.binary_search(&d).is_ok()
    }
}

fn field_name(f: Field) -> String {
    match f.characteristic() {
        0 => "q".into(),
        p => format!("fp:{p}"),
    }
}

fn vf(k: i64) -> String {
    match k {
        0 => "d".into(),
        1 => "x*d".into(),
        _ => format!("x^{k}*d"),
    }
}

pub fn generation_profile(field: Field, n: usize, cap: i64) -> GenerationProfile {
    // exponents k of x^k ∂ present in the closure
    let mut present: BTreeSet<i64> = [0, n as i64].into_iter().filter(|k| k - 1 <= cap).collect();
    let mut first_excess = None;
    let bound = n as i64 - 1;
    loop {
        let cur: Vec<i64> = present.iter().copied().collect();
        let mut added = false;
        for (i, &a) in cur.iter().enumerate() {
            for &b in &cur[i + 1..] {
                let k = a + b - 1;
                if k - 1 > cap || present.contains(&k) {
                    continue;
                }
                let c = Scalar::from_i64(field, b - a);
                if c.is_zero() {
                    continue;
                }
                if first_excess.is_none() && k - 1 > bound {
                    first_excess = Some(format!("[{}, {}] = {}*{}", vf(a), vf(b), c, vf(k)));
                }
                present.insert(k);
                added = true;
            }
        }
        if !added {
            break;
        }
    }
    GenerationProfile {
        field: field_name(field),
        n,
        cap,
        degrees: present.into_iter().map(|k| k - 1).collect(),
        first_excess,
    }
}

pub fn charp_generation(seed: &CharPSeed, cap: i64) -> GenerationProfile {
    generation_profile(seed.field(), seed.n, cap)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharPReport {
    pub fj: CharPFjReport,
    pub generation: GenerationProfile,
    pub control: GenerationProfile,
    pub control_fj: CharPFjReport,
}

/// The lab run: identity residues and generation over `F_p`, and the same
/// seed shape over `Q` as control.
pub fn charp_report(seed: &CharPSeed, cap: i64) -> Result<CharPReport> {
    let control_alg = one_dim_odd(Field::Rationals, seed.n)?;
    let a = (SparseVec::unit(0, Field::Rationals), Parity::Odd);
    let lit = fj_residue(&control_alg, &vec![a.clone(); seed.n - 1], &vec![a.clone(); seed.n], FjForm::Literal);
    let der = fj_residue(&control_alg, &vec![a.clone(); seed.n - 1], &vec![a; seed.n], FjForm::Derivation);
    Ok(CharPReport {
        fj: charp_fj_check(seed)?,
        generation: charp_generation(seed, cap),
        control: generation_profile(Field::Rationals, seed.n, cap),
        control_fj: CharPFjReport {
            p: 0,
            n: seed.n,
            literal_residue: control_alg.describe(&lit),
            derivation_residue: control_alg.describe(&der),
            passed: lit.is_zero(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liegen::generate_lie;

    #[test]
    fn identity_holds_for_odd_n() {
        for (p, n) in [(2, 3), (3, 7), (5, 11), (3, 13), (7, 15)] {
            let r = charp_fj_check(&CharPSeed::new(p, n).unwrap()).unwrap();
            assert!(r.passed, "{r:?}");
            assert_eq!(r.derivation_residue, "0");
        }
    }

    #[test]
    fn residue_over_q_is_one_minus_n() {
        for n in [3usize, 5, 7] {
            let alg = one_dim_odd(Field::Rationals, n).unwrap();
            let a = (SparseVec::unit(0, Field::Rationals), Parity::Odd);
            let r = fj_residue(&alg, &vec![a.clone(); n - 1], &vec![a; n], FjForm::Literal);
            assert_eq!(r, SparseVec::unit(0, Field::Rationals).scaled(&Field::Rationals.int(1 - n as i64)));
        }
    }

    #[test]
    fn even_n_residues() {
        let r = charp_fj_check(&CharPSeed::new(3, 4).unwrap()).unwrap();
        assert_eq!(r.literal_residue, "1*a1");
        assert_eq!(r.derivation_residue, "0");
        assert!(!r.passed);
    }

    #[test]
    fn seeds_are_validated() {
        assert!(CharPSeed::new(3, 5).is_err());
        assert!(CharPSeed::new(4, 5).is_err());
        assert_eq!(CharPSeed::from_s(5, 2).unwrap().n, 11);
    }

    #[test]
    fn grading_bound_fails_in_characteristic_p() {
        let g = charp_generation(&CharPSeed::new(3, 7).unwrap(), 15);
        assert!(g.has_degree(11));
        assert!(!g.within_bound());
        assert_eq!(g.first_excess.as_deref(), Some("[x^6*d, x^7*d] = 1*x^12*d"));
        let g = charp_generation(&CharPSeed::new(2, 3).unwrap(), 8);
        assert!(g.degrees.iter().any(|&d| d > 2));
    }

    #[test]
    fn closure_over_q_is_unbounded_for_this_seed() {
        // [x²∂, x³∂] = x⁴∂ already leaves the range
        let g = generation_profile(Field::Rationals, 3, 10);
        assert_eq!(g.degrees, (-1..=10).collect::<Vec<_>>());
    }

    #[test]
    fn profile_matches_universal_generation_in_characteristic_zero() {
        for (field, n, cap) in [(Field::Rationals, 3, 5), (Field::Rationals, 5, 7)] {
            let alg = one_dim_odd(field, n).unwrap();
            let (sub, _) = generate_lie(&alg.mu_bar().unwrap(), cap).unwrap();
            let degrees: Vec<i64> = sub.dims().into_iter().filter(|(_, d)| *d > 0).map(|(k, _)| k).collect();
            let prof = generation_profile(field, n, cap);
            assert_eq!(prof.degrees, degrees, "{field:?} n={n}");
        }
    }

    #[test]
    fn universal_generation_also_exceeds_the_bound_mod_p() {
        // symmetric multilinear maps give divided powers over F_p
        let alg = one_dim_odd(Field::prime(3).unwrap(), 7).unwrap();
        let (sub, _) = generate_lie(&alg.mu_bar().unwrap(), 12).unwrap();
        assert!(sub.dims().iter().any(|(&k, &d)| k > 6 && d > 0));
    }
}
