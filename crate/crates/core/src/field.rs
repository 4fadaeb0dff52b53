//! Exact scalars over the rationals or a prime field.
//!
//! Rational values keep a machine-word fast path (`Ratio<i64>` with checked
//! arithmetic) and promote to arbitrary precision only on overflow, so
//! results are always exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The base field of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    /// Builds a prime field, rejecting composite or oversized moduli.
    pub fn prime(p: u64) -> Result<Field> {
        if !(2..(1 << 32)).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero(*self)
    }

    pub fn one(&self) -> Scalar {
        Scalar::one(*self)
    }

    pub fn int(&self, v: i64) -> Scalar {
        Scalar::from_i64(*self, v)
    }

    /// `num/den` in this field; fails if `den` vanishes.
    pub fn ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.int(den);
        let inv = d.inv().ok_or(Error::DivisionByZero)?;
        Ok(&self.int(num) * &inv)
    }

    /// Parses `q`, `Q`, `fp:P` or `F_P`.
    pub fn parse(s: &str) -> Result<Field> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rationals") {
            return Ok(Field::Rationals);
        }
        let rest = t
            .strip_prefix("fp:")
            .or_else(|| t.strip_prefix("F_"))
            .or_else(|| t.strip_prefix("Fp:"))
            .ok_or_else(|| Error::Parse(format!("unknown field `{s}`")))?;
        let p: u64 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad prime in `{s}`")))?;
        Field::prime(p)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug)]
enum Rat {
    Small(Ratio<i64>),
    Big(BigRational),
}

impl Rat {
    fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Rat::Big(b) => b.clone(),
        }
    }

    fn shrink(b: BigRational) -> Rat {
        match (b.numer().to_i64(), b.denom().to_i64()) {
            (Some(n), Some(d)) => Rat::Small(Ratio::new_raw(n, d)),
            _ => Rat::Big(b),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Rat::Small(r) => r.is_zero(),
            Rat::Big(b) => b.is_zero(),
        }
    }

    fn add(&self, o: &Rat) -> Rat {
        if let (Rat::Small(a), Rat::Small(b)) = (self, o) {
            if let Some(c) = a.checked_add(b) {
                return Rat::Small(c);
            }
        }
        Rat::shrink(self.to_big() + o.to_big())
    }

    fn sub(&self, o: &Rat) -> Rat {
        if let (Rat::Small(a), Rat::Small(b)) = (self, o) {
            if let Some(c) = a.checked_sub(b) {
                return Rat::Small(c);
            }
        }
        Rat::shrink(self.to_big() - o.to_big())
    }

    fn mul(&self, o: &Rat) -> Rat {
        if let (Rat::Small(a), Rat::Small(b)) = (self, o) {
            if let Some(c) = a.checked_mul(b) {
                return Rat::Small(c);
            }
        }
        Rat::shrink(self.to_big() * o.to_big())
    }

    fn neg(&self) -> Rat {
        match self {
            Rat::Small(r) if *r.numer() != i64::MIN => Rat::Small(-*r),
            _ => Rat::shrink(-self.to_big()),
        }
    }

    fn inv(&self) -> Option<Rat> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Rat::Small(r) if *r.numer() != i64::MIN => Rat::Small(r.recip()),
            _ => Rat::shrink(self.to_big().recip()),
        })
    }

    fn cmp_value(&self, o: &Rat) -> Ordering {
        match (self, o) {
            (Rat::Small(a), Rat::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&o.to_big()),
        }
    }
}

/// An exact field element. Arithmetic between elements of different fields
/// is a programming error and panics; fallible entry points (matrix
/// construction, parsers) validate fields up front.
#[derive(Clone, Debug)]
pub struct Scalar(Repr);

#[derive(Clone, Debug)]
enum Repr {
    Q(Rat),
    Fp { v: u64, p: u64 },
}

impl Scalar {
    pub fn zero(field: Field) -> Scalar {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: Field) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: Field, v: i64) -> Scalar {
        match field {
            Field::Rationals => Scalar(Repr::Q(Rat::Small(Ratio::from_integer(v)))),
            Field::Prime(p) => Scalar(Repr::Fp { v: v.rem_euclid(p as i64) as u64, p }),
        }
    }

    pub fn from_bigint(field: Field, v: &BigInt) -> Scalar {
        match field {
            Field::Rationals => Scalar(Repr::Q(Rat::shrink(BigRational::from_integer(v.clone())))),
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                Scalar(Repr::Fp { v: r.to_u64().unwrap_or(0), p })
            }
        }
    }

    pub fn from_rational(field: Field, v: &BigRational) -> Result<Scalar> {
        let n = Scalar::from_bigint(field, v.numer());
        let d = Scalar::from_bigint(field, v.denom());
        let di = d.inv().ok_or(Error::DivisionByZero)?;
        Ok(&n * &di)
    }

    /// Parses an integer or `a/b` literal into the given field.
    pub fn parse(field: Field, s: &str) -> Result<Scalar> {
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let n: BigInt = num
            .parse()
            .map_err(|_| Error::Parse(format!("bad scalar `{s}`")))?;
        let d: BigInt = den
            .parse()
            .map_err(|_| Error::Parse(format!("bad scalar `{s}`")))?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Scalar::from_rational(field, &BigRational::new(n, d))
    }

    pub fn field(&self) -> Field {
        match &self.0 {
            Repr::Q(_) => Field::Rationals,
            Repr::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Q(r) => r.is_zero(),
            Repr::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Q(Rat::Small(r)) => r.is_one(),
            Repr::Q(Rat::Big(b)) => b.is_one(),
            Repr::Fp { v, .. } => *v == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        match &self.0 {
            Repr::Q(r) => r.inv().map(|x| Scalar(Repr::Q(x))),
            Repr::Fp { v, p } => {
                if *v == 0 {
                    None
                } else {
                    Some(Scalar(Repr::Fp { v: pow_mod(*v, p - 2, *p), p: *p }))
                }
            }
        }
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one(self.field());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The value as an exact rational, if this is a rational scalar.
    pub fn to_rational(&self) -> Option<BigRational> {
        match &self.0 {
            Repr::Q(r) => Some(r.to_big()),
            Repr::Fp { .. } => None,
        }
    }

    /// Canonical residue in `[0, p)` for prime-field scalars.
    pub fn residue(&self) -> Option<u64> {
        match &self.0 {
            Repr::Fp { v, .. } => Some(*v),
            Repr::Q(_) => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Q(Rat::Small(r)) => r.is_negative(),
            Repr::Q(Rat::Big(b)) => b.is_negative(),
            Repr::Fp { .. } => false,
        }
    }

    fn check(&self, other: &Scalar) -> u64 {
        match (&self.0, &other.0) {
            (Repr::Q(_), Repr::Q(_)) => 0,
            (Repr::Fp { p: a, .. }, Repr::Fp { p: b, .. }) if a == b => *a,
            _ => panic!(
                "field mismatch: {} vs {}",
                self.field(),
                other.field()
            ),
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (&self.0, &other.0) {
            (Repr::Q(a), Repr::Q(b)) => a.cmp_value(b) == Ordering::Equal,
            (Repr::Fp { v: a, p: pa }, Repr::Fp { v: b, p: pb }) => pa == pb && a == b,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let p = self.check(o);
        match (&self.0, &o.0) {
            (Repr::Q(a), Repr::Q(b)) => Scalar(Repr::Q(a.add(b))),
            (Repr::Fp { v: a, .. }, Repr::Fp { v: b, .. }) => {
                Scalar(Repr::Fp { v: ((*a as u128 + *b as u128) % p as u128) as u64, p })
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        let p = self.check(o);
        match (&self.0, &o.0) {
            (Repr::Q(a), Repr::Q(b)) => Scalar(Repr::Q(a.sub(b))),
            (Repr::Fp { v: a, .. }, Repr::Fp { v: b, .. }) => {
                Scalar(Repr::Fp { v: ((*a as u128 + p as u128 - *b as u128) % p as u128) as u64, p })
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        let p = self.check(o);
        match (&self.0, &o.0) {
            (Repr::Q(a), Repr::Q(b)) => Scalar(Repr::Q(a.mul(b))),
            (Repr::Fp { v: a, .. }, Repr::Fp { v: b, .. }) => {
                Scalar(Repr::Fp { v: ((*a as u128 * *b as u128) % p as u128) as u64, p })
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Q(a) => Scalar(Repr::Q(a.neg())),
            Repr::Fp { v, p } => Scalar(Repr::Fp { v: (p - v) % p, p: *p }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Q(Rat::Small(r)) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Repr::Q(Rat::Big(b)) => {
                if b.is_integer() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
            Repr::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `(-1)^e` in the given field.
pub fn sign(field: Field, odd: bool) -> Scalar {
    if odd {
        Scalar::from_i64(field, -1)
    } else {
        Scalar::one(field)
    }
}

/// Binomial coefficient as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rational_division_is_exact() {
        let q = Field::Rationals;
        let half = q.ratio(1, 2).unwrap();
        assert_eq!(half.to_string(), "1/2");
        assert_eq!(&half + &half, q.one());
    }

    #[test]
    fn overflow_promotes_to_big() {
        let q = Field::Rationals;
        let big = q.int(i64::MAX);
        let sq = &big * &big;
        assert_eq!(sq.to_rational().unwrap(), BigRational::from_integer(BigInt::from(i64::MAX) * BigInt::from(i64::MAX)));
        let back = &sq * &big.inv().unwrap();
        assert_eq!(back, big);
    }

    #[test]
    fn prime_field_inverse() {
        let f = Field::prime(7).unwrap();
        for v in 1..7 {
            let x = f.int(v);
            assert!((&x * &x.inv().unwrap()).is_one());
        }
        assert!(f.zero().inv().is_none());
        assert!(Field::prime(9).is_err());
    }

    #[test]
    fn parse_field_and_scalar() {
        assert_eq!(Field::parse("q").unwrap(), Field::Rationals);
        assert_eq!(Field::parse("fp:5").unwrap(), Field::Prime(5));
        let s = Scalar::parse(Field::Prime(5), "1/2").unwrap();
        assert_eq!(s.residue(), Some(3));
        assert_eq!(Scalar::parse(Field::Rationals, "-3/6").unwrap().to_string(), "-1/2");
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixed_fields_panic() {
        let _ = Field::Rationals.one() + Field::Prime(3).one();
    }

    fn small() -> impl Strategy<Value = (i64, i64)> {
        (-1000i64..1000, 1i64..50)
    }

    proptest! {
        #[test]
        fn rational_field_axioms(a in small(), b in small(), c in small()) {
            let q = Field::Rationals;
            let (x, y, z) = (q.ratio(a.0, a.1).unwrap(), q.ratio(b.0, b.1).unwrap(), q.ratio(c.0, c.1).unwrap());
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            if !x.is_zero() {
                prop_assert!((&x * &x.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn prime_field_matches_integer_reduction(a in -10_000i64..10_000, b in -10_000i64..10_000, pi in 0usize..5) {
            let p = [2u64, 3, 5, 7, 101][pi];
            let f = Field::Prime(p);
            let m = |v: i64| v.rem_euclid(p as i64) as u64;
            prop_assert_eq!((&f.int(a) + &f.int(b)).residue().unwrap(), m(a + b));
            prop_assert_eq!((&f.int(a) * &f.int(b)).residue().unwrap(), m(a * b));
            prop_assert_eq!((&f.int(a) - &f.int(b)).residue().unwrap(), m(a - b));
        }
    }
}
