//! Finite-dimensional vector superspaces with named, parity-tagged bases.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::SparseVec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(odd: bool) -> Parity {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn bit(self) -> u8 {
        self as u8
    }

    pub fn flip(self) -> Parity {
        Parity::from_bit(!self.is_odd())
    }

    pub fn sum<I: IntoIterator<Item = Parity>>(it: I) -> Parity {
        it.into_iter().fold(Parity::Even, |a, b| a + b)
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, o: Parity) -> Parity {
        Parity::from_bit(self.is_odd() ^ o.is_odd())
    }
}

impl std::ops::Mul for Parity {
    type Output = Parity;
    fn mul(self, o: Parity) -> Parity {
        Parity::from_bit(self.is_odd() && o.is_odd())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_odd() { "odd" } else { "even" })
    }
}

/// Parity of a vector: homogeneous or mixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VectorParity {
    Even,
    Odd,
    Nonhomogeneous,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisVector {
    pub label: String,
    pub parity: Parity,
}

/// A superspace `V = V_0 + V_1` with an ordered basis. The construction
/// order is the canonical order used for all multi-index normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperSpace {
    field: Field,
    basis: Vec<BasisVector>,
    zdegree: Option<Vec<i64>>,
    index: HashMap<String, usize>,
}

impl SuperSpace {
    pub fn new(field: Field, basis: Vec<(String, Parity)>) -> Result<Self> {
        let mut index = HashMap::new();
        let mut bv = Vec::with_capacity(basis.len());
        for (i, (label, parity)) in basis.into_iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label));
            }
            bv.push(BasisVector { label, parity });
        }
        Ok(SuperSpace { field, basis: bv, zdegree: None, index })
    }

    /// `m` even vectors `e1..em` followed by `n` odd vectors `f1..fn`.
    pub fn standard(field: Field, even: usize, odd: usize) -> Self {
        let mut b: Vec<(String, Parity)> = (1..=even).map(|i| (format!("e{i}"), Parity::Even)).collect();
        b.extend((1..=odd).map(|i| (format!("f{i}"), Parity::Odd)));
        SuperSpace::new(field, b).expect("distinct labels")
    }

    /// Labels `prefix1..prefixd`, all of one parity.
    pub fn uniform(field: Field, prefix: &str, dim: usize, parity: Parity) -> Self {
        let b = (1..=dim).map(|i| (format!("{prefix}{i}"), parity)).collect();
        SuperSpace::new(field, b).expect("distinct labels")
    }

    pub fn with_zdegrees(mut self, degrees: Vec<i64>) -> Result<Self> {
        if degrees.len() != self.basis.len() {
            return Err(Error::DimensionMismatch { expected: self.basis.len(), found: degrees.len() });
        }
        self.zdegree = Some(degrees);
        Ok(self)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `(#even | #odd)`.
    pub fn sdim(&self) -> (usize, usize) {
        let odd = self.basis.iter().filter(|b| b.parity.is_odd()).count();
        (self.basis.len() - odd, odd)
    }

    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.basis[i].parity
    }

    pub fn parities(&self) -> Vec<Parity> {
        self.basis.iter().map(|b| b.parity).collect()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn zdegrees(&self) -> Option<&[i64]> {
        self.zdegree.as_deref()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn is_purely_odd(&self) -> bool {
        self.basis.iter().all(|b| b.parity.is_odd())
    }

    pub fn is_purely_even(&self) -> bool {
        self.basis.iter().all(|b| !b.parity.is_odd())
    }

    /// `ΠV`: same labels and z-degrees, every parity flipped.
    pub fn reverse_parity(&self) -> SuperSpace {
        SuperSpace {
            field: self.field,
            basis: self
                .basis
                .iter()
                .map(|b| BasisVector { label: b.label.clone(), parity: b.parity.flip() })
                .collect(),
            zdegree: self.zdegree.clone(),
            index: self.index.clone(),
        }
    }

    /// One line per basis vector: `label parity [zdegree]`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, b) in self.basis.iter().enumerate() {
            s.push_str(&b.label);
            s.push(' ');
            s.push_str(if b.parity.is_odd() { "odd" } else { "even" });
            if let Some(z) = &self.zdegree {
                s.push_str(&format!(" {}", z[i]));
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(field: Field, text: &str) -> Result<Self> {
        let mut basis = Vec::new();
        let mut zs = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() < 2 || parts.len() > 3 {
                return Err(Error::Parse(format!("bad basis line `{line}`")));
            }
            let parity = match parts[1] {
                "even" | "0" => Parity::Even,
                "odd" | "1" => Parity::Odd,
                other => return Err(Error::Parse(format!("bad parity `{other}`"))),
            };
            basis.push((parts[0].to_string(), parity));
            if let Some(z) = parts.get(2) {
                zs.push(z.parse::<i64>().map_err(|_| Error::Parse(format!("bad zdegree `{z}`")))?);
            }
        }
        let space = SuperSpace::new(field, basis)?;
        if zs.is_empty() {
            Ok(space)
        } else if zs.len() == space.dim() {
            space.with_zdegrees(zs)
        } else {
            Err(Error::Parse("zdegree given for some but not all basis vectors".into()))
        }
    }
}

/// A sparse vector in a given superspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperVector {
    space: Arc<SuperSpace>,
    coords: SparseVec<usize>,
}

impl SuperVector {
    pub fn zero(space: Arc<SuperSpace>) -> Self {
        SuperVector { space, coords: SparseVec::new() }
    }

    pub fn basis(space: Arc<SuperSpace>, i: usize) -> Self {
        let f = space.field();
        SuperVector { space, coords: SparseVec::unit(i, f) }
    }

    pub fn from_coords(space: Arc<SuperSpace>, coords: SparseVec<usize>) -> Self {
        SuperVector { space, coords }
    }

    pub fn from_labels(space: Arc<SuperSpace>, terms: &[(&str, Scalar)]) -> Result<Self> {
        let mut coords = SparseVec::new();
        for (l, c) in terms {
            coords.add_term(space.index_of(l)?, c);
        }
        Ok(SuperVector { space, coords })
    }

    pub fn space(&self) -> &Arc<SuperSpace> {
        &self.space
    }

    pub fn coords(&self) -> &SparseVec<usize> {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    /// Zero counts as even.
    pub fn parity(&self) -> VectorParity {
        let mut seen: Option<Parity> = None;
        for (i, _) in self.coords.iter() {
            let p = self.space.parity(*i);
            match seen {
                None => seen = Some(p),
                Some(q) if q != p => return VectorParity::Nonhomogeneous,
                _ => {}
            }
        }
        match seen {
            Some(Parity::Odd) => VectorParity::Odd,
            _ => VectorParity::Even,
        }
    }

    /// The same coordinates viewed in `ΠV`.
    pub fn reverse_parity(&self, target: Arc<SuperSpace>) -> Result<SuperVector> {
        if target.dim() != self.space.dim() {
            return Err(Error::DimensionMismatch { expected: self.space.dim(), found: target.dim() });
        }
        Ok(SuperVector { space: target, coords: self.coords.clone() })
    }
}

impl fmt::Display for SuperVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coords.iter() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{}*{}", c, self.space.label(*i))?;
        }
        Ok(())
    }
}
