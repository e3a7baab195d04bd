//! Bigraded polynomials in `μ_0..μ_{k-1}, y_0..y_{m-1}` with exact coefficients.

mod scalar;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

pub use scalar::{is_prime, Field, Scalar, MAX_PRIME};
pub(crate) use scalar::{bigint_mod, inv_mod};

use crate::error::{Error, Result};

/// A variable of the master polynomial ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    Mu(usize),
    Y(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Mu(i) => write!(f, "μ_{i}"),
            Var::Y(j) => write!(f, "y_{j}"),
        }
    }
}

/// Dense exponent vectors for the μ- and y-blocks.
///
/// Ordered graded-lexicographically on the concatenation `(mu, y)`: total
/// degree first, then the first differing exponent decides, larger exponent
/// on an earlier variable being the larger monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub mu: Vec<u32>,
    pub y: Vec<u32>,
}

impl Monomial {
    pub fn one(k: usize, m: usize) -> Self {
        Monomial {
            mu: vec![0; k],
            y: vec![0; m],
        }
    }

    pub fn new(mu: Vec<u32>, y: Vec<u32>) -> Self {
        Monomial { mu, y }
    }

    pub fn var(k: usize, m: usize, v: Var) -> Self {
        let mut out = Self::one(k, m);
        match v {
            Var::Mu(i) => out.mu[i] = 1,
            Var::Y(j) => out.y[j] = 1,
        }
        out
    }

    /// `μ_i y_j^e`, the shape of the first-order basis elements.
    pub fn mu_y(k: usize, m: usize, i: usize, j: usize, e: u32) -> Self {
        let mut out = Self::one(k, m);
        out.mu[i] = 1;
        out.y[j] = e;
        out
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.mu.len(), self.y.len())
    }

    pub fn bidegree(&self) -> (u32, u32) {
        (self.mu.iter().sum(), self.y.iter().sum())
    }

    pub fn degree(&self) -> u32 {
        let (a, b) = self.bidegree();
        a + b
    }

    /// Residues of the y-exponents modulo `r`.
    pub fn character(&self, r: u32) -> Vec<u32> {
        self.y.iter().map(|e| e % r).collect()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.shape(), other.shape());
        Monomial {
            mu: self.mu.iter().zip(&other.mu).map(|(a, b)| a + b).collect(),
            y: self.y.iter().zip(&other.y).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn exponent(&self, v: Var) -> u32 {
        match v {
            Var::Mu(i) => self.mu[i],
            Var::Y(j) => self.y[j],
        }
    }

    fn exponents(&self) -> impl Iterator<Item = &u32> {
        self.mu.iter().chain(self.y.iter())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exponents().cmp(other.exponents()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tuple = |v: &[u32]| {
            v.iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "μ^({}) y^({})", tuple(&self.mu), tuple(&self.y))
    }
}

/// Sparse polynomial; terms iterate in ascending graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    k: usize,
    m: usize,
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(k: usize, m: usize, field: Field) -> Self {
        Polynomial {
            k,
            m,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(k: usize, m: usize, c: Scalar) -> Self {
        Self::monomial(Monomial::one(k, m), c)
    }

    pub fn monomial(mono: Monomial, c: Scalar) -> Self {
        let (k, m) = mono.shape();
        let mut out = Self::zero(k, m, c.field());
        if !c.is_zero() {
            out.terms.insert(mono, c);
        }
        out
    }

    pub fn var(k: usize, m: usize, field: Field, v: Var) -> Self {
        Self::monomial(Monomial::var(k, m, v), field.one())
    }

    /// Builds a polynomial from `(coefficient, monomial)` pairs, collecting like terms.
    pub fn from_terms(
        k: usize,
        m: usize,
        field: Field,
        terms: impl IntoIterator<Item = (Scalar, Monomial)>,
    ) -> Result<Self> {
        let mut out = Self::zero(k, m, field);
        for (c, mono) in terms {
            if mono.shape() != (k, m) {
                return Err(Error::Shape(format!(
                    "monomial of shape {:?} in a ({k}, {m}) ring",
                    mono.shape()
                )));
            }
            if c.field() != field {
                return Err(Error::FieldMismatch {
                    left: field.to_string(),
                    right: c.field().to_string(),
                });
            }
            out.add_term(mono, c);
        }
        Ok(out)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.k, self.m)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Scalar {
        self.terms
            .get(mono)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Bidegree if every term shares one, `None` otherwise (and for zero).
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let mut it = self.terms.keys().map(Monomial::bidegree);
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// The common character of all terms, if the polynomial is semi-invariant.
    pub fn character(&self, r: u32) -> Option<Vec<u32>> {
        let mut it = self.terms.keys().map(|m| m.character(r));
        let first = it.next()?;
        it.all(|c| c == first).then_some(first)
    }

    pub(crate) fn add_term(&mut self, mono: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: other.field.to_string(),
            });
        }
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!(
                "ring shapes {:?} and {:?} differ",
                self.shape(),
                other.shape()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (mono, c) in &other.terms {
            out.add_term(mono.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &Scalar) -> Result<Polynomial> {
        if c.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: c.field().to_string(),
            });
        }
        let mut out = Self::zero(self.k, self.m, self.field);
        if c.is_zero() {
            return Ok(out);
        }
        out.terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        Ok(out)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.k, self.m, self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), c.clone()))
                .collect(),
            ..self.clone()
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Self::constant(self.k, self.m, self.field.one());
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    pub fn partial_derivative(&self, v: Var) -> Result<Polynomial> {
        let in_range = match v {
            Var::Mu(i) => i < self.k,
            Var::Y(j) => j < self.m,
        };
        if !in_range {
            return Err(Error::UnknownVariable(format!(
                "{v} in a ring with {} μ- and {} y-variables",
                self.k, self.m
            )));
        }
        let mut out = Self::zero(self.k, self.m, self.field);
        for (mono, c) in &self.terms {
            let e = mono.exponent(v);
            if e == 0 {
                continue;
            }
            let mut d = mono.clone();
            match v {
                Var::Mu(i) => d.mu[i] -= 1,
                Var::Y(j) => d.y[j] -= 1,
            }
            out.add_term(d, c * &self.field.from_i64(e as i64));
        }
        Ok(out)
    }

    /// Keeps the terms whose y-exponents are congruent to `chi` modulo `r`.
    pub fn character_projection(&self, r: u32, chi: &[u32]) -> Result<Polynomial> {
        if chi.len() != self.m {
            return Err(Error::Shape(format!(
                "character of length {} for {} y-variables",
                chi.len(),
                self.m
            )));
        }
        Ok(Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.y.iter().zip(chi).all(|(e, c)| e % r == c % r))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            ..self.clone()
        })
    }

    /// Distinct characters present, in ascending order.
    pub fn characters(&self, r: u32) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = self.terms.keys().map(|m| m.character(r)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Coefficient-wise image in another field (e.g. reduction of a rational
    /// polynomial modulo a prime).
    pub fn map_field(&self, field: Field) -> Result<Polynomial> {
        let mut out = Self::zero(self.k, self.m, field);
        for (mono, c) in &self.terms {
            out.add_term(mono.clone(), field.coerce(c)?);
        }
        Ok(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| format!("{c} * {m}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
