//! Dimension of the first characteristic subvariety: exact Gröbner
//! computation over `F_p` and the filtration certificate.

pub mod certificate;
pub mod groebner;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::arrangement::GenericParams;
use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::higgs::{multisets, quadric_system, QuadricSystem};
use crate::jacobian::JacobianPresentation;
use crate::poly::{Field, Scalar};

pub use certificate::{certificate_bound, CertificateReport, CertificateStep, StepCase};
pub use groebner::{groebner_dimension, DimensionReport, IdealBasis, LambdaPoly};

fn residue(x: &Scalar) -> Result<u64> {
    x.residue()
        .ok_or_else(|| Error::UnsupportedField("λ-systems are built over F_p only".into()))
}

fn prime_of(field: Field) -> Result<u64> {
    match field {
        Field::Prime(p) => Ok(p),
        Field::Rational => Err(Error::UnsupportedField(
            "Gröbner computations run over F_p; pass a prime field".into(),
        )),
    }
}

/// The quadric system expanded to polynomials, coefficient for coefficient.
pub fn quadric_ideal(qs: &QuadricSystem) -> Result<IdealBasis> {
    let p = prime_of(qs.field)?;
    let d = qs.vars.len();
    let mut polys = Vec::with_capacity(qs.targets.len());
    for t in 0..qs.targets.len() {
        let mut terms = Vec::new();
        for u in 0..d {
            for v in u..d {
                let c = qs.coefficient(t, u, v);
                if c.is_zero() {
                    continue;
                }
                let mut e = vec![0u16; d];
                e[u] += 1;
                e[v] += 1;
                terms.push((e, residue(&c)?));
            }
        }
        polys.push(LambdaPoly::from_terms(d, p, terms)?);
    }
    IdealBasis::new(d, p, polys)
}

/// Forms in `λ` whose common zeros are `α` with `α^{q+1} = 0`, one per
/// product-basis element of the `(q+1, (q+1) r)` piece.
pub fn char_system(pres: &JacobianPresentation, q: usize) -> Result<IdealBasis> {
    if q == 0 {
        return Err(Error::Precondition("characteristic systems start at q = 1".into()));
    }
    let p = prime_of(pres.field())?;
    let pb1 = pres.product_basis(1)?;
    let target = pres.product_basis(q + 1)?;
    let basis: Vec<_> = pb1.elements().iter().map(|e| e.2.clone()).collect();
    let d = basis.len();
    let field = pres.field();
    let mut terms: Vec<Vec<(Vec<u16>, u64)>> = vec![Vec::new(); target.elements().len()];
    for choice in multisets(d, q + 1) {
        let mut mono = basis[choice[0]].clone();
        let mut e = vec![0u16; d];
        for &c in &choice {
            e[c] += 1;
        }
        for &c in &choice[1..] {
            mono = mono.mul(&basis[c]);
        }
        // multinomial (q+1)! / ∏ e_u!
        let mut multinomial = binomial(q as u64 + 1, 0);
        let mut left = q as u64 + 1;
        for &x in &e {
            multinomial *= binomial(left, x as u64);
            left -= x as u64;
        }
        let weight = field.from_bigint(&multinomial);
        let coords = target
            .monomial_coordinates(&mono)
            .ok_or_else(|| Error::Shape("power outside its piece".into()))?;
        for (t, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                terms[t].push((e.clone(), residue(&(c * &weight))?));
            }
        }
    }
    let polys = terms
        .into_iter()
        .map(|ts| LambdaPoly::from_terms(d, p, ts))
        .collect::<Result<Vec<_>>>()?;
    IdealBasis::new(d, p, polys)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Groebner,
    Certificate,
    Both,
}

impl Backend {
    pub fn runs_groebner(self) -> bool {
        matches!(self, Backend::Groebner | Backend::Both)
    }

    pub fn runs_certificate(self) -> bool {
        matches!(self, Backend::Certificate | Backend::Both)
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "groebner" => Ok(Backend::Groebner),
            "certificate" => Ok(Backend::Certificate),
            "both" => Ok(Backend::Both),
            other => Err(Error::Format(format!("unknown backend {other:?}"))),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Groebner => "groebner",
            Backend::Certificate => "certificate",
            Backend::Both => "both",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The bound is strictly below the comparison dimension.
    Incompatible,
    Compatible,
    /// No backend produced a value.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Incompatible => "incompatible",
            Verdict::Compatible => "compatible",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharvarResult {
    pub backend: Backend,
    pub field: Field,
    pub groebner: Option<DimensionReport>,
    pub certificate: Option<CertificateReport>,
    /// Projective dimension from the Gröbner backend; `-1` for the empty set.
    pub exact: Option<i64>,
    /// Projective bound from the certificate, or the exact value without one.
    pub bound: Option<i64>,
    /// `(n - 1) + (k - 2)`.
    pub comparison: i64,
    pub verdict: Verdict,
}

/// Runs the selected backends on the quadric system of `params`.
pub fn first_charvar_dim(params: &GenericParams, field: Field, backend: Backend) -> Result<CharvarResult> {
    if backend.runs_groebner() {
        prime_of(field)?;
    }
    let pres = JacobianPresentation::new(params, field)?;
    let qs = quadric_system(&pres)?;
    let groebner = if backend.runs_groebner() {
        Some(groebner_dimension(&quadric_ideal(&qs)?)?)
    } else {
        None
    };
    let certificate = if backend.runs_certificate() {
        Some(certificate_bound(&qs)?)
    } else {
        None
    };
    let exact = groebner
        .as_ref()
        .map(|g| g.cone_dim.map_or(-1, |d| d as i64 - 1));
    let cert_bound = certificate.as_ref().and_then(|c| c.projective_bound).map(|b| b as i64);
    if let (Some(e), Some(b)) = (exact, cert_bound) {
        if e > b {
            return Err(Error::Inconsistency(format!(
                "Gröbner dimension {e} exceeds the certificate bound {b}"
            )));
        }
    }
    let bound = cert_bound.or(exact);
    let comparison = (params.n() + params.k()) as i64 - 3;
    let best = match (exact, cert_bound) {
        (Some(e), Some(b)) => Some(e.min(b)),
        (e, b) => e.or(b),
    };
    let verdict = match best {
        Some(v) if v < comparison => Verdict::Incompatible,
        Some(_) => Verdict::Compatible,
        None => Verdict::Inconclusive,
    };
    Ok(CharvarResult {
        backend,
        field,
        groebner,
        certificate,
        exact,
        bound,
        comparison,
        verdict,
    })
}

/// Number of quadrics in the first characteristic system.
pub fn expected_quadrics(n: usize, k: usize) -> BigInt {
    binomial(n as u64, 2) * binomial(k as u64 - 1, 2)
}
