//! Exact scalars: arbitrary-precision rationals or residues modulo an odd prime.
//!
//! A [`Scalar`] always knows which field it lives in. Mixing fields in a
//! single arithmetic operation is a programming error and panics; every
//! public container (polynomials, matrices, parameter sets) checks the field
//! at its boundary so this never happens through the public API.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Primes must stay below 2^32 so residue products fit in a `u64`.
pub const MAX_PRIME: u64 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "Q")]
    Rational,
    #[serde(rename = "Fp")]
    Prime(u64),
}

impl Field {
    /// The prime field `F_p`; `p` must be an odd prime below 2^32.
    pub fn prime(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::UnsupportedField("characteristic 2".into()));
        }
        if p >= MAX_PRIME {
            return Err(Error::UnsupportedField(format!("prime {p} exceeds 2^32")));
        }
        if !is_prime(p) {
            return Err(Error::UnsupportedField(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Residue {
                value: v.rem_euclid(*p as i64) as u64,
                modulus: *p,
            },
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => Scalar::Residue {
                value: bigint_mod(v, *p),
                modulus: *p,
            },
        }
    }

    /// Element of this field represented by `x`. Rationals map into `F_p`
    /// when `p` divides no denominator; residues only map to their own field.
    pub fn coerce(&self, x: &Scalar) -> Result<Scalar> {
        match (self, x) {
            (Field::Rational, Scalar::Rational(_)) => Ok(x.clone()),
            (Field::Prime(p), Scalar::Residue { modulus, .. }) if p == modulus => Ok(x.clone()),
            (Field::Prime(p), Scalar::Rational(q)) => {
                let den = bigint_mod(q.denom(), *p);
                if den == 0 {
                    return Err(Error::NonGeneric(format!(
                        "denominator of {q} vanishes modulo {p}"
                    )));
                }
                let num = bigint_mod(q.numer(), *p);
                Ok(Scalar::Residue {
                    value: num * inv_mod(den, *p) % p,
                    modulus: *p,
                })
            }
            _ => Err(Error::FieldMismatch {
                left: self.to_string(),
                right: x.field().to_string(),
            }),
        }
    }

    /// Parses `"p/q"`, `"p"` (rationals) or a decimal residue.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        match self {
            Field::Rational => {
                let (num, den) = match s.split_once('/') {
                    Some((a, b)) => (a.trim(), b.trim()),
                    None => (s, "1"),
                };
                let num: BigInt = num
                    .parse()
                    .map_err(|_| Error::Format(format!("bad rational numerator in {s:?}")))?;
                let den: BigInt = den
                    .parse()
                    .map_err(|_| Error::Format(format!("bad rational denominator in {s:?}")))?;
                if den.is_zero() {
                    return Err(Error::Format(format!("zero denominator in {s:?}")));
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            Field::Prime(_) => {
                let v: BigInt = s
                    .parse()
                    .map_err(|_| Error::Format(format!("bad residue {s:?}")))?;
                Ok(self.from_bigint(&v))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Residue { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: inv_mod(*value, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        rhs.inv().map(|r| self * &r)
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue { .. } => None,
        }
    }

    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Residue { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    /// Serialized form for parameter files: `"p/q"` for rationals, the
    /// decimal residue for prime-field elements.
    pub fn to_file_string(&self) -> String {
        match self {
            Scalar::Rational(q) => format!("{}/{}", q.numer(), q.denom()),
            Scalar::Residue { value, .. } => value.to_string(),
        }
    }

    /// Bit size of the largest numerator or denominator; residues report 0.
    pub fn height_bits(&self) -> u64 {
        match self {
            Scalar::Rational(q) => q.numer().bits().max(q.denom().bits()),
            Scalar::Residue { .. } => 0,
        }
    }

    fn binop(&self, rhs: &Scalar, op: BinOp) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
            }),
            (
                Scalar::Residue { value: a, modulus: p },
                Scalar::Residue { value: b, modulus: q },
            ) if p == q => Scalar::Residue {
                value: match op {
                    BinOp::Add => (a + b) % p,
                    BinOp::Sub => (a + p - b) % p,
                    BinOp::Mul => a * b % p,
                },
                modulus: *p,
            },
            _ => panic!(
                "scalar field mismatch: {} vs {}",
                self.field(),
                rhs.field()
            ),
        }
    }
}

#[derive(Clone, Copy)]
enum BinOp {
    Add,
    Sub,
    Mul,
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.binop(rhs, $op)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.binop(&rhs, $op)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.binop(rhs, $op)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.binop(&rhs, $op)
            }
        }
    };
}

forward_binop!(Add, add, BinOp::Add);
forward_binop!(Sub, sub, BinOp::Sub);
forward_binop!(Mul, mul, BinOp::Mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

pub(crate) fn bigint_mod(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Trial division; only ever called on numbers below 2^32.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_validation() {
        assert!(Field::prime(2).is_err());
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(1_000_003).is_ok());
        assert!(Field::prime(1_000_000_007).is_ok());
        assert!(Field::prime(4_294_967_311).is_err());
    }

    #[test]
    fn residue_arithmetic() {
        let f = Field::prime(7).unwrap();
        let a = f.from_i64(5);
        let b = f.from_i64(4);
        assert_eq!(&a + &b, f.from_i64(2));
        assert_eq!(&a - &b, f.one());
        assert_eq!(&b - &a, f.from_i64(6));
        assert_eq!(&a * &b, f.from_i64(6));
        assert_eq!(&a * &a.inv().unwrap(), f.one());
        assert_eq!(-&a, f.from_i64(2));
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn rational_coercion() {
        let q = Field::Rational.parse("3/4").unwrap();
        let f = Field::prime(7).unwrap();
        let r = f.coerce(&q).unwrap();
        // 4^{-1} = 2 mod 7
        assert_eq!(r, f.from_i64(6));
        let bad = Field::Rational.parse("1/7").unwrap();
        assert!(f.coerce(&bad).is_err());
        assert!(Field::Rational.coerce(&r).is_err());
    }

    #[test]
    fn file_strings() {
        let q = Field::Rational.parse("-6/4").unwrap();
        assert_eq!(q.to_file_string(), "-3/2");
        assert_eq!(Field::Rational.parse("5").unwrap().to_file_string(), "5/1");
        let f = Field::prime(11).unwrap();
        assert_eq!(f.parse("-1").unwrap().to_file_string(), "10");
    }

    #[test]
    fn powers() {
        let f = Field::prime(101).unwrap();
        assert_eq!(f.from_i64(3).pow(4), f.from_i64(81));
        assert_eq!(Field::Rational.from_i64(-2).pow(3), Field::Rational.from_i64(-8));
        assert_eq!(f.from_i64(3).pow(0), f.one());
    }
}
