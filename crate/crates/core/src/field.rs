//! Exact coefficient fields: the rationals, the Gaussian rationals and prime fields.
//!
//! A [`Scalar`] knows which field it lives in. Arithmetic between scalars of
//! different fields is a programming error and panics; the polynomial layer
//! checks fields up front and reports a [`Error::FieldMismatch`] instead.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A prime modulus. Only constructible through [`Prime::new`], which checks primality.
///
/// Moduli are limited to `p < 2^32` so that residue products fit in a `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut q = 3;
    while q * q <= p {
        if p.is_multiple_of(q) {
            return false;
        }
        q += 2;
    }
    true
}

/// The coefficient field `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    GaussianRationals,
    PrimeField(Prime),
}

impl FieldSpec {
    pub fn prime_field(p: u64) -> Result<Self> {
        Prime::new(p).map(FieldSpec::PrimeField)
    }

    /// 0 for the characteristic-zero fields, `p` otherwise.
    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::PrimeField(p) => p.get(),
            _ => 0,
        }
    }

    /// Whether `1, 2, ..., n` are all invertible.
    pub fn inverts_factorials_up_to(self, n: usize) -> bool {
        match self.characteristic() {
            0 => true,
            p => (n as u64) < p,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => f.write_str("q"),
            FieldSpec::GaussianRationals => f.write_str("qi"),
            FieldSpec::PrimeField(p) => write!(f, "fp:{}", p.get()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid field `{0}`: expected q, qi or fp:<prime>")]
pub struct FieldParseError(pub String);

impl FromStr for FieldSpec {
    type Err = FieldParseError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let err = || FieldParseError(s.to_string());
        match s.trim() {
            "q" => Ok(FieldSpec::Rationals),
            "qi" => Ok(FieldSpec::GaussianRationals),
            other => {
                let p = other.strip_prefix("fp:").ok_or_else(err)?;
                let p: u64 = p.parse().map_err(|_| err())?;
                FieldSpec::prime_field(p).map_err(|_| err())
            }
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Gaussian(BigRational, BigRational),
    Residue { p: u64, r: u64 },
}

/// An element of one of the supported exact fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

impl Scalar {
    pub fn zero(field: FieldSpec) -> Self {
        Self::from_i64(field, 0)
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::from_i64(field, 1)
    }

    pub fn from_i64(field: FieldSpec, value: i64) -> Self {
        Self::from_bigint(field, &BigInt::from(value))
    }

    pub fn from_biguint(field: FieldSpec, value: &BigUint) -> Self {
        match field {
            FieldSpec::PrimeField(p) => Scalar(Repr::Residue {
                p: p.get(),
                r: (value % p.get()).to_u64().unwrap(),
            }),
            _ => Self::from_bigint(field, &BigInt::from(value.clone())),
        }
    }

    pub fn from_bigint(field: FieldSpec, value: &BigInt) -> Self {
        match field {
            FieldSpec::Rationals => {
                Scalar(Repr::Rational(BigRational::from_integer(value.clone())))
            }
            FieldSpec::GaussianRationals => Scalar(Repr::Gaussian(
                BigRational::from_integer(value.clone()),
                BigRational::zero(),
            )),
            FieldSpec::PrimeField(p) => {
                let p = p.get();
                let r = value.mod_floor(&BigInt::from(p)).to_u64().unwrap();
                Scalar(Repr::Residue { p, r })
            }
        }
    }

    /// `numer / denom`, failing when the denominator vanishes in the field.
    pub fn from_ratio(field: FieldSpec, numer: &BigInt, denom: &BigInt) -> Result<Self> {
        let d = Self::from_bigint(field, denom);
        Ok(&Self::from_bigint(field, numer) * &d.inv()?)
    }

    pub fn from_rational(field: FieldSpec, value: &BigRational) -> Result<Self> {
        Self::from_ratio(field, value.numer(), value.denom())
    }

    /// `re + im*i` in the Gaussian rationals.
    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        Scalar(Repr::Gaussian(re, im))
    }

    /// The imaginary unit; only exists in the Gaussian rationals.
    pub fn imaginary_unit(field: FieldSpec) -> Option<Self> {
        match field {
            FieldSpec::GaussianRationals => Some(Scalar(Repr::Gaussian(
                BigRational::zero(),
                BigRational::one(),
            ))),
            _ => None,
        }
    }

    pub fn field(&self) -> FieldSpec {
        match &self.0 {
            Repr::Rational(_) => FieldSpec::Rationals,
            Repr::Gaussian(..) => FieldSpec::GaussianRationals,
            Repr::Residue { p, .. } => FieldSpec::PrimeField(Prime(*p)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Rational(q) => q.is_zero(),
            Repr::Gaussian(a, b) => a.is_zero() && b.is_zero(),
            Repr::Residue { r, .. } => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Rational(q) => q.is_one(),
            Repr::Gaussian(a, b) => a.is_one() && b.is_zero(),
            Repr::Residue { r, .. } => *r == 1,
        }
    }

    /// Real and imaginary parts for the characteristic-zero fields.
    pub fn as_gaussian_parts(&self) -> Option<(BigRational, BigRational)> {
        match &self.0 {
            Repr::Rational(q) => Some((q.clone(), BigRational::zero())),
            Repr::Gaussian(a, b) => Some((a.clone(), b.clone())),
            Repr::Residue { .. } => None,
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match &self.0 {
            Repr::Residue { r, .. } => Some(*r),
            _ => None,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Rational(q) => Scalar(Repr::Rational(q.recip())),
            Repr::Gaussian(a, b) => {
                let norm = a * a + b * b;
                Scalar(Repr::Gaussian(a / &norm, -(b / &norm)))
            }
            Repr::Residue { p, r } => Scalar(Repr::Residue {
                p: *p,
                r: pow_mod(*r, *p - 2, *p),
            }),
        })
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Scalar::one(self.field());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Splits off a leading minus sign for display: returns `(true, -self)`
    /// when the value reads as negative (a negative rational, or a Gaussian
    /// rational on the negative real or imaginary axis).
    pub(crate) fn split_sign(&self) -> (bool, Scalar) {
        let negative = match &self.0 {
            Repr::Rational(q) => q.is_negative(),
            Repr::Gaussian(a, b) => {
                (a.is_negative() && b.is_zero()) || (a.is_zero() && b.is_negative())
            }
            Repr::Residue { .. } => false,
        };
        if negative {
            (true, -self)
        } else {
            (false, self.clone())
        }
    }

    fn assert_same_field(&self, other: &Scalar) {
        assert_eq!(
            self.field(),
            other.field(),
            "arithmetic between scalars of different fields"
        );
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Writes `q*i` with unit coefficients elided.
fn fmt_imaginary(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_one() {
        f.write_str("i")
    } else if (-q).is_one() {
        f.write_str("-i")
    } else {
        fmt_rational(q, f)?;
        f.write_str("*i")
    }
}

/// Parseable rendering. Gaussian values with both parts non-zero are
/// parenthesised so the text can stand as a factor.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(q) => fmt_rational(q, f),
            Repr::Gaussian(a, b) if b.is_zero() => fmt_rational(a, f),
            Repr::Gaussian(a, b) if a.is_zero() => fmt_imaginary(b, f),
            Repr::Gaussian(a, b) => {
                f.write_str("(")?;
                fmt_rational(a, f)?;
                if b.is_negative() {
                    f.write_str(" - ")?;
                    fmt_imaginary(&-b, f)?;
                } else {
                    f.write_str(" + ")?;
                    fmt_imaginary(b, f)?;
                }
                f.write_str(")")
            }
            Repr::Residue { r, .. } => write!(f, "{r}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        Scalar(match (&self.0, &rhs.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a + b),
            (Repr::Gaussian(a, b), Repr::Gaussian(c, d)) => Repr::Gaussian(a + c, b + d),
            (Repr::Residue { p, r }, Repr::Residue { r: s, .. }) => Repr::Residue {
                p: *p,
                r: (r + s) % p,
            },
            _ => unreachable!(),
        })
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        Scalar(match (&self.0, &rhs.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a * b),
            (Repr::Gaussian(a, b), Repr::Gaussian(c, d)) => {
                Repr::Gaussian(a * c - b * d, a * d + b * c)
            }
            (Repr::Residue { p, r }, Repr::Residue { r: s, .. }) => Repr::Residue {
                p: *p,
                r: r * s % p,
            },
            _ => unreachable!(),
        })
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        Scalar(match &self.0 {
            Repr::Rational(a) => Repr::Rational(-a),
            Repr::Gaussian(a, b) => Repr::Gaussian(-a, -b),
            Repr::Residue { p, r } => Repr::Residue {
                p: *p,
                r: (p - r) % p,
            },
        })
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident, $tr_assign:ident, $method_assign:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr_assign<&'a Scalar> for Scalar {
            fn $method_assign(&mut self, rhs: &Scalar) {
                *self = (&*self).$method(rhs);
            }
        }
    };
}

forward_owned!(Add, add, AddAssign, add_assign);
forward_owned!(Sub, sub, SubAssign, sub_assign);
forward_owned!(Mul, mul, MulAssign, mul_assign);
