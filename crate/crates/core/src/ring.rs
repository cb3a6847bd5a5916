//! Coefficient rings: exact rationals and integers modulo `m`.
//!
//! A [`Scalar`] carries no ring tag; the owning [`RingSpec`] performs every
//! operation and keeps values canonical (lowest terms with a positive
//! denominator over the rationals, a representative in `[0, m)` modulo `m`).

use alloc::format;
use alloc::string::ToString;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A modulus `m >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Modulus(BigInt);

impl Modulus {
    pub fn new(m: BigUint) -> Result<Self> {
        if m < BigUint::from(2u32) {
            return Err(Error::BadModulus(format!("{m} (must be at least 2)")));
        }
        Ok(Self(BigInt::from(m)))
    }

    pub fn from_u64(m: u64) -> Result<Self> {
        Self::new(BigUint::from(m))
    }

    pub fn value(&self) -> &BigInt {
        &self.0
    }

    pub fn to_biguint(&self) -> BigUint {
        self.0.magnitude().clone()
    }

    /// Number of bytes needed to write any residue in `[0, m)`.
    pub fn byte_width(&self) -> usize {
        let top = &self.0 - 1u32;
        (top.bits() as usize).div_ceil(8).max(1)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Rationals,
    IntegersMod(Modulus),
}

/// A ring element. Meaningful only together with the [`RingSpec`] that
/// produced it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    /// The value as a `u64`, if it is a nonnegative integer that fits.
    pub fn to_u64(&self) -> Option<u64> {
        if !self.0.is_integer() {
            return None;
        }
        u64::try_from(self.0.numer()).ok()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            self.0.numer().fmt(f)
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl RingSpec {
    pub fn integers_mod(m: u64) -> Result<Self> {
        Ok(RingSpec::IntegersMod(Modulus::from_u64(m)?))
    }

    pub fn modulus(&self) -> Option<&Modulus> {
        match self {
            RingSpec::Rationals => None,
            RingSpec::IntegersMod(m) => Some(m),
        }
    }

    fn reduce_int(&self, v: BigInt) -> BigInt {
        match self {
            RingSpec::Rationals => v,
            RingSpec::IntegersMod(m) => v.mod_floor(&m.0),
        }
    }

    fn wrap_int(&self, v: BigInt) -> Scalar {
        Scalar(BigRational::from_integer(self.reduce_int(v)))
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.wrap_int(BigInt::from(v))
    }

    pub fn from_u64(&self, v: u64) -> Scalar {
        self.wrap_int(BigInt::from(v))
    }

    pub fn from_bigint(&self, v: BigInt) -> Scalar {
        self.wrap_int(v)
    }

    /// `num / den` in this ring. Modulo `m` the denominator must be a unit.
    pub fn from_ratio(&self, num: BigInt, den: BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator(format!("{num}/0")));
        }
        match self {
            RingSpec::Rationals => Ok(Scalar(BigRational::new(num, den))),
            RingSpec::IntegersMod(_) => {
                let d = self.wrap_int(den);
                let inv =
                    self.inv(&d).ok_or_else(|| Error::ZeroDenominator(format!("{d} is not a unit mod {self}")))?;
                Ok(self.mul(&self.wrap_int(num), &inv))
            }
        }
    }

    /// Map an exact rational into the ring (identity over the rationals).
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        self.from_ratio(q.numer().clone(), q.denom().clone())
    }

    /// Whether `s` is in canonical form for this ring.
    pub fn contains(&self, s: &Scalar) -> bool {
        match self {
            RingSpec::Rationals => s.0.denom().is_positive(),
            RingSpec::IntegersMod(m) => s.0.is_integer() && !s.0.numer().is_negative() && s.0.numer() < &m.0,
        }
    }

    pub fn check(&self, s: &Scalar) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::NotInRing(s.to_string()))
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            RingSpec::Rationals => Scalar(&a.0 + &b.0),
            RingSpec::IntegersMod(_) => self.wrap_int(a.0.numer() + b.0.numer()),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            RingSpec::Rationals => Scalar(&a.0 - &b.0),
            RingSpec::IntegersMod(_) => self.wrap_int(a.0.numer() - b.0.numer()),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match self {
            RingSpec::Rationals => Scalar(-&a.0),
            RingSpec::IntegersMod(_) => self.wrap_int(-a.0.numer()),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            RingSpec::Rationals => Scalar(&a.0 * &b.0),
            RingSpec::IntegersMod(_) => self.wrap_int(a.0.numer() * b.0.numer()),
        }
    }

    pub fn pow(&self, a: &Scalar, e: u32) -> Scalar {
        match self {
            RingSpec::Rationals => Scalar(num_traits::pow(a.0.clone(), e as usize)),
            RingSpec::IntegersMod(m) => {
                let base = a.0.numer().magnitude();
                let r = base.modpow(&BigUint::from(e), m.0.magnitude());
                Scalar(BigRational::from_integer(BigInt::from(r)))
            }
        }
    }

    /// Multiplicative inverse, if `a` is a unit.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match self {
            RingSpec::Rationals => Some(Scalar(a.0.recip())),
            RingSpec::IntegersMod(m) => {
                let e = a.0.numer().extended_gcd(&m.0);
                if !e.gcd.is_one() {
                    return None;
                }
                Some(self.wrap_int(e.x))
            }
        }
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        self.inv(a).is_some()
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Rationals => f.write_str("Q"),
            RingSpec::IntegersMod(m) => write!(f, "Zmod {m}"),
        }
    }
}
