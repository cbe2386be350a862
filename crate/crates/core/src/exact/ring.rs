use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::modint::ModInt;
use crate::error::{Error, Result};

/// Arbitrary-precision signed integer.
pub type Integer = BigInt;
/// Reduced fraction of two [`Integer`]s with positive denominator.
pub type Rational = BigRational;

/// Coefficient ring tag carried by polynomials and series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ring {
    Integer,
    Rational,
    /// Residues modulo `m >= 2`.
    Mod(u64),
}

impl Ring {
    pub fn is_field(&self) -> bool {
        match *self {
            Ring::Integer => false,
            Ring::Rational => true,
            Ring::Mod(m) => is_prime(m),
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match *self {
            Ring::Mod(m) => Some(m),
            _ => None,
        }
    }

    /// Parses `Z`, `Q` or `Z/m`.
    pub fn parse(s: &str) -> Result<Ring> {
        match s.trim() {
            "Z" | "integer" => Ok(Ring::Integer),
            "Q" | "rational" => Ok(Ring::Rational),
            other => {
                let m = other
                    .strip_prefix("Z/")
                    .or_else(|| other.strip_prefix("mod"))
                    .and_then(|r| r.trim().parse::<u64>().ok())
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown ring `{other}`")))?;
                if m < 2 {
                    return Err(Error::InvalidArgument(format!("modulus {m} < 2")));
                }
                Ok(Ring::Mod(m))
            }
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integer => write!(f, "Z"),
            Ring::Rational => write!(f, "Q"),
            Ring::Mod(m) => write!(f, "Z/{m}"),
        }
    }
}

impl Serialize for Ring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    if m % 2 == 0 {
        return m == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= m {
        if m % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Exact coefficient type usable in polynomials, series and determinants.
///
/// The arithmetic operators panic when mixing incompatible moduli; container
/// types check their ring tags first and report [`Error::RingMismatch`].
pub trait Coeff:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn ring(&self) -> Ring;
    /// Whether values of this type can represent elements of `ring`.
    fn admits(ring: &Ring) -> bool;
    fn zero_in(ring: &Ring) -> Self;
    fn one_in(ring: &Ring) -> Self;
    /// Image of an integer under the canonical map `Z -> ring`.
    fn from_integer(n: &Integer, ring: &Ring) -> Self;
    fn is_zero(&self) -> bool;
    fn try_inv(&self) -> Option<Self>;
    /// Exact quotient, `None` when it does not exist in the ring.
    fn try_div(&self, rhs: &Self) -> Option<Self>;

    fn from_i64(n: i64, ring: &Ring) -> Self {
        Self::from_integer(&Integer::from(n), ring)
    }

    fn is_one(&self) -> bool {
        *self == Self::one_in(&self.ring())
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one_in(&self.ring());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Coeff for Integer {
    fn ring(&self) -> Ring {
        Ring::Integer
    }
    fn admits(ring: &Ring) -> bool {
        *ring == Ring::Integer
    }
    fn zero_in(_: &Ring) -> Self {
        Integer::zero()
    }
    fn one_in(_: &Ring) -> Self {
        Integer::one()
    }
    fn from_integer(n: &Integer, _: &Ring) -> Self {
        n.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn try_inv(&self) -> Option<Self> {
        if One::is_one(&self.abs()) {
            Some(self.clone())
        } else {
            None
        }
    }
    fn try_div(&self, rhs: &Self) -> Option<Self> {
        if Zero::is_zero(rhs) {
            return None;
        }
        let (q, r) = self.div_rem(rhs);
        Zero::is_zero(&r).then_some(q)
    }
}

impl Coeff for Rational {
    fn ring(&self) -> Ring {
        Ring::Rational
    }
    fn admits(ring: &Ring) -> bool {
        *ring == Ring::Rational
    }
    fn zero_in(_: &Ring) -> Self {
        Rational::zero()
    }
    fn one_in(_: &Ring) -> Self {
        Rational::one()
    }
    fn from_integer(n: &Integer, _: &Ring) -> Self {
        Rational::from_integer(n.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn try_inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn try_div(&self, rhs: &Self) -> Option<Self> {
        (!Zero::is_zero(rhs)).then(|| self / rhs)
    }
}

impl Coeff for ModInt {
    fn ring(&self) -> Ring {
        Ring::Mod(self.modulus())
    }
    fn admits(ring: &Ring) -> bool {
        matches!(ring, Ring::Mod(_))
    }
    fn zero_in(ring: &Ring) -> Self {
        ModInt::new(0, expect_modulus(ring))
    }
    fn one_in(ring: &Ring) -> Self {
        ModInt::new(1, expect_modulus(ring))
    }
    fn from_integer(n: &Integer, ring: &Ring) -> Self {
        ModInt::from_integer(n, expect_modulus(ring))
    }
    fn is_zero(&self) -> bool {
        self.residue() == 0
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
    fn try_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|i| *self * i)
    }
}

fn expect_modulus(ring: &Ring) -> u64 {
    match ring {
        Ring::Mod(m) => *m,
        other => panic!("ModInt cannot live in {other}"),
    }
}

/// Checks that a coefficient type can represent `ring`.
pub(crate) fn check_admits<C: Coeff>(ring: &Ring) -> Result<()> {
    if C::admits(ring) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "coefficient type cannot represent {ring}"
        )))
    }
}

/// Exact base-2 logarithm of a positive rational, as an `f64`.
pub fn log2_abs(x: &Rational) -> f64 {
    log2_int(x.numer()) - log2_int(x.denom())
}

/// Base-2 logarithm of `|n|`; `-inf` for zero.
pub fn log2_int(n: &Integer) -> f64 {
    if Zero::is_zero(n) {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    let mag = n.magnitude();
    if bits <= 64 {
        return (mag.iter_u64_digits().next().unwrap_or(0) as f64).log2();
    }
    let shift = bits - 64;
    let top = (mag >> shift).iter_u64_digits().next().unwrap_or(0) as f64;
    top.log2() + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&m| is_prime(m)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(Ring::Mod(3).is_field());
        assert!(!Ring::Mod(4).is_field());
        assert!(!Ring::Integer.is_field());
    }

    #[test]
    fn ring_parse_roundtrip() {
        for r in [Ring::Integer, Ring::Rational, Ring::Mod(4)] {
            assert_eq!(Ring::parse(&r.to_string()).unwrap(), r);
        }
        assert!(Ring::parse("Z/1").is_err());
    }

    #[test]
    fn integer_units_and_division() {
        let two = Integer::from(2);
        assert!(two.try_inv().is_none());
        assert_eq!(Integer::from(-1).try_inv(), Some(Integer::from(-1)));
        assert_eq!(Integer::from(6).try_div(&two), Some(Integer::from(3)));
        assert_eq!(Integer::from(7).try_div(&two), None);
    }

    #[test]
    fn pow_by_squaring() {
        assert_eq!(Integer::from(-2).pow(11), Integer::from(-2048));
        let r = Rational::new(Integer::from(2), Integer::from(3));
        assert_eq!(r.pow(0), Rational::one());
        assert_eq!(
            Coeff::pow(&r, 3),
            Rational::new(Integer::from(8), Integer::from(27))
        );
    }

    #[test]
    fn logs() {
        let x = Rational::new(Integer::from(1), Integer::one() << 200u32);
        assert!((log2_abs(&x) + 200.0).abs() < 1e-12);
        assert!((log2_int(&Integer::from(3)) - 3f64.log2()).abs() < 1e-15);
        let big = (Integer::one() << 300u32) * 3;
        assert!((log2_int(&big) - (300.0 + 3f64.log2())).abs() < 1e-9);
    }
}
