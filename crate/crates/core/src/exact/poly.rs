use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::ring::{Coeff, Integer, Ring};
use super::series::TruncatedSeries;
use crate::error::{Error, Result};

/// Dense univariate polynomial, index = degree.
///
/// The highest stored coefficient is nonzero; the zero polynomial stores
/// nothing and has degree -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial<C: Coeff> {
    ring: Ring,
    coeffs: Vec<C>,
}

impl<C: Coeff> Polynomial<C> {
    pub fn new(ring: Ring, mut coeffs: Vec<C>) -> Self {
        debug_assert!(C::admits(&ring));
        debug_assert!(coeffs.iter().all(|c| c.ring() == ring));
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { ring, coeffs }
    }

    pub fn zero(ring: Ring) -> Self {
        Polynomial {
            ring,
            coeffs: Vec::new(),
        }
    }

    pub fn one(ring: Ring) -> Self {
        Self::constant(C::one_in(&ring))
    }

    pub fn constant(c: C) -> Self {
        let ring = c.ring();
        Self::new(ring, vec![c])
    }

    /// `c * z^degree`.
    pub fn monomial(c: C, degree: usize) -> Self {
        let ring = c.ring();
        let mut coeffs = vec![C::zero_in(&ring); degree];
        coeffs.push(c);
        Self::new(ring, coeffs)
    }

    pub fn from_i64s(ring: Ring, coeffs: &[i64]) -> Self {
        Self::new(ring, coeffs.iter().map(|&c| C::from_i64(c, &ring)).collect())
    }

    pub fn from_integers(ring: Ring, coeffs: &[Integer]) -> Self {
        Self::new(ring, coeffs.iter().map(|c| C::from_integer(c, &ring)).collect())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Degree, with `deg 0 = -1`.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| C::zero_in(&self.ring))
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(
            self.ring,
            self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        )
    }

    /// Multiplies by `z^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![C::zero_in(&self.ring); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial {
            ring: self.ring,
            coeffs,
        }
    }

    /// `p(z^d)`.
    pub fn compose_power(&self, d: usize) -> Self {
        assert!(d >= 1);
        if self.is_zero() || d == 1 {
            return self.clone();
        }
        let zero = C::zero_in(&self.ring);
        let mut coeffs = vec![zero; (self.coeffs.len() - 1) * d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * d] = c.clone();
        }
        Polynomial {
            ring: self.ring,
            coeffs,
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero_in(&self.ring);
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Quotient of an exact division; fails when a remainder is left.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        check_same_ring(self.ring, divisor.ring)?;
        let lead = divisor.leading().ok_or(Error::NonExactDivision)?;
        if self.is_zero() {
            return Ok(self.clone());
        }
        if self.degree() < divisor.degree() {
            return Err(Error::NonExactDivision);
        }
        let dl = divisor.coeffs.len();
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - dl + 1;
        let mut quot = vec![C::zero_in(&self.ring); qlen];
        for i in (0..qlen).rev() {
            let top = rem[i + dl - 1].clone();
            if top.is_zero() {
                continue;
            }
            let q = top.try_div(lead).ok_or(Error::NonExactDivision)?;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    let t = rem[i + j].clone() - q.clone() * dc.clone();
                    rem[i + j] = t;
                }
            }
            quot[i] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::NonExactDivision);
        }
        Ok(Self::new(self.ring, quot))
    }

    /// Exact series of this polynomial known to `order`.
    pub fn to_series(&self, order: usize) -> TruncatedSeries<C> {
        let coeffs = (0..order).map(|i| self.coeff(i)).collect();
        TruncatedSeries::from_coeffs(self.ring, coeffs)
    }

    pub fn map<D: Coeff>(&self, ring: Ring, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::new(ring, self.coeffs.iter().map(f).collect())
    }
}

impl Polynomial<Integer> {
    /// Reduces every coefficient into `ring`.
    pub fn to_ring<D: Coeff>(&self, ring: Ring) -> Polynomial<D> {
        self.map(ring, |c| D::from_integer(c, &ring))
    }
}

pub(crate) fn check_same_ring(a: Ring, b: Ring) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::RingMismatch { left: a, right: b })
    }
}

impl<C: Coeff> Add for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        assert_eq!(self.ring, rhs.ring, "polynomial ring mismatch");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(self.ring, (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<C: Coeff> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        assert_eq!(self.ring, rhs.ring, "polynomial ring mismatch");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(self.ring, (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<C: Coeff> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial::new(self.ring, self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<C: Coeff> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: &Polynomial<C>) -> Polynomial<C> {
        assert_eq!(self.ring, rhs.ring, "polynomial ring mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.ring);
        }
        let mut out = vec![C::zero_in(&self.ring); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = out[i + j].clone() + a.clone() * b.clone();
                out[i + j] = t;
            }
        }
        Polynomial::new(self.ring, out)
    }
}

impl<C: Coeff> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*z")?,
                _ => write!(f, "({c})*z^{i}")?,
            }
        }
        Ok(())
    }
}

/// Serializes as the ascending coefficient list, each entry a decimal string.
impl<C: Coeff> Serialize for Polynomial<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ModInt;

    fn zp(c: &[i64]) -> Polynomial<Integer> {
        Polynomial::from_i64s(Ring::Integer, c)
    }

    #[test]
    fn degree_convention() {
        assert_eq!(zp(&[]).degree(), -1);
        assert_eq!(zp(&[0, 0]).degree(), -1);
        assert_eq!(zp(&[5]).degree(), 0);
        assert_eq!(zp(&[1, 0, 3, 0]).degree(), 2);
    }

    #[test]
    fn multiply_and_compose() {
        let a = zp(&[1, 1, 1]);
        let b = a.compose_power(2);
        assert_eq!(b, zp(&[1, 0, 1, 0, 1]));
        assert_eq!(&a * &b, zp(&[1, 1, 2, 1, 2, 1, 1]));
        assert_eq!((&a * &b).degree(), 6);
    }

    #[test]
    fn exact_division() {
        let a = zp(&[1, 1, 1]);
        let b = zp(&[2, -1, 0, 5]);
        let p = &a * &b;
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert_eq!(p.div_exact(&b).unwrap(), a);
        assert_eq!(zp(&[1, 2]).div_exact(&zp(&[2, 1])), Err(Error::NonExactDivision));
        assert_eq!(zp(&[1, 0, 1]).div_exact(&zp(&[1, 1])), Err(Error::NonExactDivision));
    }

    #[test]
    fn eval_horner() {
        let p = zp(&[3, -2, 1]);
        assert_eq!(p.eval(&Integer::from(5)), Integer::from(18));
        let q: Polynomial<ModInt> = p.to_ring(Ring::Mod(7));
        assert_eq!(q.eval(&ModInt::new(5, 7)).residue(), 4);
    }
}
