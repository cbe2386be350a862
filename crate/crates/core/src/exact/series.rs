use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::modint::ModInt;
use super::poly::{check_same_ring, Polynomial};
use super::ring::{Coeff, Integer, Rational, Ring};
use crate::error::{Error, Result};

/// Formal power series known exactly below `order`.
///
/// Coefficients at index `>= order` are unknown, not zero. Every operation
/// computes the order up to which its own output is provable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries<C: Coeff> {
    ring: Ring,
    coeffs: Vec<C>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
}

impl<C: Coeff> TruncatedSeries<C> {
    pub fn from_coeffs(ring: Ring, coeffs: Vec<C>) -> Self {
        debug_assert!(C::admits(&ring));
        debug_assert!(coeffs.iter().all(|c| c.ring() == ring));
        TruncatedSeries { ring, coeffs }
    }

    pub fn from_i64s(ring: Ring, coeffs: &[i64]) -> Self {
        Self::from_coeffs(ring, coeffs.iter().map(|&c| C::from_i64(c, &ring)).collect())
    }

    /// The zero series known to `order`.
    pub fn zero(ring: Ring, order: usize) -> Self {
        Self::from_coeffs(ring, vec![C::zero_in(&ring); order])
    }

    pub fn one(ring: Ring, order: usize) -> Self {
        let mut s = Self::zero(ring, order);
        if order > 0 {
            s.coeffs[0] = C::one_in(&ring);
        }
        s
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient `i`, or an error when `i` lies beyond the provable order.
    pub fn coeff(&self, i: usize) -> Result<&C> {
        self.coeffs.get(i).ok_or(Error::InsufficientOrder {
            needed: i + 1,
            available: self.order(),
        })
    }

    /// Lowest index with a nonzero coefficient; `None` if all known ones vanish.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero_within_order(&self) -> bool {
        self.valuation().is_none()
    }

    /// Forgets everything at index `>= order`.
    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.ring, self.coeffs[..order.min(self.order())].to_vec())
    }

    /// Drops the first `k` coefficients: `(f - prefix) / z^k`.
    pub fn shift_down(&self, k: usize) -> Self {
        let k = k.min(self.order());
        Self::from_coeffs(self.ring, self.coeffs[k..].to_vec())
    }

    /// Multiplies by `z^k`; the new low coefficients are known zeros.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![C::zero_in(&self.ring); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::from_coeffs(self.ring, coeffs)
    }

    pub fn neg(&self) -> Self {
        Self::from_coeffs(self.ring, self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_coeffs(
            self.ring,
            self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        )
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        check_same_ring(self.ring, rhs.ring)?;
        let n = self.order().min(rhs.order());
        Ok(Self::from_coeffs(
            self.ring,
            (0..n)
                .map(|i| self.coeffs[i].clone() + rhs.coeffs[i].clone())
                .collect(),
        ))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        check_same_ring(self.ring, rhs.ring)?;
        let n = self.order().min(rhs.order());
        Ok(Self::from_coeffs(
            self.ring,
            (0..n)
                .map(|i| self.coeffs[i].clone() - rhs.coeffs[i].clone())
                .collect(),
        ))
    }

    /// Cauchy product known to `min(order_a, order_b)`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        check_same_ring(self.ring, rhs.ring)?;
        let n = self.order().min(rhs.order());
        let mut out = vec![C::zero_in(&self.ring); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = out[i + j].clone() + a.clone() * b.clone();
                out[i + j] = t;
            }
        }
        Ok(Self::from_coeffs(self.ring, out))
    }

    /// Product with an exact polynomial; the series order is kept.
    pub fn mul_poly(&self, p: &Polynomial<C>) -> Result<Self> {
        check_same_ring(self.ring, p.ring())?;
        self.mul(&p.to_series(self.order()))
    }

    /// Multiplicative inverse to the same order.
    pub fn invert(&self) -> Result<Self> {
        let n = self.order();
        if n == 0 {
            return Err(Error::InsufficientOrder {
                needed: 1,
                available: 0,
            });
        }
        if self.is_zero_within_order() {
            return Err(Error::ZeroSeries);
        }
        let inv0 = self.coeffs[0].try_inv().ok_or_else(|| Error::NotInvertible {
            ring: self.ring,
            what: format!("constant term {}", self.coeffs[0]),
        })?;
        let mut out: Vec<C> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for m in 1..n {
            let mut acc = C::zero_in(&self.ring);
            for k in 1..=m {
                let a = &self.coeffs[k];
                if !a.is_zero() {
                    acc = acc + a.clone() * out[m - k].clone();
                }
            }
            out.push(-(acc * inv0.clone()));
        }
        Ok(Self::from_coeffs(self.ring, out))
    }

    /// `f(z^d)`, known to `order * d`.
    pub fn compose_power(&self, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!(
                "compose_power needs d >= 2, got {d}"
            )));
        }
        let n = self.order() * d;
        let mut out = vec![C::zero_in(&self.ring); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            out[j * d] = c.clone();
        }
        Ok(Self::from_coeffs(self.ring, out))
    }

    /// Square root of a series with constant term 1, when 2 is a unit.
    pub fn sqrt_unit(&self) -> Result<Self> {
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        if !self.coeffs[0].is_one() {
            return Err(Error::InvalidArgument(
                "sqrt_unit needs constant term 1".into(),
            ));
        }
        let inv2 = C::from_i64(2, &self.ring)
            .try_inv()
            .ok_or_else(|| Error::NotInvertible {
                ring: self.ring,
                what: "2".into(),
            })?;
        let mut g: Vec<C> = vec![C::one_in(&self.ring)];
        for m in 1..n {
            let mut acc = self.coeffs[m].clone();
            for i in 1..m {
                acc = acc - g[i].clone() * g[m - i].clone();
            }
            g.push(acc * inv2.clone());
        }
        Ok(Self::from_coeffs(self.ring, g))
    }

    /// Polynomial made of the known coefficients.
    pub fn to_polynomial(&self) -> Polynomial<C> {
        Polynomial::new(self.ring, self.coeffs.clone())
    }

    pub fn map<D: Coeff>(&self, ring: Ring, f: impl Fn(&C) -> D) -> TruncatedSeries<D> {
        TruncatedSeries::from_coeffs(ring, self.coeffs.iter().map(f).collect())
    }
}

impl TruncatedSeries<Integer> {
    pub fn to_rational(&self) -> TruncatedSeries<Rational> {
        self.map(Ring::Rational, |c| Rational::from_integer(c.clone()))
    }

    pub fn reduce_mod(&self, m: u64) -> TruncatedSeries<ModInt> {
        self.map(Ring::Mod(m), |c| ModInt::from_integer(c, m))
    }

    /// Generic image in any admitted ring.
    pub fn to_ring<D: Coeff>(&self, ring: Ring) -> TruncatedSeries<D> {
        self.map(ring, |c| D::from_integer(c, &ring))
    }
}

/// `a + b`, `a - b` or `a * b` with order bookkeeping.
pub fn series_arith<C: Coeff>(
    a: &TruncatedSeries<C>,
    b: &TruncatedSeries<C>,
    kind: ArithKind,
) -> Result<TruncatedSeries<C>> {
    match kind {
        ArithKind::Add => a.add(b),
        ArithKind::Sub => a.sub(b),
        ArithKind::Mul => a.mul(b),
    }
}

pub fn series_invert<C: Coeff>(a: &TruncatedSeries<C>) -> Result<TruncatedSeries<C>> {
    a.invert()
}

pub fn compose_power<C: Coeff>(a: &TruncatedSeries<C>, d: usize) -> Result<TruncatedSeries<C>> {
    a.compose_power(d)
}

/// Expansion of `p / q` to `order`.
pub fn rational_to_series<C: Coeff>(
    p: &Polynomial<C>,
    q: &Polynomial<C>,
    order: usize,
) -> Result<TruncatedSeries<C>> {
    check_same_ring(p.ring(), q.ring())?;
    if q.coeff(0).is_zero() {
        return Err(Error::NotInvertible {
            ring: q.ring(),
            what: "Q(0) = 0".into(),
        });
    }
    if order == 0 {
        return Ok(TruncatedSeries::zero(p.ring(), 0));
    }
    let qinv = q.to_series(order).invert()?;
    p.to_series(order).mul(&qinv)
}

impl<C: Coeff> fmt::Display for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}] + O(z^{})", parts.join(", "), self.order())
    }
}

impl<C: Coeff> Serialize for TruncatedSeries<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        let mut st = s.serialize_struct("Series", 3)?;
        st.serialize_field("ring", &self.ring)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.serialize_field("order", &self.order())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zs(c: &[i64]) -> TruncatedSeries<Integer> {
        TruncatedSeries::from_i64s(Ring::Integer, c)
    }

    fn ints(s: &TruncatedSeries<Integer>) -> Vec<i64> {
        s.coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn add_cancels() {
        let s = series_arith(&zs(&[1, 1]), &zs(&[1, -1]), ArithKind::Add).unwrap();
        assert_eq!(ints(&s), vec![2, 0]);
        assert_eq!(s.order(), 2);
    }

    #[test]
    fn geometric_telescopes() {
        let s = zs(&[1, 1, 1, 1]).mul(&zs(&[1, -1, 0, 0])).unwrap();
        assert_eq!(ints(&s), vec![1, 0, 0, 0]);
    }

    #[test]
    fn schoolbook_convolution() {
        // (1 + z + z^2)(1 + z^2 + z^4) known to order 3
        let s = zs(&[1, 1, 1]).mul(&zs(&[1, 0, 1])).unwrap();
        assert_eq!(ints(&s), vec![1, 1, 2]);
        assert_eq!(s.order(), 3);
    }

    #[test]
    fn mul_takes_min_order() {
        let s = zs(&[1, 2, 3, 4, 5]).mul(&zs(&[1, 1])).unwrap();
        assert_eq!(s.order(), 2);
        assert_eq!(ints(&s), vec![1, 3]);
    }

    #[test]
    fn invert_geometric() {
        let s = zs(&[1, -1, 0, 0, 0]).invert().unwrap();
        assert_eq!(ints(&s), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn invert_char_two() {
        let s: TruncatedSeries<ModInt> = TruncatedSeries::from_i64s(Ring::Mod(2), &[1, 1, 0]);
        let inv = s.invert().unwrap();
        let r: Vec<u64> = inv.coeffs().iter().map(|c| c.residue()).collect();
        assert_eq!(r, vec![1, 1, 1]);
    }

    #[test]
    fn invert_fibonacci() {
        // long-division oracle: c_n = c_{n-1} + c_{n-2}
        let mut fib = vec![1i64, 1];
        while fib.len() < 6 {
            let n = fib.len();
            fib.push(fib[n - 1] + fib[n - 2]);
        }
        let s = zs(&[1, -1, -1, 0, 0, 0]).invert().unwrap();
        assert_eq!(ints(&s), fib);
    }

    #[test]
    fn invert_errors() {
        assert_eq!(zs(&[0, 0, 0]).invert(), Err(Error::ZeroSeries));
        assert!(matches!(
            zs(&[2, 1]).invert(),
            Err(Error::NotInvertible { .. })
        ));
        let q = zs(&[2, 1]).to_rational().invert().unwrap();
        assert_eq!(q.coeffs()[1], Rational::new(Integer::from(-1), Integer::from(4)));
    }

    #[test]
    fn compose_power_examples() {
        let a = zs(&[1, 1]).compose_power(2).unwrap();
        assert_eq!(ints(&a), vec![1, 0, 1, 0]);
        let b = zs(&[1, 1, 1]).compose_power(3).unwrap();
        assert_eq!(ints(&b), vec![1, 0, 0, 1, 0, 0, 1, 0, 0]);
        assert!(zs(&[1]).compose_power(1).is_err());
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let a: TruncatedSeries<ModInt> = TruncatedSeries::from_i64s(Ring::Mod(3), &[1, 2]);
        let b: TruncatedSeries<ModInt> = TruncatedSeries::from_i64s(Ring::Mod(5), &[1, 2]);
        assert!(matches!(a.add(&b), Err(Error::RingMismatch { .. })));
        assert!(matches!(a.mul(&b), Err(Error::RingMismatch { .. })));
    }

    #[test]
    fn rational_expansions() {
        let p = Polynomial::from_i64s(Ring::Integer, &[1]);
        let q = Polynomial::from_i64s(Ring::Integer, &[1, -1]);
        assert_eq!(ints(&rational_to_series(&p, &q, 4).unwrap()), vec![1, 1, 1, 1]);

        // z/(1-z)^2 = sum n z^n, the derivative of the geometric series times z
        let p = Polynomial::from_i64s(Ring::Integer, &[0, 1]);
        let q = Polynomial::from_i64s(Ring::Integer, &[1, -2, 1]);
        let oracle: Vec<i64> = (0..5).collect();
        assert_eq!(ints(&rational_to_series(&p, &q, 5).unwrap()), oracle);

        let p = Polynomial::from_i64s(Ring::Integer, &[1]);
        let q = Polynomial::from_i64s(Ring::Integer, &[1, -1, -1]);
        assert_eq!(
            ints(&rational_to_series(&p, &q, 6).unwrap()),
            vec![1, 1, 2, 3, 5, 8]
        );

        let q0 = Polynomial::from_i64s(Ring::Integer, &[0, 1]);
        assert!(rational_to_series(&p, &q0, 3).is_err());
    }

    #[test]
    fn sqrt_mod_three() {
        let h: TruncatedSeries<ModInt> = TruncatedSeries::from_i64s(Ring::Mod(3), &[1, 0, 1, 0, 0, 0, 0]);
        let g = h.sqrt_unit().unwrap();
        assert_eq!(g.mul(&g).unwrap(), h);
    }

    #[test]
    fn json_shape() {
        let s = zs(&[1, -2]);
        let v = serde_json::to_string(&s).unwrap();
        assert_eq!(v, r#"{"ring":"Z","coeffs":["1","-2"],"order":2}"#);
    }
}
