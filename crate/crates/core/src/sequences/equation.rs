use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{check_admits, Coeff, Integer, Polynomial, Ring, TruncatedSeries};

/// `f(z) = A(z)/B(z) + C(z)/D(z) · f(z^radix)` with integer polynomial data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MahlerEquation {
    pub a: Polynomial<Integer>,
    pub b: Polynomial<Integer>,
    pub c: Polynomial<Integer>,
    pub d: Polynomial<Integer>,
    pub radix: usize,
}

impl MahlerEquation {
    pub fn new(
        a: Polynomial<Integer>,
        b: Polynomial<Integer>,
        c: Polynomial<Integer>,
        d: Polynomial<Integer>,
        radix: usize,
    ) -> Result<Self> {
        if b.is_zero() || d.is_zero() {
            return Err(Error::InvalidArgument("B and D must be nonzero".into()));
        }
        if c.is_zero() {
            return Err(Error::InvalidArgument("C must be nonzero".into()));
        }
        if radix < 2 {
            return Err(Error::InvalidArgument(format!("radix must be >= 2, got {radix}")));
        }
        for p in [&a, &b, &c, &d] {
            if p.ring() != Ring::Integer {
                return Err(Error::InvalidArgument("equation data must be integer".into()));
            }
        }
        Ok(MahlerEquation { a, b, c, d, radix })
    }

    pub fn from_i64s(a: &[i64], b: &[i64], c: &[i64], d: &[i64], radix: usize) -> Result<Self> {
        let p = |v: &[i64]| Polynomial::from_i64s(Ring::Integer, v);
        Self::new(p(a), p(b), p(c), p(d), radix)
    }

    /// Degrees `(α, β, γ, δ)` of `A, B, C, D`, with `deg 0 = -1`.
    pub fn degrees(&self) -> [isize; 4] {
        [self.a.degree(), self.b.degree(), self.c.degree(), self.d.degree()]
    }

    /// Residual `D·B·f − D·A − C·B·f(z^radix)` known to the order of `f`.
    pub fn residual<C: Coeff>(&self, f: &TruncatedSeries<C>) -> Result<TruncatedSeries<C>> {
        let ring = f.ring();
        let n = f.order();
        let lhs = f.mul_poly(&(&self.d * &self.b).to_ring(ring))?;
        let da = (&self.d * &self.a).to_ring(ring).to_series(n);
        let cb = (&self.c * &self.b).to_ring::<C>(ring);
        let composed = f.compose_power(self.radix)?.truncate(n).mul_poly(&cb)?;
        lhs.sub(&da)?.sub(&composed)
    }
}

/// JSON literal `{A: [...], B: [...], C: [...], D: [...], d: n, c0?: k}`,
/// coefficient lists ascending by degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationLiteral {
    #[serde(rename = "A")]
    pub a: Vec<i64>,
    #[serde(rename = "B")]
    pub b: Vec<i64>,
    #[serde(rename = "C")]
    pub c: Vec<i64>,
    #[serde(rename = "D")]
    pub d: Vec<i64>,
    #[serde(rename = "d")]
    pub radix: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c0: Option<i64>,
}

impl EquationLiteral {
    pub fn to_equation(&self) -> Result<MahlerEquation> {
        MahlerEquation::from_i64s(&self.a, &self.b, &self.c, &self.d, self.radix)
    }
}

/// Coefficients of the series solution of `eq`, in ascending index order.
///
/// Index `m` of `f(z^d)` only involves `c_{m/d}` with `m/d < m`, so every
/// coefficient beyond the constant term follows from earlier ones. The
/// constant term solves `(1 − C(0)/D(0))·c_0 = A(0)/B(0)`; when that is
/// degenerate `c0` must be supplied and is checked for consistency.
pub fn feq_generate<C: Coeff>(
    eq: &MahlerEquation,
    n: usize,
    ring: Ring,
    c0: Option<&C>,
) -> Result<TruncatedSeries<C>> {
    check_admits::<C>(&ring)?;
    if n == 0 {
        return Err(Error::InvalidArgument("order must be >= 1".into()));
    }
    let lhs: Vec<C> = (&eq.d * &eq.b).to_ring::<C>(ring).into_coeffs();
    let rhs: Vec<C> = (&eq.c * &eq.b).to_ring::<C>(ring).into_coeffs();
    let known: Polynomial<C> = (&eq.d * &eq.a).to_ring(ring);
    let zero = C::zero_in(&ring);
    let l0 = lhs.first().cloned().unwrap_or_else(|| zero.clone());
    if l0.is_zero() {
        return Err(Error::NotInvertible {
            ring,
            what: "B(0)·D(0)".into(),
        });
    }
    let r0 = rhs.first().cloned().unwrap_or_else(|| zero.clone());
    let pivot0 = l0.clone() - r0;
    let k0 = known.coeff(0);
    let first = match c0 {
        Some(c) => {
            if c.ring() != ring {
                return Err(Error::RingMismatch {
                    left: ring,
                    right: c.ring(),
                });
            }
            if pivot0.clone() * c.clone() != k0 {
                return Err(Error::InconsistentConstantTerm(format!(
                    "c0 = {c} does not satisfy ({pivot0})·c0 = {k0}"
                )));
            }
            c.clone()
        }
        None => {
            if pivot0.is_zero() {
                return Err(Error::InconsistentConstantTerm(
                    "constant term is not determined by the equation; supply c0".into(),
                ));
            }
            k0.try_div(&pivot0)
                .ok_or(Error::NotInRing { index: 0, ring })?
        }
    };
    let l0_inv = l0.try_inv();
    let d = eq.radix;
    let mut f: Vec<C> = Vec::with_capacity(n);
    f.push(first);
    for m in 1..n {
        let mut acc = known.coeff(m);
        for (i, li) in lhs.iter().enumerate().skip(1).take(m) {
            if !li.is_zero() {
                acc = acc - li.clone() * f[m - i].clone();
            }
        }
        for (i, ri) in rhs.iter().enumerate().take(m + 1) {
            let j = m - i;
            if !ri.is_zero() && j % d == 0 {
                acc = acc + ri.clone() * f[j / d].clone();
            }
        }
        let next = match &l0_inv {
            Some(inv) => acc * inv.clone(),
            None => acc.try_div(&l0).ok_or(Error::NotInRing { index: m, ring })?,
        };
        f.push(next);
    }
    Ok(TruncatedSeries::from_coeffs(ring, f))
}
