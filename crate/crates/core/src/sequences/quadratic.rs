use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{is_prime, Coeff, ModInt, Polynomial, Ring, TruncatedSeries};

/// `A(z) + B(z) F(z) + C(z) F(z)^2 = 0` over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticEquation {
    pub a: Polynomial<ModInt>,
    pub b: Polynomial<ModInt>,
    pub c: Polynomial<ModInt>,
}

/// Which of the four hypotheses on `(A, B, C)` guaranteeing a periodic
/// Hankel continued fraction the equation meets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadraticCase {
    /// `B(0) = 1, C(0) = 0, C ≠ 0`.
    LinearLeading,
    /// `B(0) = 1, C = 0`: the solution is rational.
    Rational,
    /// `A(0) = 0, B(0) = 1, C(0) ≠ 0`.
    VanishingConstant,
    /// `p >= 3, B = 0, C(0) = 1, A = −(a_k z^k)^2 (1 + z Ã)`.
    SquareRoot,
}

impl QuadraticEquation {
    pub fn from_i64s(p: u64, a: &[i64], b: &[i64], c: &[i64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotAField(Ring::Mod(p)));
        }
        let r = Ring::Mod(p);
        Ok(QuadraticEquation {
            a: Polynomial::from_i64s(r, a),
            b: Polynomial::from_i64s(r, b),
            c: Polynomial::from_i64s(r, c),
        })
    }

    pub fn ring(&self) -> Ring {
        self.a.ring()
    }

    pub fn classify(&self) -> Option<QuadraticCase> {
        let p = self.ring().modulus()?;
        let b0 = self.b.coeff(0);
        let c0 = self.c.coeff(0);
        if b0.is_one() {
            if self.c.is_zero() {
                return Some(QuadraticCase::Rational);
            }
            if c0.is_zero() {
                return Some(QuadraticCase::LinearLeading);
            }
            if self.a.coeff(0).is_zero() {
                return Some(QuadraticCase::VanishingConstant);
            }
        }
        if p >= 3 && self.b.is_zero() && c0.is_one() && self.square_root_shape().is_some() {
            return Some(QuadraticCase::SquareRoot);
        }
        None
    }

    /// `(k, a_k)` with `A = −(a_k z^k)^2 (1 + z·Ã)`.
    fn square_root_shape(&self) -> Option<(usize, ModInt)> {
        let v = self.a.valuation()?;
        if v % 2 == 1 {
            return None;
        }
        let lead = -self.a.coeff(v);
        let p = lead.modulus();
        (1..p)
            .map(|x| ModInt::new(x, p))
            .find(|x| *x * *x == lead)
            .map(|x| (v / 2, x))
    }

    /// Residual `A + B F + C F^2` to the order of `f`.
    pub fn residual(&self, f: &TruncatedSeries<ModInt>) -> Result<TruncatedSeries<ModInt>> {
        let n = f.order();
        let sq = f.mul(f)?;
        self.a
            .to_series(n)
            .add(&f.mul_poly(&self.b)?)?
            .add(&sq.mul_poly(&self.c)?)
    }

    /// The power-series solution to order `n` selected by the case: the
    /// root with `F(0) = −A(0)` in the first case, `F(0) = 0` in the third,
    /// and the root with leading coefficient `a_k` in the fourth.
    pub fn solve(&self, n: usize) -> Result<TruncatedSeries<ModInt>> {
        let ring = self.ring();
        let case = self.classify().ok_or_else(|| {
            Error::InvalidArgument("equation meets none of the four hypotheses".into())
        })?;
        match case {
            QuadraticCase::Rational => {
                let neg_a = -&self.a;
                crate::exact::rational_to_series(&neg_a, &self.b, n)
            }
            QuadraticCase::LinearLeading | QuadraticCase::VanishingConstant => {
                let f0 = match case {
                    QuadraticCase::LinearLeading => -self.a.coeff(0),
                    _ => ModInt::zero_in(&ring),
                };
                Ok(self.solve_simple_root(f0, n))
            }
            QuadraticCase::SquareRoot => {
                let (k, ak) = self.square_root_shape().expect("classified");
                if n <= k {
                    return Ok(TruncatedSeries::zero(ring, n));
                }
                // F^2 = −A / C, so F = a_k z^k · sqrt((−A / (a_k^2 z^{2k})) / C)
                let m = n - k;
                let scale = (ak * ak).inv().expect("a_k is a unit");
                let h = (-&self.a).to_series(2 * k + m).shift_down(2 * k).scale(&scale);
                let cinv = self.c.to_series(m).invert()?;
                let root = h.mul(&cinv)?.sqrt_unit()?;
                Ok(root.scale(&ak).shift_up(k))
            }
        }
    }

    /// Coefficient-by-coefficient solve when `B(0) + 2 C(0) F(0)` is a unit.
    fn solve_simple_root(&self, f0: ModInt, n: usize) -> TruncatedSeries<ModInt> {
        let ring = self.ring();
        let zero = ModInt::zero_in(&ring);
        let (a, b, c) = (self.a.coeffs(), self.b.coeffs(), self.c.coeffs());
        let at = |v: &[ModInt], i: usize| v.get(i).copied().unwrap_or(zero);
        let pivot = at(b, 0) + ModInt::from_i64(2, ring.modulus().unwrap()) * at(c, 0) * f0;
        let pivot_inv = pivot.inv().expect("simple root");
        let mut f = vec![f0];
        // sq[m] = Σ_{i+j=m} f_i f_j, excluding the two terms that carry f_m
        let mut sq = vec![f0 * f0];
        for m in 1..n {
            let mut partial = zero;
            for i in 1..m {
                partial = partial + f[i] * f[m - i];
            }
            let mut rest = at(a, m);
            for (i, bi) in b.iter().enumerate().skip(1).take(m) {
                rest = rest + *bi * f[m - i];
            }
            for (i, ci) in c.iter().enumerate().take(m + 1) {
                let j = m - i;
                let s = if j == m { partial } else { sq[j] };
                rest = rest + *ci * s;
            }
            let fm = -rest * pivot_inv;
            f.push(fm);
            sq.push(partial + ModInt::from_i64(2, ring.modulus().unwrap()) * f0 * fm);
        }
        f.truncate(n);
        TruncatedSeries::from_coeffs(ring, f)
    }
}
