//! Values of series at `1/b` with rigorous tail bounds, continued fractions
//! certified against those bounds, and irrationality exponent estimates
//! `μ ≈ 2 + max log a_{k+1} / log q_k`.

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{log2_abs, log2_int, Integer, Rational, TruncatedSeries};
use crate::sequences::{CoeffBound, SequenceSpec};

/// `approximation = Σ_{j<M} c_j b^{-j}` and `|f(1/b) - approximation| <= error_bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluatedNumber {
    pub approximation: Rational,
    pub error_bound: Rational,
    pub b: u64,
    pub m: usize,
}

impl Serialize for EvaluatedNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("EvaluatedNumber", 5)?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field("M", &self.m)?;
        st.serialize_field("approximation", &self.approximation.to_string())?;
        st.serialize_field("error_bound", &self.error_bound.to_string())?;
        st.serialize_field("error_bound_log2", &log2_abs(&self.error_bound))?;
        st.end()
    }
}

fn rat(n: impl Into<Integer>) -> Rational {
    Rational::from_integer(n.into())
}

/// `Σ_{j>=M} bound(j) b^{-j}` in closed form.
pub fn tail_bound(bound: &CoeffBound, b: u64, m: usize) -> Result<Rational> {
    if b < 2 {
        return Err(Error::InvalidArgument(format!("base must be >= 2, got {b}")));
    }
    let x = Rational::new(Integer::one(), Integer::from(b));
    let one = Rational::one();
    let xm = num_traits::pow(x.clone(), m);
    Ok(match bound {
        CoeffBound::Constant(k) => rat(k.clone()) * &xm / (&one - &x),
        CoeffBound::Linear => {
            let q = &one - &x;
            xm * (rat(m as u64 + 1) / &q + &x / (&q * &q))
        }
        CoeffBound::Geometric(r) => {
            if *r >= Integer::from(b) {
                return Err(Error::InvalidArgument(format!(
                    "geometric bound r = {r} is not below the base {b}"
                )));
            }
            let t = rat(r.clone()) * &x;
            num_traits::pow(t.clone(), m) / (one - t)
        }
    })
}

fn check_bound(c: &Integer, j: usize, bound: &CoeffBound) -> bool {
    let a = c.abs();
    match bound {
        CoeffBound::Constant(k) => a <= *k,
        CoeffBound::Linear => a <= Integer::from(j + 1),
        CoeffBound::Geometric(r) => a <= num_traits::pow(r.clone(), j),
    }
}

/// `f(1/b)` from the first `M = f.order()` coefficients; each is checked
/// against `bound`, which then covers the tail.
pub fn evaluate_series(f: &TruncatedSeries<Integer>, b: u64, bound: &CoeffBound) -> Result<EvaluatedNumber> {
    let m = f.order();
    let error_bound = tail_bound(bound, b, m)?;
    let bb = Integer::from(b);
    let mut num = Integer::zero();
    for (j, c) in f.coeffs().iter().enumerate() {
        if !check_bound(c, j, bound) {
            return Err(Error::BoundViolated { index: j });
        }
        num = num * &bb + c;
    }
    let den = if m == 0 { Integer::one() } else { num_traits::pow(bb, m - 1) };
    Ok(EvaluatedNumber {
        approximation: Rational::new(num, den),
        error_bound,
        b,
        m,
    })
}

/// `f(1/b)` for a described series with `M` coefficients.
pub fn evaluate_at(spec: &SequenceSpec, b: u64, m: usize, bound: &CoeffBound) -> Result<EvaluatedNumber> {
    if m == 0 {
        return Err(Error::InvalidArgument("M must be >= 1".into()));
    }
    evaluate_series(&spec.generate(m)?, b, bound)
}

/// Regular continued fraction of a rational; the last quotient is `>= 2`
/// unless it is the only one.
pub fn continued_fraction(x: &Rational) -> Vec<Integer> {
    let (mut p, mut q) = (x.numer().clone(), x.denom().clone());
    let mut out = Vec::new();
    while !q.is_zero() {
        let (a, r) = p.div_mod_floor(&q);
        out.push(a);
        p = q;
        q = r;
    }
    out
}

/// Partial quotients known to belong to every real in `[x - ε, x + ε]`,
/// with convergent denominators and exponent estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentEstimate {
    /// `a_0..a_n`.
    pub partial_quotients: Vec<Integer>,
    /// `q_0..q_n`.
    pub denominators: Vec<Integer>,
    /// `2 + max log a_{k+1} / log q_k` over the trailing window.
    pub mu_hat: f64,
    /// Same maximum over every certified `k`.
    pub mu_hat_full: f64,
    pub window_start: usize,
    pub window_len: usize,
    pub error_bound_log2: f64,
}

impl ExponentEstimate {
    pub fn certified(&self) -> usize {
        self.partial_quotients.len()
    }
}

impl Serialize for ExponentEstimate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs = |v: &[Integer]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let mut st = s.serialize_struct("ExponentEstimate", 8)?;
        st.serialize_field("certified_terms", &self.certified())?;
        st.serialize_field("partial_quotients", &strs(&self.partial_quotients))?;
        st.serialize_field("q_bits", &self.denominators.iter().map(|q| q.bits()).collect::<Vec<_>>())?;
        st.serialize_field("mu_hat", &self.mu_hat)?;
        st.serialize_field("mu_hat_full", &self.mu_hat_full)?;
        st.serialize_field("window_start", &self.window_start)?;
        st.serialize_field("window_len", &self.window_len)?;
        st.serialize_field("error_bound_log2", &self.error_bound_log2)?;
        st.end()
    }
}

/// `q_0..q_{len-1}` for the quotients `a_0, a_1, …`.
pub fn convergent_denominators(a: &[Integer]) -> Vec<Integer> {
    let mut out = Vec::with_capacity(a.len());
    let (mut prev, mut cur) = (Integer::zero(), Integer::one());
    for (k, ak) in a.iter().enumerate() {
        if k > 0 {
            let next = ak * &cur + &prev;
            prev = cur;
            cur = next;
        }
        out.push(cur.clone());
    }
    out
}

/// Certified prefix of the continued fraction of the value enclosed by `x`.
///
/// A quotient `a_i` is kept when the expansions of both `x ± ε` agree on
/// `a_0..a_i` and continue past it (so `[x - ε, x + ε]` sits inside one
/// cylinder), and `2 q_n q_{n+1} ε < 1` holds for the last kept index `n`.
/// `window` is the number of trailing `k` entering `mu_hat`, defaulting to
/// half of them.
pub fn certified_cf(x: &EvaluatedNumber, window: Option<usize>) -> Result<ExponentEstimate> {
    let eps = &x.error_bound;
    if eps.is_negative() || *eps >= Rational::new(Integer::one(), Integer::from(2)) {
        return Err(Error::InvalidArgument("error bound must lie in [0, 1/2)".into()));
    }
    let mid = continued_fraction(&x.approximation);
    let lo = continued_fraction(&(&x.approximation - eps));
    let hi = continued_fraction(&(&x.approximation + eps));
    let mut t = 0;
    while t + 1 < lo.len() && t + 1 < hi.len() && lo[t] == hi[t] {
        t += 1;
    }
    debug_assert!(mid[..t] == lo[..t]);
    let qs = convergent_denominators(&mid);
    // largest n < t with 2 q_n q_{n+1} ε < 1
    let two_eps = eps * rat(2);
    let mut n = t;
    while n > 0 && !(n < qs.len() && rat(&qs[n - 1] * &qs[n]) * &two_eps < Rational::one()) {
        n -= 1;
    }
    if n == 0 {
        return Err(Error::NothingCertified(format!(
            "error bound 2^{:.1} leaves no partial quotient fixed",
            log2_abs(eps)
        )));
    }
    let partial_quotients = mid[..n].to_vec();
    let denominators = qs[..n].to_vec();
    // k ranges over 0..n-1 so that a_{k+1} is certified
    let ks = n - 1;
    let window_len = window.unwrap_or(ks / 2).clamp(1.min(ks), ks);
    let window_start = ks - window_len;
    let ratio = |k: usize| -> Option<f64> {
        let lq = log2_int(&denominators[k]);
        (lq > 0.0).then(|| log2_int(&partial_quotients[k + 1]) / lq)
    };
    let best = |range: std::ops::Range<usize>| range.filter_map(ratio).fold(0.0f64, f64::max);
    Ok(ExponentEstimate {
        mu_hat: 2.0 + best(window_start..ks),
        mu_hat_full: 2.0 + best(0..ks),
        partial_quotients,
        denominators,
        window_start,
        window_len,
        error_bound_log2: log2_abs(eps),
    })
}

/// `(1 + ρ) min(ρ², d)`.
pub fn mu_bound_from_rho(rho: &Rational, d: u64) -> Result<Rational> {
    if *rho < Rational::one() {
        return Err(Error::InvalidArgument(format!("rho must be >= 1, got {rho}")));
    }
    if d < 2 {
        return Err(Error::InvalidArgument(format!("d must be >= 2, got {d}")));
    }
    let sq = rho * rho;
    let m = if sq < rat(d) { sq } else { rat(d) };
    Ok((Rational::one() + rho) * m)
}
