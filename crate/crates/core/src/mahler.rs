//! Iterated Mahler equations
//!
//! `f = A_m/B_m + (C_m/D_m) f(z^{d^m})` and the rational approximations of
//! `f(1/b)` obtained by substituting a Padé approximant of `f` into the tail.

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{log2_abs, log2_int, Coeff, Integer, Polynomial, Rational, Ring, TruncatedSeries};
use crate::exponent::EvaluatedNumber;
use crate::hankel::{hankel_table, DEFAULT_WINDOW};
use crate::pade::{pade_construct, pade_polynomials};
use crate::sequences::MahlerEquation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IteratedEquation {
    pub m: usize,
    /// `d^m`.
    pub radix: usize,
    pub a: Polynomial<Integer>,
    pub b: Polynomial<Integer>,
    pub c: Polynomial<Integer>,
    pub d: Polynomial<Integer>,
}

fn poly_json(p: &Polynomial<Integer>) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

impl Serialize for IteratedEquation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("IteratedEquation", 7)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("radix", &self.radix)?;
        st.serialize_field("A", &poly_json(&self.a))?;
        st.serialize_field("B", &poly_json(&self.b))?;
        st.serialize_field("C", &poly_json(&self.c))?;
        st.serialize_field("D", &poly_json(&self.d))?;
        st.serialize_field("degrees", &[self.a.degree(), self.b.degree(), self.c.degree(), self.d.degree()])?;
        st.end()
    }
}

impl IteratedEquation {
    /// The iterate as a Mahler equation of radix `d^m`.
    pub fn as_equation(&self) -> Result<MahlerEquation> {
        MahlerEquation::new(self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone(), self.radix)
    }

    /// `D_m B_m f - D_m A_m - C_m B_m f(z^{d^m})` to the order of `f`.
    pub fn residual<C: Coeff>(&self, f: &TruncatedSeries<C>) -> Result<TruncatedSeries<C>> {
        self.as_equation()?.residual(f)
    }
}

fn clamp(deg: isize) -> usize {
    deg.max(0) as usize
}

fn geometric_sum(d: usize, m: usize) -> usize {
    (0..m).map(|j| d.pow(j as u32)).sum()
}

/// `m = 0` gives the identity `f = 0/1 + (1/1) f`.
fn iterate_raw(eq: &MahlerEquation, m: usize) -> Result<IteratedEquation> {
    let ring = Ring::Integer;
    let d = eq.radix;
    let one = Polynomial::one(ring);
    let powers: Vec<usize> = (0..m).map(|j| d.pow(j as u32)).collect();
    // C_j, D_j for j = 0..=m
    let mut cs = vec![one.clone()];
    let mut ds = vec![one.clone()];
    let mut b_prod = one.clone();
    for &p in &powers {
        cs.push(cs.last().unwrap() * &eq.c.compose_power(p));
        ds.push(ds.last().unwrap() * &eq.d.compose_power(p));
        b_prod = &b_prod * &eq.b.compose_power(p);
    }
    let b_m = if m == 0 { one.clone() } else { &ds[m - 1] * &b_prod };
    let mut a_m = Polynomial::zero(ring);
    for (j, &p) in powers.iter().enumerate() {
        let a_j = eq.a.compose_power(p);
        if a_j.is_zero() {
            continue;
        }
        let cofactor = b_m.div_exact(&(&ds[j] * &eq.b.compose_power(p)))?;
        a_m = &a_m + &(&(&cs[j] * &a_j) * &cofactor);
    }
    Ok(IteratedEquation {
        m,
        radix: d.pow(m as u32),
        a: a_m,
        b: b_m,
        c: cs.pop().unwrap(),
        d: ds.pop().unwrap(),
    })
}

/// Degree facts for an iterate: `deg C_m`, `deg D_m` exactly, `deg B_m`,
/// `deg A_m` as bounds, with `deg A` read as `0` when `A = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub deg_c: isize,
    pub expected_deg_c: usize,
    pub deg_d: isize,
    pub expected_deg_d: usize,
    pub deg_b: isize,
    pub bound_b: usize,
    pub deg_a: isize,
    pub bound_a: usize,
}

impl DegreeCheck {
    pub fn holds(&self) -> bool {
        self.deg_c == self.expected_deg_c as isize
            && self.deg_d == self.expected_deg_d as isize
            && self.deg_b <= self.bound_b as isize
            && self.deg_a <= self.bound_a as isize
    }
}

pub fn degree_check(eq: &MahlerEquation, it: &IteratedEquation) -> DegreeCheck {
    let [alpha, beta, gamma, delta] = eq.degrees().map(clamp);
    let (d, m) = (eq.radix, it.m);
    let dm = d.pow(m as u32);
    let s = geometric_sum(d, m);
    DegreeCheck {
        deg_c: it.c.degree(),
        expected_deg_c: gamma * s,
        deg_d: it.d.degree(),
        expected_deg_d: delta * s,
        deg_b: it.b.degree(),
        bound_b: (beta + delta) * dm,
        deg_a: it.a.degree(),
        bound_a: (alpha + beta + gamma + delta) * dm,
    }
}

/// `(A_m, B_m, C_m, D_m)` for `m >= 1`, with the degree facts asserted.
pub fn iterate_equation(eq: &MahlerEquation, m: usize) -> Result<IteratedEquation> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be >= 1".into()));
    }
    let it = iterate_raw(eq, m)?;
    let check = degree_check(eq, &it);
    assert!(check.holds(), "degree facts fail for m = {m}: {check:?}");
    Ok(it)
}

/// `p_{i,m} / q_{i,m}` approximating `f(1/b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitApproximant {
    pub i: usize,
    pub m: usize,
    pub n_i: usize,
    pub p_poly: Polynomial<Integer>,
    pub q_poly: Polynomial<Integer>,
    pub p: Integer,
    pub q: Integer,
    /// `α + β + γ + 2δ + n_i`, with `α` read as `0` when `A = 0`.
    pub e_i: usize,
    /// `gcd(p, q)`; the pair is not reduced.
    pub gcd: Integer,
}

impl ExplicitApproximant {
    pub fn value(&self) -> Rational {
        Rational::new(self.p.clone(), self.q.clone())
    }
}

impl Serialize for ExplicitApproximant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ExplicitApproximant", 9)?;
        st.serialize_field("i", &self.i)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("n_i", &self.n_i)?;
        st.serialize_field("e_i", &self.e_i)?;
        st.serialize_field("p", &self.p.to_string())?;
        st.serialize_field("q", &self.q.to_string())?;
        st.serialize_field("q_bits", &self.q.bits())?;
        st.serialize_field("gcd", &self.gcd.to_string())?;
        st.serialize_field("deg_P", &self.p_poly.degree())?;
        st.serialize_field("deg_Q", &self.q_poly.degree())?;
        st.end()
    }
}

/// Nonzero Hankel indices `n_1 < n_2 < …` visible in the first
/// `f.order()` coefficients.
pub fn nonzero_hankel_indices(f: &TruncatedSeries<Integer>) -> Result<Vec<usize>> {
    let n = (f.order() + 1) / 2;
    Ok(hankel_table(f, n, 0, DEFAULT_WINDOW)?.nonzero_indices)
}

fn nth_index(f: &TruncatedSeries<Integer>, i: usize) -> Result<(usize, Option<usize>)> {
    if i == 0 {
        return Err(Error::InvalidArgument("i counts from 1".into()));
    }
    let idx = nonzero_hankel_indices(f)?;
    match idx.get(i - 1) {
        Some(&n) => Ok((n, idx.get(i).copied())),
        None => Err(Error::InsufficientOrder {
            needed: 2 * (idx.last().copied().unwrap_or(0) + 1),
            available: f.order(),
        }),
    }
}

/// `b^e P(1/b)` by integer Horner; needs `deg P <= e`.
fn scaled_value(p: &Polynomial<Integer>, b: &Integer, e: usize) -> Integer {
    assert!(p.degree() <= e as isize);
    let mut acc = Integer::zero();
    for j in 0..=e {
        acc = acc * b + p.coeff(j);
    }
    acc
}

/// Same through exact rational evaluation at `1/b`.
fn scaled_value_rational(p: &Polynomial<Integer>, b: &Integer, e: usize) -> Integer {
    let x = Rational::new(Integer::one(), b.clone());
    let v = p.to_ring::<Rational>(Ring::Rational).eval(&x) * num_traits::pow(Rational::from_integer(b.clone()), e);
    assert!(v.is_integer(), "scaled value is not an integer");
    v.to_integer()
}

/// `p_{i,m}/q_{i,m}` for the `i`-th nonzero Hankel index of `f` (from 1).
///
/// `P_{i,m} = A_m D_m Q_i(z^{d^m}) + B_m C_m P_i(z^{d^m})`,
/// `Q_{i,m} = B_m D_m Q_i(z^{d^m})`, so that
/// `f - P_{i,m}/Q_{i,m} = (C_m/D_m) (f - P_i/Q_i)(z^{d^m})`.
pub fn build_approximant(
    eq: &MahlerEquation,
    f: &TruncatedSeries<Integer>,
    b: u64,
    i: usize,
    m: usize,
) -> Result<ExplicitApproximant> {
    if b < 2 {
        return Err(Error::InvalidArgument(format!("base must be >= 2, got {b}")));
    }
    let (n_i, _) = nth_index(f, i)?;
    let (p_i, q_i) = pade_polynomials(f, n_i)?;
    if Zero::is_zero(&q_i.coeff(0)) {
        return Err(Error::HankelVanishes(n_i));
    }
    let bb = Integer::from(b);
    let d = eq.radix;
    for j in 0..=m {
        let x = Rational::new(Integer::one(), num_traits::pow(bb.clone(), d.pow(j as u32)));
        for (name, poly) in [("B", &eq.b), ("C", &eq.c), ("D", &eq.d)] {
            if Zero::is_zero(&poly.to_ring::<Rational>(Ring::Rational).eval(&x)) {
                return Err(Error::DegenerateEvaluation(format!("{name} vanishes at 1/b^(d^{j})")));
            }
        }
    }
    let it = iterate_raw(eq, m)?;
    let dm = it.radix;
    let qc = q_i.compose_power(dm);
    let pc = p_i.compose_power(dm);
    let p_poly = &(&(&it.a * &it.d) * &qc) + &(&(&it.b * &it.c) * &pc);
    let q_poly = &(&it.b * &it.d) * &qc;
    let [alpha, beta, gamma, delta] = eq.degrees().map(clamp);
    let e_i = alpha + beta + gamma + 2 * delta + n_i;
    let e = e_i * dm;
    let p_val = scaled_value(&p_poly, &bb, e);
    let q_val = scaled_value(&q_poly, &bb, e);
    assert_eq!(p_val, scaled_value_rational(&p_poly, &bb, e));
    assert_eq!(q_val, scaled_value_rational(&q_poly, &bb, e));
    if Zero::is_zero(&q_val) {
        return Err(Error::DegenerateEvaluation("Q_{i,m}(1/b) = 0".into()));
    }
    let (p, q) = if q_val.is_negative() { (-p_val, -q_val) } else { (p_val, q_val) };
    let gcd = num_integer::Integer::gcd(&p, &q);
    Ok(ExplicitApproximant { i, m, n_i, p_poly, q_poly, p, q, e_i, gcd })
}

/// What the predicted error exponent depends on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictionInputs {
    pub n_i: usize,
    pub n_i_prime: usize,
    /// Valuations of `C` and `D` at `0`.
    pub eta: usize,
    pub iota: usize,
    pub d: usize,
    pub b: u64,
}

impl PredictionInputs {
    /// `log_b` of the predicted `1/|f(1/b) - p/q|`:
    /// `(n_i + n_i') d^m + (η - ι)(d^m - 1)/(d - 1)`.
    pub fn predicted_exponent(&self, m: usize) -> f64 {
        let dm = (self.d as f64).powi(m as i32);
        let s = geometric_sum(self.d, m) as f64;
        (self.n_i + self.n_i_prime) as f64 * dm + (self.eta as f64 - self.iota as f64) * s
    }
}

/// Reads `n_i`, `n_i'` and the valuations off `f` and `eq`. Fails when the
/// first nonzero bordered determinant at `n_i` is not found before the next
/// nonzero Hankel index.
pub fn prediction_inputs(eq: &MahlerEquation, f: &TruncatedSeries<Integer>, b: u64, i: usize) -> Result<PredictionInputs> {
    let (n_i, next) = nth_index(f, i)?;
    let approx = pade_construct(&f.to_rational(), n_i)?;
    let n_i_prime = approx
        .k_prime
        .ok_or_else(|| Error::InvalidArgument(format!("no contact index found at n_i = {n_i}")))?;
    match next {
        Some(nx) if n_i_prime < nx => {}
        Some(nx) => {
            return Err(Error::InvalidArgument(format!(
                "n_i' = {n_i_prime} is not below the next nonzero index {nx}"
            )))
        }
        None => {
            return Err(Error::InsufficientOrder {
                needed: 2 * (n_i_prime + 2),
                available: f.order(),
            })
        }
    }
    Ok(PredictionInputs {
        n_i,
        n_i_prime,
        eta: eq.c.valuation().unwrap_or(0),
        iota: eq.d.valuation().unwrap_or(0),
        d: eq.radix,
        b,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditRecord {
    pub i: usize,
    pub m: usize,
    pub q_bits: u64,
    /// `-log_b |f(1/b) - p/q|`; `None` when the difference is below the
    /// evaluation error (an exact match is possible).
    pub measured_exponent: Option<f64>,
    pub predicted_exponent: f64,
    pub ratio: Option<f64>,
    pub tolerance: f64,
    pub within_tolerance: bool,
    pub degenerate: bool,
}

/// Compares the measured error exponent with the prediction.
pub fn audit_approximation(
    app: &ExplicitApproximant,
    x: &EvaluatedNumber,
    inputs: &PredictionInputs,
    tolerance: f64,
) -> Result<AuditRecord> {
    let diff = (&x.approximation - app.value()).abs();
    let predicted = inputs.predicted_exponent(app.m);
    let base = |v: &Rational| -log2_abs(v) / (inputs.b as f64).log2();
    let mut rec = AuditRecord {
        i: app.i,
        m: app.m,
        q_bits: app.q.bits(),
        measured_exponent: None,
        predicted_exponent: predicted,
        ratio: None,
        tolerance,
        within_tolerance: false,
        degenerate: false,
    };
    if diff <= x.error_bound {
        rec.degenerate = true;
        return Ok(rec);
    }
    if diff < &x.error_bound * Rational::from_integer(Integer::from(10)) {
        return Err(Error::InsufficientPrecision(format!(
            "|f - p/q| ~ b^-{:.1} is within a factor 10 of the evaluation error",
            base(&diff)
        )));
    }
    // the true difference lies in diff ± error_bound
    let measured = base(&diff);
    let ratio = measured / predicted;
    rec.measured_exponent = Some(measured);
    rec.ratio = Some(ratio);
    rec.within_tolerance = (ratio - 1.0).abs() <= tolerance;
    Ok(rec)
}

/// `q_m < q_{m+1} <= q_m^{d(1+ε)}` for consecutive entries.
pub fn q_growth_holds(qs: &[Integer], d: usize, eps: f64) -> Vec<bool> {
    qs.windows(2)
        .map(|w| w[0] < w[1] && log2_int(&w[1]) <= d as f64 * (1.0 + eps) * log2_int(&w[0]))
        .collect()
}
