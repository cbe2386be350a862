//! Super δ-fractions
//!
//! ```text
//!            v_0 z^{k_0}
//! f = ---------------------------------------------
//!     1 + u_1(z) z - v_1 z^{k_0+k_1+δ}
//!                    --------------------------------
//!                    1 + u_2(z) z - v_2 z^{k_1+k_2+δ} / ...
//! ```
//!
//! over a field. For δ = 2 this is the Hankel continued fraction, whose
//! levels give every nonvanishing Hankel determinant in closed form.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{Coeff, Integer, Polynomial, Rational, Ring, TruncatedSeries};
use crate::hankel::PeriodicityEvidence;

/// One layer `v z^k / (1 + u(z) z - …)`. `u` belongs to the denominator under
/// this numerator; it is `None` when the input order ran out before it was
/// determined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level<C: Coeff> {
    pub v: C,
    pub k: usize,
    pub u: Option<Polynomial<C>>,
}

impl<C: Coeff> Serialize for Level<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Level", 3)?;
        st.serialize_field("v", &self.v.to_string())?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("u", &self.u)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HFraction<C: Coeff> {
    pub ring: Ring,
    pub delta: usize,
    /// Levels whose `v` and `k` are certified by the input order.
    pub levels: Vec<Level<C>>,
    /// The expansion ended exactly; only set on caller assertion.
    pub terminated: bool,
    /// When the series left after the last complete layer vanished within
    /// its order `t`, the next `k` is at least `t`.
    pub tail_zero_order: Option<usize>,
    /// Unexpanded rest: the series at the last level without `u`, or the
    /// series left after the last complete layer.
    remainder: Option<TruncatedSeries<C>>,
}

impl<C: Coeff> Serialize for HFraction<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HFraction", 6)?;
        st.serialize_field("ring", &self.ring)?;
        st.serialize_field("delta", &self.delta)?;
        st.serialize_field("levels", &self.levels)?;
        st.serialize_field("certified_levels", &self.certified_levels())?;
        st.serialize_field("terminated", &self.terminated)?;
        st.serialize_field("tail_zero_order", &self.tail_zero_order)?;
        st.end()
    }
}

/// Expansion of `f` with at most `max_levels` levels. `exact_rational`
/// asserts that `f` is the complete expansion of a rational function, which
/// is the only way the result can be marked terminated.
pub fn hfrac_expand<C: Coeff>(
    f: &TruncatedSeries<C>,
    delta: usize,
    max_levels: usize,
    exact_rational: bool,
) -> Result<HFraction<C>> {
    let ring = f.ring();
    if delta < 1 {
        return Err(Error::InvalidArgument("delta must be >= 1".into()));
    }
    if !ring.is_field() {
        return Err(Error::NotAField(ring));
    }
    let mut levels = Vec::new();
    let mut g = f.clone();
    let mut tail_zero_order = None;
    loop {
        let Some(k) = g.valuation() else {
            tail_zero_order = Some(g.order());
            break;
        };
        if levels.len() == max_levels {
            break;
        }
        let v = g.coeffs()[k].clone();
        let n = g.order();
        if n < 2 * k + delta {
            levels.push(Level { v, k, u: None });
            break;
        }
        // v z^k / g = 1 + u z - z^{k+δ} g'
        let h = g.shift_down(k);
        let r = h.invert()?.scale(&v).sub(&TruncatedSeries::one(ring, n - k))?;
        debug_assert!(r.coeffs()[0].is_zero());
        let u = Polynomial::new(ring, r.coeffs()[1..k + delta].to_vec());
        assert!(u.degree() <= (k + delta) as isize - 2, "u exceeds its degree bound");
        g = r.shift_down(k + delta).neg();
        levels.push(Level { v, k, u: Some(u) });
    }
    let terminated = exact_rational && tail_zero_order.is_some_and(|t| t > 0);
    Ok(HFraction {
        ring,
        delta,
        levels,
        terminated,
        tail_zero_order,
        remainder: Some(g),
    })
}

/// Integer input is expanded over the rationals.
pub fn hfrac_expand_integer(
    f: &TruncatedSeries<Integer>,
    delta: usize,
    max_levels: usize,
    exact_rational: bool,
) -> Result<HFraction<Rational>> {
    hfrac_expand(&f.to_rational(), delta, max_levels, exact_rational)
}

impl<C: Coeff> HFraction<C> {
    /// A fraction given level by level; no remainder is known.
    pub fn from_levels(ring: Ring, delta: usize, levels: Vec<Level<C>>, terminated: bool) -> Result<Self> {
        if delta < 1 {
            return Err(Error::InvalidArgument("delta must be >= 1".into()));
        }
        for (j, l) in levels.iter().enumerate() {
            if l.v.is_zero() {
                return Err(Error::InvalidArgument(format!("v_{j} vanishes")));
            }
            if let Some(u) = &l.u {
                if u.degree() > (l.k + delta) as isize - 2 {
                    return Err(Error::InvalidArgument(format!("u after level {j} is too long")));
                }
            } else if j + 1 < levels.len() || terminated {
                return Err(Error::InvalidArgument(format!("u after level {j} is missing")));
            }
        }
        Ok(HFraction {
            ring,
            delta,
            levels,
            terminated,
            tail_zero_order: None,
            remainder: None,
        })
    }

    pub fn certified_levels(&self) -> usize {
        self.levels.len()
    }

    /// `s_j = k_0 + … + k_{j-1} + j` for `j = 0..=levels`.
    pub fn indices(&self) -> Vec<usize> {
        let mut s = vec![0];
        for l in &self.levels {
            s.push(s.last().unwrap() + l.k + 1);
        }
        s
    }

    /// Largest `n` such that the zero pattern of `H_1..H_n` is determined;
    /// `None` when all of it is.
    pub fn hankel_coverage(&self) -> Option<usize> {
        if self.terminated {
            return None;
        }
        let s_last = *self.indices().last().unwrap();
        let complete = self.levels.last().is_none_or(|l| l.u.is_some());
        Some(s_last + if complete { self.tail_zero_order.unwrap_or(0) } else { 0 })
    }

    /// Series to order `n`, exact as long as the levels (and any remainder)
    /// determine it.
    pub fn evaluate(&self, n: usize) -> Result<TruncatedSeries<C>> {
        let ring = self.ring;
        let mut levels = self.levels.as_slice();
        let mut tail = if self.terminated {
            TruncatedSeries::zero(ring, n)
        } else {
            match (levels.last(), &self.remainder) {
                (Some(Level { u: None, .. }), Some(r)) => {
                    levels = &levels[..levels.len() - 1];
                    r.clone()
                }
                (Some(Level { u: None, v, k }), None) => {
                    levels = &levels[..levels.len() - 1];
                    let mut c = vec![C::zero_in(&ring); *k];
                    c.push(v.clone());
                    TruncatedSeries::from_coeffs(ring, c)
                }
                (_, Some(r)) => r.clone(),
                (_, None) => TruncatedSeries::zero(ring, 0),
            }
        };
        for l in levels.iter().rev() {
            let u = l.u.as_ref().expect("complete level");
            let order = (l.k + self.delta + tail.order()).min(n);
            let denom = TruncatedSeries::one(ring, order)
                .add(&u.shift_up(1).to_series(order))?
                .sub(&tail.shift_up(l.k + self.delta).truncate(order))?;
            tail = denom.invert()?.scale(&l.v).shift_up(l.k).truncate(n);
        }
        if tail.order() < n {
            return Err(Error::InsufficientOrder {
                needed: n,
                available: tail.order(),
            });
        }
        Ok(tail.truncate(n))
    }

    /// Convergent `P/Q` obtained by cutting the fraction below level `j`.
    pub fn convergent(&self, j: usize) -> Result<(Polynomial<C>, Polynomial<C>)> {
        if j > self.levels.len() || self.levels[..j].iter().any(|l| l.u.is_none()) {
            return Err(Error::InvalidArgument(format!("convergent {j} is not certified")));
        }
        let ring = self.ring;
        let mut num = Polynomial::zero(ring);
        let mut den = Polynomial::one(ring);
        for l in self.levels[..j].iter().rev() {
            let u = l.u.as_ref().unwrap();
            let one_uz = &Polynomial::one(ring) + &u.shift_up(1);
            let new_den = &(&one_uz * &den) - &num.shift_up(l.k + self.delta);
            num = den.shift_up(l.k).scale(&l.v);
            den = new_den;
        }
        Ok((num, den))
    }

    /// Periodicity of the level stream `(v_j, k_j, u_{j+1})`.
    pub fn level_periodicity(&self) -> PeriodicityEvidence {
        let complete: Vec<&Level<C>> = self.levels.iter().filter(|l| l.u.is_some()).collect();
        PeriodicityEvidence::scan(self.ring.modulus().unwrap_or(0), &complete)
    }
}

/// `(s_j, H_{s_j})` for `j = 1..=levels`, from the closed form
/// `H_{s_j} = (-1)^ε v_0^{s_j} v_1^{s_j - s_1} … v_{j-1}^{s_j - s_{j-1}}`
/// with `ε = Σ_{i<j} k_i (k_i + 1) / 2`. All other `H_n` up to
/// [`HFraction::hankel_coverage`] vanish.
pub fn hankel_from_hfrac<C: Coeff>(h: &HFraction<C>) -> Result<Vec<(usize, C)>> {
    if h.delta != 2 {
        return Err(Error::InvalidArgument(format!(
            "determinant formula needs delta = 2, got {}",
            h.delta
        )));
    }
    let s = h.indices();
    let mut out = Vec::with_capacity(h.levels.len());
    let mut eps = 0usize;
    for j in 1..s.len() {
        let l = &h.levels[j - 1];
        eps += l.k * (l.k + 1) / 2;
        let mut value = C::one_in(&h.ring);
        for (i, li) in h.levels[..j].iter().enumerate() {
            value = value * li.v.pow((s[j] - s[i]) as u64);
        }
        if eps % 2 == 1 {
            value = -value;
        }
        out.push((s[j], value));
    }
    Ok(out)
}

/// `H_1..H_n` as predicted by the fraction, when it covers `n`.
pub fn hankel_pattern<C: Coeff>(h: &HFraction<C>, n: usize) -> Result<Vec<C>> {
    if let Some(c) = h.hankel_coverage() {
        if c < n {
            return Err(Error::InsufficientOrder {
                needed: n,
                available: c,
            });
        }
    }
    let mut table = vec![C::zero_in(&h.ring); n];
    for (s, v) in hankel_from_hfrac(h)? {
        if s <= n {
            table[s - 1] = v;
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ModInt;
    use crate::hankel::{hankel_table, DEFAULT_WINDOW};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn qs(c: &[i64]) -> TruncatedSeries<Rational> {
        TruncatedSeries::from_i64s(Ring::Rational, c)
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(Integer::from(n))
    }

    #[test]
    fn geometric_series_terminates() {
        let h = hfrac_expand(&qs(&[1; 12]), 2, 100, true).unwrap();
        assert_eq!(h.levels.len(), 1);
        assert_eq!(h.levels[0].v, q(1));
        assert_eq!(h.levels[0].k, 0);
        assert_eq!(h.levels[0].u, Some(Polynomial::from_i64s(Ring::Rational, &[-1])));
        assert!(h.terminated);
        assert_eq!(hankel_from_hfrac(&h).unwrap(), vec![(1, q(1))]);
        assert_eq!(hankel_pattern(&h, 5).unwrap(), vec![q(1), q(0), q(0), q(0), q(0)]);
        let json = serde_json::to_string(&h).unwrap();
        assert_eq!(
            json,
            r#"{"ring":"Q","delta":2,"levels":[{"v":"1","k":0,"u":["-1"]}],"certified_levels":1,"terminated":true,"tail_zero_order":10}"#
        );
        // without the assertion the prefix proves nothing about the tail
        assert!(!hfrac_expand(&qs(&[1; 12]), 2, 100, false).unwrap().terminated);
    }

    #[test]
    fn hand_built_fractions() {
        let ring = Ring::Rational;
        let geo = HFraction::from_levels(
            ring,
            2,
            vec![Level { v: q(1), k: 0, u: Some(Polynomial::from_i64s(ring, &[-1])) }],
            true,
        )
        .unwrap();
        assert_eq!(geo.evaluate(6).unwrap(), qs(&[1; 6]));
        let c = HFraction::from_levels(
            ring,
            2,
            vec![Level { v: q(7), k: 0, u: Some(Polynomial::zero(ring)) }],
            true,
        )
        .unwrap();
        assert_eq!(c.evaluate(4).unwrap(), qs(&[7, 0, 0, 0]));
        let bad = vec![Level { v: q(1), k: 0, u: Some(Polynomial::from_i64s(ring, &[1, 1])) }];
        assert!(HFraction::from_levels(ring, 2, bad, true).is_err());
    }

    #[test]
    fn zero_series_and_errors() {
        let h = hfrac_expand(&qs(&[0, 0, 0]), 2, 10, true).unwrap();
        assert!(h.levels.is_empty() && h.terminated);
        assert_eq!(h.evaluate(5).unwrap(), qs(&[0; 5]));
        assert!(hfrac_expand(&qs(&[1, 2]), 0, 10, false).is_err());
        let z = TruncatedSeries::from_i64s(Ring::Integer, &[1, 2]);
        assert!(matches!(hfrac_expand(&z, 2, 10, false), Err(Error::NotAField(_))));
        let m4: TruncatedSeries<ModInt> = z.reduce_mod(4);
        assert!(hfrac_expand(&m4, 2, 10, false).is_err());
    }

    #[test]
    fn fibonacci_round_trip() {
        let mut fib = vec![1i64, 1];
        while fib.len() < 20 {
            fib.push(fib[fib.len() - 1] + fib[fib.len() - 2]);
        }
        let f = qs(&fib);
        let h = hfrac_expand(&f, 2, 100, true).unwrap();
        assert!(h.terminated);
        assert_eq!(h.evaluate(20).unwrap(), f);
        let bare = HFraction::from_levels(Ring::Rational, 2, h.levels.clone(), true).unwrap();
        assert_eq!(bare.evaluate(20).unwrap(), f);
    }

    fn random_series(rng: &mut ChaCha8Rng, n: usize) -> TruncatedSeries<Rational> {
        // sparse digits make gaps (k_j > 0) common
        let c: Vec<i64> = (0..n)
            .map(|i| if i == 0 { rng.gen_range(1..3) } else if rng.gen_bool(0.5) { 0 } else { rng.gen_range(-2..=2) })
            .collect();
        qs(&c)
    }

    fn check_against_table<C: crate::hankel::Determinant>(f: &TruncatedSeries<C>) {
        let h = hfrac_expand(f, 2, usize::MAX, false).unwrap();
        assert_eq!(h.evaluate(f.order()).unwrap(), *f, "round trip");
        let again = hfrac_expand(&h.evaluate(f.order()).unwrap(), 2, usize::MAX, false).unwrap();
        assert_eq!(again.levels, h.levels, "idempotent");
        let n = ((f.order() + 1) / 2).min(h.hankel_coverage().unwrap());
        let table = hankel_table(f, n, 0, DEFAULT_WINDOW).unwrap().table;
        assert_eq!(hankel_pattern(&h, n).unwrap(), table);
    }

    #[test]
    fn random_series_agree_with_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let f = random_series(&mut rng, 30);
            check_against_table(&f);
            let g: TruncatedSeries<ModInt> = f.map(Ring::Mod(3), |c| {
                let n = <ModInt as Coeff>::from_integer(c.numer(), &Ring::Mod(3));
                n * <ModInt as Coeff>::from_integer(c.denom(), &Ring::Mod(3)).try_inv().unwrap()
            });
            check_against_table(&g);
        }
    }

    #[test]
    fn thue_morse_indices_match_table() {
        let f = crate::sequences::gen_named("thue_morse_pm1", 64).unwrap();
        let h = hfrac_expand_integer(&f, 2, usize::MAX, false).unwrap();
        let t = hankel_table(&f, 32, 0, DEFAULT_WINDOW).unwrap();
        let s: Vec<usize> = hankel_from_hfrac(&h).unwrap().into_iter().map(|(s, _)| s).filter(|&s| s <= 32).collect();
        assert_eq!(s, t.nonzero_indices);
    }

    #[test]
    fn stern_levels_reproduce_determinants() {
        let f = crate::sequences::gen_named("stern_S", 80).unwrap();
        let h = hfrac_expand_integer(&f, 2, 10, false).unwrap();
        assert_eq!(h.levels.len(), 10);
        let t = hankel_table(&f, 40, 0, DEFAULT_WINDOW).unwrap();
        for (s, v) in hankel_from_hfrac(&h).unwrap() {
            assert_eq!(Rational::from_integer(t.get(s).unwrap().clone()), v, "H_{s}");
        }
    }

    #[test]
    fn j_fraction_specialisation() {
        let ring = Ring::Rational;
        let levels: Vec<Level<Rational>> = [2, -3, 5, 7]
            .iter()
            .map(|&v| Level { v: q(v), k: 0, u: Some(Polynomial::from_i64s(ring, &[1])) })
            .collect();
        let h = HFraction::from_levels(ring, 2, levels, true).unwrap();
        let hs = hankel_from_hfrac(&h).unwrap();
        let v = [2i64, -3, 5, 7];
        for (j, (s, val)) in hs.iter().enumerate() {
            assert_eq!(*s, j + 1);
            let expect: i64 = (0..=j).map(|i| v[i].pow((j + 1 - i) as u32)).product();
            assert_eq!(*val, q(expect));
        }
        let f = h.evaluate(12).unwrap();
        let t = hankel_table(&f, 4, 0, DEFAULT_WINDOW).unwrap().table;
        assert_eq!(t, hs.into_iter().map(|(_, v)| v).collect::<Vec<_>>());
    }

    #[test]
    fn convergents_approximate() {
        let f = crate::sequences::gen_named("paperfolding", 60).unwrap().to_rational();
        let h = hfrac_expand(&f, 2, usize::MAX, false).unwrap();
        let s = h.indices();
        for j in 1..6 {
            let (p, qd) = h.convergent(j).unwrap();
            assert!(qd.degree() <= s[j] as isize);
            let diff = f.mul_poly(&qd).unwrap().sub(&p.to_series(60)).unwrap();
            assert!(diff.valuation().unwrap() >= s[j] + s[j + 1] - 1);
        }
    }

    #[test]
    fn delta_one_round_trip() {
        let f = qs(&[1, 2, 0, -1, 3, 0, 0, 1, 2, 1]);
        let h = hfrac_expand(&f, 1, usize::MAX, false).unwrap();
        assert_eq!(h.evaluate(10).unwrap(), f);
        assert!(hankel_from_hfrac(&h).is_err());
    }
}
