use hankelfrac::exact::{Coeff, Integer, ModInt, Polynomial, Rational, Ring, TruncatedSeries};
use hankelfrac::hankel::{detect_period, hankel_table};
use hankelfrac::hfrac::{hankel_pattern, hfrac_expand, HFraction, Level};
use hankelfrac::pade::{pade_construct, pade_polynomials, pade_polynomials_fast};
use num_traits::Zero;
use proptest::prelude::*;

const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn int_series(c: &[i64]) -> TruncatedSeries<Integer> {
    TruncatedSeries::from_i64s(Ring::Integer, c)
}

fn sparse_coeffs(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -4i64..=4], len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_by_an_inverse(mut c in sparse_coeffs(24), d in sparse_coeffs(24)) {
        c[0] = 1;
        let a = int_series(&c);
        let b = int_series(&d);
        let back = b.mul(&a)?.mul(&a.invert()?)?;
        prop_assert_eq!(back, b);
        prop_assert_eq!(a.invert()?.invert()?, a);
    }

    #[test]
    fn composition_is_a_ring_map(c in sparse_coeffs(20), d in sparse_coeffs(20), k in 2usize..4) {
        let (a, b) = (int_series(&c), int_series(&d));
        let lhs = a.mul(&b)?.compose_power(k)?;
        let rhs = a.compose_power(k)?.mul(&b.compose_power(k)?)?;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_commutes_with_arithmetic(c in sparse_coeffs(20), d in sparse_coeffs(20), pi in 0usize..4) {
        let p = PRIMES[pi];
        let (a, b) = (int_series(&c), int_series(&d));
        prop_assert_eq!(a.mul(&b)?.reduce_mod(p), a.reduce_mod(p).mul(&b.reduce_mod(p))?);
        prop_assert_eq!(a.sub(&b)?.reduce_mod(p), a.reduce_mod(p).sub(&b.reduce_mod(p))?);
    }

    #[test]
    fn square_roots_square_back(mut c in sparse_coeffs(30), pi in 1usize..4) {
        let p = PRIMES[pi];
        c[0] = 1;
        let a = int_series(&c).reduce_mod(p);
        let r = a.sqrt_unit()?;
        prop_assert_eq!(r.mul(&r)?, a);
    }

    #[test]
    fn hankel_over_z_reduces_to_hankel_over_fp(c in sparse_coeffs(25), pi in 0usize..4) {
        let p = PRIMES[pi];
        let f = int_series(&c);
        let z = hankel_table(&f, 12, 0, 4)?.table;
        let fp = hankel_table(&f.reduce_mod(p), 12, 0, 4)?.table;
        let reduced: Vec<ModInt> = z.iter().map(|h| ModInt::from_integer(h, p)).collect();
        prop_assert_eq!(reduced, fp);
    }

    #[test]
    fn shifted_tables_read_the_shifted_series(c in sparse_coeffs(30), k in 0usize..5) {
        let f = int_series(&c);
        let shifted = hankel_table(&f, 10, k, 4)?.table;
        let direct = hankel_table(&f.shift_down(k), 10, 0, 4)?.table;
        prop_assert_eq!(shifted, direct);
    }

    #[test]
    fn fraction_indices_are_the_nonzero_determinants(c in sparse_coeffs(40), pi in 0usize..4) {
        let f = int_series(&c).reduce_mod(PRIMES[pi]);
        prop_assume!(!f.is_zero_within_order());
        let h = hfrac_expand(&f, 2, usize::MAX, false)?;
        let n = h.hankel_coverage().unwrap_or(20).min(20);
        let table = hankel_table(&f, n, 0, 4)?;
        prop_assert_eq!(hankel_pattern(&h, n)?, table.table.clone());
        let s: Vec<usize> = h.indices().into_iter().skip(1).filter(|&s| s <= n).collect();
        prop_assert_eq!(s, table.nonzero_indices);
    }

    #[test]
    fn expansion_round_trips(mut c in sparse_coeffs(36), delta in 1usize..4) {
        c[0] = c[0].max(1);
        let f = int_series(&c).to_rational();
        let h = hfrac_expand(&f, delta, usize::MAX, false)?;
        prop_assert_eq!(h.evaluate(f.order())?, f.clone());
        // re-expanding the value of the certified levels gives them back
        // (a few levels: heights over Q grow quickly with depth)
        let complete: Vec<Level<Rational>> = h.levels.iter().filter(|l| l.u.is_some()).take(6).cloned().collect();
        prop_assume!(!complete.is_empty());
        let exact = HFraction::from_levels(Ring::Rational, delta, complete.clone(), true)?;
        let s_last = *exact.indices().last().unwrap();
        let g = exact.evaluate((delta + 2) * s_last + 4)?;
        let again = hfrac_expand(&g, delta, complete.len(), false)?;
        prop_assert_eq!(again.levels, complete);
    }

    #[test]
    fn u_degrees_respect_the_bound(c in sparse_coeffs(40), delta in 1usize..4) {
        let f = int_series(&c).reduce_mod(3);
        prop_assume!(!f.is_zero_within_order());
        let h = hfrac_expand(&f, delta, usize::MAX, false)?;
        for l in &h.levels {
            if let Some(u) = &l.u {
                prop_assert!(u.degree() <= (l.k + delta) as isize - 2);
            }
        }
    }

    #[test]
    fn pade_denominator_starts_with_the_determinant(c in sparse_coeffs(30), k in 1usize..8) {
        let f = int_series(&c).to_rational();
        let hk = hankel_table(&f, k, 0, 4)?.table[k - 1].clone();
        let (p, q) = pade_polynomials(&f, k)?;
        prop_assert_eq!(q.coeff(0), hk.clone());
        prop_assert!(p.degree() < k as isize && q.degree() <= k as isize);
        let resid = f.mul_poly(&q)?.sub(&p.to_series(f.order()))?;
        prop_assert!(resid.coeffs()[..2 * k].iter().all(Zero::is_zero));
        if !Zero::is_zero(&hk) {
            prop_assert_eq!(pade_polynomials_fast(&f, k)?, (p.clone(), q.clone()));
            let a = pade_construct(&f, k)?;
            if let Some(kp) = a.k_prime {
                prop_assert!(kp >= k);
                prop_assert_eq!(resid.valuation(), Some(k + kp));
            }
        }
    }

    #[test]
    fn periods_of_built_sequences(pre in prop::collection::vec(0u8..3, 0..6), block in prop::collection::vec(0u8..3, 1..6), reps in 3usize..6) {
        let mut s = pre.clone();
        for _ in 0..reps {
            s.extend_from_slice(&block);
        }
        let (p0, per) = detect_period(&s).expect("repeats at least twice");
        prop_assert!(p0 <= pre.len());
        prop_assert_eq!(block.len() % per, 0);
        for i in p0..s.len() - per {
            prop_assert_eq!(s[i], s[i + per]);
        }
    }
}

#[test]
fn rational_functions_have_vanishing_tails() {
    let num = Polynomial::<Rational>::from_i64s(Ring::Rational, &[1, 2, -1]);
    let den = Polynomial::<Rational>::from_i64s(Ring::Rational, &[1, -3, 0, 2]);
    let f = hankelfrac::exact::rational_to_series(&num, &den, 60).unwrap();
    let t = hankel_table(&f, 30, 0, 4).unwrap();
    assert!(t.kronecker_flag);
    assert!(t.nonzero_indices.iter().all(|&n| n <= 3));
    let h = hfrac_expand(&f, 2, usize::MAX, true).unwrap();
    assert!(h.terminated);
    assert_eq!(h.hankel_coverage(), None);
    assert!(Coeff::is_one(&Rational::from_integer(Integer::from(1))));
}
