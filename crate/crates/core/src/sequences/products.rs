use num_traits::{One, Zero};

use super::equation::MahlerEquation;
use crate::error::{Error, Result};
use crate::exact::{rational_to_series, Integer, Polynomial, Ring, TruncatedSeries};

fn need_order(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("order must be >= 1".into()))
    } else {
        Ok(())
    }
}

/// `Π_{k≥0} φ(z^{d^k})` for a series `φ` with `φ(0) = 1`; factors with
/// `d^k >= n` only contribute their constant term and are skipped.
fn lacunary_product(phi: &TruncatedSeries<Integer>, d: usize, n: usize) -> Result<TruncatedSeries<Integer>> {
    let mut acc = phi.truncate(n);
    let mut step = d;
    while step < n {
        let factor = phi.truncate(n.div_ceil(step)).compose_power(step)?.truncate(n);
        acc = acc.mul(&factor)?;
        step = match step.checked_mul(d) {
            Some(s) => s,
            None => break,
        };
    }
    Ok(acc)
}

/// `Π_{k≥0} (1 + u z^{2^k} + 2 z^{2^{k+1}} C(z^{2^k}) / D(z^{2^k}))`.
pub fn product2(
    u: &Integer,
    c: &Polynomial<Integer>,
    d: &Polynomial<Integer>,
    n: usize,
) -> Result<TruncatedSeries<Integer>> {
    need_order(n)?;
    if !d.coeff(0).is_one() {
        return Err(Error::InvalidArgument("product2 requires D(0) = 1".into()));
    }
    let two_z2_c = c.shift_up(2).scale(&Integer::from(2));
    let tail = rational_to_series(&two_z2_c, d, n)?;
    let head = Polynomial::new(Ring::Integer, vec![Integer::one(), u.clone()]).to_series(n);
    lacunary_product(&head.add(&tail)?, 2, n)
}

/// `Π_{k≥0} C(z^{d^k}) / D(z^{d^k})` with `C(0) = D(0) = 1`.
pub fn product_d(
    c: &Polynomial<Integer>,
    d: &Polynomial<Integer>,
    radix: usize,
    n: usize,
) -> Result<TruncatedSeries<Integer>> {
    need_order(n)?;
    if radix < 2 {
        return Err(Error::InvalidArgument(format!("radix must be >= 2, got {radix}")));
    }
    if !c.coeff(0).is_one() || !d.coeff(0).is_one() {
        return Err(Error::InvalidArgument(
            "product requires C(0) = D(0) = 1".into(),
        ));
    }
    lacunary_product(&rational_to_series(c, d, n)?, radix, n)
}

/// Ternary product `prod_n C(z^{3^n})/D(z^{3^n})`.
pub fn product3(
    c: &Polynomial<Integer>,
    d: &Polynomial<Integer>,
    n: usize,
) -> Result<TruncatedSeries<Integer>> {
    product_d(c, d, 3, n)
}

/// `z^{−2^α} Σ_n z^{2^{n+α}} / (1 + sign·z^{2^{n+β}})`, i.e. `F_{α,β}` for
/// `sign = +1` and `G_{α,β}` for `sign = −1`. Exponents use checked integer
/// arithmetic, so any `α, β` are accepted.
pub fn double_sum_generate(
    alpha: u32,
    beta: u32,
    sign: i8,
    n: usize,
) -> Result<TruncatedSeries<Integer>> {
    need_order(n)?;
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidArgument("sign must be +1 or -1".into()));
    }
    let n128 = n as u128;
    let pow2 = |e: u32| 1u128.checked_shl(e).filter(|_| e < 128);
    let base = pow2(alpha).ok_or_else(|| Error::InvalidArgument("alpha too large".into()))?;
    let mut coeffs = vec![0i64; n];
    for k in 0u32.. {
        let Some(num) = pow2(k + alpha) else { break };
        let first = num - base;
        if first >= n128 {
            break;
        }
        // stride 2^{k+β}; beyond u128 only the first term survives
        let stride = pow2(k + beta);
        let mut e = first;
        let mut w = 1i64;
        loop {
            coeffs[e as usize] += w;
            w *= -(sign as i64);
            match stride.and_then(|s| e.checked_add(s)) {
                Some(next) if next < n128 => e = next,
                _ => break,
            }
        }
    }
    Ok(TruncatedSeries::from_i64s(Ring::Integer, &coeffs))
}

/// Functional equation `−1 + (1 ± z^{2^β}) F(z) − z^{2^α}(1 ± z^{2^β}) F(z^2) = 0`
/// satisfied by the double sums, as `F = A/B + C/D·F(z^2)`.
pub fn double_sum_equation(alpha: u32, beta: u32, sign: i8) -> Result<MahlerEquation> {
    let e = |k: u32| -> Result<usize> {
        1usize
            .checked_shl(k)
            .filter(|_| k < usize::BITS)
            .ok_or_else(|| Error::InvalidArgument("exponent too large".into()))
    };
    let mut b = vec![0i64; e(beta)? + 1];
    b[0] = 1;
    b[e(beta)?] = sign as i64;
    let mut c = vec![0i64; e(alpha)? + 1];
    c[e(alpha)?] = 1;
    MahlerEquation::from_i64s(&[1], &b, &c, &[1], 2)
}

/// `g` with `f = 1 / (1 − u z + 2 z^2 g)` for a `product2` series `f`.
pub fn product2_companion(
    f: &TruncatedSeries<Integer>,
    u: &Integer,
) -> Result<TruncatedSeries<Integer>> {
    let n = f.order();
    if n < 3 {
        return Err(Error::InsufficientOrder {
            needed: 3,
            available: n,
        });
    }
    let mut r = f.invert()?.into_coeffs();
    r[0] -= 1;
    r[1] += u;
    if !r[0].is_zero() || !r[1].is_zero() {
        return Err(Error::InvalidArgument(
            "series is not of the form 1/(1 - uz + O(z^2))".into(),
        ));
    }
    let two = Integer::from(2);
    let mut g = Vec::with_capacity(n - 2);
    for (i, x) in r.into_iter().enumerate().skip(2) {
        if !(&x % &two).is_zero() {
            return Err(Error::NotInRing {
                index: i - 2,
                ring: Ring::Integer,
            });
        }
        g.push(x / &two);
    }
    Ok(TruncatedSeries::from_coeffs(Ring::Integer, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ArithKind;
    use crate::sequences::{feq_generate, gen_named};

    fn ints(s: &TruncatedSeries<Integer>) -> Vec<i64> {
        s.coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    fn zp(c: &[i64]) -> Polynomial<Integer> {
        Polynomial::from_i64s(Ring::Integer, c)
    }

    /// Multiplies out finitely many factors with plain polynomial products.
    fn naive_product(factors: Vec<Polynomial<Integer>>, n: usize) -> Vec<i64> {
        let mut acc = zp(&[1]);
        for f in factors {
            acc = &acc * &f;
        }
        (0..n).map(|i| i64::try_from(&acc.coeff(i)).unwrap()).collect()
    }

    #[test]
    fn thue_morse_product() {
        let f = product2(&Integer::from(-1), &zp(&[]), &zp(&[1]), 8).unwrap();
        assert_eq!(ints(&f), [1, -1, -1, 1, -1, 1, 1, -1]);
        assert_eq!(f, gen_named("thue_morse_pm1", 8).unwrap());
    }

    #[test]
    fn product2_against_expanded_factors() {
        let f = product2(&Integer::from(1), &zp(&[1]), &zp(&[1]), 6).unwrap();
        let factors = (0..3)
            .map(|k| zp(&[1, 1, 2]).compose_power(1 << k))
            .collect();
        assert_eq!(ints(&f), naive_product(factors, 6));
        assert_eq!(ints(&f), [1, 1, 3, 1, 5, 3]);
    }

    #[test]
    fn ternary_product_against_expanded_factors() {
        let f = product3(&zp(&[1, -1]), &zp(&[1]), 27).unwrap();
        let factors = (0..3).map(|k| zp(&[1, -1]).compose_power(3usize.pow(k))).collect();
        assert_eq!(ints(&f), naive_product(factors, 27));
        assert!(product3(&zp(&[2, 1]), &zp(&[1]), 4).is_err());
    }

    #[test]
    fn cantor_is_a_ternary_product() {
        let f = product3(&zp(&[1, 0, 1]), &zp(&[1]), 200).unwrap();
        assert_eq!(f, gen_named("cantor", 200).unwrap());
    }

    #[test]
    fn rational_factor_product() {
        // D = 1 - z: product of (1 + z^{3^k} + ...) / (1 - z^{3^k})
        let c = zp(&[1, 1]);
        let d = zp(&[1, -1]);
        let f = product3(&c, &d, 40).unwrap();
        // f(z) = C/D · f(z^3) checked through the equation solver
        let eq = MahlerEquation::new(zp(&[]), zp(&[1]), c, d, 3).unwrap();
        let via = feq_generate(&eq, 40, Ring::Integer, Some(&Integer::from(1))).unwrap();
        assert_eq!(f, via);
    }

    /// The displayed double-sum exponent form, valid for `β >= α`.
    fn displayed_form(alpha: u32, beta: u32, sign: i64, n: usize) -> Vec<i64> {
        let mut c = vec![0i64; n];
        for k in 0..20u32 {
            for j in 0..(n as i64) {
                let e = (j * (1 << (beta - alpha)) + 1) * (1i64 << (k + alpha)) - (1i64 << alpha);
                if (e as usize) < n {
                    c[e as usize] += if sign > 0 && j % 2 == 1 { -1 } else { 1 };
                }
            }
        }
        c
    }

    #[test]
    fn double_sum_matches_displayed_form() {
        for (a, b) in [(0, 0), (0, 2), (1, 3), (2, 2), (0, 1), (1, 2)] {
            for s in [1i8, -1] {
                let f = double_sum_generate(a, b, s, 64).unwrap();
                assert_eq!(ints(&f), displayed_form(a, b, s as i64, 64), "{a} {b} {s}");
            }
        }
    }

    #[test]
    fn double_sum_satisfies_its_equation() {
        for (a, b) in [(0, 0), (0, 2), (3, 1), (2, 0), (1, 2)] {
            for s in [1i8, -1] {
                let f = double_sum_generate(a, b, s, 128).unwrap();
                let eq = double_sum_equation(a, b, s).unwrap();
                assert!(eq.residual(&f).unwrap().is_zero_within_order(), "{a} {b} {s}");
            }
        }
    }

    #[test]
    fn calg_is_shifted_g00() {
        let g = double_sum_generate(0, 0, -1, 64).unwrap();
        assert_eq!(g.shift_up(1).truncate(64), gen_named("calG", 64).unwrap());
    }

    #[test]
    fn g_alpha_alpha_plus_one_is_geometric_in_z_pow() {
        for a in 0..4u32 {
            let g = double_sum_generate(a, a + 1, -1, 64).unwrap();
            let p = 1usize << a;
            let expect: Vec<i64> = (0..64).map(|i| (i % p == 0) as i64).collect();
            assert_eq!(ints(&g), expect);
        }
    }

    #[test]
    fn paperfolding_from_double_sums() {
        let pf = gen_named("paperfolding", 64).unwrap();
        assert_eq!(double_sum_generate(0, 2, -1, 64).unwrap(), pf);
        let f = double_sum_generate(0, 2, 1, 64).unwrap();
        assert!(f.sub(&pf).unwrap().reduce_mod(2).is_zero_within_order());
    }

    #[test]
    fn companion_inverts_relation() {
        for (u, c, d) in [(-1, vec![], vec![1]), (1, vec![1], vec![1]), (3, vec![1, -1], vec![1, 1])] {
            let u = Integer::from(u);
            let f = product2(&u, &zp(&c), &zp(&d), 30).unwrap();
            let g = product2_companion(&f, &u).unwrap();
            let mut den = g.shift_up(2).scale(&Integer::from(2));
            let lin = Polynomial::new(Ring::Integer, vec![Integer::one(), -u.clone()]).to_series(30);
            den = crate::exact::series_arith(&den, &lin, ArithKind::Add).unwrap();
            assert_eq!(den.invert().unwrap(), f);
        }
    }
}
