use num_traits::{One, Zero};

use super::equation::MahlerEquation;
use crate::error::{Error, Result};
use crate::exact::{Integer, Polynomial, Ring, TruncatedSeries};

/// Registry keys accepted by [`gen_named`].
pub const NAMES: [&str; 16] = [
    "thue_morse_01",
    "thue_morse_pm1",
    "stern_S",
    "stern_T",
    "paperfolding",
    "cantor",
    "gros",
    "calF",
    "calG",
    "L",
    "M",
    "F5",
    "F11",
    "F13",
    "F17a",
    "F17b",
];

/// Declared growth of `|c_j|`, used for rigorous tail bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoeffBound {
    /// `|c_j| <= K`.
    Constant(Integer),
    /// `|c_j| <= j + 1`.
    Linear,
    /// `|c_j| <= r^j`.
    Geometric(Integer),
}

pub fn describe(name: &str) -> Option<&'static str> {
    Some(match name {
        "thue_morse_01" => "Thue-Morse t_n on {0,1}",
        "thue_morse_pm1" => "(-1)^{t_n} = prod (1 - z^{2^n})",
        "stern_S" => "shifted Stern a_{n+1}",
        "stern_T" => "shifted twisted Stern b_{n+1}",
        "paperfolding" => "regular paperfolding u_n on {0,1}",
        "cantor" => "indicator of n without ternary digit 1",
        "gros" => "Gros sequence, v_2(m) + 1 for m >= 1",
        "calF" => "sum z^{2^n} / (1 + z^{2^n})",
        "calG" => "sum z^{2^n} / (1 - z^{2^n})",
        "L" => "sum z^{2^j} / prod_{i<j} (1 - z^{2^i})",
        "M" => "sum (-1)^j z^{2^j} / prod_{i<j} (1 - z^{2^i})",
        "F5" => "F(z) = C_5(z) F(z^5)",
        "F11" => "F(z) = C_11(z) F(z^11)",
        "F13" => "F(z) = C_13(z) F(z^13)",
        "F17a" => "F(z) = C_17a(z) F(z^17)",
        "F17b" => "F(z) = C_17b(z) F(z^17)",
        _ => return None,
    })
}

/// Coefficients of `C` in `F(z) = C(z)·F(z^p)` for the prime-radix family.
pub fn prime_family_polynomial(name: &str) -> Option<(Vec<i64>, usize)> {
    Some(match name {
        "F5" => (vec![1, -1, -1, -1, 1], 5),
        "F11" => (vec![1, -1, -1, 1, -1, 1, 1, 1, 1, -1, -1], 11),
        "F13" => (vec![1, -1, -1, 1, -1, -1, -1, -1, -1, 1, -1, -1, 1], 13),
        "F17a" => (
            vec![1, -1, -1, 1, -1, 1, 1, 1, 1, 1, 1, 1, -1, 1, -1, -1, 1],
            17,
        ),
        "F17b" => (
            vec![1, -1, -1, -1, 1, 1, -1, 1, 1, 1, -1, 1, 1, -1, -1, -1, 1],
            17,
        ),
        _ => return None,
    })
}

/// Mahler equation of a registry entry with the constant term that pins
/// down its solution.
pub fn named_equation(name: &str) -> Result<(MahlerEquation, i64)> {
    let eq = MahlerEquation::from_i64s;
    Ok(match name {
        // f = z/(1 - z^2) + (1 - z) f(z^2)
        "thue_morse_01" => (eq(&[0, 1], &[1, 0, -1], &[1, -1], &[1], 2)?, 0),
        "thue_morse_pm1" => (eq(&[], &[1], &[1, -1], &[1], 2)?, 1),
        "stern_S" => (eq(&[], &[1], &[1, 1, 1], &[1], 2)?, 1),
        "stern_T" => (eq(&[2], &[1], &[-1, -1, -1], &[1], 2)?, 1),
        // f = 1/(1 - z^4) + z f(z^2)
        "paperfolding" => (eq(&[1], &[1, 0, 0, 0, -1], &[0, 1], &[1], 2)?, 1),
        "cantor" => (eq(&[], &[1], &[1, 0, 1], &[1], 3)?, 1),
        // f(z) - f(z^2) = z/(1 -+ z)
        "gros" | "calG" => (eq(&[0, 1], &[1, -1], &[1], &[1], 2)?, 0),
        "calF" => (eq(&[0, 1], &[1, 1], &[1], &[1], 2)?, 0),
        // z(z - 1) + (1 - z) L(z) -+ L(z^2) = 0
        "L" => (eq(&[0, 1], &[1], &[1], &[1, -1], 2)?, 0),
        "M" => (eq(&[0, 1], &[1], &[-1], &[1, -1], 2)?, 0),
        _ => match prime_family_polynomial(name) {
            Some((c, p)) => (eq(&[], &[1], &c, &[1], p)?, 1),
            None => return Err(Error::UnknownSequence(name.to_string())),
        },
    })
}

/// Declared coefficient bound for the registry entries where one is known.
pub fn declared_bound(name: &str) -> Option<CoeffBound> {
    let one = || CoeffBound::Constant(Integer::one());
    match name {
        "thue_morse_01" | "thue_morse_pm1" | "paperfolding" | "cantor" => Some(one()),
        // every coefficient is a product of ±1 digit weights
        "F5" | "F11" | "F13" | "F17a" | "F17b" => Some(one()),
        // |a_n|, |b_n| <= n, and v_2(m) + 1 <= m + 1
        "stern_S" | "stern_T" | "gros" | "calF" | "calG" => Some(CoeffBound::Linear),
        // |c_n| counts restricted binary partitions of n, at most 2^{n-1}
        "L" | "M" => Some(CoeffBound::Geometric(Integer::from(2))),
        _ => None,
    }
}

/// First `n` coefficients of a registry series, each by its defining
/// recurrence, digit rule or sum (never by its Mahler equation).
pub fn gen_named(name: &str, n: usize) -> Result<TruncatedSeries<Integer>> {
    if n == 0 {
        return Err(Error::InvalidArgument("order must be >= 1".into()));
    }
    let ints = |v: Vec<i64>| TruncatedSeries::from_i64s(Ring::Integer, &v);
    Ok(match name {
        "thue_morse_01" => ints(thue_morse(n)),
        "thue_morse_pm1" => ints(thue_morse(n).into_iter().map(|t| 1 - 2 * t).collect()),
        "stern_S" => ints(stern(n + 1, false)[1..].to_vec()),
        "stern_T" => ints(stern(n + 1, true)[1..].to_vec()),
        "paperfolding" => ints(paperfolding(n)),
        "cantor" => ints(cantor(n)),
        "gros" => ints(
            (0..n)
                .map(|m| if m == 0 { 0 } else { m.trailing_zeros() as i64 + 1 })
                .collect(),
        ),
        "calF" => lacunary_quotient_sum(n, 1),
        "calG" => lacunary_quotient_sum(n, -1),
        "L" => binary_partition_sum(n, false),
        "M" => binary_partition_sum(n, true),
        _ => match prime_family_polynomial(name) {
            Some((c, p)) => digit_product(&c, p, n),
            None => return Err(Error::UnknownSequence(name.to_string())),
        },
    })
}

fn thue_morse(n: usize) -> Vec<i64> {
    let mut t = vec![0i64; n];
    for i in 1..n {
        t[i] = if i % 2 == 0 { t[i / 2] } else { 1 - t[i / 2] };
    }
    t
}

/// `a_0..a_{n-1}` of Stern's sequence, or of its twisted version.
fn stern(n: usize, twisted: bool) -> Vec<i64> {
    let mut a = vec![0i64; n.max(2)];
    a[1] = 1;
    let s = if twisted { -1 } else { 1 };
    for i in 2..n {
        let h = i / 2;
        a[i] = if i % 2 == 0 { s * a[h] } else { s * (a[h] + a[h + 1]) };
    }
    a.truncate(n);
    a
}

fn paperfolding(n: usize) -> Vec<i64> {
    let mut u = vec![0i64; n];
    for i in 0..n {
        u[i] = match i % 4 {
            0 => 1,
            2 => 0,
            _ => u[i / 2],
        };
    }
    u
}

fn cantor(n: usize) -> Vec<i64> {
    (0..n)
        .map(|mut i| {
            while i > 0 {
                if i % 3 == 1 {
                    return 0;
                }
                i /= 3;
            }
            1
        })
        .collect()
}

/// `Σ_n z^{2^n} / (1 + sign·z^{2^n})` expanded term by term.
fn lacunary_quotient_sum(n: usize, sign: i64) -> TruncatedSeries<Integer> {
    let mut c = vec![0i64; n];
    let mut step = 1usize;
    while step < n {
        let mut e = step;
        let mut w = 1i64;
        while e < n {
            c[e] += w;
            w *= -sign;
            e += step;
        }
        step *= 2;
    }
    TruncatedSeries::from_i64s(Ring::Integer, &c)
}

/// `Σ_j (±1)^j z^{2^j} / Π_{i<j} (1 − z^{2^i})`.
fn binary_partition_sum(n: usize, alternate: bool) -> TruncatedSeries<Integer> {
    let mut total = vec![Integer::zero(); n];
    // reciprocal of Π_{i<j} (1 - z^{2^i}), updated by one factor per j
    let mut recip = vec![Integer::zero(); n];
    recip[0] = Integer::one();
    let mut j = 0usize;
    while (1usize << j) < n {
        let shift = 1usize << j;
        let sign = if alternate && j % 2 == 1 { -1 } else { 1 };
        for e in shift..n {
            total[e] += &recip[e - shift] * sign;
        }
        // divide by (1 - z^shift): prefix sums with stride `shift`
        for e in shift..n {
            let prev = recip[e - shift].clone();
            recip[e] += prev;
        }
        j += 1;
    }
    TruncatedSeries::from_coeffs(Ring::Integer, total)
}

/// `Π_k C(z^{p^k})` with `C(0) = 1`, read off from base-`p` digits.
fn digit_product(c: &[i64], p: usize, n: usize) -> TruncatedSeries<Integer> {
    let coeffs: Vec<i64> = (0..n)
        .map(|mut i| {
            let mut w = 1i64;
            while i > 0 {
                w *= c.get(i % p).copied().unwrap_or(0);
                i /= p;
            }
            w
        })
        .collect();
    TruncatedSeries::from_i64s(Ring::Integer, &coeffs)
}

/// `C(z)` of a prime-family entry as a polynomial.
pub fn prime_family(name: &str) -> Option<(Polynomial<Integer>, usize)> {
    prime_family_polynomial(name).map(|(c, p)| (Polynomial::from_i64s(Ring::Integer, &c), p))
}
