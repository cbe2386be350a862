use num_integer::Integer as _;
use num_traits::{One, Zero};

use crate::exact::{is_prime, Coeff, Integer, ModInt, Rational, Ring};

/// Coefficient rings with an exact determinant and a Hankel-table routine.
pub trait Determinant: Coeff {
    /// Determinant of a square matrix given by rows.
    fn determinant(rows: Vec<Vec<Self>>, ring: &Ring) -> Self;

    /// Leading principal minors `H_1..H_n` of the Hankel matrix built on
    /// `c`, which must hold at least `2n - 1` entries.
    fn hankel_minors(c: &[Self], n: usize, ring: &Ring) -> Vec<Self> {
        (1..=n)
            .map(|m| Self::determinant(hankel_rows(c, m), ring))
            .collect()
    }
}

pub(crate) fn hankel_rows<C: Clone>(c: &[C], n: usize) -> Vec<Vec<C>> {
    (0..n).map(|i| c[i..i + n].to_vec()).collect()
}

/// Fraction-free Gaussian elimination with row pivoting. Every division is
/// exact, by the previous pivot.
pub fn bareiss(mut a: Vec<Vec<Integer>>) -> Integer {
    let n = a.len();
    if n == 0 {
        return Integer::one();
    }
    let mut negate = false;
    let mut prev = Integer::one();
    for k in 0..n {
        if Zero::is_zero(&a[k][k]) {
            match (k + 1..n).find(|&i| !Zero::is_zero(&a[i][k])) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return Integer::zero(),
            }
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            for j in k + 1..n {
                let t = &row[j] * &pivot_row[k] - &row[k] * &pivot_row[j];
                row[j] = t / &prev;
            }
            row[k] = Integer::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Gaussian elimination over a field.
pub fn field_det<C: Coeff>(mut a: Vec<Vec<C>>, ring: &Ring) -> C {
    let n = a.len();
    let mut det = C::one_in(ring);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return C::zero_in(ring);
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let inv = a[k][k].try_inv().expect("nonzero element of a field");
        det = det * a[k][k].clone();
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            if row[k].is_zero() {
                continue;
            }
            let factor = row[k].clone() * inv.clone();
            for j in k + 1..n {
                let t = row[j].clone() - factor.clone() * pivot_row[j].clone();
                row[j] = t;
            }
        }
    }
    det
}

/// Laplace expansion along the first row; exponential, for cross-checks.
pub fn cofactor_det<C: Coeff>(a: &[Vec<C>], ring: &Ring) -> C {
    let n = a.len();
    if n == 0 {
        return C::one_in(ring);
    }
    let mut total = C::zero_in(ring);
    for j in 0..n {
        if a[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<C>> = a[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = a[0][j].clone() * cofactor_det(&minor, ring);
        total = if j % 2 == 0 { total + term } else { total - term };
    }
    total
}

/// All leading principal minors of a Hankel matrix over a field in `O(n^3)`.
///
/// Maintains `T·M_m = U` where `T` is built from row additions only (so
/// `det T = 1`). Every nonzero row of `U` owns a pivot column that is zero
/// in all other rows, and rows without a pivot are zero. `M_m` is regular
/// iff all `m` rows own pivots, and then `U` is a scaled permutation matrix.
pub fn field_hankel_minors<C: Coeff>(c: &[C], n: usize, ring: &Ring) -> Vec<C> {
    let zero = C::zero_in(ring);
    let mut t: Vec<Vec<C>> = Vec::with_capacity(n);
    let mut u: Vec<Vec<C>> = Vec::with_capacity(n);
    let mut pivot_of_row: Vec<Option<usize>> = Vec::with_capacity(n);
    let mut row_of_col: Vec<Option<usize>> = Vec::with_capacity(n);
    let mut out = Vec::with_capacity(n);

    for m in 0..n {
        // new column m for existing rows: U[r][m] = Σ_i T[r][i] c_{i+m}
        for r in 0..m {
            let mut s = zero.clone();
            for (i, tri) in t[r].iter().enumerate() {
                if !tri.is_zero() {
                    s = s + tri.clone() * c[i + m].clone();
                }
            }
            u[r].push(s);
            t[r].push(zero.clone());
        }
        row_of_col.push(None);
        // a previously zero row may now be nonzero in column m
        if let Some(r) = (0..m).find(|&r| pivot_of_row[r].is_none() && !u[r][m].is_zero()) {
            claim_pivot(&mut t, &mut u, r, m);
            pivot_of_row[r] = Some(m);
            row_of_col[m] = Some(r);
        }
        // new row m
        let mut trow = vec![zero.clone(); m + 1];
        trow[m] = C::one_in(ring);
        t.push(trow);
        u.push(c[m..=2 * m].to_vec());
        pivot_of_row.push(None);
        for col in 0..=m {
            let Some(r) = row_of_col[col] else { continue };
            if u[m][col].is_zero() {
                continue;
            }
            let factor = u[m][col].clone() * u[r][col].try_inv().expect("pivot");
            axpy(&mut t, &mut u, m, r, &factor);
        }
        if let Some(col) = (0..=m).find(|&j| row_of_col[j].is_none() && !u[m][j].is_zero()) {
            claim_pivot(&mut t, &mut u, m, col);
            pivot_of_row[m] = Some(col);
            row_of_col[col] = Some(m);
        }
        out.push(regular_det(&u, &pivot_of_row, ring));
    }
    out
}

/// `row[dst] -= factor · row[src]` in both `T` and `U`.
fn axpy<C: Coeff>(t: &mut [Vec<C>], u: &mut [Vec<C>], dst: usize, src: usize, factor: &C) {
    for mat in [t, u] {
        let (s, d) = if src < dst {
            let (a, b) = mat.split_at_mut(dst);
            (&a[src], &mut b[0])
        } else {
            let (a, b) = mat.split_at_mut(src);
            (&b[0], &mut a[dst])
        };
        for (x, y) in d.iter_mut().zip(s.iter()) {
            if !y.is_zero() {
                *x = x.clone() - factor.clone() * y.clone();
            }
        }
    }
}

/// Makes `(r, col)` a pivot by clearing `col` in every other row.
fn claim_pivot<C: Coeff>(t: &mut [Vec<C>], u: &mut [Vec<C>], r: usize, col: usize) {
    let inv = u[r][col].try_inv().expect("pivot");
    for other in 0..u.len() {
        if other == r || u[other][col].is_zero() {
            continue;
        }
        let factor = u[other][col].clone() * inv.clone();
        axpy(t, u, other, r, &factor);
    }
}

fn regular_det<C: Coeff>(u: &[Vec<C>], pivot_of_row: &[Option<usize>], ring: &Ring) -> C {
    let mut perm = Vec::with_capacity(u.len());
    let mut det = C::one_in(ring);
    for (r, p) in pivot_of_row.iter().enumerate() {
        match p {
            Some(col) => {
                perm.push(*col);
                det = det * u[r][*col].clone();
            }
            None => return C::zero_in(ring),
        }
    }
    if permutation_is_odd(&perm) {
        -det
    } else {
        det
    }
}

fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut odd = false;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

/// Multiplies every entry by the lcm of the denominators.
fn clear_denominators(rows: &[Vec<Rational>]) -> (Vec<Vec<Integer>>, Integer) {
    let l = rows
        .iter()
        .flatten()
        .fold(Integer::one(), |acc, x| acc.lcm(x.denom()));
    let ints = rows
        .iter()
        .map(|row| row.iter().map(|x| (x * &l).to_integer()).collect())
        .collect();
    (ints, l)
}

impl Determinant for Integer {
    fn determinant(rows: Vec<Vec<Self>>, _: &Ring) -> Self {
        bareiss(rows)
    }
}

impl Determinant for Rational {
    /// `det(L·M) = L^n det M` with `L` the common denominator.
    fn determinant(rows: Vec<Vec<Self>>, _: &Ring) -> Self {
        let n = rows.len();
        let (ints, l) = clear_denominators(&rows);
        Rational::new(bareiss(ints), num_traits::pow(l, n))
    }

    fn hankel_minors(c: &[Self], n: usize, ring: &Ring) -> Vec<Self> {
        field_hankel_minors(c, n, ring)
    }
}

impl Determinant for ModInt {
    fn determinant(rows: Vec<Vec<Self>>, ring: &Ring) -> Self {
        let m = ring.modulus().expect("modular ring");
        if is_prime(m) {
            field_det(rows, ring)
        } else {
            // the determinant is a polynomial in the entries, so lifting
            // to the integers commutes with reduction
            let lifted = rows
                .iter()
                .map(|r| r.iter().map(|x| Integer::from(x.residue())).collect())
                .collect();
            ModInt::from_integer(&bareiss(lifted), m)
        }
    }

    fn hankel_minors(c: &[Self], n: usize, ring: &Ring) -> Vec<Self> {
        if ring.is_field() {
            field_hankel_minors(c, n, ring)
        } else {
            (1..=n)
                .map(|m| Self::determinant(hankel_rows(c, m), ring))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn zm(rows: &[&[i64]]) -> Vec<Vec<Integer>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Integer::from(x)).collect())
            .collect()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(bareiss(zm(&[])), Integer::from(1));
        assert_eq!(bareiss(zm(&[&[0, 1], &[1, 0]])), Integer::from(-1));
        assert_eq!(bareiss(zm(&[&[1, 1], &[1, 1]])), Integer::from(0));
        assert_eq!(
            bareiss(zm(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]])),
            Integer::from(6)
        );
    }

    #[test]
    fn elimination_matches_cofactor() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=5);
            let rows: Vec<Vec<Integer>> = (0..n)
                .map(|_| (0..n).map(|_| Integer::from(rng.gen_range(-3..=3))).collect())
                .collect();
            let expect = cofactor_det(&rows, &Ring::Integer);
            assert_eq!(bareiss(rows.clone()), expect);
            let q: Vec<Vec<Rational>> = rows
                .iter()
                .map(|r| r.iter().map(|x| Rational::new(x.clone(), Integer::from(3))).collect())
                .collect();
            let qd = Rational::determinant(q.clone(), &Ring::Rational);
            assert_eq!(qd, cofactor_det(&q, &Ring::Rational));
            assert_eq!(field_det(q, &Ring::Rational), qd);
            for m in [2u64, 4, 7, 9] {
                let r = Ring::Mod(m);
                let red: Vec<Vec<ModInt>> = rows
                    .iter()
                    .map(|row| row.iter().map(|x| ModInt::from_integer(x, m)).collect())
                    .collect();
                assert_eq!(ModInt::determinant(red, &r), ModInt::from_integer(&expect, m));
            }
        }
    }

    #[test]
    fn incremental_minors_match_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..300 {
            let p = [2u64, 3, 5][trial % 3];
            let ring = Ring::Mod(p);
            let n = rng.gen_range(1..=14);
            // sparse series exercise the rank-deficient paths
            let density = rng.gen_range(0.1..1.0);
            let c: Vec<ModInt> = (0..2 * n)
                .map(|_| {
                    let v = if rng.gen_bool(density) { rng.gen_range(0..p) } else { 0 };
                    ModInt::new(v, p)
                })
                .collect();
            let fast = field_hankel_minors(&c, n, &ring);
            let slow: Vec<ModInt> = (1..=n).map(|m| field_det(hankel_rows(&c, m), &ring)).collect();
            assert_eq!(fast, slow, "p={p} c={c:?}");
        }
    }

    #[test]
    fn incremental_minors_over_rationals() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = rng.gen_range(1..=8);
            let c: Vec<Rational> = (0..2 * n)
                .map(|_| {
                    let v = if rng.gen_bool(0.6) { rng.gen_range(-4..=4) } else { 0 };
                    Rational::new(Integer::from(v), Integer::from(rng.gen_range(1..=3)))
                })
                .collect();
            let fast = field_hankel_minors(&c, n, &Ring::Rational);
            let slow: Vec<Rational> = (1..=n)
                .map(|m| Rational::determinant(hankel_rows(&c, m), &Ring::Rational))
                .collect();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn permutation_parity() {
        assert!(!permutation_is_odd(&[0, 1, 2]));
        assert!(permutation_is_odd(&[1, 0, 2]));
        assert!(!permutation_is_odd(&[1, 2, 0]));
    }
}
