//! Padé approximants `[k-1/k]` from the determinant formulas
//!
//! ```text
//!            | c_0     c_1   …  c_k      |           | c_0  …  c_k                       |
//! Q(z) = det | …                         |   P = det | …                                 |
//!            | c_{k-1}  …       c_{2k-1} |           | c_{k-1} … c_{2k-1}                |
//!            | z^k  z^{k-1}  …  1        |           | Σ_{i<j} c_i z^{i+k-j}  (column j) |
//! ```
//!
//! so that `f Q - P = H_{k,k'} z^{k+k'} + …` with `k'` the first index whose
//! bordered determinant is nonzero, and `Q(0) = H_k`.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{Coeff, Polynomial, TruncatedSeries};
use crate::hankel::{bordered_det, hankel_det, Determinant};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadeApproximant<C: Coeff> {
    pub p: Polynomial<C>,
    pub q: Polynomial<C>,
    pub k: usize,
    /// `None` when the residual vanishes over the whole provable range.
    pub k_prime: Option<usize>,
    /// `H_{k,k'} / H_k`.
    pub h_k: Option<C>,
    /// The residual `f Q - P` was checked below this index.
    pub contact_verified_to: usize,
}

impl<C: Coeff> Serialize for PadeApproximant<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PadeApproximant", 6)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("P", &self.p)?;
        st.serialize_field("Q", &self.q)?;
        st.serialize_field("k_prime", &self.k_prime)?;
        st.serialize_field("h_k", &self.h_k.as_ref().map(|h| h.to_string()))?;
        st.serialize_field("contact_verified_to", &self.contact_verified_to)?;
        st.end()
    }
}

/// Cofactors of the last row of the `(k+1)×(k+1)` matrix whose first `k`
/// rows are `(c_{i+j})`.
fn last_row_cofactors<C: Determinant>(c: &[C], k: usize) -> Vec<C> {
    let ring = c[0].ring();
    (0..=k)
        .map(|j| {
            let minor: Vec<Vec<C>> = (0..k)
                .map(|i| (0..=k).filter(|&col| col != j).map(|col| c[i + col].clone()).collect())
                .collect();
            let d = C::determinant(minor, &ring);
            if (k + j) % 2 == 1 {
                -d
            } else {
                d
            }
        })
        .collect()
}

/// `(P, Q)` by expanding the two determinants along their last rows.
pub fn pade_polynomials<C: Determinant>(f: &TruncatedSeries<C>, k: usize) -> Result<(Polynomial<C>, Polynomial<C>)> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    if f.order() < 2 * k {
        return Err(Error::InsufficientOrder {
            needed: 2 * k,
            available: f.order(),
        });
    }
    let ring = f.ring();
    let c = f.coeffs();
    let cof = last_row_cofactors(c, k);
    let zero = C::zero_in(&ring);
    let mut q = vec![zero.clone(); k + 1];
    let mut p = vec![zero; k];
    for (j, cj) in cof.iter().enumerate() {
        q[k - j] = q[k - j].clone() + cj.clone();
        for (i, ci) in c.iter().enumerate().take(j) {
            let e = i + k - j;
            p[e] = p[e].clone() + cj.clone() * ci.clone();
        }
    }
    Ok((Polynomial::new(ring, p), Polynomial::new(ring, q)))
}

/// Same pair by solving the Hankel system for `Q` with `Q(0) = H_k` and
/// reading `P` off `f Q`.
pub fn pade_polynomials_fast<C: Determinant>(f: &TruncatedSeries<C>, k: usize) -> Result<(Polynomial<C>, Polynomial<C>)> {
    let ring = f.ring();
    if !ring.is_field() {
        return Err(Error::NotAField(ring));
    }
    let hk = hankel_det(f, k, 0)?;
    if hk.is_zero() {
        return Err(Error::HankelVanishes(k));
    }
    let c = f.coeffs();
    // Σ_{j=1..k} q_j c_{n-j} = -H_k c_n for n = k..2k-1
    let mut a: Vec<Vec<C>> = (k..2 * k)
        .map(|n| {
            let mut row: Vec<C> = (1..=k).map(|j| c[n - j].clone()).collect();
            row.push(-(hk.clone() * c[n].clone()));
            row
        })
        .collect();
    let sol = solve(&mut a).ok_or(Error::HankelVanishes(k))?;
    let mut q = vec![hk];
    q.extend(sol);
    let q = Polynomial::new(ring, q);
    let p = f.mul_poly(&q)?.truncate(k).to_polynomial();
    Ok((p, q))
}

/// Gauss–Jordan on an augmented square system over a field.
fn solve<C: Coeff>(a: &mut [Vec<C>]) -> Option<Vec<C>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        let inv = a[col][col].try_inv()?;
        for x in a[col].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let m = a[r][col].clone();
                for j in col..=n {
                    let t = a[col][j].clone() * m.clone();
                    a[r][j] = a[r][j].clone() - t;
                }
            }
        }
    }
    Some(a.iter().map(|row| row[n].clone()).collect())
}

/// `[k-1/k]` with its contact order. Fails when `H_k(f) = 0`.
pub fn pade_construct<C: Determinant>(f: &TruncatedSeries<C>, k: usize) -> Result<PadeApproximant<C>> {
    let ring = f.ring();
    if !ring.is_field() {
        return Err(Error::NotAField(ring));
    }
    let (p, q) = pade_polynomials(f, k)?;
    let hk = q.coeff(0);
    if hk.is_zero() {
        return Err(Error::HankelVanishes(k));
    }
    debug_assert_eq!(hk, hankel_det(f, k, 0)?);
    let residual = f.mul_poly(&q)?.sub(&p.to_series(f.order()))?;
    let k_prime = residual.valuation().map(|v| {
        debug_assert!(v >= 2 * k);
        v - k
    });
    let h_k = match k_prime {
        Some(kp) => {
            let lead = bordered_det(f, k, kp)?;
            assert_eq!(lead, residual.coeffs()[k + kp], "residual leads with H_(k,k')");
            Some(lead.try_div(&hk).expect("field division"))
        }
        None => None,
    };
    Ok(PadeApproximant {
        p,
        q,
        k,
        k_prime,
        h_k,
        contact_verified_to: f.order(),
    })
}

/// Valuation of `f Q - P`, `None` when it vanishes below the order of `f`.
/// Checks it against `k + k'` and its leading coefficient against `H_{k,k'}`.
pub fn contact_order<C: Determinant>(f: &TruncatedSeries<C>, approx: &PadeApproximant<C>) -> Result<Option<usize>> {
    let residual = f.mul_poly(&approx.q)?.sub(&approx.p.to_series(f.order()))?;
    let Some(v) = residual.valuation() else {
        return Ok(None);
    };
    let k = approx.k;
    if v < 2 * k {
        return Err(Error::InvalidArgument(format!(
            "residual valuation {v} is below 2k = {}",
            2 * k
        )));
    }
    if approx.k_prime.is_some_and(|kp| kp + k != v) {
        return Err(Error::InvalidArgument(format!(
            "residual valuation {v} differs from k + k' recorded in the approximant"
        )));
    }
    if bordered_det(f, k, v - k)? != residual.coeffs()[v] {
        return Err(Error::InvalidArgument("residual does not lead with H_(k,k')".into()));
    }
    Ok(Some(v))
}
