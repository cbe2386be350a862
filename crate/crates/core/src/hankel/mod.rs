//! Exact Hankel determinants `H_n^{(k)}(f) = det(c_{k+i+j})_{0≤i,j<n}`,
//! whole tables of them, bordered determinants, and the finite-prefix
//! evidence drawn from a table (nonzero indices, gap ratio, rationality
//! and periodicity).

mod det;
mod period;

use num_integer::Integer as _;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

pub use det::{bareiss, cofactor_det, field_det, field_hankel_minors, Determinant};
pub use period::{detect_period, PeriodicityEvidence};

use crate::error::{Error, Result};
use crate::exact::{Coeff, Integer, ModInt, Rational, Ring, TruncatedSeries};

/// Default number of trailing gaps used for the ratio estimate.
pub const DEFAULT_WINDOW: usize = 8;

fn need(f_order: usize, needed: usize) -> Result<()> {
    if f_order < needed {
        Err(Error::InsufficientOrder {
            needed,
            available: f_order,
        })
    } else {
        Ok(())
    }
}

/// `H_n^{(k)}(f)`; `H_0 = 1`.
pub fn hankel_det<C: Determinant>(f: &TruncatedSeries<C>, n: usize, k: usize) -> Result<C> {
    let ring = f.ring();
    if n == 0 {
        return Ok(C::one_in(&ring));
    }
    need(f.order(), k + 2 * n - 1)?;
    let c = &f.coeffs()[k..k + 2 * n - 1];
    let rows = det::hankel_rows(c, n);
    #[cfg(test)]
    if n <= 4 {
        let expect = cofactor_det(&rows, &ring);
        let got = C::determinant(rows, &ring);
        assert_eq!(got, expect, "elimination disagrees with cofactor expansion");
        return Ok(got);
    }
    Ok(C::determinant(rows, &ring))
}

/// `H_{k,k'}(f)`: the `(k+1)×(k+1)` determinant whose first `k` rows are
/// `(c_{i+j})` and whose last row is `(c_{k'}, …, c_{k+k'})`.
pub fn bordered_det<C: Determinant>(f: &TruncatedSeries<C>, k: usize, k_prime: usize) -> Result<C> {
    if k_prime < k {
        return Err(Error::InvalidArgument(format!("need k <= k', got {k} > {k_prime}")));
    }
    need(f.order(), k + k_prime + 1)?;
    let c = f.coeffs();
    let mut rows: Vec<Vec<C>> = (0..k).map(|i| c[i..=i + k].to_vec()).collect();
    rows.push(c[k_prime..=k_prime + k].to_vec());
    Ok(C::determinant(rows, &f.ring()))
}

/// Gap ratio estimate: `max n_{i+1}/n_i` over a trailing window, or
/// unbounded when fewer than two nonzero indices exist or the table looks
/// rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RhoEstimate {
    Finite(Rational),
    Infinite,
}

impl Serialize for RhoEstimate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RhoEstimate::Finite(r) => s.collect_str(r),
            RhoEstimate::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Table `H_1^{(k)}..H_N^{(k)}` with the evidence read off from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HankelReport<C: Coeff> {
    pub ring: Ring,
    pub k: usize,
    /// `table[n - 1] = H_n^{(k)}`.
    pub table: Vec<C>,
    pub nonzero_indices: Vec<usize>,
    pub rho_estimate: RhoEstimate,
    pub kronecker_flag: bool,
    pub window: usize,
}

impl<C: Coeff> HankelReport<C> {
    pub fn get(&self, n: usize) -> Option<&C> {
        n.checked_sub(1).and_then(|i| self.table.get(i))
    }
}

const KRONECKER_NOTE: &str = "kronecker_flag is evidence from a finite prefix, not a proof of rationality";

impl<C: Coeff> Serialize for HankelReport<C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let table: Vec<String> = self.table.iter().map(|c| c.to_string()).collect();
        let mut st = s.serialize_struct("HankelReport", 8)?;
        st.serialize_field("ring", &self.ring)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("table", &table)?;
        st.serialize_field("nonzero_indices", &self.nonzero_indices)?;
        st.serialize_field("rho_estimate", &self.rho_estimate)?;
        st.serialize_field("rho_window", &self.window)?;
        st.serialize_field("kronecker_flag", &self.kronecker_flag)?;
        st.serialize_field("note", KRONECKER_NOTE)?;
        st.end()
    }
}

/// `H_1^{(k)}..H_N^{(k)}` with nonzero indices, ratio estimate over the last
/// `window` gaps and the rationality flag.
pub fn hankel_table<C: Determinant>(
    f: &TruncatedSeries<C>,
    n: usize,
    k: usize,
    window: usize,
) -> Result<HankelReport<C>> {
    if window == 0 {
        return Err(Error::InvalidArgument("window must be >= 1".into()));
    }
    let ring = f.ring();
    if n > 0 {
        need(f.order(), k + 2 * n - 1)?;
    }
    let c = &f.coeffs()[k..];
    let table = C::hankel_minors(c, n, &ring);
    Ok(report_from_table(ring, k, table, window))
}

/// Evidence derived from an already computed table.
pub fn report_from_table<C: Coeff>(ring: Ring, k: usize, table: Vec<C>, window: usize) -> HankelReport<C> {
    let n = table.len();
    let nonzero_indices: Vec<usize> = table
        .iter()
        .enumerate()
        .filter(|(_, h)| !h.is_zero())
        .map(|(i, _)| i + 1)
        .collect();
    let last = nonzero_indices.last().copied().unwrap_or(0);
    // the trailing zero run must be at least as long as the observed prefix
    let kronecker_flag = n > last && n - last >= last;
    let rho_estimate = if kronecker_flag || nonzero_indices.len() < 2 {
        RhoEstimate::Infinite
    } else {
        let gaps = nonzero_indices.windows(2).rev().take(window);
        let best = gaps
            .map(|w| Rational::new(Integer::from(w[1]), Integer::from(w[0])))
            .max()
            .expect("at least one gap");
        RhoEstimate::Finite(best)
    };
    HankelReport {
        ring,
        k,
        table,
        nonzero_indices,
        rho_estimate,
        kronecker_flag,
        window,
    }
}

/// `H_n / base^{shift(n)}` reduced modulo `m`, for `n` in `from..=table.len()`.
/// Fails when a quotient is not an integer.
pub fn scaled_residues(
    table: &[Integer],
    from: usize,
    base: u64,
    shift: impl Fn(usize) -> u32,
    m: u64,
) -> Result<Vec<u64>> {
    let base = Integer::from(base);
    let modulus = Integer::from(m);
    (from.max(1)..=table.len())
        .map(|n| {
            let d = num_traits::pow(base.clone(), shift(n) as usize);
            let (q, r) = table[n - 1].div_rem(&d);
            if !Zero::is_zero(&r) {
                return Err(Error::NotInRing {
                    index: n,
                    ring: Ring::Integer,
                });
            }
            Ok(q.mod_floor(&modulus).to_u64().expect("reduced"))
        })
        .collect()
}

/// Reduced Hankel table over `F_p` with its periodicity evidence.
pub fn mod_p_scan(f: &TruncatedSeries<ModInt>, n: usize) -> Result<(Vec<ModInt>, PeriodicityEvidence)> {
    let ring = f.ring();
    let p = ring.modulus().expect("modular ring");
    if !ring.is_field() {
        return Err(Error::NotAField(ring));
    }
    if n < 4 {
        return Err(Error::InvalidArgument("scan needs N >= 4".into()));
    }
    let report = hankel_table(f, n, 0, DEFAULT_WINDOW)?;
    let residues: Vec<u64> = report.table.iter().map(|h| h.residue()).collect();
    let evidence = PeriodicityEvidence::scan(p, &residues);
    Ok((report.table, evidence))
}
