//! Exact arithmetic substrate: integers, rationals, residues, dense
//! polynomials and truncated power series over any of them.

mod modint;
mod poly;
mod ring;
mod series;

pub use modint::ModInt;
pub use poly::Polynomial;
pub use ring::{is_prime, log2_abs, log2_int, Coeff, Integer, Rational, Ring};
pub use series::{
    compose_power, rational_to_series, series_arith, series_invert, ArithKind, TruncatedSeries,
};

pub(crate) use ring::check_admits;
