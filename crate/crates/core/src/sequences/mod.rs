//! Exact coefficient prefixes of the series under study: named automatic and
//! Mahler series, solutions of functional equations, lacunary products,
//! double sums and quadratic equations over prime fields.

mod equation;
mod named;
mod products;
mod quadratic;

use serde::{Deserialize, Serialize};

pub use equation::{feq_generate, EquationLiteral, MahlerEquation};
pub use named::{
    declared_bound, describe, gen_named, named_equation, prime_family, CoeffBound, NAMES,
};
pub use products::{
    double_sum_equation, double_sum_generate, product2, product2_companion, product3, product_d,
};
pub use quadratic::{QuadraticCase, QuadraticEquation};

use crate::error::Result;
use crate::exact::{Integer, Polynomial, Ring, TruncatedSeries};

/// Parameterised description of an integer series, as accepted on the
/// command line (`--spec`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceSpec {
    Named {
        name: String,
    },
    FunctionalEquation {
        #[serde(flatten)]
        equation: EquationLiteral,
    },
    Product2 {
        u: i64,
        #[serde(rename = "C")]
        c: Vec<i64>,
        #[serde(rename = "D")]
        d: Vec<i64>,
    },
    Product3 {
        #[serde(rename = "C")]
        c: Vec<i64>,
        #[serde(rename = "D")]
        d: Vec<i64>,
    },
    DoubleSum {
        alpha: u32,
        beta: u32,
        sign: i8,
    },
}

impl SequenceSpec {
    pub fn named(name: &str) -> Self {
        SequenceSpec::Named {
            name: name.to_string(),
        }
    }

    /// First `n` coefficients over the integers.
    pub fn generate(&self, n: usize) -> Result<TruncatedSeries<Integer>> {
        let p = |v: &[i64]| Polynomial::from_i64s(Ring::Integer, v);
        match self {
            SequenceSpec::Named { name } => gen_named(name, n),
            SequenceSpec::FunctionalEquation { equation } => {
                let eq = equation.to_equation()?;
                let c0 = equation.c0.map(Integer::from);
                feq_generate(&eq, n, Ring::Integer, c0.as_ref())
            }
            SequenceSpec::Product2 { u, c, d } => product2(&Integer::from(*u), &p(c), &p(d), n),
            SequenceSpec::Product3 { c, d } => product3(&p(c), &p(d), n),
            SequenceSpec::DoubleSum { alpha, beta, sign } => {
                double_sum_generate(*alpha, *beta, *sign, n)
            }
        }
    }

    /// A Mahler equation the series satisfies, with its constant term.
    pub fn equation(&self) -> Result<(MahlerEquation, Integer)> {
        let p = |v: &[i64]| Polynomial::from_i64s(Ring::Integer, v);
        match self {
            SequenceSpec::Named { name } => {
                named_equation(name).map(|(eq, c0)| (eq, Integer::from(c0)))
            }
            SequenceSpec::FunctionalEquation { equation } => {
                let eq = equation.to_equation()?;
                let c0 = match equation.c0 {
                    Some(c) => Integer::from(c),
                    None => feq_generate::<Integer>(&eq, 1, Ring::Integer, None)?
                        .coeffs()[0]
                        .clone(),
                };
                Ok((eq, c0))
            }
            // f(z) = (1 + u z + 2 z^2 C/D) f(z^2)
            SequenceSpec::Product2 { u, c, d } => {
                let num = &(&p(&[1, *u]) * &p(d)) + &p(c).shift_up(2).scale(&Integer::from(2));
                Ok((MahlerEquation::new(p(&[]), p(&[1]), num, p(d), 2)?, Integer::from(1)))
            }
            SequenceSpec::Product3 { c, d } => {
                Ok((MahlerEquation::new(p(&[]), p(&[1]), p(c), p(d), 3)?, Integer::from(1)))
            }
            SequenceSpec::DoubleSum { alpha, beta, sign } => {
                Ok((double_sum_equation(*alpha, *beta, *sign)?, Integer::from(1)))
            }
        }
    }

    /// Declared bound on `|c_j|`, when the family has one.
    pub fn declared_bound(&self) -> Option<CoeffBound> {
        match self {
            SequenceSpec::Named { name } => declared_bound(name),
            // |coefficient| <= number of (n, j) pairs hitting the index
            SequenceSpec::DoubleSum { .. } => Some(CoeffBound::Linear),
            _ => None,
        }
    }
}
