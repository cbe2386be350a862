use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::ToPrimitive;

/// Residue class modulo `m >= 2`, always stored reduced to `[0, m)`.
///
/// Arithmetic between different moduli panics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModInt {
    residue: u64,
    modulus: u64,
}

impl ModInt {
    pub fn new(value: u64, modulus: u64) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        ModInt {
            residue: value % modulus,
            modulus,
        }
    }

    pub fn from_i64(value: i64, modulus: u64) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        let r = (value as i128).rem_euclid(modulus as i128) as u64;
        ModInt {
            residue: r,
            modulus,
        }
    }

    pub fn from_integer(value: &BigInt, modulus: u64) -> Self {
        let m = BigInt::from(modulus);
        let r = value.mod_floor(&m).to_u64().expect("reduced residue fits u64");
        ModInt {
            residue: r,
            modulus,
        }
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Inverse when the residue is a unit.
    pub fn inv(&self) -> Option<ModInt> {
        let (mut a, mut b) = (self.residue as i128, self.modulus as i128);
        let (mut x0, mut x1) = (1i128, 0i128);
        while b != 0 {
            let q = a / b;
            (a, b) = (b, a - q * b);
            (x0, x1) = (x1, x0 - q * x1);
        }
        if a != 1 {
            return None;
        }
        Some(ModInt {
            residue: x0.rem_euclid(self.modulus as i128) as u64,
            modulus: self.modulus,
        })
    }

    #[inline]
    fn check(&self, other: &ModInt) {
        assert_eq!(
            self.modulus, other.modulus,
            "arithmetic between different moduli"
        );
    }
}

impl fmt::Display for ModInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl Add for ModInt {
    type Output = ModInt;
    #[inline]
    fn add(self, rhs: ModInt) -> ModInt {
        self.check(&rhs);
        let s = self.residue as u128 + rhs.residue as u128;
        let m = self.modulus as u128;
        ModInt {
            residue: (if s >= m { s - m } else { s }) as u64,
            modulus: self.modulus,
        }
    }
}

impl Sub for ModInt {
    type Output = ModInt;
    #[inline]
    fn sub(self, rhs: ModInt) -> ModInt {
        self.check(&rhs);
        let r = if self.residue >= rhs.residue {
            self.residue - rhs.residue
        } else {
            self.modulus - (rhs.residue - self.residue)
        };
        ModInt {
            residue: r,
            modulus: self.modulus,
        }
    }
}

impl Mul for ModInt {
    type Output = ModInt;
    #[inline]
    fn mul(self, rhs: ModInt) -> ModInt {
        self.check(&rhs);
        let r = if self.modulus <= u32::MAX as u64 {
            self.residue * rhs.residue % self.modulus
        } else {
            ((self.residue as u128 * rhs.residue as u128) % self.modulus as u128) as u64
        };
        ModInt {
            residue: r,
            modulus: self.modulus,
        }
    }
}

impl Neg for ModInt {
    type Output = ModInt;
    #[inline]
    fn neg(self) -> ModInt {
        let r = if self.residue == 0 {
            0
        } else {
            self.modulus - self.residue
        };
        ModInt {
            residue: r,
            modulus: self.modulus,
        }
    }
}
