use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::domain::{DomainSpec, Point2C};
use crate::error::{Error, Result};
use crate::oracle::series::admissible;

/// Named monomial test functions `z1^a z2^b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Function2C {
    One,
    Z1,
    Z2,
    Z2Inv,
    Monomial { a: u32, b: i32 },
}

impl Function2C {
    /// Exponents `(a, b)`.
    pub fn exponents(&self) -> (u32, i32) {
        match *self {
            Function2C::One => (0, 0),
            Function2C::Z1 => (1, 0),
            Function2C::Z2 => (0, 1),
            Function2C::Z2Inv => (0, -1),
            Function2C::Monomial { a, b } => (a, b),
        }
    }

    pub fn eval(&self, p: &Point2C) -> Complex64 {
        let (a, b) = self.exponents();
        p.z1.powu(a) * p.z2.powi(b)
    }

    /// Whether the function lies in the Bergman space of `spec`.
    pub fn in_bergman_space(&self, spec: &DomainSpec) -> bool {
        let (a, b) = self.exponents();
        match spec.gamma() {
            Some(g) => admissible(g, a, i64::from(b)),
            None => b >= 0,
        }
    }
}

impl FromStr for Function2C {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "one" | "1" => Ok(Self::One),
            "z1" => Ok(Self::Z1),
            "z2" => Ok(Self::Z2),
            "z2inv" => Ok(Self::Z2Inv),
            other => {
                let bad = || {
                    Error::Parse(format!("unknown test function {other:?} (expected one, z1, z2, z2inv, z1^a*z2^b)"))
                };
                let (l, r) = other.split_once('*').ok_or_else(bad)?;
                let a = l.strip_prefix("z1^").ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let b = r.strip_prefix("z2^").ok_or_else(bad)?.parse().map_err(|_| bad())?;
                Ok(Self::Monomial { a, b })
            }
        }
    }
}

impl fmt::Display for Function2C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Function2C::One => f.write_str("one"),
            Function2C::Z1 => f.write_str("z1"),
            Function2C::Z2 => f.write_str("z2"),
            Function2C::Z2Inv => f.write_str("z2inv"),
            Function2C::Monomial { a, b } => write!(f, "z1^{a}*z2^{b}"),
        }
    }
}
