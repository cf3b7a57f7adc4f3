//! Exact integer polynomials in one variable `s`: the fat-kernel numerator
//! coefficients `p_k`, `q_k`, the partial geometric sums `h_l`, and the three
//! coefficient sums whose equality with `p_k`, `q_k`, `s^k p_k` is checked
//! coefficient by coefficient.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Dense polynomial with arbitrary-precision integer coefficients.
/// `coeffs[i]` multiplies `s^i`; there are no trailing zeros, so the zero
/// polynomial has no coefficients at all.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self { coeffs: vec![BigInt::one()] }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `c * s^n`.
    pub fn monomial(c: impl Into<BigInt>, n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = c.into();
        Self::from_coeffs(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Coefficient of `s^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Multiply by `s^n`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn scale(&self, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        Self::from_coeffs(self.coeffs.iter().map(|a| a * &c).collect())
    }

    /// Exact value at an integer point (Horner).
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Palindromic: `c_i = c_{deg-i}` for all `i`.
    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// Coefficients as `f64`, provided every one is exactly representable.
    pub fn to_f64_exact(&self) -> Option<Vec<f64>> {
        self.coeffs
            .iter()
            .map(|c| {
                let f = c.to_f64()?;
                (f.is_finite() && BigInt::from(f as i128) == *c && f.abs() <= 2f64.powi(53)).then_some(f)
            })
            .collect()
    }

    /// First index where `self` and `other` differ.
    pub fn first_difference(&self, other: &IntPoly) -> Option<CoeffDiff> {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).find_map(|i| {
            let (l, r) = (self.coeff(i), other.coeff(i));
            (l != r).then(|| CoeffDiff { power: i, left: l.to_string(), right: r.to_string() })
        })
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(out)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let mag = c.abs();
            match i {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}*s")?,
                _ => write!(f, "{mag}*s^{i}")?,
            }
        }
        Ok(())
    }
}

/// JSON integer array; coefficients beyond 2^53 in magnitude become decimal strings.
impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            match c.to_i64().filter(|v| v.unsigned_abs() <= 1 << 53) {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoeffDiff {
    pub power: usize,
    pub left: String,
    pub right: String,
}

fn require_k(k: u32) -> Result<()> {
    if k == 0 {
        Err(Error::Precondition("k must be >= 1".into()))
    } else {
        Ok(())
    }
}

/// `h_l(s) = 1 + s + ... + s^l`.
pub fn h(l: usize) -> IntPoly {
    IntPoly { coeffs: vec![BigInt::one(); l + 1] }
}

/// `p_k(s) = Σ_{l=1}^{k-1} l(k-l) s^{l-1}`; the zero polynomial for `k = 1`.
pub fn p(k: u32) -> Result<IntPoly> {
    require_k(k)?;
    let k = i64::from(k);
    Ok(IntPoly::from_i64(&(1..k).map(|l| l * (k - l)).collect::<Vec<_>>()))
}

/// `q_k(s) = Σ_{l=1}^{k} (l² + (k-l)² s^k) s^{l-1}`.
pub fn q(k: u32) -> Result<IntPoly> {
    require_k(k)?;
    let ku = k as usize;
    let k = i64::from(k);
    let mut coeffs = vec![0i64; 2 * ku];
    for l in 1..=k {
        let lu = l as usize;
        coeffs[lu - 1] += l * l;
        coeffs[ku + lu - 1] += (k - l) * (k - l);
    }
    Ok(IntPoly::from_i64(&coeffs))
}

fn require_k2(k: u32) -> Result<usize> {
    if k < 2 {
        Err(Error::Precondition(format!("coefficient sums need k >= 2, got {k}")))
    } else {
        Ok(k as usize)
    }
}

/// `Σ_{l=0}^{k-2} h_l h_{k-2-l}`, the `a^{3k-2}` coefficient sum.
pub fn coeff_sum_f1(k: u32) -> Result<IntPoly> {
    let k = require_k2(k)?;
    Ok((0..=k - 2).fold(IntPoly::zero(), |acc, l| &acc + &(&h(l) * &h(k - 2 - l))))
}

/// `2 Σ_{l=0}^{k-2} s^{k-1-l} h_l² + h_{k-1}²`, the `a^{2k-2}` coefficient sum.
pub fn coeff_sum_f2(k: u32) -> Result<IntPoly> {
    let k = require_k2(k)?;
    let hk1 = h(k - 1);
    let tail = &hk1 * &hk1;
    let body = (0..=k - 2).fold(IntPoly::zero(), |acc, l| {
        let hl = h(l);
        &acc + &(&hl * &hl).shift(k - 1 - l)
    });
    Ok(&body.scale(2) + &tail)
}

/// `s^k Σ_{l=0}^{k-2} h_l h_{k-2-l}`, the `a^{k-2}` coefficient sum.
pub fn coeff_sum_f3(k: u32) -> Result<IntPoly> {
    let f1 = coeff_sum_f1(k)?;
    Ok(f1.shift(k as usize))
}

/// Coefficients `g_{2k}`, `g_k`, `g_0` of `a^{2k}`, `a^k`, `a^0` in the
/// numerator of the branch-summed kernel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NumeratorTriple {
    pub k: u32,
    pub g2k: IntPoly,
    pub gk: IntPoly,
    pub g0: IntPoly,
}

impl NumeratorTriple {
    /// From the closed forms: `k p_k`, `k q_k`, `k s^k p_k`.
    pub fn from_closed_forms(k: u32) -> Result<Self> {
        let pk = p(k)?;
        let qk = q(k)?;
        Ok(Self { k, g2k: pk.scale(k), gk: qk.scale(k), g0: pk.shift(k as usize).scale(k) })
    }

    /// From the per-branch coefficient sums, each of which is the same for all
    /// `k` branches and so contributes `k` times.
    pub fn from_coefficient_sums(k: u32) -> Result<Self> {
        Ok(Self { k, g2k: coeff_sum_f1(k)?.scale(k), gk: coeff_sum_f2(k)?.scale(k), g0: coeff_sum_f3(k)?.scale(k) })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub k: u32,
    /// `F1 == p_k`
    pub f1: bool,
    /// `F2 == q_k`
    pub f2: bool,
    /// `F3 == s^k p_k`
    pub f3: bool,
    /// `k`-scaled triples from both routes agree.
    pub triple: bool,
    pub first_difference: Option<(String, CoeffDiff)>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.f1 && self.f2 && self.f3 && self.triple
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub k_max: u32,
    pub all_passed: bool,
    pub checks: Vec<IdentityCheck>,
}

/// Exact comparison of the coefficient sums against the closed forms for
/// every `2 <= k <= k_max`.
pub fn verify_identities(k_max: u32) -> Result<IdentityReport> {
    if k_max < 2 {
        return Err(Error::Precondition(format!("k_max must be >= 2, got {k_max}")));
    }
    let checks: Vec<IdentityCheck> = (2..=k_max).map(check_one).collect::<Result<_>>()?;
    let all_passed = checks.iter().all(IdentityCheck::passed);
    Ok(IdentityReport { k_max, all_passed, checks })
}

fn check_one(k: u32) -> Result<IdentityCheck> {
    let pk = p(k)?;
    let qk = q(k)?;
    let skpk = pk.shift(k as usize);
    let pairs = [
        ("F1 vs p_k", coeff_sum_f1(k)?, pk),
        ("F2 vs q_k", coeff_sum_f2(k)?, qk),
        ("F3 vs s^k p_k", coeff_sum_f3(k)?, skpk),
    ];
    let diffs: Vec<Option<CoeffDiff>> = pairs.iter().map(|(_, l, r)| l.first_difference(r)).collect();
    let closed = NumeratorTriple::from_closed_forms(k)?;
    let summed = NumeratorTriple::from_coefficient_sums(k)?;
    let first_difference =
        pairs.iter().zip(&diffs).find_map(|((name, _, _), d)| d.clone().map(|d| (name.to_string(), d)));
    Ok(IdentityCheck {
        k,
        f1: diffs[0].is_none(),
        f2: diffs[1].is_none(),
        f3: diffs[2].is_none(),
        triple: closed == summed,
        first_difference,
    })
}
