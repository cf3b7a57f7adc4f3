use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::domain::{DomainSpec, Exponent, Point2C};
use crate::error::{Error, Result};
use crate::kernel;

/// Default relative tolerance for the series tail.
pub const DEFAULT_SERIES_TOL: f64 = 1e-8;

/// Largest row/column count the automatic truncation will grow to.
pub const MAX_TRUNCATION: u32 = 1 << 15;

/// Basis monomial `z1^a z2^b` with its squared `L²` norm on `H_γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonomialIndex {
    pub a: u32,
    pub b: i64,
    pub norm_sq: f64,
}

impl MonomialIndex {
    /// `None` when `z1^a z2^b` is not square integrable on the domain.
    pub fn new(gamma: Exponent, a: u32, b: i64) -> Option<Self> {
        admissible(gamma, a, b).then(|| Self { a, b, norm_sq: norm_sq(gamma, a, b) })
    }
}

/// `2b + 2 + (2a + 2)/γ > 0`, evaluated in integers.
pub fn admissible(gamma: Exponent, a: u32, b: i64) -> bool {
    let num = i128::from(gamma.num);
    let den = i128::from(gamma.den);
    num * (2 * i128::from(b) + 2) + (2 * i128::from(a) + 2) * den > 0
}

/// Smallest admissible `b` for a given `a`.
pub fn b_min(gamma: Exponent, a: u32) -> i64 {
    let m = (i64::from(a) + 1) * i64::from(gamma.den);
    let num = i64::from(gamma.num);
    let (q, r) = (m / num, m % num);
    if r == 0 {
        -q
    } else {
        -q - 1
    }
}

/// `‖z1^a z2^b‖² = 4π² / ((2a+2)(2b+2+(2a+2)/γ))`; assumes admissibility.
pub fn norm_sq(gamma: Exponent, a: u32, b: i64) -> f64 {
    let a2 = 2.0 * f64::from(a) + 2.0;
    let inner = 2.0 * b as f64 + 2.0 + a2 * f64::from(gamma.den) / f64::from(gamma.num);
    4.0 * PI * PI / (a2 * inner)
}

/// All admissible indices with `a <= a_max`, `b <= b_max`.
pub fn basis_norms(spec: &DomainSpec, a_max: u32, b_max: i64) -> Result<Vec<MonomialIndex>> {
    let gamma = spec.require_hartogs("monomial basis")?;
    let mut out = Vec::new();
    for a in 0..=a_max {
        for b in b_min(gamma, a)..=b_max {
            out.extend(MonomialIndex::new(gamma, a, b));
        }
    }
    Ok(out)
}

/// Rectangle truncation of the monomial series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesTruncation {
    pub a_max: u32,
    pub b_max: i64,
    pub terms_used: u64,
    /// Analytic bound on the absolute value of everything left out.
    pub tail_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesResult {
    #[serde(serialize_with = "crate::oracle::ser_complex")]
    pub value: Complex64,
    pub truncation: SeriesTruncation,
}

/// `Σ s^a t^b / ‖z1^a z2^b‖²` over admissible `a <= a_max`, `b <= b_max`.
///
/// Fails with [`Error::NonconvergentTruncation`] when the tail bound exceeds
/// `tol · |partial sum|`.
pub fn kernel_series(
    spec: &DomainSpec,
    z: &Point2C,
    w: &Point2C,
    a_max: u32,
    b_max: i64,
    tol: f64,
) -> Result<SeriesResult> {
    let gamma = spec.require_hartogs("series kernel")?;
    spec.check(z)?;
    spec.check(w)?;
    let s = z.z1 * w.z1.conj();
    let t = z.z2 * w.z2.conj();
    let res = partial_sum(gamma, s, t, a_max, b_max);
    let tail = res.truncation.tail_estimate;
    if tail.is_nan() || tail > tol * res.value.norm() {
        return Err(Error::NonconvergentTruncation { tail, tolerance: tol * res.value.norm() });
    }
    Ok(res)
}

/// Series with the truncation grown until the tail bound meets `tol`
/// (relative to the partial sum).
pub fn kernel_series_auto(spec: &DomainSpec, z: &Point2C, w: &Point2C, tol: f64) -> Result<SeriesResult> {
    let gamma = spec.require_hartogs("series kernel")?;
    spec.check(z)?;
    spec.check(w)?;
    let s = z.z1 * w.z1.conj();
    let t = z.z2 * w.z2.conj();
    let (mut a_max, mut b_max) = (16u32, 16i64);
    loop {
        let res = partial_sum(gamma, s, t, a_max, b_max);
        let target = tol * res.value.norm();
        let tail = res.truncation.tail_estimate;
        if tail <= target {
            return Ok(res);
        }
        if !tail.is_finite() || (a_max >= MAX_TRUNCATION && b_max >= i64::from(MAX_TRUNCATION)) {
            return Err(Error::NonconvergentTruncation { tail, tolerance: target });
        }
        let (row_tail, col_tail) = tail_parts(gamma, s.norm(), t.norm(), a_max, b_max);
        if row_tail >= col_tail && a_max < MAX_TRUNCATION {
            a_max *= 2;
        } else {
            b_max = (b_max * 2).min(i64::from(MAX_TRUNCATION));
        }
    }
}

/// Series value next to the closed form at one pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesComparison {
    pub z: Point2C,
    pub w: Point2C,
    #[serde(serialize_with = "crate::oracle::ser_complex")]
    pub series: Complex64,
    #[serde(serialize_with = "crate::oracle::ser_complex")]
    pub closed: Complex64,
    /// `|series - closed| / |closed|`.
    pub rel_deviation: f64,
    pub truncation: SeriesTruncation,
}

/// Compares [`kernel_series_auto`] with the closed-form kernel of `spec`.
pub fn compare_with_closed_form(spec: &DomainSpec, z: &Point2C, w: &Point2C, tol: f64) -> Result<SeriesComparison> {
    let closed = kernel::bergman(spec, z, w)?.checked("closed form")?;
    let series = kernel_series_auto(spec, z, w, tol)?;
    Ok(SeriesComparison {
        z: *z,
        w: *w,
        series: series.value,
        closed,
        rel_deviation: (series.value - closed).norm() / closed.norm(),
        truncation: series.truncation,
    })
}

/// `n` random pairs of `spec` with `|z1 conj(w1)|, |z2 conj(w2)| <= max_modulus`.
pub fn sample_pairs_bounded(
    spec: &DomainSpec,
    n: usize,
    seed: u64,
    max_modulus: f64,
) -> Result<Vec<(Point2C, Point2C)>> {
    const ROUNDS: u64 = 1_000;
    let mut out = Vec::with_capacity(n);
    for round in 0..ROUNDS {
        for (z, w) in spec.sample_pairs(n.max(64), seed.wrapping_add(round.wrapping_mul(0x9e37_79b9_7f4a_7c15)))? {
            if (z.z1 * w.z1.conj()).norm() <= max_modulus && (z.z2 * w.z2.conj()).norm() <= max_modulus {
                out.push((z, w));
                if out.len() == n {
                    return Ok(out);
                }
            }
        }
    }
    Err(Error::SamplerExhausted((ROUNDS as usize) * n.max(64)))
}

fn partial_sum(gamma: Exponent, s: Complex64, t: Complex64, a_max: u32, b_max: i64) -> SeriesResult {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut terms = 0u64;
    let s_is_zero = s.norm() == 0.0;
    // s^a t^{b_min(a)}, advanced row by row.
    let mut row_base = t.powi(b_min(gamma, 0) as i32);
    for a in 0..=a_max {
        let bmin = b_min(gamma, a);
        if a > 0 {
            if s_is_zero {
                break;
            }
            let step = (bmin - b_min(gamma, a - 1)) as i32;
            row_base = row_base * s * t.powi(step);
        }
        let mut term = row_base;
        for b in bmin..=b_max {
            sum += term / norm_sq(gamma, a, b);
            term *= t;
            terms += 1;
        }
    }
    let (row_tail, col_tail) = tail_parts(gamma, s.norm(), t.norm(), a_max, b_max);
    SeriesResult {
        value: sum,
        truncation: SeriesTruncation { a_max, b_max, terms_used: terms, tail_estimate: row_tail + col_tail },
    }
}

/// Tail bounds `(rows a > a_max, columns b > b_max within kept rows)`.
///
/// With `b = b_min(a) + n` the weight `1/‖·‖²` is `(2a+2)(e_a + 2n)/(4π²)`,
/// `e_a ∈ (0, 2]`, and `Σ_{n≥N} (e + 2n) x^n = x^N ((e+2N)/(1-x) + 2x/(1-x)²)`.
/// Rows beyond `a_max` are bounded through `|s|^a |t|^{b_min(a)} <=
/// |t|^{-1-1/γ} ρ^a`, `ρ = |s| |t|^{-1/γ}`.
fn tail_parts(gamma: Exponent, abs_s: f64, x: f64, a_max: u32, b_max: i64) -> (f64, f64) {
    if x.is_nan() || x >= 1.0 || x == 0.0 {
        return (f64::INFINITY, f64::INFINITY);
    }
    let inv_gamma = f64::from(gamma.den) / f64::from(gamma.num);
    let four_pi2 = 4.0 * PI * PI;
    let geo = |e: f64, n: f64| x.powf(n) * ((e + 2.0 * n) / (1.0 - x) + 2.0 * x / ((1.0 - x) * (1.0 - x)));

    let mut col = 0.0;
    for a in 0..=a_max {
        if a > 0 && abs_s == 0.0 {
            break;
        }
        let bmin = b_min(gamma, a);
        let e = 2.0 * bmin as f64 + 2.0 + (2.0 * f64::from(a) + 2.0) * inv_gamma;
        let n = (b_max - bmin + 1).max(0) as f64;
        // log form: |t|^{b_min} alone overflows for thin domains at large a.
        let log_mono = if a == 0 { 0.0 } else { f64::from(a) * abs_s.ln() } + bmin as f64 * x.ln();
        let base = log_mono.exp() * (2.0 * f64::from(a) + 2.0) / four_pi2;
        col += base * geo(e, n);
    }

    let rho = abs_s * x.powf(-inv_gamma);
    let row = if abs_s == 0.0 {
        0.0
    } else if rho >= 1.0 {
        f64::INFINITY
    } else {
        let a0 = f64::from(a_max) + 1.0;
        let weights = rho.powf(a0) * ((2.0 * a0 + 2.0) / (1.0 - rho) + 2.0 * rho / ((1.0 - rho) * (1.0 - rho)));
        x.powf(-1.0 - inv_gamma) * geo(2.0, 0.0) * weights / four_pi2
    };
    (row, col)
}
