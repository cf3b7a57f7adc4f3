//! Closed-form Bergman kernels.
//!
//! All kernels here depend on the pair `(z, w)` only through
//! `s = z1·conj(w1)` and `t = z2·conj(w2)`:
//!
//! * fat `H_k`:   `(p_k(s) t² + q_k(s) t + s^k p_k(s)) / (k π² (1-t)² (t - s^k)²)`
//! * thin `H_1/k`: `t^k / (π² (1-t)² (t^k - s)²)`
//! * `H_1`:       `t / (π² (1-t)² (t - s)²)`
//! * bidisc and punctured bidisc: `1 / (π² (1-s)² (1-t)²)`
//!
//! Numerator and denominator are returned separately so zero-finding can work
//! on the numerator alone.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::domain::{DomainKind, DomainSpec, Point2C};
use crate::error::{Error, Result};
use crate::polycoeff;
use crate::report::ComplexJson;

/// `|denominator|` below this sets [`KernelValue::near_singular`].
pub const NEAR_SINGULAR: f64 = 1e-30;

/// Relative imaginary residue tolerated on the diagonal before it is dropped.
pub const DIAGONAL_IM_TOL: f64 = 1e-12;

const PI2: f64 = PI * PI;

/// Reduced variables `s = z1 conj(w1)`, `t = z2 conj(w2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelArgs {
    pub s: Complex64,
    pub t: Complex64,
}

impl KernelArgs {
    pub fn from_points(z: &Point2C, w: &Point2C) -> Self {
        Self { s: z.z1 * w.z1.conj(), t: z.z2 * w.z2.conj() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    pub numerator: Complex64,
    pub denominator: Complex64,
    pub near_singular: bool,
}

impl KernelValue {
    fn new(numerator: Complex64, denominator: Complex64) -> Self {
        Self {
            value: numerator.fdiv(denominator),
            numerator,
            denominator,
            near_singular: denominator.norm() < NEAR_SINGULAR,
        }
    }

    /// The value, or [`Error::SingularEvaluation`] when the flag is set.
    pub fn checked(&self, context: &str) -> Result<Complex64> {
        if self.near_singular || !self.value.is_finite() {
            Err(Error::SingularEvaluation { context: context.to_string() })
        } else {
            Ok(self.value)
        }
    }
}

impl Serialize for KernelValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("KernelValue", 4)?;
        st.serialize_field("value", &ComplexJson::from(self.value))?;
        st.serialize_field("numerator", &ComplexJson::from(self.numerator))?;
        st.serialize_field("denominator", &ComplexJson::from(self.denominator))?;
        st.serialize_field("near_singular", &self.near_singular)?;
        st.end()
    }
}

/// Middle denominator factor of the thin kernel. The two candidates differ
/// only in this factor; [`ThinDenominator::OneMinusT`] is the one confirmed by
/// the series expansion and by pulling back the bidisc kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ThinDenominator {
    #[default]
    OneMinusT,
    OneMinusS,
}

/// `p_k`, `q_k` as doubles, converted once per `k`.
#[derive(Debug)]
pub struct FatCoeffs {
    pub k: u32,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

impl FatCoeffs {
    fn build(k: u32) -> Result<Self> {
        let exact = |poly: polycoeff::IntPoly, name: &str| {
            poly.to_f64_exact().ok_or_else(|| Error::Precondition(format!("{name}_{k} has coefficients beyond 2^53")))
        };
        Ok(Self { k, p: exact(polycoeff::p(k)?, "p")?, q: exact(polycoeff::q(k)?, "q")? })
    }

    /// Cached coefficient table for `k`.
    pub fn get(k: u32) -> Result<Arc<FatCoeffs>> {
        static CACHE: OnceLock<RwLock<HashMap<u32, Arc<FatCoeffs>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(c) = cache.read().expect("coefficient cache poisoned").get(&k) {
            return Ok(Arc::clone(c));
        }
        let built = Arc::new(Self::build(k)?);
        let mut guard = cache.write().expect("coefficient cache poisoned");
        Ok(Arc::clone(guard.entry(k).or_insert(built)))
    }

    /// `p_k(s) t² + q_k(s) t + s^k p_k(s)`.
    pub fn numerator(&self, s: Complex64, t: Complex64) -> Complex64 {
        let ps = horner(&self.p, s);
        let qs = horner(&self.q, s);
        ps * t * t + qs * t + s.powu(self.k) * ps
    }
}

pub fn horner(coeffs: &[f64], x: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

/// Fat formula in the reduced variables, without domain checks. Valid for
/// every `k >= 1` (at `k = 1` it reduces to the classical kernel).
pub fn fat_formula(coeffs: &FatCoeffs, args: KernelArgs) -> KernelValue {
    let KernelArgs { s, t } = args;
    let one_t = 1.0 - t;
    let gap = t - s.powu(coeffs.k);
    let den = f64::from(coeffs.k) * PI2 * one_t * one_t * gap * gap;
    KernelValue::new(coeffs.numerator(s, t), den)
}

/// Thin formula in the reduced variables, without domain checks.
pub fn thin_formula(k: u32, args: KernelArgs, variant: ThinDenominator) -> KernelValue {
    let KernelArgs { s, t } = args;
    let tk = t.powu(k);
    let middle = match variant {
        ThinDenominator::OneMinusT => 1.0 - t,
        ThinDenominator::OneMinusS => 1.0 - s,
    };
    let gap = tk - s;
    KernelValue::new(tk, PI2 * middle * middle * gap * gap)
}

fn classical_formula(args: KernelArgs) -> KernelValue {
    thin_formula(1, args, ThinDenominator::OneMinusT)
}

fn bidisc_formula(args: KernelArgs) -> KernelValue {
    let (a, b) = (1.0 - args.s, 1.0 - args.t);
    KernelValue::new(Complex64::new(1.0, 0.0), PI2 * a * a * b * b)
}

fn check_pair(spec: &DomainSpec, z: &Point2C, w: &Point2C) -> Result<KernelArgs> {
    spec.check(z)?;
    spec.check(w)?;
    Ok(KernelArgs::from_points(z, w))
}

/// Kernel of the fat triangle `H_k`.
pub fn bergman_fat(k: u32, z: &Point2C, w: &Point2C) -> Result<KernelValue> {
    let spec = DomainSpec::fat(k)?;
    let args = check_pair(&spec, z, w)?;
    if k == 1 {
        return Ok(classical_formula(args));
    }
    Ok(fat_formula(&*FatCoeffs::get(k)?, args))
}

/// Kernel of the thin triangle `H_{1/k}`.
pub fn bergman_thin(k: u32, z: &Point2C, w: &Point2C) -> Result<KernelValue> {
    bergman_thin_variant(k, z, w, ThinDenominator::OneMinusT)
}

/// Thin kernel with an explicit choice of middle denominator factor.
pub fn bergman_thin_variant(k: u32, z: &Point2C, w: &Point2C, variant: ThinDenominator) -> Result<KernelValue> {
    let spec = DomainSpec::thin(k)?;
    let args = check_pair(&spec, z, w)?;
    if k == 1 && variant == ThinDenominator::OneMinusT {
        return Ok(classical_formula(args));
    }
    Ok(thin_formula(k, args, variant))
}

/// Kernels of the reference domains `H_1`, `D x D` and `D x D*`.
pub fn bergman_reference(spec: &DomainSpec, z: &Point2C, w: &Point2C) -> Result<KernelValue> {
    let args = check_pair(spec, z, w)?;
    match spec.kind() {
        DomainKind::ClassicalHartogs => Ok(classical_formula(args)),
        DomainKind::Bidisc | DomainKind::PuncturedBidisc => Ok(bidisc_formula(args)),
        _ => Err(Error::UnsupportedDomain { spec: *spec, reason: "not a reference domain" }),
    }
}

/// Kernel of any supported domain.
pub fn bergman(spec: &DomainSpec, z: &Point2C, w: &Point2C) -> Result<KernelValue> {
    match spec.kind() {
        DomainKind::FatHartogs(k) => bergman_fat(k, z, w),
        DomainKind::ThinHartogs(k) => bergman_thin(k, z, w),
        _ => bergman_reference(spec, z, w),
    }
}

/// Kernel of one domain prepared for repeated evaluation in reduced
/// variables, skipping membership checks. Callers are responsible for `(s, t)`
/// coming from in-domain points.
#[derive(Debug, Clone)]
pub enum Evaluator {
    Fat(Arc<FatCoeffs>),
    Thin(u32),
    Classical,
    Bidisc,
}

impl Evaluator {
    pub fn new(spec: &DomainSpec) -> Result<Self> {
        Ok(match spec.kind() {
            DomainKind::FatHartogs(k) => Evaluator::Fat(FatCoeffs::get(k)?),
            DomainKind::ThinHartogs(k) => Evaluator::Thin(k),
            DomainKind::ClassicalHartogs => Evaluator::Classical,
            DomainKind::Bidisc | DomainKind::PuncturedBidisc => Evaluator::Bidisc,
        })
    }

    pub fn eval(&self, args: KernelArgs) -> KernelValue {
        match self {
            Evaluator::Fat(c) => fat_formula(c, args),
            Evaluator::Thin(k) => thin_formula(*k, args, ThinDenominator::OneMinusT),
            Evaluator::Classical => classical_formula(args),
            Evaluator::Bidisc => bidisc_formula(args),
        }
    }
}

/// `B(z, z)`, real and strictly positive.
///
/// On the diagonal the denominator cannot vanish at interior points, so the
/// absolute `near_singular` flag is not treated as an error here (it fires
/// legitimately for tiny `|z2|` on thin triangles); a non-finite or
/// non-positive value is.
pub fn diagonal(spec: &DomainSpec, z: &Point2C) -> Result<f64> {
    let kv = bergman(spec, z, z)?;
    let v = kv.value;
    if !v.is_finite() || v.re <= 0.0 || v.im.abs() > DIAGONAL_IM_TOL * v.norm() {
        return Err(Error::SingularEvaluation { context: format!("diagonal of {spec} at {z} gave {v}") });
    }
    Ok(v.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / a.norm().max(b.norm())
    }

    fn specs() -> Vec<DomainSpec> {
        let mut v: Vec<DomainSpec> = (1..=6).map(|k| DomainSpec::fat(k).unwrap()).collect();
        v.extend((2..=5).map(|k| DomainSpec::thin(k).unwrap()));
        v.push(DomainSpec::bidisc());
        v.push(DomainSpec::punctured_bidisc());
        v
    }

    #[test]
    fn generic_fat_formula_at_k1_is_classical() {
        let coeffs = FatCoeffs::get(1).unwrap();
        let pts = DomainSpec::classical().sample_uniform(200, 5).unwrap();
        for pair in pts.chunks(2) {
            let args = KernelArgs::from_points(&pair[0], &pair[1]);
            let generic = fat_formula(&coeffs, args).value;
            let (s, t) = (args.s, args.t);
            let by_hand = t / (PI2 * (1.0 - t).powu(2) * (t - s).powu(2));
            assert!(rel(generic, by_hand) <= 1e-13);
            assert!(
                rel(generic, bergman_reference(&DomainSpec::classical(), &pair[0], &pair[1]).unwrap().value) <= 1e-13
            );
        }
    }

    #[test]
    fn k1_paths_coincide_exactly() {
        let pts = DomainSpec::classical().sample_uniform(100, 6).unwrap();
        for pair in pts.chunks(2) {
            let a = bergman_fat(1, &pair[0], &pair[1]).unwrap();
            let b = bergman_thin(1, &pair[0], &pair[1]).unwrap();
            let r = bergman_reference(&DomainSpec::classical(), &pair[0], &pair[1]).unwrap();
            assert_eq!(a, b);
            assert_eq!(a, r);
        }
    }

    #[test]
    fn fat3_witness_is_a_zero() {
        let r = 0.5f64.sqrt();
        let z = Point2C::new(c(0.0, 0.0), c(0.0, r));
        let w = Point2C::new(c(0.0, 0.0), c(0.0, -r));
        let kv = bergman_fat(3, &z, &w).unwrap();
        assert!(kv.numerator.norm() < 1e-15, "{}", kv.numerator);
        assert!(kv.value.norm() < 1e-14);
    }

    #[test]
    fn classical_diagonal_value() {
        let z = Point2C::real(0.0, 0.5f64.sqrt());
        let v = bergman_fat(1, &z, &z).unwrap().value;
        assert!(rel(v, c(8.0 / PI2, 0.0)) < 1e-14);
        let d = diagonal(&DomainSpec::classical(), &z).unwrap();
        assert!((d - 8.0 / PI2).abs() < 1e-14);
    }

    #[test]
    fn fat2_diagonal_on_axis() {
        let spec = DomainSpec::fat(2).unwrap();
        for r in [0.1, 0.3, 0.5, 0.9] {
            let d = diagonal(&spec, &Point2C::real(0.0, r)).unwrap();
            let t = r * r;
            // s = 0: numerator p_2(0) t² + q_2(0) t = t² + t.
            let expected = (1.0 + t) / (2.0 * PI2 * (1.0 - t).powi(2) * t);
            assert!((d / expected - 1.0).abs() < 1e-14, "{r}");
        }
    }

    #[test]
    fn thin2_axis_value() {
        // s = 0: both thin variants give t^2 / (π² (1-t)² t^4) resp. t^2/(π² t^4).
        let z = Point2C::real(0.0, 0.5f64.sqrt());
        let t = 0.5;
        let good = bergman_thin(2, &z, &z).unwrap().value.re;
        assert!((good - 1.0 / (PI2 * (1.0 - t) * (1.0 - t) * t * t)).abs() < 1e-12);
        assert!((good - 16.0 / PI2).abs() < 1e-12);
        let other = bergman_thin_variant(2, &z, &z, ThinDenominator::OneMinusS).unwrap().value.re;
        assert!((other - 4.0 / PI2).abs() < 1e-12);
    }

    #[test]
    fn bidisc_values() {
        let o = Point2C::real(0.0, 0.0);
        let v = bergman_reference(&DomainSpec::bidisc(), &o, &o).unwrap();
        assert!((v.value.re - 1.0 / PI2).abs() < 1e-16);
        assert!(bergman_reference(&DomainSpec::punctured_bidisc(), &o, &o).is_err());
        let pts = DomainSpec::punctured_bidisc().sample_uniform(100, 3).unwrap();
        for pair in pts.chunks(2) {
            assert_eq!(
                bergman_reference(&DomainSpec::bidisc(), &pair[0], &pair[1]).unwrap(),
                bergman_reference(&DomainSpec::punctured_bidisc(), &pair[0], &pair[1]).unwrap()
            );
        }
        assert!(bergman_reference(&DomainSpec::fat(2).unwrap(), &o, &o).is_err());
    }

    #[test]
    fn rejects_outside_points() {
        let inside = Point2C::real(0.1, 0.5);
        let outside = Point2C::real(0.8, 0.5);
        assert!(matches!(bergman_fat(2, &inside, &outside), Err(Error::OutsideDomain { .. })));
        assert!(matches!(bergman_thin(2, &outside, &inside), Err(Error::OutsideDomain { .. })));
        assert!(diagonal(&DomainSpec::fat(3).unwrap(), &outside).is_err());
    }

    #[test]
    fn near_singular_flag() {
        let kv = KernelValue::new(c(1.0, 0.0), c(1e-31, 0.0));
        assert!(kv.near_singular);
        assert!(kv.checked("test").is_err());
        let kv = KernelValue::new(c(1.0, 0.0), c(1e-29, 0.0));
        assert!(!kv.near_singular);
    }

    #[test]
    fn hermitian_symmetry_and_rotation_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for spec in specs() {
            let pts = spec.sample_uniform(200, 17).unwrap();
            for pair in pts.chunks(2) {
                let (z, w) = (&pair[0], &pair[1]);
                let a = bergman(&spec, z, w).unwrap().value;
                let b = bergman(&spec, w, z).unwrap().value;
                assert!(rel(a, b.conj()) <= 1e-13, "{spec}");
                let theta = rng.gen_range(0.0..2.0 * PI);
                let rz = Point2C::new(z.z1 * Complex64::cis(theta), z.z2);
                let rw = Point2C::new(w.z1 * Complex64::cis(theta), w.z2);
                let r = bergman(&spec, &rz, &rw).unwrap().value;
                assert!(rel(a, r) <= 1e-13, "{spec}");
            }
        }
    }

    #[test]
    fn diagonal_positive_on_random_points() {
        for spec in specs() {
            for z in spec.sample_uniform(100_000, 23).unwrap() {
                let d = diagonal(&spec, &z).unwrap();
                assert!(d > 0.0 && d.is_finite());
            }
        }
    }

    #[test]
    fn thin_numerator_modulus() {
        for k in 1..=4 {
            let spec = DomainSpec::thin(k).unwrap();
            let pts = spec.sample_uniform(100, u64::from(k)).unwrap();
            for pair in pts.chunks(2) {
                let kv = bergman_thin(k, &pair[0], &pair[1]).unwrap();
                let expected = (pair[0].z2.norm() * pair[1].z2.norm()).powi(k as i32);
                assert!((kv.numerator.norm() / expected - 1.0).abs() < 1e-13);
            }
        }
    }
}
