//! Holomorphic maps between the triangles and the transformation rules their
//! Bergman kernels obey.
//!
//! * `φ(z) = (z1, z2^k)` is a proper map `H_1 → H_k` of order `k`; Bell's rule
//!   ties `B_k` to `B_1` through the `k` branch inverses of `φ`.
//! * `ψ(z) = (z1/z2, z2)` maps `H_1 → D x D*` and `H_{1/(k+1)} → H_{1/k}`
//!   biholomorphically; `ψ^k(z) = (z1 z2^-k, z2)` maps `H_{1/k} → D x D*`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::domain::{DomainSpec, Point2C};
use crate::error::{Error, Result};
use crate::kernel::{self, KernelValue, ThinDenominator};

/// Arguments within this distance of `2π` are treated as argument `0`.
pub const SEAM_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProperMap {
    /// `(z1, z2^k)`
    PowerMap(u32),
    /// `(z1/z2, z2)`
    Shear,
    /// `(z1 z2, z2)`
    ShearInv,
    /// `(z1 z2^-k, z2)`
    ShearIter(u32),
    /// `(z1 z2^k, z2)`
    ShearIterInv(u32),
}

impl ProperMap {
    /// Branched-cover order.
    pub fn order(&self) -> u32 {
        match *self {
            ProperMap::PowerMap(k) => k,
            _ => 1,
        }
    }

    /// Canonical source domain.
    pub fn source(&self) -> Result<DomainSpec> {
        match *self {
            ProperMap::PowerMap(_) | ProperMap::Shear => Ok(DomainSpec::classical()),
            ProperMap::ShearIter(k) => DomainSpec::thin(k),
            ProperMap::ShearInv | ProperMap::ShearIterInv(_) => Ok(DomainSpec::punctured_bidisc()),
        }
    }

    /// Canonical target domain.
    pub fn target(&self) -> Result<DomainSpec> {
        match *self {
            ProperMap::PowerMap(k) => DomainSpec::fat(k),
            ProperMap::Shear | ProperMap::ShearIter(_) => Ok(DomainSpec::punctured_bidisc()),
            ProperMap::ShearInv => Ok(DomainSpec::classical()),
            ProperMap::ShearIterInv(k) => DomainSpec::thin(k),
        }
    }

    /// Image of a point of the canonical source domain.
    pub fn apply(&self, p: &Point2C) -> Result<Point2C> {
        self.source()?.check(p)?;
        Ok(self.apply_unchecked(p))
    }

    /// Image without a membership check; `z2` must be nonzero for the shears.
    pub fn apply_unchecked(&self, p: &Point2C) -> Point2C {
        let Point2C { z1, z2 } = *p;
        match *self {
            ProperMap::PowerMap(k) => Point2C::new(z1, z2.powu(k)),
            ProperMap::Shear => Point2C::new(z1 / z2, z2),
            ProperMap::ShearInv => Point2C::new(z1 * z2, z2),
            ProperMap::ShearIter(k) => Point2C::new(z1 * z2.powi(-(k as i32)), z2),
            ProperMap::ShearIterInv(k) => Point2C::new(z1 * z2.powu(k), z2),
        }
    }

    /// Complex Jacobian determinant at `p`.
    pub fn jacobian(&self, p: &Point2C) -> Complex64 {
        let z2 = p.z2;
        match *self {
            ProperMap::PowerMap(k) => f64::from(k) * z2.powu(k - 1),
            ProperMap::Shear => z2.inv(),
            ProperMap::ShearInv => z2,
            ProperMap::ShearIter(k) => z2.powi(-(k as i32)),
            ProperMap::ShearIterInv(k) => z2.powu(k),
        }
    }
}

impl fmt::Display for ProperMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProperMap::PowerMap(k) => write!(f, "power:{k}"),
            ProperMap::Shear => f.write_str("shear"),
            ProperMap::ShearInv => f.write_str("shear-inv"),
            ProperMap::ShearIter(k) => write!(f, "shear-iter:{k}"),
            ProperMap::ShearIterInv(k) => write!(f, "shear-iter-inv:{k}"),
        }
    }
}

impl std::str::FromStr for ProperMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown map {s:?}"));
        let k = |v: &str| v.parse::<u32>().ok().filter(|&k| k >= 1).ok_or_else(bad);
        match s {
            "shear" => Ok(Self::Shear),
            "shear-inv" => Ok(Self::ShearInv),
            _ => {
                if let Some(v) = s.strip_prefix("power:") {
                    Ok(Self::PowerMap(k(v)?))
                } else if let Some(v) = s.strip_prefix("shear-iter-inv:") {
                    Ok(Self::ShearIterInv(k(v)?))
                } else if let Some(v) = s.strip_prefix("shear-iter:") {
                    Ok(Self::ShearIter(k(v)?))
                } else {
                    Err(bad())
                }
            }
        }
    }
}

/// `z^{1/k}` with argument in `[0, 2π/k)`.
pub fn principal_root(z: Complex64, k: u32) -> Complex64 {
    let mut arg = z.im.atan2(z.re);
    if arg < 0.0 {
        arg += 2.0 * PI;
    }
    if 2.0 * PI - arg <= SEAM_TOL {
        arg = 0.0;
    }
    Complex64::from_polar(z.norm().powf(1.0 / f64::from(k)), arg / f64::from(k))
}

/// One local inverse `Φ_j(w) = (w1, ζ^j w2^{1/k})` of the power map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchPoint {
    pub j: u32,
    pub point: Point2C,
    /// `det Φ_j'(w) = ζ^j w2^{1/k - 1} / k`.
    #[serde(serialize_with = "crate::oracle::ser_complex")]
    pub jacobian: Complex64,
}

/// The `k` preimages of `w ∈ H_k` under the power map, `j = 1..=k`.
pub fn branch_inverses(k: u32, w: &Point2C) -> Result<Vec<BranchPoint>> {
    DomainSpec::fat(k)?.check(w)?;
    let root = principal_root(w.z2, k);
    let zeta = Complex64::cis(2.0 * PI / f64::from(k));
    let kf = f64::from(k);
    Ok((1..=k)
        .map(|j| {
            let zj = zeta.powu(j);
            let branch = zj * root;
            BranchPoint { j, point: Point2C::new(w.z1, branch), jacobian: branch / (kf * w.z2) }
        })
        .collect())
}

fn rel_residual(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

fn value(kv: KernelValue, context: &str) -> Result<Complex64> {
    kv.checked(context)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityResidual {
    #[serde(serialize_with = "crate::oracle::ser_complex")]
    pub lhs: Complex64,
    #[serde(serialize_with = "crate::oracle::ser_complex")]
    pub rhs: Complex64,
    /// `|lhs - rhs| / max(|lhs|, |rhs|)`.
    pub residual: f64,
}

impl IdentityResidual {
    fn new(lhs: Complex64, rhs: Complex64) -> Self {
        Self { lhs, rhs, residual: rel_residual(lhs, rhs) }
    }
}

/// Bell's rule for the power map:
/// `u(z) B_k(φ(z), w) = Σ_j B_1(z, Φ_j(w)) conj(U_j(w))`, `z ∈ H_1`, `w ∈ H_k`.
pub fn bell_residual(k: u32, z: &Point2C, w: &Point2C) -> Result<IdentityResidual> {
    let map = ProperMap::PowerMap(k);
    let image = map.apply(z)?;
    let lhs = map.jacobian(z) * value(kernel::bergman_fat(k, &image, w)?, "Bell left side")?;
    let mut rhs = Complex64::new(0.0, 0.0);
    for b in branch_inverses(k, w)? {
        let kv = kernel::bergman_reference(&DomainSpec::classical(), z, &b.point)?;
        rhs += value(kv, "Bell right side")? * b.jacobian.conj();
    }
    Ok(IdentityResidual::new(lhs, rhs))
}

/// `det F'(z) · B_dst(F z, F w) · conj(det F'(w))`.
pub fn pullback(map: ProperMap, dst: &DomainSpec, z: &Point2C, w: &Point2C) -> Result<Complex64> {
    let (fz, fw) = (map.apply_unchecked(z), map.apply_unchecked(w));
    let b = value(kernel::bergman(dst, &fz, &fw)?, "pullback")?;
    Ok(map.jacobian(z) * b * map.jacobian(w).conj())
}

/// Biholomorphic transformation rule `B_src(z, w) = det F'(z) B_dst(Fz, Fw) conj(det F'(w))`.
pub fn biholo_residual(
    map: ProperMap,
    src: &DomainSpec,
    dst: &DomainSpec,
    z: &Point2C,
    w: &Point2C,
) -> Result<IdentityResidual> {
    if map.order() != 1 {
        return Err(Error::Precondition(format!("{map} is not a biholomorphism")));
    }
    let lhs = value(kernel::bergman(src, z, w)?, "source kernel")?;
    Ok(IdentityResidual::new(lhs, pullback(map, dst, z, w)?))
}

/// Pullback of the bidisc kernel through `ψ^k` compared with one of the two
/// candidate thin-kernel formulas.
pub fn thin_variant_pullback_residual(
    k: u32,
    variant: ThinDenominator,
    z: &Point2C,
    w: &Point2C,
) -> Result<IdentityResidual> {
    let lhs = value(kernel::bergman_thin_variant(k, z, w, variant)?, "thin candidate")?;
    let rhs = pullback(ProperMap::ShearIter(k), &DomainSpec::punctured_bidisc(), z, w)?;
    Ok(IdentityResidual::new(lhs, rhs))
}

/// Worst residual of an identity over a batch of random pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualSummary {
    pub pairs: usize,
    pub seed: u64,
    pub max_residual: f64,
    pub worst_z: Point2C,
    pub worst_w: Point2C,
}

fn summarize(
    pairs: impl IntoIterator<Item = (Point2C, Point2C)>,
    seed: u64,
    f: impl Fn(&Point2C, &Point2C) -> Result<IdentityResidual>,
) -> Result<ResidualSummary> {
    let mut out: Option<ResidualSummary> = None;
    let mut count = 0;
    for (z, w) in pairs {
        count += 1;
        let r = f(&z, &w)?.residual;
        if out.is_none_or(|o| r > o.max_residual) {
            out = Some(ResidualSummary { pairs: 0, seed, max_residual: r, worst_z: z, worst_w: w });
        }
    }
    let mut out = out.ok_or_else(|| Error::Precondition("need at least one pair".into()))?;
    out.pairs = count;
    Ok(out)
}

/// Bell's rule on `pairs` random `z ∈ H_1`, `w ∈ H_k`.
pub fn bell_check(k: u32, pairs: usize, seed: u64) -> Result<ResidualSummary> {
    let zs = DomainSpec::classical().sample_uniform(pairs, seed)?;
    let ws = DomainSpec::fat(k)?.sample_uniform(pairs, seed.wrapping_add(1))?;
    summarize(zs.into_iter().zip(ws), seed, |z, w| bell_residual(k, z, w))
}

/// Biholomorphic rule on `pairs` random pairs of `src`.
pub fn biholo_check(
    map: ProperMap,
    src: &DomainSpec,
    dst: &DomainSpec,
    pairs: usize,
    seed: u64,
) -> Result<ResidualSummary> {
    summarize(src.sample_pairs(pairs, seed)?, seed, |z, w| biholo_residual(map, src, dst, z, w))
}

/// ψ^k pullback check of one thin-kernel candidate on random pairs of `H_{1/k}`.
pub fn thin_variant_check(k: u32, variant: ThinDenominator, pairs: usize, seed: u64) -> Result<ResidualSummary> {
    let spec = DomainSpec::thin(k)?;
    summarize(spec.sample_pairs(pairs, seed)?, seed, |z, w| thin_variant_pullback_residual(k, variant, z, w))
}
