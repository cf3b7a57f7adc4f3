//! Generalized Hartogs triangles `{ |z1|^γ < |z2| < 1 }` and the two reference
//! domains (bidisc, punctured bidisc) used to check them.
//!
//! Everything here depends on the moduli `(|z1|, |z2|)` only, so distances are
//! computed in the modulus plane: the nearest boundary point of a Reinhardt
//! domain shares the arguments of the query point.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Relative margin inside which a point counts as lying on the boundary.
pub const BOUNDARY_TOL: f64 = 1e-14;

/// Upper bound on bidisc draws spent on a single accepted point.
pub const MAX_DRAWS_PER_POINT: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainKind {
    /// `H_k`, exponent `k >= 2`.
    FatHartogs(u32),
    /// `H_{1/k}`, exponent `1/k` with `k >= 2`.
    ThinHartogs(u32),
    /// `H_1`, the classical triangle `|z1| < |z2| < 1`.
    ClassicalHartogs,
    Bidisc,
    PuncturedBidisc,
}

/// Exponent `num/den` of a Hartogs triangle. Only `k/1` and `1/k` occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Exponent {
    pub num: u32,
    pub den: u32,
}

impl Exponent {
    pub fn as_f64(self) -> f64 {
        f64::from(self.num) / f64::from(self.den)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Which domain a computation runs on. `fat:1` and `thin:1` are folded into
/// [`DomainKind::ClassicalHartogs`] at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DomainSpec {
    kind: DomainKind,
}

impl DomainSpec {
    pub fn fat(k: u32) -> Result<Self> {
        match k {
            0 => Err(Error::Precondition("fat exponent must be >= 1".into())),
            1 => Ok(Self::classical()),
            _ => Ok(Self { kind: DomainKind::FatHartogs(k) }),
        }
    }

    pub fn thin(k: u32) -> Result<Self> {
        match k {
            0 => Err(Error::Precondition("thin exponent must be 1/k with k >= 1".into())),
            1 => Ok(Self::classical()),
            _ => Ok(Self { kind: DomainKind::ThinHartogs(k) }),
        }
    }

    pub const fn classical() -> Self {
        Self { kind: DomainKind::ClassicalHartogs }
    }

    pub const fn bidisc() -> Self {
        Self { kind: DomainKind::Bidisc }
    }

    pub const fn punctured_bidisc() -> Self {
        Self { kind: DomainKind::PuncturedBidisc }
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    /// Exponent `γ`, or `None` for the bidiscs.
    pub fn gamma(&self) -> Option<Exponent> {
        match self.kind {
            DomainKind::FatHartogs(k) => Some(Exponent { num: k, den: 1 }),
            DomainKind::ThinHartogs(k) => Some(Exponent { num: 1, den: k }),
            DomainKind::ClassicalHartogs => Some(Exponent { num: 1, den: 1 }),
            DomainKind::Bidisc | DomainKind::PuncturedBidisc => None,
        }
    }

    pub fn is_hartogs(&self) -> bool {
        self.gamma().is_some()
    }

    /// Lebesgue volume: `π² γ/(1 + γ)` for `H_γ`, `π²` for the bidiscs.
    pub fn volume(&self) -> f64 {
        let pi2 = PI * PI;
        match self.gamma() {
            Some(g) => pi2 * f64::from(g.num) / f64::from(g.num + g.den),
            None => pi2,
        }
    }

    pub(crate) fn require_hartogs(&self, op: &'static str) -> Result<Exponent> {
        self.gamma().ok_or(Error::UnsupportedDomain { spec: *self, reason: op })
    }

    /// Strict membership. Points within [`BOUNDARY_TOL`] (relative) of the
    /// boundary are classified outside.
    pub fn contains(&self, p: &Point2C) -> bool {
        if !p.is_finite() {
            return false;
        }
        let r1 = p.z1.norm();
        let r2 = p.z2.norm();
        let below_top = r2 < 1.0 - BOUNDARY_TOL;
        match self.kind {
            DomainKind::Bidisc => r1 < 1.0 - BOUNDARY_TOL && below_top,
            DomainKind::PuncturedBidisc => r1 < 1.0 - BOUNDARY_TOL && below_top && r2 > 0.0,
            DomainKind::ClassicalHartogs => below_top && r2 - r1 > BOUNDARY_TOL * r2,
            DomainKind::FatHartogs(k) => below_top && r2 - r1.powi(k as i32) > BOUNDARY_TOL * r2,
            DomainKind::ThinHartogs(k) => {
                let r2k = r2.powi(k as i32);
                below_top && r2k - r1 > BOUNDARY_TOL * r2k
            }
        }
    }

    pub(crate) fn check(&self, p: &Point2C) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OutsideDomain { spec: *self, point: *p })
        }
    }

    /// Euclidean distance from `p` to the boundary of a Hartogs triangle.
    pub fn boundary_distance(&self, p: &Point2C) -> Result<f64> {
        let gamma = self.require_hartogs("boundary distance")?;
        self.check(p)?;
        let (r1, r2) = (p.z1.norm(), p.z2.norm());
        let top = 1.0 - r2;
        let curve = curve_distance(gamma, r1, r2);
        Ok(top.min(curve))
    }

    /// Bidisc rejection sampling: `n` i.i.d. points, uniform for Lebesgue measure.
    pub fn sample_uniform(&self, n: usize, seed: u64) -> Result<Vec<Point2C>> {
        Ok(self.sample_uniform_with_draws(n, seed)?.0)
    }

    /// Like [`sample_uniform`](Self::sample_uniform), also returning the total
    /// number of bidisc draws spent.
    pub fn sample_uniform_with_draws(&self, n: usize, seed: u64) -> Result<(Vec<Point2C>, u64)> {
        if n == 0 {
            return Err(Error::Precondition("sample count must be >= 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(n);
        let mut draws = 0u64;
        for _ in 0..n {
            let mut tries = 0;
            loop {
                if tries == MAX_DRAWS_PER_POINT {
                    return Err(Error::SamplerExhausted(MAX_DRAWS_PER_POINT));
                }
                tries += 1;
                draws += 1;
                let p = bidisc_point(&mut rng);
                if self.contains(&p) {
                    out.push(p);
                    break;
                }
            }
        }
        Ok((out, draws))
    }

    /// `n` independent pairs: consecutive points of `sample_uniform(2n, seed)`.
    pub fn sample_pairs(&self, n: usize, seed: u64) -> Result<Vec<(Point2C, Point2C)>> {
        let pts = self.sample_uniform(2 * n, seed)?;
        Ok(pts.chunks_exact(2).map(|c| (c[0], c[1])).collect())
    }

    /// Canonical approach sequence with `steps` samples, `ε = 2^-m`, `m = 1..=steps`.
    pub fn boundary_path(&self, which: PathKind, steps: usize) -> Result<BoundaryPath> {
        let gamma = self.require_hartogs("boundary paths")?;
        if steps == 0 {
            return Err(Error::Precondition("path needs at least one step".into()));
        }
        let g = gamma.as_f64();
        // |z1| on the curve |z1|^γ = r2, kept in integer-power form where possible.
        let curve_r1 = |r2: f64| -> f64 {
            if gamma.den == 1 {
                r2.powf(1.0 / f64::from(gamma.num))
            } else {
                r2.powi(gamma.den as i32)
            }
        };
        let target = match which {
            PathKind::Origin => Point2C::real(0.0, 0.0),
            PathKind::TopFace => Point2C::real(0.0, 1.0),
            PathKind::SmoothLeviFlat => Point2C::real(curve_r1(0.5), 0.5),
            PathKind::Corner => Point2C::real(1.0, 1.0),
        };
        let mut samples = Vec::with_capacity(steps);
        let mut params = Vec::with_capacity(steps);
        for m in 1..=steps {
            let eps = 0.5f64.powi(m as i32);
            let p = match which {
                PathKind::Origin => Point2C::real(0.0, eps),
                PathKind::TopFace => Point2C::real(0.0, 1.0 - eps),
                PathKind::SmoothLeviFlat => Point2C::real(target.z1.re * (1.0 - eps), 0.5),
                // |z2| = 1 - ε and |z1|^γ = 1 - 2ε: both defining functions are ~ε.
                PathKind::Corner => Point2C::real((1.0 - 2.0 * eps).max(0.0).powf(1.0 / g), 1.0 - eps),
            };
            samples.push(p);
            params.push(eps);
        }
        let path = BoundaryPath { kind: which, target, samples, params };
        if let Some(bad) = path.samples.iter().find(|p| !self.contains(p)) {
            return Err(Error::OutsideDomain { spec: *self, point: *bad });
        }
        Ok(path)
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            DomainKind::FatHartogs(k) => write!(f, "fat:{k}"),
            DomainKind::ThinHartogs(k) => write!(f, "thin:{k}"),
            DomainKind::ClassicalHartogs => f.write_str("classical"),
            DomainKind::Bidisc => f.write_str("bidisc"),
            DomainKind::PuncturedBidisc => f.write_str("punctured-bidisc"),
        }
    }
}

impl FromStr for DomainSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_k =
            |k: &str| k.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in domain spec {s:?}")));
        match s {
            "classical" => Ok(Self::classical()),
            "bidisc" => Ok(Self::bidisc()),
            "punctured-bidisc" => Ok(Self::punctured_bidisc()),
            _ => {
                if let Some(k) = s.strip_prefix("fat:") {
                    Self::fat(parse_k(k)?)
                } else if let Some(k) = s.strip_prefix("thin:") {
                    Self::thin(parse_k(k)?)
                } else {
                    Err(Error::Parse(format!(
                        "unknown domain spec {s:?} (expected fat:k, thin:k, classical, bidisc, punctured-bidisc)"
                    )))
                }
            }
        }
    }
}

impl Serialize for DomainSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DomainSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A point `(z1, z2)` of `C^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2C {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl Point2C {
    pub const fn new(z1: Complex64, z2: Complex64) -> Self {
        Self { z1, z2 }
    }

    pub const fn real(x1: f64, x2: f64) -> Self {
        Self { z1: Complex64::new(x1, 0.0), z2: Complex64::new(x2, 0.0) }
    }

    pub fn is_finite(&self) -> bool {
        self.z1.is_finite() && self.z2.is_finite()
    }

    pub fn dist(&self, other: &Point2C) -> f64 {
        ((self.z1 - other.z1).norm_sqr() + (self.z2 - other.z2).norm_sqr()).sqrt()
    }

    /// Independent rotation of each coordinate.
    pub fn rotate(&self, theta1: f64, theta2: f64) -> Self {
        Self { z1: self.z1 * Complex64::cis(theta1), z2: self.z2 * Complex64::cis(theta2) }
    }
}

impl fmt::Display for Point2C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.z1, self.z2)
    }
}

impl Serialize for Point2C {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Point2C", 2)?;
        st.serialize_field("z1", &crate::report::ComplexJson::from(self.z1))?;
        st.serialize_field("z2", &crate::report::ComplexJson::from(self.z2))?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathKind {
    /// `(0, ε)`, towards the singular point at the origin.
    Origin,
    /// Towards `(0.5^{1/γ}, 0.5)` on the smooth Levi-flat part `|z1|^γ = |z2|`.
    SmoothLeviFlat,
    /// `(0, 1 - ε)`, towards the face `|z2| = 1`.
    TopFace,
    /// Towards the corner `|z1| = |z2| = 1`.
    Corner,
}

impl PathKind {
    pub const ALL: [PathKind; 4] = [PathKind::Origin, PathKind::SmoothLeviFlat, PathKind::TopFace, PathKind::Corner];
}

impl FromStr for PathKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "origin" => Ok(Self::Origin),
            "smooth-levi-flat" | "levi-flat" => Ok(Self::SmoothLeviFlat),
            "top-face" | "top" => Ok(Self::TopFace),
            "corner" => Ok(Self::Corner),
            _ => Err(Error::Parse(format!("unknown path kind {s:?}"))),
        }
    }
}

impl fmt::Display for PathKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PathKind::Origin => "origin",
            PathKind::SmoothLeviFlat => "smooth-levi-flat",
            PathKind::TopFace => "top-face",
            PathKind::Corner => "corner",
        })
    }
}

/// Interior points approaching a boundary point.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryPath {
    pub kind: PathKind,
    pub target: Point2C,
    pub samples: Vec<Point2C>,
    pub params: Vec<f64>,
}

/// Uniform point of the closed-open bidisc `D x D`.
pub(crate) fn bidisc_point<R: Rng + ?Sized>(rng: &mut R) -> Point2C {
    let disc = |rng: &mut R| {
        let r = rng.gen::<f64>().sqrt();
        let theta = 2.0 * PI * rng.gen::<f64>();
        Complex64::from_polar(r, theta)
    };
    let z1 = disc(rng);
    let z2 = disc(rng);
    Point2C { z1, z2 }
}

/// Distance in the modulus plane from `(r1, r2)` to the curve `r2 = r1^γ`,
/// `0 <= r1 <= 1`.
///
/// The curve is parameterized by whichever modulus carries the integer power
/// (`(u, u^k)` for fat, `(u^k, u)` for thin) so that the squared distance has
/// no cancellation between nearly equal fractional powers near the origin.
fn curve_distance(gamma: Exponent, r1: f64, r2: f64) -> f64 {
    // The curve is (u, u^k) for γ = k and (u^k, u) for γ = 1/k. Write
    // u = u0 + v around the coordinate u0 that the point shares with the
    // curve's parameter, so tiny distances keep full precision.
    let (k, u0, other) = if gamma.den == 1 { (gamma.num, r1, r2) } else { (gamma.den, r2, r1) };
    let k = k as i32;
    let power_gap = u0.powi(k) - other;
    let dist_sq = |v: f64| -> f64 {
        let lifted = if u0 > 0.0 {
            power_gap + u0.powi(k) * (f64::from(k) * (v / u0).ln_1p()).exp_m1()
        } else {
            v.powi(k) - other
        };
        v * v + lifted * lifted
    };
    let (lo, hi) = (-u0, 1.0 - u0);
    golden_min(dist_sq, lo, hi).sqrt()
}

/// Minimum of `f` on `[lo, hi]` with `lo <= 0 <= hi`: grid scan (uniform plus
/// log-spaced towards 0 from both sides) to bracket the global minimum, then
/// golden-section refinement to a relative bracket width of 1e-12.
fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    const UNIFORM: usize = 1024;
    const LOG_DECADES: i32 = 60;
    const PER_DECADE: i32 = 8;

    let width = hi - lo;
    let mut grid: Vec<f64> = (0..=UNIFORM).map(|i| lo + width * i as f64 / UNIFORM as f64).collect();
    grid.push(0.0);
    for i in 1..=LOG_DECADES * PER_DECADE {
        let scale = 10f64.powf(-f64::from(i) / f64::from(PER_DECADE));
        grid.push(lo * scale);
        grid.push(hi * scale);
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let (best, mut fbest) =
        grid.iter().enumerate().map(|(i, &x)| (i, f(x))).min_by(|a, b| a.1.total_cmp(&b.1)).expect("non-empty grid");
    let mut a = grid[best.saturating_sub(1)];
    let mut b = grid[(best + 1).min(grid.len() - 1)];

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..500 {
        if b - a <= 1e-12 * a.abs().max(b.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    for v in [fc, fd, f(a), f(b)] {
        fbest = fbest.min(v);
    }
    fbest
}
