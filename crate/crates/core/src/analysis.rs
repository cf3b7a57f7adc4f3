//! Zeros of the fat-triangle kernels, boundary behaviour of the diagonal, and
//! convergence of `B_k` to the punctured-bidisc kernel as `k → ∞`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::domain::{BoundaryPath, DomainKind, DomainSpec, PathKind, Point2C};
use crate::error::{Error, Result};
use crate::kernel::{self, Evaluator, FatCoeffs, KernelArgs};

/// A witness pair is confirmed when its numerator is at most this.
pub const WITNESS_TOL: f64 = 1e-12;

/// Samples at the end of a boundary path used for the bounded-ratio test.
pub const TAIL_LEN: usize = 10;

/// Largest admissible `max/min` of the ratios on a path tail.
pub const TAIL_QUOTIENT_LIMIT: f64 = 10.0;

/// Default number of halvings of `ε` along a boundary path.
pub const DEFAULT_PATH_STEPS: usize = 30;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroWitness {
    pub k: u32,
    pub z: Point2C,
    pub w: Point2C,
    #[serde(serialize_with = "crate::oracle::ser_complex")]
    pub s: Complex64,
    #[serde(serialize_with = "crate::oracle::ser_complex")]
    pub t: Complex64,
    pub numerator_abs: f64,
    /// Both points inside `H_k` and `numerator_abs <= WITNESS_TOL`.
    pub confirmed: bool,
}

/// A pair of points of `H_k` at which the kernel numerator vanishes.
pub fn lqk_witness(k: u32) -> Result<ZeroWitness> {
    if k < 2 {
        return Err(Error::Precondition(format!("zero witnesses exist only for k >= 2, got {k}")));
    }
    let (z, w) = if k == 2 {
        let (a, b) = (0.5f64.sqrt(), 7f64.sqrt() / 4.0);
        (Point2C::new(c(0.0, a), c(b, 0.25)), Point2C::new(c(0.0, -a), c(b, -0.25)))
    } else {
        let r = 1.0 / f64::from(k - 1).sqrt();
        (Point2C::new(c(0.0, 0.0), c(0.0, r)), Point2C::new(c(0.0, 0.0), c(0.0, -r)))
    };
    let spec = DomainSpec::fat(k)?;
    let args = KernelArgs::from_points(&z, &w);
    let numerator_abs = FatCoeffs::get(k)?.numerator(args.s, args.t).norm();
    Ok(ZeroWitness {
        k,
        z,
        w,
        s: args.s,
        t: args.t,
        numerator_abs,
        confirmed: spec.contains(&z) && spec.contains(&w) && numerator_abs <= WITNESS_TOL,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct NonvanishingReport {
    pub k: u32,
    pub pairs: usize,
    pub seed: u64,
    pub zero_hits: usize,
    pub min_abs_kernel: f64,
    pub min_abs_numerator: f64,
    /// Largest `| |numerator| - |z2 w2|^k | / |z2 w2|^k` over the pairs.
    pub max_numerator_mismatch: f64,
}

/// Evaluates `B_{1/k}` on `pairs` random pairs of `H_{1/k}` and counts zeros.
pub fn thin_nonvanishing(k: u32, pairs: usize, seed: u64) -> Result<NonvanishingReport> {
    let spec = DomainSpec::thin(k)?;
    let pts = spec.sample_uniform(2 * pairs, seed)?;
    let eval = Evaluator::new(&spec)?;
    let mut report = NonvanishingReport {
        k,
        pairs,
        seed,
        zero_hits: 0,
        min_abs_kernel: f64::INFINITY,
        min_abs_numerator: f64::INFINITY,
        max_numerator_mismatch: 0.0,
    };
    for pair in pts.chunks_exact(2) {
        let kv = eval.eval(KernelArgs::from_points(&pair[0], &pair[1]));
        let (b, n) = (kv.value.norm(), kv.numerator.norm());
        if b == 0.0 || n == 0.0 || !b.is_finite() {
            report.zero_hits += 1;
        }
        report.min_abs_kernel = report.min_abs_kernel.min(b);
        report.min_abs_numerator = report.min_abs_numerator.min(n);
        let expected = (pair[0].z2.norm() * pair[1].z2.norm()).powi(k as i32);
        report.max_numerator_mismatch = report.max_numerator_mismatch.max((n - expected).abs() / expected);
    }
    Ok(report)
}

/// Whether `(s, t)` arises as `(z1 conj(w1), z2 conj(w2))` for some `z, w ∈ H_k`.
pub fn realizable(k: u32, s: Complex64, t: Complex64) -> bool {
    let (a, b) = (s.norm(), t.norm());
    a < 1.0 && b < 1.0 && a.powi(k as i32) < b
}

/// A pair `z, w ∈ H_k` with `z1 conj(w1) = s` and `z2 conj(w2) = t`.
pub fn realizing_pair(k: u32, s: Complex64, t: Complex64) -> Option<(Point2C, Point2C)> {
    if !realizable(k, s, t) {
        return None;
    }
    let (a, b) = (s.norm().sqrt(), t.norm().sqrt());
    let z = Point2C::new(Complex64::from_polar(a, s.arg()), Complex64::from_polar(b, t.arg()));
    let w = Point2C::real(a, b);
    Some((z, w))
}

/// Roots of `a t² + b t + c`, computed without cancellation. A vanishing
/// leading coefficient leaves the single linear root (none if `b` is zero too).
pub fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    if a == zero {
        return if b == zero { vec![] } else { vec![-c / b] };
    }
    let d = (b * b - 4.0 * a * c).sqrt();
    let d = if (b.conj() * d).re >= 0.0 { d } else { -d };
    let q = -(b + d) / 2.0;
    if q == zero {
        // b = 0 and b² = 4ac forces c = 0: double root at the origin.
        return vec![zero, zero];
    }
    vec![q / a, c / q]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TRoot {
    #[serde(serialize_with = "crate::oracle::ser_complex")]
    pub t: Complex64,
    /// `|N(s, t)|` relative to the sum of the moduli of its three terms.
    pub residual: f64,
    pub realizable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmallCell {
    #[serde(serialize_with = "crate::oracle::ser_complex")]
    pub t: Complex64,
    pub numerator_abs: f64,
    pub realizable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub s: f64,
    pub p: f64,
    pub q: f64,
    pub roots: Vec<TRoot>,
    pub small_cells: Vec<SmallCell>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroScanConfig {
    pub k: u32,
    /// Real `s` values `-1 + 2i/s_steps`, `0 < i < s_steps`.
    pub s_steps: usize,
    /// `|t|` sampled at cell centres `(j + 1/2)/t_radii`.
    pub t_radii: usize,
    /// `arg t` sampled at `2π j / t_args`.
    pub t_args: usize,
    /// Cells with `|N| <=` this, relative to the term moduli, are reported.
    pub tol: f64,
}

impl ZeroScanConfig {
    pub fn new(k: u32) -> Self {
        Self { k, s_steps: 40, t_radii: 20, t_args: 64, tol: 1e-2 }
    }
}

fn numerator_terms(co: &FatCoeffs, s: Complex64, t: Complex64) -> (Complex64, f64) {
    let p = kernel::horner(&co.p, s);
    let q = kernel::horner(&co.q, s);
    let sk = s.powu(co.k);
    let n = p * t * t + q * t + sk * p;
    let scale = (p * t * t).norm() + (q * t).norm() + (sk * p).norm();
    (n, scale)
}

/// Zeros of the fat-kernel numerator on the slice of real `s`.
pub fn zero_locus_scan(cfg: &ZeroScanConfig) -> Result<Vec<ScanRow>> {
    if cfg.k < 2 {
        return Err(Error::Precondition(format!("zero scan needs k >= 2, got {}", cfg.k)));
    }
    if cfg.s_steps < 2 {
        return Err(Error::Precondition("zero scan needs s_steps >= 2".into()));
    }
    let co = FatCoeffs::get(cfg.k)?;
    let rows = (1..cfg.s_steps)
        .into_par_iter()
        .map(|i| {
            let s = -1.0 + 2.0 * i as f64 / cfg.s_steps as f64;
            scan_row(&co, c(s, 0.0), cfg)
        })
        .collect();
    Ok(rows)
}

/// Roots in `t` at a single `s`, plus the small-numerator polar cells.
pub fn scan_row(co: &FatCoeffs, s: Complex64, cfg: &ZeroScanConfig) -> ScanRow {
    let k = co.k;
    let p = kernel::horner(&co.p, s);
    let q = kernel::horner(&co.q, s);
    let roots = quadratic_roots(p, q, s.powu(k) * p)
        .into_iter()
        .map(|t| {
            let (n, scale) = numerator_terms(co, s, t);
            let residual = if scale == 0.0 { 0.0 } else { n.norm() / scale };
            TRoot { t, residual, realizable: realizable(k, s, t) }
        })
        .collect();
    let mut small_cells = Vec::new();
    for j in 0..cfg.t_radii {
        let r = (j as f64 + 0.5) / cfg.t_radii as f64;
        for a in 0..cfg.t_args {
            let t = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * a as f64 / cfg.t_args as f64);
            let (n, scale) = numerator_terms(co, s, t);
            if scale > 0.0 && n.norm() <= cfg.tol * scale {
                small_cells.push(SmallCell { t, numerator_abs: n.norm(), realizable: realizable(k, s, t) });
            }
        }
    }
    ScanRow { s: s.re, p: p.re, q: q.re, roots, small_cells }
}

/// Boundary comparison quantity whose inverse the diagonal should track:
/// `(1-|z2|)² (|z2| - |z1|^k)²` on `H_k`, `(1-|z2|)² (|z2|^k - |z1|)²` on `H_{1/k}`.
pub fn comparison(spec: &DomainSpec, p: &Point2C) -> Result<f64> {
    let (r1, r2) = (p.z1.norm(), p.z2.norm());
    let gap = match spec.kind() {
        DomainKind::FatHartogs(k) => r2 - r1.powi(k as i32),
        DomainKind::ThinHartogs(k) => r2.powi(k as i32) - r1,
        DomainKind::ClassicalHartogs => r2 - r1,
        _ => {
            return Err(Error::UnsupportedDomain {
                spec: *spec,
                reason: "boundary asymptotics need a Hartogs triangle",
            })
        }
    };
    Ok((1.0 - r2).powi(2) * gap * gap)
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticReport {
    pub spec: DomainSpec,
    pub path: BoundaryPath,
    pub diagonal: Vec<f64>,
    /// `B(z,z)` times the comparison quantity (or `δ²`).
    pub ratios: Vec<f64>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// `max/min` over the last [`TAIL_LEN`] ratios.
    pub tail_quotient: f64,
}

impl AsymptoticReport {
    fn new(spec: &DomainSpec, path: BoundaryPath, diagonal: Vec<f64>, ratios: Vec<f64>) -> Result<Self> {
        if let Some(bad) = ratios.iter().position(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::SingularEvaluation {
                context: format!("ratio {} at {} on {} path", ratios[bad], path.samples[bad], path.kind),
            });
        }
        let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
        let tail = &ratios[ratios.len().saturating_sub(TAIL_LEN)..];
        let tail_quotient =
            tail.iter().copied().fold(0.0, f64::max) / tail.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(Self { spec: *spec, path, diagonal, ratios, min_ratio, max_ratio, tail_quotient })
    }

    pub fn tail_bounded(&self) -> bool {
        self.tail_quotient <= TAIL_QUOTIENT_LIMIT
    }
}

/// `B(z,z)` times the boundary comparison quantity along a path.
pub fn diagonal_ratio(spec: &DomainSpec, path: BoundaryPath) -> Result<AsymptoticReport> {
    let mut diag = Vec::with_capacity(path.samples.len());
    let mut ratios = Vec::with_capacity(path.samples.len());
    for p in &path.samples {
        let b = kernel::diagonal(spec, p)?;
        diag.push(b);
        ratios.push(b * comparison(spec, p)?);
    }
    AsymptoticReport::new(spec, path, diag, ratios)
}

/// `B(z,z) δ(z)²` along a path towards the origin.
pub fn delta_rate(spec: &DomainSpec, path: BoundaryPath) -> Result<AsymptoticReport> {
    if path.kind != PathKind::Origin {
        return Err(Error::Precondition(format!("delta rate is measured towards the origin, not {}", path.kind)));
    }
    let mut diag = Vec::with_capacity(path.samples.len());
    let mut ratios = Vec::with_capacity(path.samples.len());
    for p in &path.samples {
        let b = kernel::diagonal(spec, p)?;
        let d = spec.boundary_distance(p)?;
        diag.push(b);
        ratios.push(b * d * d);
    }
    AsymptoticReport::new(spec, path, diag, ratios)
}

/// Diagonal pairs used when no points are supplied.
pub fn default_ramadanov_pairs() -> Vec<(Point2C, Point2C)> {
    [(0.5, 0.6), (0.3, 0.7), (0.2, 0.9)].into_iter().map(|(a, b)| (Point2C::real(a, b), Point2C::real(a, b))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RamadanovRow {
    pub k: u32,
    /// `|B_k(z,w) - B(z,w)|` per pair; `None` before the pair enters `H_k`.
    pub errors: Vec<Option<f64>>,
    pub max_error: f64,
    pub min_abs_kernel: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RamadanovTable {
    pub pairs: Vec<(Point2C, Point2C)>,
    /// Per pair, the least `k` with both points in `H_k`.
    pub k0: Vec<u32>,
    pub rows: Vec<RamadanovRow>,
}

impl RamadanovTable {
    /// Row for `k`, if tabulated.
    pub fn row(&self, k: u32) -> Option<&RamadanovRow> {
        self.rows.iter().find(|r| r.k == k)
    }

    /// Whether `max_error` strictly decreases over the last `n` rows.
    pub fn tail_decreasing(&self, n: usize) -> bool {
        let tail = &self.rows[self.rows.len().saturating_sub(n)..];
        tail.windows(2).all(|w| w[1].max_error < w[0].max_error)
    }
}

fn entry_k(p: &Point2C) -> Result<u32> {
    let (r1, r2) = (p.z1.norm(), p.z2.norm());
    if !DomainSpec::punctured_bidisc().contains(p) {
        return Err(Error::OutsideDomain { spec: DomainSpec::punctured_bidisc(), point: *p });
    }
    if r1 == 0.0 {
        return Ok(1);
    }
    // Least k with r1^k < r2; start from the logarithmic estimate and fix up rounding.
    let mut k = ((r2.ln() / r1.ln()).floor().max(0.0) as u32).max(1);
    while k > 1 && r1.powi(k as i32 - 1) < r2 {
        k -= 1;
    }
    while r1.powi(k as i32) >= r2 {
        k += 1;
    }
    Ok(k)
}

/// `|B_k - B_{D x D*}|` on fixed pairs for `k` up to `k_max`.
pub fn ramadanov_table(pairs: &[(Point2C, Point2C)], k_max: u32) -> Result<RamadanovTable> {
    if pairs.is_empty() {
        return Err(Error::Precondition("ramadanov table needs at least one pair".into()));
    }
    let k0 = pairs.iter().map(|(z, w)| Ok(entry_k(z)?.max(entry_k(w)?))).collect::<Result<Vec<u32>>>()?;
    let start = *k0.iter().min().unwrap_or(&1);
    if k_max < start {
        return Err(Error::Precondition(format!("k_max {k_max} is below the first admissible k {start}")));
    }
    let limit: Vec<Complex64> = pairs
        .iter()
        .map(|(z, w)| kernel::bergman(&DomainSpec::punctured_bidisc(), z, w)?.checked("limit kernel"))
        .collect::<Result<_>>()?;
    let rows = (start..=k_max)
        .into_par_iter()
        .map(|k| {
            let mut errors = Vec::with_capacity(pairs.len());
            let (mut max_error, mut min_abs) = (0.0f64, f64::INFINITY);
            for (i, (z, w)) in pairs.iter().enumerate() {
                if k < k0[i] {
                    errors.push(None);
                    continue;
                }
                let b = kernel::bergman_fat(k, z, w)?.checked("ramadanov")?;
                let e = (b - limit[i]).norm();
                max_error = max_error.max(e);
                min_abs = min_abs.min(b.norm());
                errors.push(Some(e));
            }
            Ok(RamadanovRow { k, errors, max_error, min_abs_kernel: min_abs })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RamadanovTable { pairs: pairs.to_vec(), k0, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn witness_examples() {
        let w3 = lqk_witness(3).unwrap();
        assert!(w3.confirmed);
        assert_eq!(w3.s, c(0.0, 0.0));
        assert!((w3.t - c(-0.5, 0.0)).norm() < 1e-15);

        let w2 = lqk_witness(2).unwrap();
        assert!(w2.confirmed, "{w2:?}");
        assert!((w2.s - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((w2.t - c(3.0, 7f64.sqrt()) / 8.0).norm() < 1e-15);

        let w10 = lqk_witness(10).unwrap();
        assert!((w10.t - c(-1.0 / 9.0, 0.0)).norm() < 1e-16);
        assert!(w10.confirmed);
        assert!(lqk_witness(1).is_err());
    }

    #[test]
    fn witnesses_up_to_fifty() {
        for k in 2..=50 {
            let w = lqk_witness(k).unwrap();
            assert!(w.confirmed && w.numerator_abs <= WITNESS_TOL, "{w:?}");
            // The kernel itself vanishes there, not just the polynomial.
            let b = kernel::bergman_fat(k, &w.z, &w.w).unwrap().value.norm();
            assert!(b <= 1e-10, "k={k}: {b}");
        }
    }

    #[test]
    fn thin_kernels_do_not_vanish() {
        for k in 1..=2 {
            let r = thin_nonvanishing(k, 20_000, 7).unwrap();
            assert_eq!(r.zero_hits, 0);
            assert!(r.min_abs_kernel > 0.0 && r.min_abs_numerator > 0.0);
            assert!(r.max_numerator_mismatch <= 1e-12, "{r:?}");
        }
    }

    #[test]
    fn quadratic_roots_examples() {
        let roots = quadratic_roots(c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        assert!(roots.iter().any(|t| t.norm() == 0.0));
        assert!(roots.iter().any(|t| (t - c(-0.5, 0.0)).norm() < 1e-16));
        assert_eq!(quadratic_roots(c(0.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)), vec![c(-0.5, 0.0)]);
        assert!(quadratic_roots(c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).is_empty());
        assert_eq!(quadratic_roots(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)), vec![c(0.0, 0.0); 2]);
        // Cancellation-prone case: the small root keeps full relative accuracy.
        let r = quadratic_roots(c(1.0, 0.0), c(-1e8, 0.0), c(1.0, 0.0));
        assert!(r.iter().any(|t| ((t.re - 1e-8) / 1e-8).abs() < 1e-15));
    }

    #[test]
    fn scan_reproduces_witnesses() {
        let cfg3 = ZeroScanConfig::new(3);
        let row = scan_row(&FatCoeffs::get(3).unwrap(), c(0.0, 0.0), &cfg3);
        assert_eq!(row.roots.len(), 2);
        let wit = row.roots.iter().find(|r| (r.t - c(-0.5, 0.0)).norm() < 1e-15).unwrap();
        assert!(wit.realizable);
        assert!(row.roots.iter().any(|r| r.t.norm() == 0.0 && !r.realizable));

        let cfg2 = ZeroScanConfig::new(2);
        let row = scan_row(&FatCoeffs::get(2).unwrap(), c(-0.5, 0.0), &cfg2);
        for r in &row.roots {
            assert!((r.t.norm() - 0.5).abs() < 1e-15);
            assert!(r.realizable);
            let (z, w) = realizing_pair(2, c(-0.5, 0.0), r.t).unwrap();
            let spec = DomainSpec::fat(2).unwrap();
            assert!(spec.contains(&z) && spec.contains(&w));
        }
        assert!(row.roots.iter().any(|r| (r.t - c(3.0, 7f64.sqrt()) / 8.0).norm() < 1e-15));
    }

    #[test]
    fn scan_grid_includes_witness_slices() {
        let rows = zero_locus_scan(&ZeroScanConfig::new(3)).unwrap();
        assert_eq!(rows.len(), 39);
        let at0 = rows.iter().find(|r| r.s == 0.0).unwrap();
        assert!(at0.roots.iter().any(|r| r.realizable));
        for row in &rows {
            for r in &row.roots {
                assert!(r.residual <= 1e-10, "s={} {r:?}", row.s);
            }
        }
        // Near s = 1 report whatever the scan finds; only sanity is checked.
        let near1 = scan_row(&FatCoeffs::get(2).unwrap(), c(0.9, 0.0), &ZeroScanConfig::new(2));
        assert_eq!(near1.roots.len(), 2);
    }

    #[test]
    fn realizing_pairs_land_in_domain() {
        for k in [2u32, 5] {
            let spec = DomainSpec::fat(k).unwrap();
            for (s, t) in [(c(0.3, 0.2), c(0.1, -0.5)), (c(-0.7, 0.0), c(0.0, 0.4)), (c(0.0, 0.0), c(-0.9, 0.0))] {
                match realizing_pair(k, s, t) {
                    Some((z, w)) => {
                        assert!(spec.contains(&z) && spec.contains(&w));
                        let a = KernelArgs::from_points(&z, &w);
                        assert!((a.s - s).norm() < 1e-15 && (a.t - t).norm() < 1e-15);
                    }
                    None => assert!(!realizable(k, s, t)),
                }
            }
        }
        assert!(!realizable(2, c(0.8, 0.0), c(0.5, 0.0)));
        assert!(realizable(2, c(0.7, 0.0), c(0.5, 0.0)));
    }

    fn assert_bounded(spec: &DomainSpec, kind: PathKind) {
        let path = spec.boundary_path(kind, DEFAULT_PATH_STEPS).unwrap();
        let r = diagonal_ratio(spec, path).unwrap();
        assert!(r.tail_bounded(), "{spec} {kind}: {}", r.tail_quotient);
        assert!(r.min_ratio >= 1e-3 && r.max_ratio <= 1e3, "{spec} {kind}: {} {}", r.min_ratio, r.max_ratio);
    }

    #[test]
    fn diagonal_ratio_examples() {
        let fat2 = DomainSpec::fat(2).unwrap();
        assert_bounded(&fat2, PathKind::Origin);
        assert_bounded(&fat2, PathKind::TopFace);
        assert_bounded(&DomainSpec::thin(2).unwrap(), PathKind::Origin);
    }

    #[test]
    fn diagonal_ratio_all_specs_and_paths() {
        for spec in (1..=5).map(|k| DomainSpec::fat(k).unwrap()).chain((2..=5).map(|k| DomainSpec::thin(k).unwrap())) {
            for kind in PathKind::ALL {
                let path = spec.boundary_path(kind, DEFAULT_PATH_STEPS).unwrap();
                let r = diagonal_ratio(&spec, path).unwrap();
                assert!(r.tail_bounded(), "{spec} {kind}: {}", r.tail_quotient);
            }
        }
    }

    #[test]
    fn fat_origin_ratio_limit() {
        // On (0, ε) the ratio tends to 1/(kπ²).
        for k in 1..=4u32 {
            let spec = DomainSpec::fat(k).unwrap();
            let r = diagonal_ratio(&spec, spec.boundary_path(PathKind::Origin, 40).unwrap()).unwrap();
            let last = *r.ratios.last().unwrap();
            assert!((last * f64::from(k) * PI * PI - 1.0).abs() < 1e-6, "k={k}: {last}");
        }
    }

    #[test]
    fn delta_rates() {
        for spec in [DomainSpec::fat(2).unwrap(), DomainSpec::fat(1).unwrap(), DomainSpec::thin(3).unwrap()] {
            let r = delta_rate(&spec, spec.boundary_path(PathKind::Origin, DEFAULT_PATH_STEPS).unwrap()).unwrap();
            assert!(r.tail_bounded(), "{spec}: {:?}", r.ratios);
        }
        let spec = DomainSpec::fat(2).unwrap();
        assert!(delta_rate(&spec, spec.boundary_path(PathKind::TopFace, 5).unwrap()).is_err());
    }

    #[test]
    fn ramadanov_default_pairs() {
        let t = ramadanov_table(&default_ramadanov_pairs(), 25).unwrap();
        assert_eq!(t.k0, vec![1, 1, 1]);
        assert_eq!(t.rows.len(), 25);
        assert!(t.tail_decreasing(10));
        let (e1, e25) = (t.row(1).unwrap().max_error, t.row(25).unwrap().max_error);
        assert!(e25 < e1 / 10.0, "{e1} {e25}");
        for pair in 0..3 {
            let tail: Vec<f64> = t.rows[15..].iter().map(|r| r.errors[pair].unwrap()).collect();
            assert!(tail.windows(2).all(|w| w[1] < w[0]), "pair {pair}: {tail:?}");
        }
    }

    #[test]
    fn ramadanov_axis_point() {
        // B_k((0,r),(0,r)) = ((k-1)t + 1)/(kπ²(1-t)²t) with t = r².
        let p = Point2C::real(0.0, 0.5);
        let t = ramadanov_table(&[(p, p)], 10).unwrap();
        for r in &t.rows {
            let k = f64::from(r.k);
            let b = ((k - 1.0) * 0.25 + 1.0) / (k * PI * PI * 0.75 * 0.75 * 0.25);
            let limit = 1.0 / (PI * PI * 0.75 * 0.75);
            assert!((r.errors[0].unwrap() - (b - limit).abs()).abs() < 1e-12 * b);
        }
    }

    #[test]
    fn ramadanov_entry_index() {
        let p = Point2C::real(0.9, 0.5);
        assert_eq!(entry_k(&p).unwrap(), 7);
        let t = ramadanov_table(&[(p, p), (Point2C::real(0.1, 0.5), Point2C::real(0.1, 0.5))], 8).unwrap();
        assert_eq!(t.k0, vec![7, 1]);
        assert_eq!(t.rows[0].errors[0], None);
        assert!(t.row(7).unwrap().errors[0].is_some());
        assert!(ramadanov_table(&[(Point2C::real(0.1, 0.0), p)], 5).is_err());
    }

    #[test]
    fn ramadanov_kernels_zero_free_on_witness_neighbourhood() {
        // Pairs close to the k = 3 witness; for large k the kernel stays away from 0.
        let r = 0.7;
        let pairs = vec![
            (Point2C::new(c(0.0, 0.0), c(0.0, r)), Point2C::new(c(0.0, 0.0), c(0.0, -r))),
            (Point2C::new(c(0.05, 0.0), c(0.0, r)), Point2C::new(c(0.0, 0.05), c(0.0, -r))),
        ];
        let t = ramadanov_table(&pairs, 40).unwrap();
        let late_min = t.rows[20..].iter().map(|r| r.min_abs_kernel).fold(f64::INFINITY, f64::min);
        assert!(late_min > 0.01, "{late_min}");
    }

    proptest! {
        #[test]
        fn roots_annihilate_numerator(k in 2u32..12, s in -0.99f64..0.99) {
            let co = FatCoeffs::get(k).unwrap();
            let row = scan_row(&co, c(s, 0.0), &ZeroScanConfig { k, s_steps: 2, t_radii: 0, t_args: 0, tol: 0.0 });
            prop_assert_eq!(row.roots.len(), 2);
            for r in &row.roots {
                prop_assert!(r.residual <= 1e-10, "{:?}", r);
            }
        }

        #[test]
        fn realizability_matches_pair_construction(k in 2u32..8, a in 0.0f64..1.0, b in 0.0f64..1.0, th in 0.0f64..std::f64::consts::TAU) {
            let (s, t) = (Complex64::from_polar(a, th), Complex64::from_polar(b, -th));
            let spec = DomainSpec::fat(k).unwrap();
            match realizing_pair(k, s, t) {
                Some((z, w)) => prop_assert!(spec.contains(&z) && spec.contains(&w)),
                None => prop_assert!(a.powi(k as i32) >= b || b == 0.0),
            }
        }
    }
}
