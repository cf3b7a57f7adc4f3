//! Monte Carlo integration over a domain by uniform sampling of the enclosing
//! bidisc `D x D` (volume π²).
//!
//! Draws are split into fixed-size chunks; chunk `c` reads ChaCha8 stream `c`
//! of the seed, and chunk results are combined in index order. The result is
//! therefore a function of `(n, seed)` alone, independent of thread count.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::domain::{bidisc_point, DomainSpec, Point2C};
use crate::error::{Error, Result};
use crate::kernel::{Evaluator, KernelArgs};
use crate::oracle::testfn::Function2C;

/// Bidisc draws per independent random stream.
pub const MC_CHUNK: u64 = 1 << 16;

pub const MIN_MC_SAMPLES: u64 = 1_000;

#[derive(Debug, Clone, Copy, Default)]
struct Accum {
    sum: Complex64,
    sum_sq: f64,
    accepted: u64,
    excluded: u64,
}

impl Accum {
    fn merge(mut self, o: Accum) -> Accum {
        self.sum += o.sum;
        self.sum_sq += o.sum_sq;
        self.accepted += o.accepted;
        self.excluded += o.excluded;
        self
    }
}

/// What one bidisc draw contributes.
enum Sample {
    Outside,
    Value(Complex64),
    Excluded,
}

/// Mean and standard error of `π² · integrand` over `n` bidisc draws.
fn integrate<F>(n: u64, seed: u64, integrand: F) -> (Complex64, f64, Accum)
where
    F: Fn(&Point2C) -> Sample + Sync,
{
    let chunks = n.div_ceil(MC_CHUNK);
    let parts: Vec<Accum> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let len = MC_CHUNK.min(n - c * MC_CHUNK);
            let mut acc = Accum::default();
            for _ in 0..len {
                let p = bidisc_point(&mut rng);
                match integrand(&p) {
                    Sample::Outside => {}
                    Sample::Excluded => acc.excluded += 1,
                    Sample::Value(v) => {
                        let x = PI * PI * v;
                        acc.sum += x;
                        acc.sum_sq += x.norm_sqr();
                        acc.accepted += 1;
                    }
                }
            }
            acc
        })
        .collect();
    let total = parts.into_iter().fold(Accum::default(), Accum::merge);
    let nf = n as f64;
    let mean = total.sum / nf;
    let var = (total.sum_sq / nf - mean.norm_sqr()).max(0.0) * nf / (nf - 1.0);
    (mean, (var / nf).sqrt(), total)
}

#[derive(Debug, Clone, Serialize)]
pub struct McEstimate {
    #[serde(serialize_with = "crate::oracle::ser_complex")]
    pub value: Complex64,
    pub std_error: f64,
    /// Bidisc draws.
    pub n: u64,
    /// Draws that landed in the domain.
    pub accepted: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `|value - expected| <= sigmas · std_error`.
    pub fn within(&self, expected: Complex64, sigmas: f64) -> bool {
        (self.value - expected).norm() <= sigmas * self.std_error
    }
}

fn require_n(n: u64) -> Result<()> {
    if n < MIN_MC_SAMPLES {
        Err(Error::Precondition(format!("Monte Carlo needs n >= {MIN_MC_SAMPLES}, got {n}")))
    } else {
        Ok(())
    }
}

/// `⟨f, g⟩ = ∫ f conj(g) dV` over the domain.
pub fn inner_product_mc(spec: &DomainSpec, f: Function2C, g: Function2C, n: u64, seed: u64) -> Result<McEstimate> {
    require_n(n)?;
    let (value, std_error, acc) = integrate(n, seed, |p| {
        if spec.contains(p) {
            Sample::Value(f.eval(p) * g.eval(p).conj())
        } else {
            Sample::Outside
        }
    });
    Ok(McEstimate { value, std_error, n, accepted: acc.accepted, seed })
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproducingReport {
    pub spec: DomainSpec,
    pub function: String,
    pub z: Point2C,
    /// Monte Carlo value of `∫ B(z, w) f(w) dV(w)`.
    pub estimate: McEstimate,
    #[serde(serialize_with = "crate::oracle::ser_complex")]
    pub exact: Complex64,
    /// `|estimate - f(z)| / max(1, |f(z)|)`.
    pub residual: f64,
    /// Samples dropped because the kernel evaluation was flagged near-singular.
    pub excluded_singular: u64,
}

/// Reproducing-property check `f(z) = ∫ B(z, w) f(w) dV(w)` with the
/// closed-form kernel.
pub fn reproducing_check(
    spec: &DomainSpec,
    f: Function2C,
    z: &Point2C,
    n: u64,
    seed: u64,
) -> Result<ReproducingReport> {
    require_n(n)?;
    spec.check(z)?;
    if !f.in_bergman_space(spec) {
        return Err(Error::Precondition(format!("{f} is not square integrable on {spec}")));
    }
    let kernel = Evaluator::new(spec)?;
    let (value, std_error, acc) = integrate(n, seed, |w| {
        if !spec.contains(w) {
            return Sample::Outside;
        }
        let kv = kernel.eval(KernelArgs::from_points(z, w));
        if kv.near_singular || !kv.value.is_finite() {
            Sample::Excluded
        } else {
            Sample::Value(kv.value * f.eval(w))
        }
    });
    let exact = f.eval(z);
    let residual = (value - exact).norm() / exact.norm().max(1.0);
    Ok(ReproducingReport {
        spec: *spec,
        function: f.to_string(),
        z: *z,
        estimate: McEstimate { value, std_error, n, accepted: acc.accepted, seed },
        exact,
        residual,
        excluded_singular: acc.excluded,
    })
}
