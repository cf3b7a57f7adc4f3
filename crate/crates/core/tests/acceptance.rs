//! End-to-end acceptance checks. Runs as a plain binary (`harness = false`)
//! and prints one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use hartogs::analysis::{self, TAIL_QUOTIENT_LIMIT};
use hartogs::kernel::{self, ThinDenominator};
use hartogs::oracle::{self, Function2C};
use hartogs::transform::{self, ProperMap};
use hartogs::{polycoeff, DomainSpec, PathKind, Point2C};
use num_complex::Complex64;

/// Outcome of one criterion: pass flag and a one-line summary.
type Check = (bool, String);

type Criterion = (&'static str, fn() -> Check);

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn c1_identities() -> Check {
    let start = Instant::now();
    let r = polycoeff::verify_identities(50).unwrap();
    let secs = start.elapsed().as_secs_f64();
    (
        r.all_passed && secs < 5.0,
        format!("{} k values, all agree: {}, {secs:.2} s (< 5 s)", r.checks.len(), r.all_passed),
    )
}

fn c2_fat_series() -> Check {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for k in 1..=4 {
        let spec = DomainSpec::fat(k).unwrap();
        for (z, w) in oracle::sample_pairs_bounded(&spec, 50, 100 + u64::from(k), 0.4).unwrap() {
            let c = oracle::compare_with_closed_form(&spec, &z, &w, 1e-10).unwrap();
            worst = worst.max(c.rel_deviation);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (worst <= 1e-6 && secs < 60.0, format!("max relative deviation {worst:.3e} (<= 1e-6), {secs:.2} s"))
}

fn c3_thin_variant() -> Check {
    let start = Instant::now();
    let variants = [ThinDenominator::OneMinusT, ThinDenominator::OneMinusS];
    // Per variant: worst series deviation and worst pullback residual over k = 2..4.
    let mut series = [0.0f64; 2];
    let mut pullback = [0.0f64; 2];
    for k in 2..=4 {
        let spec = DomainSpec::thin(k).unwrap();
        for (z, w) in oracle::sample_pairs_bounded(&spec, 30, 200 + u64::from(k), 0.4).unwrap() {
            let s = oracle::kernel_series_auto(&spec, &z, &w, 1e-10).unwrap().value;
            for (i, v) in variants.iter().enumerate() {
                let closed = kernel::bergman_thin_variant(k, &z, &w, *v).unwrap().value;
                series[i] = series[i].max(rel(s, closed));
            }
        }
        for (i, v) in variants.iter().enumerate() {
            pullback[i] =
                pullback[i].max(transform::thin_variant_check(k, *v, 200, 300 + u64::from(k)).unwrap().max_residual);
        }
    }
    let matches = |i: usize| series[i] <= 1e-6 && pullback[i] <= 1e-12;
    let fails = |i: usize| series[i] > 1e-3 || pullback[i] > 1e-3;
    let exactly_one = (matches(0) && fails(1)) ^ (matches(1) && fails(0));
    let secs = start.elapsed().as_secs_f64();
    (
        exactly_one && matches(0) && secs < 60.0,
        format!(
            "(1-t)^2: series {:.2e}, pullback {:.2e}; (1-s)^2: series {:.2e}, pullback {:.2e}; {secs:.2} s",
            series[0], pullback[0], series[1], pullback[1]
        ),
    )
}

fn c4_bell() -> Check {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for k in 2..=8 {
        worst = worst.max(transform::bell_check(k, 100, 400 + u64::from(k)).unwrap().max_residual);
    }
    let secs = start.elapsed().as_secs_f64();
    (worst <= 1e-9 && secs < 10.0, format!("max residual {worst:.3e} (<= 1e-9) over k = 2..8, {secs:.2} s"))
}

fn c5_biholomorphic() -> Check {
    let shear =
        transform::biholo_check(ProperMap::Shear, &DomainSpec::classical(), &DomainSpec::punctured_bidisc(), 1000, 500)
            .unwrap()
            .max_residual;
    let mut chain = 0.0f64;
    for k in 1..=4 {
        let src = DomainSpec::thin(k + 1).unwrap();
        let dst = DomainSpec::thin(k).unwrap();
        chain = chain
            .max(transform::biholo_check(ProperMap::Shear, &src, &dst, 1000, 510 + u64::from(k)).unwrap().max_residual);
    }
    (shear <= 1e-13 && chain <= 1e-12, format!("shear {shear:.3e} (<= 1e-13), chain k = 1..4 {chain:.3e} (<= 1e-12)"))
}

fn c6_zeros() -> Check {
    let worst = (2..=50)
        .map(|k| analysis::lqk_witness(k).unwrap())
        .fold((true, 0.0f64), |(ok, m), w| (ok && w.confirmed, m.max(w.numerator_abs)));
    let hits: usize =
        (1..=4).map(|k| analysis::thin_nonvanishing(k, 100_000, 600 + u64::from(k)).unwrap().zero_hits).sum();
    (
        worst.0 && worst.1 <= 1e-12 && hits == 0,
        format!("witness |numerator| max {:.3e} (<= 1e-12), thin zero hits {hits}", worst.1),
    )
}

fn c7_reproducing() -> Check {
    let points = [
        Point2C::real(0.1, 0.5),
        Point2C::new(Complex64::new(0.0, 0.2), Complex64::new(0.6, 0.0)),
        Point2C::new(Complex64::new(-0.3, 0.0), Complex64::new(0.0, 0.4)),
    ];
    let mut worst = 0.0f64;
    let mut slowest = 0.0f64;
    for k in 1..=2 {
        let spec = DomainSpec::fat(k).unwrap();
        let start = Instant::now();
        for (i, z) in points.iter().enumerate() {
            for (j, f) in [Function2C::One, Function2C::Z1, Function2C::Z2].into_iter().enumerate() {
                let seed = 700 + 10 * u64::from(k) + 3 * i as u64 + j as u64;
                worst = worst.max(oracle::reproducing_check(&spec, f, z, 10_000_000, seed).unwrap().residual);
            }
        }
        slowest = slowest.max(start.elapsed().as_secs_f64());
    }
    (worst <= 0.02 && slowest < 120.0, format!("max residual {worst:.3e} (<= 2%), slowest domain {slowest:.1} s"))
}

/// Monomials whose squared modulus is itself square integrable, so the
/// Monte Carlo estimators have finite variance.
fn finite_variance_monomials(spec: &DomainSpec) -> Vec<(u32, i32)> {
    let g = spec.gamma().unwrap();
    let mut out = Vec::new();
    for a in 0..4u32 {
        for b in -3..3i32 {
            if oracle::admissible(g, 2 * a, 2 * i64::from(b)) {
                out.push((a, b));
            }
        }
    }
    out
}

fn c8_norms() -> Check {
    let n = 1_000_000;
    let (mut diag_ok, mut cross_ok, mut checked) = (true, true, 0);
    let mut worst_sigma = 0.0f64;
    for spec in [
        DomainSpec::fat(1).unwrap(),
        DomainSpec::fat(2).unwrap(),
        DomainSpec::fat(3).unwrap(),
        DomainSpec::thin(2).unwrap(),
    ] {
        let g = spec.gamma().unwrap();
        let mons = finite_variance_monomials(&spec);
        for (i, &(a, b)) in mons.iter().take(10).enumerate() {
            let f = Function2C::Monomial { a, b };
            let e = oracle::inner_product_mc(&spec, f, f, n, 800 + i as u64).unwrap();
            let exact = oracle::norm_sq(g, a, i64::from(b));
            worst_sigma = worst_sigma.max((e.value.re - exact).abs() / e.std_error);
            diag_ok &= e.within(Complex64::new(exact, 0.0), 3.0);
            checked += 1;
        }
        let mut cross = 0;
        'outer: for (i, &(a1, b1)) in mons.iter().enumerate() {
            for &(a2, b2) in &mons[i + 1..] {
                if !oracle::admissible(g, a1 + a2, i64::from(b1 + b2)) {
                    continue;
                }
                let e = oracle::inner_product_mc(
                    &spec,
                    Function2C::Monomial { a: a1, b: b1 },
                    Function2C::Monomial { a: a2, b: b2 },
                    n,
                    900 + cross,
                )
                .unwrap();
                cross_ok &= e.within(Complex64::new(0.0, 0.0), 3.0);
                cross += 1;
                if cross == 10 {
                    break 'outer;
                }
            }
        }
    }
    (
        diag_ok && cross_ok,
        format!("{checked} norms (worst {worst_sigma:.2} SE), cross terms within 3 SE of 0: {cross_ok}"),
    )
}

fn c9_asymptotics() -> Check {
    let specs = (1..=5).map(|k| DomainSpec::fat(k).unwrap()).chain((2..=5).map(|k| DomainSpec::thin(k).unwrap()));
    let mut worst = 0.0f64;
    for spec in specs {
        for kind in [PathKind::Origin, PathKind::TopFace, PathKind::SmoothLeviFlat] {
            let path = spec.boundary_path(kind, analysis::DEFAULT_PATH_STEPS).unwrap();
            if kind == PathKind::Origin {
                worst = worst.max(analysis::delta_rate(&spec, path.clone()).unwrap().tail_quotient);
            }
            worst = worst.max(analysis::diagonal_ratio(&spec, path).unwrap().tail_quotient);
        }
    }
    (worst <= TAIL_QUOTIENT_LIMIT, format!("worst tail max/min {worst:.4} (<= 10)"))
}

fn c10_ramadanov() -> Check {
    let t = analysis::ramadanov_table(&analysis::default_ramadanov_pairs(), 25).unwrap();
    let first = t.rows.first().unwrap();
    let last = t.row(25).unwrap();
    let decreasing = t.tail_decreasing(10);
    (
        decreasing && last.max_error < first.max_error / 10.0,
        format!(
            "e_{} = {:.4e}, e_25 = {:.4e}, decreasing over last 10: {decreasing}",
            first.k, first.max_error, last.max_error
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("exact numerator identities, 2 <= k <= 50", c1_identities),
        ("fat kernels vs monomial series", c2_fat_series),
        ("thin kernel denominator resolution", c3_thin_variant),
        ("Bell transformation rule", c4_bell),
        ("biholomorphic invariance", c5_biholomorphic),
        ("zero witnesses and thin zero-freeness", c6_zeros),
        ("reproducing property by Monte Carlo", c7_reproducing),
        ("monomial norms by Monte Carlo", c8_norms),
        ("boundary asymptotics of the diagonal", c9_asymptotics),
        ("convergence to the punctured bidisc", c10_ramadanov),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            (false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        if !ok {
            failed += 1;
        }
        println!("criterion {:>2} {} {name}: {detail}", i + 1, if ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
