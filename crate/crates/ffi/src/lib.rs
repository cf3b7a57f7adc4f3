//! C ABI over the `hartogs` crate.
//!
//! Every fallible function returns a [`HartogsStatus`] and writes its result
//! through an out-pointer; on failure the out-pointer is left untouched and
//! [`hartogs_last_error_message`] describes the error for the calling thread.
//! Domains are opaque handles created by `hartogs_domain_*` constructors and
//! released with [`hartogs_domain_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hartogs::analysis;
use hartogs::kernel;
use hartogs::oracle;
use hartogs::polycoeff;
use hartogs::transform;
use hartogs::{DomainSpec, Error, Point2C};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HartogsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutsideDomain = 3,
    UnsupportedDomain = 4,
    Precondition = 5,
    SingularEvaluation = 6,
    NonconvergentTruncation = 7,
    SamplerExhausted = 8,
    Parse = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HartogsComplex {
    pub re: f64,
    pub im: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HartogsPoint {
    pub z1: HartogsComplex,
    pub z2: HartogsComplex,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HartogsKernelValue {
    pub value: HartogsComplex,
    pub numerator: HartogsComplex,
    pub denominator: HartogsComplex,
    /// Denominator below the library's singularity threshold.
    pub near_singular: bool,
}

/// Opaque domain handle.
pub struct HartogsDomain {
    spec: DomainSpec,
}

impl From<HartogsComplex> for Complex64 {
    fn from(c: HartogsComplex) -> Self {
        Complex64::new(c.re, c.im)
    }
}

impl From<Complex64> for HartogsComplex {
    fn from(c: Complex64) -> Self {
        HartogsComplex { re: c.re, im: c.im }
    }
}

impl From<HartogsPoint> for Point2C {
    fn from(p: HartogsPoint) -> Self {
        Point2C::new(p.z1.into(), p.z2.into())
    }
}

impl From<Point2C> for HartogsPoint {
    fn from(p: Point2C) -> Self {
        HartogsPoint { z1: p.z1.into(), z2: p.z2.into() }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> HartogsStatus {
    match e {
        Error::OutsideDomain { .. } => HartogsStatus::OutsideDomain,
        Error::UnsupportedDomain { .. } => HartogsStatus::UnsupportedDomain,
        Error::Precondition(_) => HartogsStatus::Precondition,
        Error::SingularEvaluation { .. } => HartogsStatus::SingularEvaluation,
        Error::NonconvergentTruncation { .. } => HartogsStatus::NonconvergentTruncation,
        Error::SamplerExhausted(_) => HartogsStatus::SamplerExhausted,
        Error::Parse(_) => HartogsStatus::Parse,
    }
}

/// Failure inside the shim itself (bad pointer or argument).
struct Fail(HartogsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HartogsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            HartogsStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            HartogsStatus::Panic
        }
    }
}

unsafe fn read<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(HartogsStatus::NullPointer, format!("{name} is null")))
}

unsafe fn write<T>(p: *mut T, name: &str, value: T) -> Result<(), Fail> {
    if p.is_null() {
        return Err(Fail(HartogsStatus::NullPointer, format!("{name} is null")));
    }
    p.write(value);
    Ok(())
}

fn check_out<T>(p: *mut T, name: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(HartogsStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

unsafe fn new_domain(
    out: *mut *mut HartogsDomain,
    spec: impl FnOnce() -> hartogs::Result<DomainSpec>,
) -> HartogsStatus {
    guard(|| {
        check_out(out, "out")?;
        let handle = Box::new(HartogsDomain { spec: spec()? });
        write(out, "out", Box::into_raw(handle))
    })
}

/// Copies `s` NUL-terminated into `buf` (truncating) and returns the full length.
unsafe fn copy_str(s: &str, buf: *mut c_char, len: usize) -> usize {
    if !buf.is_null() && len > 0 {
        let n = s.len().min(len - 1);
        ptr::copy_nonoverlapping(s.as_ptr().cast::<c_char>(), buf, n);
        *buf.add(n) = 0;
    }
    s.len()
}

/// Parses a domain name: `fat:K`, `thin:K`, `classical`, `bidisc` or `punctured-bidisc`.
///
/// # Safety
/// `spec` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hartogs_domain_parse(spec: *const c_char, out: *mut *mut HartogsDomain) -> HartogsStatus {
    if spec.is_null() {
        set_error("spec is null".into());
        return HartogsStatus::NullPointer;
    }
    let text = match CStr::from_ptr(spec).to_str() {
        Ok(t) => t.to_owned(),
        Err(_) => {
            set_error("spec is not UTF-8".into());
            return HartogsStatus::InvalidArgument;
        }
    };
    new_domain(out, || text.parse())
}

/// The fat triangle `{|z1|^k < |z2| < 1}`, `k >= 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hartogs_domain_fat(k: u32, out: *mut *mut HartogsDomain) -> HartogsStatus {
    new_domain(out, || DomainSpec::fat(k))
}

/// The thin triangle `{|z1| < |z2|^k < 1}`, `k >= 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hartogs_domain_thin(k: u32, out: *mut *mut HartogsDomain) -> HartogsStatus {
    new_domain(out, || DomainSpec::thin(k))
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `domain` must come from a `hartogs_domain_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hartogs_domain_free(domain: *mut HartogsDomain) {
    if !domain.is_null() {
        drop(Box::from_raw(domain));
    }
}

/// Writes the canonical domain name into `buf`; returns its length without the NUL.
///
/// # Safety
/// `domain` must be a live handle; `buf` must hold `len` bytes or be null.
#[no_mangle]
pub unsafe extern "C" fn hartogs_domain_name(domain: *const HartogsDomain, buf: *mut c_char, len: usize) -> usize {
    match domain.as_ref() {
        Some(d) => copy_str(&d.spec.to_string(), buf, len),
        None => 0,
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hartogs_domain_contains(
    domain: *const HartogsDomain,
    p: *const HartogsPoint,
    out: *mut bool,
) -> HartogsStatus {
    guard(|| {
        let d = read(domain, "domain")?;
        let p = read(p, "p")?;
        write(out, "out", d.spec.contains(&(*p).into()))
    })
}

/// Euclidean distance from an interior point to the boundary.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hartogs_domain_boundary_distance(
    domain: *const HartogsDomain,
    p: *const HartogsPoint,
    out: *mut f64,
) -> HartogsStatus {
    guard(|| {
        let d = read(domain, "domain")?;
        let p = read(p, "p")?;
        check_out(out, "out")?;
        let v = d.spec.boundary_distance(&(*p).into())?;
        write(out, "out", v)
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hartogs_domain_volume(domain: *const HartogsDomain, out: *mut f64) -> HartogsStatus {
    guard(|| {
        let d = read(domain, "domain")?;
        write(out, "out", d.spec.volume())
    })
}

/// Closed-form Bergman kernel `B(z, w)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hartogs_kernel(
    domain: *const HartogsDomain,
    z: *const HartogsPoint,
    w: *const HartogsPoint,
    out: *mut HartogsKernelValue,
) -> HartogsStatus {
    guard(|| {
        let d = read(domain, "domain")?;
        let (z, w) = (read(z, "z")?, read(w, "w")?);
        check_out(out, "out")?;
        let kv = kernel::bergman(&d.spec, &(*z).into(), &(*w).into())?;
        write(
            out,
            "out",
            HartogsKernelValue {
                value: kv.value.into(),
                numerator: kv.numerator.into(),
                denominator: kv.denominator.into(),
                near_singular: kv.near_singular,
            },
        )
    })
}

/// `B(z, z)`, real and positive.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hartogs_diagonal(
    domain: *const HartogsDomain,
    z: *const HartogsPoint,
    out: *mut f64,
) -> HartogsStatus {
    guard(|| {
        let d = read(domain, "domain")?;
        let z = read(z, "z")?;
        check_out(out, "out")?;
        let v = kernel::diagonal(&d.spec, &(*z).into())?;
        write(out, "out", v)
    })
}

/// Kernel from the orthonormal monomial series, truncated until the tail
/// bound is below `tol` relative to the sum. `tail` may be null.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hartogs_kernel_series(
    domain: *const HartogsDomain,
    z: *const HartogsPoint,
    w: *const HartogsPoint,
    tol: f64,
    out: *mut HartogsComplex,
    tail: *mut f64,
) -> HartogsStatus {
    guard(|| {
        let d = read(domain, "domain")?;
        let (z, w) = (read(z, "z")?, read(w, "w")?);
        check_out(out, "out")?;
        if tol.is_nan() || tol <= 0.0 {
            return Err(Fail(HartogsStatus::InvalidArgument, format!("tol must be positive, got {tol}")));
        }
        let r = oracle::kernel_series_auto(&d.spec, &(*z).into(), &(*w).into(), tol)?;
        if !tail.is_null() {
            tail.write(r.truncation.tail_estimate);
        }
        write(out, "out", r.value.into())
    })
}

/// Relative residual of Bell's rule for the power map `H_1 → H_k`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hartogs_bell_residual(
    k: u32,
    z: *const HartogsPoint,
    w: *const HartogsPoint,
    out: *mut f64,
) -> HartogsStatus {
    guard(|| {
        let (z, w) = (read(z, "z")?, read(w, "w")?);
        check_out(out, "out")?;
        let r = transform::bell_residual(k, &(*z).into(), &(*w).into())?;
        write(out, "out", r.residual)
    })
}

/// A pair `z, w` in the fat triangle of exponent `k >= 2` at which the kernel vanishes.
///
/// # Safety
/// Out-pointers must be writable; `numerator_abs` may be null.
#[no_mangle]
pub unsafe extern "C" fn hartogs_zero_witness(
    k: u32,
    z: *mut HartogsPoint,
    w: *mut HartogsPoint,
    numerator_abs: *mut f64,
) -> HartogsStatus {
    guard(|| {
        check_out(z, "z")?;
        check_out(w, "w")?;
        let wit = analysis::lqk_witness(k)?;
        if !numerator_abs.is_null() {
            numerator_abs.write(wit.numerator_abs);
        }
        z.write(wit.z.into());
        write(w, "w", wit.w.into())
    })
}

/// Exact check of the numerator coefficient identities for `2 <= k <= k_max`.
///
/// # Safety
/// `all_passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hartogs_verify_identities(k_max: u32, all_passed: *mut bool) -> HartogsStatus {
    guard(|| {
        check_out(all_passed, "all_passed")?;
        let r = polycoeff::verify_identities(k_max)?;
        write(all_passed, "all_passed", r.all_passed)
    })
}

/// Message for the last failed call on this thread; returns its length
/// without the NUL (0 after a successful call).
///
/// # Safety
/// `buf` must hold `len` bytes or be null.
#[no_mangle]
pub unsafe extern "C" fn hartogs_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| copy_str(&e.borrow(), buf, len))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hartogs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
