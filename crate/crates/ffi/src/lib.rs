//! C ABI for `hurwitz-codes`.
//!
//! Moduli and residue tables are opaque handles created by `hc_*_new` /
//! `hc_*_parse` and released with the matching `hc_*_free`. Every fallible
//! call returns an [`HcStatus`]; on failure a message is available from
//! [`hc_last_error`] on the same thread. Quaternions cross the boundary as
//! four `int64_t` doubled coordinates (twice each component).

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hurwitz_codes::analysis::{average_energy, code_rate};
use hurwitz_codes::verify::{run_suite, verify_modulus, Check};
use hurwitz_codes::{
    left_congruent, mu, residue_table, Error, HurwitzInt, PrimeModulus, ResidueEntry, ResidueTable,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HcStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    NotPrime = 3,
    Overflow = 4,
    RateModulus = 5,
    ZeroDimension = 6,
    InvalidArgument = 7,
    OutOfRange = 8,
    VerificationFailed = 9,
    Internal = 10,
}

impl From<&Error> for HcStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parse { .. } | Error::MixedParity(_) | Error::Format { .. } => HcStatus::Parse,
            Error::NotPrime(_) | Error::NonPrimeModulus { .. } => HcStatus::NotPrime,
            Error::Overflow => HcStatus::Overflow,
            Error::RateModulus { .. } => HcStatus::RateModulus,
            Error::ZeroDimension => HcStatus::ZeroDimension,
            Error::Bijectivity { .. } | Error::Congruence { .. } => HcStatus::VerificationFailed,
            _ => HcStatus::InvalidArgument,
        }
    }
}

/// A prime Hurwitz modulus.
pub struct HcModulus {
    inner: PrimeModulus,
}

/// The residue table of a modulus.
pub struct HcResidueTable {
    inner: ResidueTable,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HcResidueEntry {
    pub z: i64,
    /// 1 or 2.
    pub branch: u8,
    pub residue_doubled: [i64; 4],
    pub norm1: u64,
    pub norm2: u64,
}

impl From<&ResidueEntry> for HcResidueEntry {
    fn from(e: &ResidueEntry) -> Self {
        HcResidueEntry {
            z: e.z,
            branch: e.branch.number(),
            residue_doubled: e.residue.doubled(),
            norm1: e.norm1,
            norm2: e.norm2,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HcCodeRate {
    pub n: u64,
    pub k: u32,
    pub rate_num: u64,
    pub rate_den: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

/// Runs `f`, recording errors and turning panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), (HcStatus, String)>) -> HcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HcStatus::Internal
        }
    }
}

fn lib<T>(r: hurwitz_codes::Result<T>) -> Result<T, (HcStatus, String)> {
    r.map_err(|e| (HcStatus::from(&e), e.to_string()))
}

fn null() -> (HcStatus, String) {
    (HcStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read<'a, T>(p: *const T) -> Result<&'a T, (HcStatus, String)> {
    p.as_ref().ok_or_else(null)
}

unsafe fn read4(p: *const i64) -> Result<[i64; 4], (HcStatus, String)> {
    if p.is_null() {
        return Err(null());
    }
    let mut q = [0; 4];
    q.copy_from_slice(std::slice::from_raw_parts(p, 4));
    Ok(q)
}

unsafe fn write<T>(p: *mut T, v: T) -> Result<(), (HcStatus, String)> {
    if p.is_null() {
        return Err(null());
    }
    p.write(v);
    Ok(())
}

fn new_modulus(
    q: hurwitz_codes::Result<HurwitzInt>,
    out: *mut *mut HcModulus,
) -> Result<(), (HcStatus, String)> {
    let m = lib(q.and_then(PrimeModulus::new))?;
    let handle = Box::into_raw(Box::new(HcModulus { inner: m }));
    // SAFETY: caller passes a writable pointer or null, checked in `write`.
    if let Err(e) = unsafe { write(out, handle) } {
        drop(unsafe { Box::from_raw(handle) });
        return Err(e);
    }
    Ok(())
}

/// Copies the last error message on this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length in bytes.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn hc_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Modulus from doubled coordinates, e.g. `{5, 3, 3, 3}`.
///
/// # Safety
/// `doubled` must point to four `int64_t`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_modulus_new(doubled: *const i64, out: *mut *mut HcModulus) -> HcStatus {
    guard(|| {
        let d = read4(doubled)?;
        new_modulus(HurwitzInt::from_doubled(d), out)
    })
}

/// Modulus from text such as `"5/2+3/2i+3/2j+3/2k"`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_modulus_parse(
    text: *const c_char,
    out: *mut *mut HcModulus,
) -> HcStatus {
    guard(|| {
        if text.is_null() {
            return Err(null());
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (HcStatus::Parse, "modulus text is not UTF-8".to_string()))?;
        new_modulus(s.parse(), out)
    })
}

/// # Safety
/// `m` must be null or a handle from `hc_modulus_new` / `hc_modulus_parse`
/// that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn hc_modulus_free(m: *mut HcModulus) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_modulus_norm(m: *const HcModulus, out: *mut u64) -> HcStatus {
    guard(|| write(out, read(m)?.inner.norm()))
}

/// # Safety
/// `m` must be a live handle; `out` must point to four writable `int64_t`.
#[no_mangle]
pub unsafe extern "C" fn hc_modulus_alpha(m: *const HcModulus, out: *mut i64) -> HcStatus {
    guard(|| {
        let d = read(m)?.inner.alpha().doubled();
        write(out.cast::<[i64; 4]>(), d)
    })
}

/// Residue of `z` under the min rule.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_mu(m: *const HcModulus, z: i64, out: *mut HcResidueEntry) -> HcStatus {
    guard(|| {
        let e = lib(mu(&read(m)?.inner, z))?;
        write(out, HcResidueEntry::from(&e))
    })
}

/// Whether `a - b` lies in `alpha H`.
///
/// # Safety
/// `m` must be a live handle; `a` and `b` must point to four `int64_t`;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_left_congruent(
    m: *const HcModulus,
    a: *const i64,
    b: *const i64,
    out: *mut bool,
) -> HcStatus {
    guard(|| {
        let m = read(m)?;
        let qa = lib(HurwitzInt::from_doubled(read4(a)?))?;
        let qb = lib(HurwitzInt::from_doubled(read4(b)?))?;
        write(out, left_congruent(&qa, &qb, &m.inner))
    })
}

/// Average energy `num / den` of the residue set, in lowest terms.
///
/// # Safety
/// `m` must be a live handle; `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_average_energy(
    m: *const HcModulus,
    num: *mut u64,
    den: *mut u64,
) -> HcStatus {
    guard(|| {
        let e = lib(average_energy(&read(m)?.inner))?;
        write(num, *e.average_energy.numer())?;
        write(den, *e.average_energy.denom())
    })
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_residue_table_new(
    m: *const HcModulus,
    out: *mut *mut HcResidueTable,
) -> HcStatus {
    guard(|| {
        let t = lib(residue_table(&read(m)?.inner))?;
        let handle = Box::into_raw(Box::new(HcResidueTable { inner: t }));
        if let Err(e) = write(out, handle) {
            drop(Box::from_raw(handle));
            return Err(e);
        }
        Ok(())
    })
}

/// # Safety
/// `t` must be null or a live handle from `hc_residue_table_new`.
#[no_mangle]
pub unsafe extern "C" fn hc_residue_table_free(t: *mut HcResidueTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_residue_table_len(
    t: *const HcResidueTable,
    out: *mut usize,
) -> HcStatus {
    guard(|| write(out, read(t)?.inner.len()))
}

/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_residue_table_entry(
    t: *const HcResidueTable,
    index: usize,
    out: *mut HcResidueEntry,
) -> HcStatus {
    guard(|| {
        let t = read(t)?;
        let e = t.inner.entries().get(index).ok_or_else(|| {
            (
                HcStatus::OutOfRange,
                format!("index {index} out of range for {} entries", t.inner.len()),
            )
        })?;
        write(out, HcResidueEntry::from(e))
    })
}

/// Length and rate of a code over `H` for prime `p ≡ 1 (mod 24)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hc_code_rate(p: u64, k: u32, out: *mut HcCodeRate) -> HcStatus {
    guard(|| {
        let r = lib(code_rate(p, k))?;
        let narrow = |x: u128| {
            u64::try_from(x).map_err(|_| (HcStatus::Overflow, format!("{x} exceeds 64 bits")))
        };
        write(
            out,
            HcCodeRate {
                n: narrow(r.n)?,
                k: r.k,
                rate_num: narrow(*r.rate.numer())?,
                rate_den: narrow(*r.rate.denom())?,
            },
        )
    })
}

/// Runs every check on every prime modulus of norm at most `norm_bound`.
/// Returns `VerificationFailed` and the failure count when a counterexample
/// is found.
///
/// # Safety
/// `failures` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn hc_verify_suite(norm_bound: u64, failures: *mut u64) -> HcStatus {
    guard(|| {
        let reports = lib(run_suite(norm_bound, &Check::ALL))?;
        finish(reports.iter().map(|r| r.failures).sum(), failures)
    })
}

/// Runs every check on a single modulus.
///
/// # Safety
/// `m` must be a live handle; `failures` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn hc_verify_modulus(m: *const HcModulus, failures: *mut u64) -> HcStatus {
    guard(|| {
        let reports = lib(verify_modulus(&read(m)?.inner))?;
        finish(reports.iter().map(|r| r.failures).sum(), failures)
    })
}

unsafe fn finish(count: u64, failures: *mut u64) -> Result<(), (HcStatus, String)> {
    if !failures.is_null() {
        failures.write(count);
    }
    if count == 0 {
        Ok(())
    } else {
        Err((
            HcStatus::VerificationFailed,
            format!("{count} counterexamples"),
        ))
    }
}
