//! C ABI for `thickmix`.
//!
//! Objects cross the boundary as opaque handles (`ThmBlock`, `ThmZSet`,
//! `ThmReport`) created by constructor functions and released with the
//! matching `*_free`. Every fallible call returns a [`ThmStatus`]; on a
//! nonzero status, [`thm_last_error`] describes the failure for the calling
//! thread. Panics are caught at the boundary and reported as
//! [`ThmStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use thickmix::cli::{self, Format, RunConfig, Suite};
use thickmix::returnsets::{return_set_bruteforce, CylinderSet};
use thickmix::words::{block_length_i64, chacon_block, Block};
use thickmix::zsets::{gap_element, h_set, truncated_h_sum, Interval, ZSet};
use thickmix::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidDepth = 3,
    DepthExceedsCap = 4,
    UnreachableRange = 5,
    NotCertified = 6,
    NotFound = 7,
    Overflow = 8,
    BudgetExhausted = 9,
    PreconditionViolated = 10,
    ClaimFalsified = 11,
    Io = 12,
    BufferTooSmall = 13,
    Panic = 99,
}

impl From<&Error> for ThmStatus {
    fn from(e: &Error) -> Self {
        use Error::*;
        match e {
            InvalidDepth(_) => ThmStatus::InvalidDepth,
            DepthExceedsCap { .. } => ThmStatus::DepthExceedsCap,
            UnreachableRange { .. } => ThmStatus::UnreachableRange,
            NotCertified(_) => ThmStatus::NotCertified,
            EmptyCylinder { .. }
            | NoCoverFound { .. }
            | RunNotFound { .. }
            | EmptyIntersection { .. } => ThmStatus::NotFound,
            Overflow(_) => ThmStatus::Overflow,
            BudgetExhausted(_) => ThmStatus::BudgetExhausted,
            PreconditionViolated(_) | TruncationBelowLevel { .. } => {
                ThmStatus::PreconditionViolated
            }
            ClaimFalsified(_) => ThmStatus::ClaimFalsified,
            Io { .. } => ThmStatus::Io,
            _ => ThmStatus::InvalidArgument,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    let c = CString::new(msg).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Runs `f` behind the boundary: clears the last error, converts library
/// errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (ThmStatus, String)>) -> ThmStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ThmStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            ThmStatus::Panic
        }
    }
}

fn lib<T>(r: thickmix::Result<T>) -> Result<T, (ThmStatus, String)> {
    r.map_err(|e| (ThmStatus::from(&e), e.to_string()))
}

fn null(what: &str) -> (ThmStatus, String) {
    (ThmStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> (ThmStatus, String) {
    (ThmStatus::InvalidArgument, msg.into())
}

/// Writes `value` through `out`, boxing it as a handle.
unsafe fn emit<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next `thm_*` call on the same thread.
#[no_mangle]
pub extern "C" fn thm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn thm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// ---- words ---------------------------------------------------------------

/// A Chacón block.
pub struct ThmBlock(Block);

/// `B_n` for `1 ≤ n ≤ 12`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn thm_chacon_block(n: u32, out: *mut *mut ThmBlock) -> ThmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let b = lib(chacon_block(n))?;
        emit(out, ThmBlock(b));
        Ok(())
    })
}

/// Number of letters in the block; 0 for null.
///
/// # Safety
/// `block` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn thm_block_len(block: *const ThmBlock) -> usize {
    block.as_ref().map_or(0, |b| b.0.len())
}

/// Copies the letters (0 or 1) into `buf`. Fails with `BufferTooSmall`
/// when `cap` is below the block length.
///
/// # Safety
/// `block` must be a live handle and `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn thm_block_letters(
    block: *const ThmBlock,
    buf: *mut u8,
    cap: usize,
) -> ThmStatus {
    guard(|| {
        let b = block.as_ref().ok_or_else(|| null("block"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let letters = b.0.letters();
        if cap < letters.len() {
            return Err((
                ThmStatus::BufferTooSmall,
                format!("need {} bytes, got {cap}", letters.len()),
            ));
        }
        ptr::copy_nonoverlapping(letters.as_ptr(), buf, letters.len());
        Ok(())
    })
}

/// # Safety
/// `block` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn thm_block_free(block: *mut ThmBlock) {
    if !block.is_null() {
        drop(Box::from_raw(block));
    }
}

/// `l_n = (3^{n+1} - 1)/2`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn thm_block_length(n: u32, out: *mut i64) -> ThmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = lib(block_length_i64(n))?;
        Ok(())
    })
}

/// `(3^{m+1} - 3)/2`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn thm_gap_element(m: u32, out: *mut i64) -> ThmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = lib(gap_element(m))?;
        Ok(())
    })
}

// ---- integer sets --------------------------------------------------------

/// A finite integer set restricted to a range, with its certified range.
pub struct ThmZSet(ZSet);

fn interval(lo: i64, hi: i64) -> Result<Interval, (ThmStatus, String)> {
    lib(Interval::new(lo, hi))
}

unsafe fn word(ptr: *const u8, len: usize, what: &str) -> Result<Block, (ThmStatus, String)> {
    if ptr.is_null() {
        return Err(null(what));
    }
    let letters = std::slice::from_raw_parts(ptr, len).to_vec();
    lib(Block::new(letters))
}

/// `H_m`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn thm_h_set(m: u32, out: *mut *mut ThmZSet) -> ThmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        emit(out, ThmZSet(lib(h_set(m))?));
        Ok(())
    })
}

/// `(H_k ⊕ ⋯ ⊕ H_{trunc-1}) ∩ [lo, hi]`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn thm_truncated_h_sum(
    k: u32,
    trunc: u32,
    lo: i64,
    hi: i64,
    out: *mut *mut ThmZSet,
) -> ThmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = lib(truncated_h_sum(k, trunc, interval(lo, hi)?))?;
        emit(out, ThmZSet(s));
        Ok(())
    })
}

/// `N([A]_a_offset, [B]_b_offset) ∩ [lo, hi]` by brute force in the
/// depth-`depth` window. Words are arrays of 0/1 bytes.
///
/// # Safety
/// `a` and `b` must be valid for `a_len` and `b_len` reads; `out` for one
/// write.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn thm_return_set(
    a: *const u8,
    a_len: usize,
    a_offset: i64,
    b: *const u8,
    b_len: usize,
    b_offset: i64,
    depth: u32,
    lo: i64,
    hi: i64,
    out: *mut *mut ThmZSet,
) -> ThmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let a = CylinderSet::new(word(a, a_len, "a")?, a_offset);
        let b = CylinderSet::new(word(b, b_len, "b")?, b_offset);
        let r = lib(return_set_bruteforce(&a, &b, depth, interval(lo, hi)?))?;
        emit(out, ThmZSet(r.set));
        Ok(())
    })
}

/// Number of elements; 0 for null.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn thm_zset_len(set: *const ThmZSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.len())
}

/// Copies the sorted elements into `buf`.
///
/// # Safety
/// `set` must be a live handle and `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn thm_zset_elements(
    set: *const ThmZSet,
    buf: *mut i64,
    cap: usize,
) -> ThmStatus {
    guard(|| {
        let s = set.as_ref().ok_or_else(|| null("set"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let e = s.0.elements();
        if cap < e.len() {
            return Err((
                ThmStatus::BufferTooSmall,
                format!("need {} elements, got {cap}", e.len()),
            ));
        }
        ptr::copy_nonoverlapping(e.as_ptr(), buf, e.len());
        Ok(())
    })
}

/// Whether `x` is an element; false for null.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn thm_zset_contains(set: *const ThmZSet, x: i64) -> bool {
    set.as_ref().is_some_and(|s| s.0.contains(x))
}

/// The range on which membership is exact. An empty range is reported as
/// `lo > hi`.
///
/// # Safety
/// `set` must be a live handle; `lo` and `hi` valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn thm_zset_certified_range(
    set: *const ThmZSet,
    lo: *mut i64,
    hi: *mut i64,
) -> ThmStatus {
    guard(|| {
        let s = set.as_ref().ok_or_else(|| null("set"))?;
        if lo.is_null() || hi.is_null() {
            return Err(null("lo/hi"));
        }
        let r = s.0.certified_range();
        *lo = r.lo;
        *hi = r.hi;
        Ok(())
    })
}

/// # Safety
/// `set` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn thm_zset_free(set: *mut ThmZSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

// ---- suite reports -------------------------------------------------------

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThmSuite {
    Chacon = 0,
    Zset = 1,
    Returnset = 2,
    Thick = 3,
    Torus = 4,
    Moebius = 5,
    All = 6,
}

fn suite(code: u32) -> Option<Suite> {
    const ALL: [Suite; 7] = [
        Suite::Chacon,
        Suite::Zset,
        Suite::Returnset,
        Suite::Thick,
        Suite::Torus,
        Suite::Moebius,
        Suite::All,
    ];
    ALL.get(code as usize).copied()
}

/// Run parameters, mirroring the command-line flags. `suite` holds a
/// `ThmSuite` value.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct ThmConfig {
    pub suite: u32,
    pub depth: u32,
    pub trunc: u32,
    pub range_lo: i64,
    pub range_hi: i64,
    pub seed: u64,
    pub samples: u64,
    pub budget: u64,
}

/// The command-line defaults for `suite`.
#[no_mangle]
pub extern "C" fn thm_config_default(suite: ThmSuite) -> ThmConfig {
    let c = RunConfig::new(self::suite(suite as u32).expect("every ThmSuite maps"));
    ThmConfig {
        suite: suite as u32,
        depth: c.depth,
        trunc: c.trunc,
        range_lo: c.range.lo,
        range_hi: c.range.hi,
        seed: c.seed,
        samples: c.samples,
        budget: c.budget,
    }
}

/// A finished run: the JSON report and its exit code.
pub struct ThmReport {
    json: CString,
    exit_code: i32,
    fail: usize,
    finding: usize,
}

/// Runs the configured suites. Configuration errors are returned as a
/// status; failing checks are part of a successful report.
///
/// # Safety
/// `config` must be valid for one read and `out` for one write.
#[no_mangle]
pub unsafe extern "C" fn thm_run(config: *const ThmConfig, out: *mut *mut ThmReport) -> ThmStatus {
    guard(|| {
        let c = config.as_ref().ok_or_else(|| null("config"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = suite(c.suite).ok_or_else(|| invalid(format!("unknown suite code {}", c.suite)))?;
        let rc = RunConfig {
            depth: c.depth,
            trunc: c.trunc,
            range: interval(c.range_lo, c.range_hi)?,
            seed: c.seed,
            samples: c.samples,
            budget: c.budget,
            ..RunConfig::new(s)
        };
        let report = lib(cli::dispatch(&rc))?;
        let json = CString::new(cli::render(&report, Format::Json))
            .map_err(|_| invalid("report contains NUL"))?;
        emit(
            out,
            ThmReport {
                json,
                exit_code: report.exit_code(),
                fail: report.summary.fail,
                finding: report.summary.finding,
            },
        );
        Ok(())
    })
}

/// The report as JSON. Owned by the handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn thm_report_json(report: *const ThmReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// 0 when no check failed, 1 otherwise; -1 for null.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn thm_report_exit_code(report: *const ThmReport) -> i32 {
    report.as_ref().map_or(-1, |r| r.exit_code)
}

/// Number of failed and finding records.
///
/// # Safety
/// `report` must be a live handle; `fail` and `finding` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn thm_report_counts(
    report: *const ThmReport,
    fail: *mut usize,
    finding: *mut usize,
) -> ThmStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        if fail.is_null() || finding.is_null() {
            return Err(null("fail/finding"));
        }
        *fail = r.fail;
        *finding = r.finding;
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn thm_report_free(report: *mut ThmReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Parses a suite name (`"chacon"`, …, `"all"`).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn thm_suite_from_name(name: *const c_char, out: *mut ThmSuite) -> ThmStatus {
    guard(|| {
        if name.is_null() || out.is_null() {
            return Err(null("name/out"));
        }
        let s = CStr::from_ptr(name)
            .to_str()
            .map_err(|_| invalid("suite name is not UTF-8"))?;
        *out = match s {
            "chacon" => ThmSuite::Chacon,
            "zset" => ThmSuite::Zset,
            "returnset" => ThmSuite::Returnset,
            "thick" => ThmSuite::Thick,
            "torus" => ThmSuite::Torus,
            "moebius" => ThmSuite::Moebius,
            "all" => ThmSuite::All,
            other => return Err(invalid(format!("unknown suite {other:?}"))),
        };
        Ok(())
    })
}
