//! C ABI over `graphcode`.
//!
//! Objects are opaque handles created by `*_new` and released by the matching
//! `*_free`. Every fallible call returns a [`GcStatus`]; on failure the message is
//! available from [`gc_last_error`] on the same thread until the next failing call.
//! Bit vectors cross the boundary as one byte per bit (0 or 1; any nonzero byte is
//! read as 1).
#![allow(unsafe_code)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use graphcode::decoders::{algorithm_i, algorithm_ii, AlgorithmIConfig, AlgorithmIIConfig};
use graphcode::thresholds::{self, EpsMode};
use graphcode::{make_local_code, BinaryLinearCode, BitVec, Error, GraphCode, LocalCodeKind, RegularHypergraph};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NumericFailure = 3,
    SizeLimit = 4,
    Panic = 5,
}

/// A local code. Safe to share between threads.
pub struct GcLocalCode(Arc<BinaryLinearCode>);

/// A graph or hypergraph code built over a local code.
pub struct GcGraphCode(GraphCode);

/// Parameters of a local code.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct GcLocalParams {
    pub n: usize,
    pub k: usize,
    pub d0: usize,
    pub t_max: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GcStatus {
    match e {
        Error::Numeric { .. } => GcStatus::NumericFailure,
        Error::SizeLimit(_) => GcStatus::SizeLimit,
        _ => GcStatus::InvalidArgument,
    }
}

/// Runs `f`, turning errors and panics into a status.
fn guard<F: FnOnce() -> Result<(), (GcStatus, String)>>(f: F) -> GcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("panic: {msg}"));
            GcStatus::Panic
        }
    }
}

fn lib<T>(r: graphcode::Result<T>) -> Result<T, (GcStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (GcStatus, String) {
    (GcStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> (GcStatus, String) {
    (GcStatus::InvalidArgument, msg.into())
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (GcStatus, String)> {
    // SAFETY: the caller guarantees `p` is null or valid for reads.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn bits_in<'a>(p: *const u8, len: usize, what: &str) -> Result<&'a [u8], (GcStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: the caller guarantees `len` readable bytes at `p`.
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

unsafe fn bits_out<'a>(p: *mut u8, len: usize, what: &str) -> Result<&'a mut [u8], (GcStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: the caller guarantees `len` writable bytes at `p`.
    Ok(unsafe { std::slice::from_raw_parts_mut(p, len) })
}

/// Stores `v` through `out` if it is non-null.
unsafe fn put<T>(out: *mut T, v: T) {
    if !out.is_null() {
        // SAFETY: non-null pointers passed as outputs must be valid for writes.
        unsafe { out.write(v) };
    }
}

/// Library version as a static NUL-terminated string.
#[unsafe(no_mangle)]
pub extern "C" fn gc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failing call on this thread, or null if there was none.
///
/// The pointer stays valid until the next failing call on the same thread.
#[unsafe(no_mangle)]
pub extern "C" fn gc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a local code from a spec such as `hamming:3`, `golay23`, `bch31`,
/// `spc:8`, `repetition:5` or `file:PATH`.
///
/// # Safety
/// `spec` must be a valid NUL-terminated string and `out` valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gc_local_code_new(spec: *const c_char, out: *mut *mut GcLocalCode) -> GcStatus {
    guard(|| {
        if spec.is_null() {
            return Err(null("spec"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        // SAFETY: checked non-null above; the caller guarantees NUL termination.
        let s = unsafe { CStr::from_ptr(spec) }
            .to_str()
            .map_err(|_| invalid("spec is not UTF-8"))?;
        let kind: LocalCodeKind = lib(s.parse())?;
        let code = lib(make_local_code(&kind))?;
        let handle = Box::into_raw(Box::new(GcLocalCode(Arc::new(code))));
        // SAFETY: checked non-null above.
        unsafe { out.write(handle) };
        Ok(())
    })
}

/// Releases a local code. Graph codes built from it stay valid.
///
/// # Safety
/// `code` must be null or a handle from [`gc_local_code_new`] not yet freed.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gc_local_code_free(code: *mut GcLocalCode) {
    if !code.is_null() {
        // SAFETY: the handle came from Box::into_raw.
        drop(unsafe { Box::from_raw(code) });
    }
}

/// Writes `n`, `k`, `d0` and the correction radius.
///
/// # Safety
/// `code` must be a live handle and `out` valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gc_local_code_params(code: *const GcLocalCode, out: *mut GcLocalParams) -> GcStatus {
    guard(|| {
        let c = unsafe { as_ref(code, "code") }?;
        if out.is_null() {
            return Err(null("out"));
        }
        let c = &c.0;
        unsafe {
            out.write(GcLocalParams {
                n: c.n(),
                k: c.k(),
                d0: c.d0(),
                t_max: c.t_max(),
            })
        };
        Ok(())
    })
}

/// Bounded-distance decoding of one local word of length `n` into `out`.
///
/// # Safety
/// `input` and `out` must each point to `n` bytes; they may alias.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gc_local_code_decode(
    code: *const GcLocalCode,
    t: usize,
    input: *const u8,
    out: *mut u8,
) -> GcStatus {
    guard(|| {
        let c = &unsafe { as_ref(code, "code") }?.0;
        let z = BitVec::from_bytes(unsafe { bits_in(input, c.n(), "input") }?);
        let d = lib(c.bounded_distance_decode(&z, t))?;
        unsafe { bits_out(out, c.n(), "out") }?.copy_from_slice(&d.to_bytes());
        Ok(())
    })
}

/// Samples an `l`-partite code with `m` vertices per part from `seed`.
///
/// # Safety
/// `local` must be a live handle and `out` valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gc_graph_code_new(
    local: *const GcLocalCode,
    l: usize,
    m: usize,
    seed: u64,
    out: *mut *mut GcGraphCode,
) -> GcStatus {
    guard(|| {
        let local = unsafe { as_ref(local, "local") }?;
        if out.is_null() {
            return Err(null("out"));
        }
        let topo = lib(RegularHypergraph::sample(l, m, local.0.n(), seed))?;
        let code = lib(GraphCode::new(topo, Arc::clone(&local.0)))?;
        unsafe { out.write(Box::into_raw(Box::new(GcGraphCode(code)))) };
        Ok(())
    })
}

/// # Safety
/// `code` must be null or a handle from [`gc_graph_code_new`] not yet freed.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gc_graph_code_free(code: *mut GcGraphCode) {
    if !code.is_null() {
        // SAFETY: the handle came from Box::into_raw.
        drop(unsafe { Box::from_raw(code) });
    }
}

/// Block length `N = n·m`, or 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gc_graph_code_length(code: *const GcGraphCode) -> usize {
    // SAFETY: null or live per the contract.
    unsafe { code.as_ref() }.map_or(0, |c| c.0.len())
}

/// Sets `*result` to 1 if the word satisfies every local constraint, else 0.
///
/// # Safety
/// `word` must point to `gc_graph_code_length(code)` bytes and `result` be valid for
/// writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gc_graph_code_is_codeword(
    code: *const GcGraphCode,
    word: *const u8,
    result: *mut u8,
) -> GcStatus {
    guard(|| {
        let c = &unsafe { as_ref(code, "code") }?.0;
        if result.is_null() {
            return Err(null("result"));
        }
        let x = BitVec::from_bytes(unsafe { bits_in(word, c.len(), "word") }?);
        unsafe { result.write(u8::from(c.is_codeword(&x))) };
        Ok(())
    })
}

/// Decodes a received word: alternating decoding for `l = 2`, the branching list
/// decoder with `s` iterations otherwise. `max_iters = 0` selects the default cap.
/// `converged` and `iterations` may be null.
///
/// # Safety
/// `input` and `out` must each point to `gc_graph_code_length(code)` bytes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gc_graph_code_decode(
    code: *const GcGraphCode,
    t: usize,
    s: usize,
    max_iters: usize,
    input: *const u8,
    out: *mut u8,
    converged: *mut u8,
    iterations: *mut usize,
) -> GcStatus {
    guard(|| {
        let c = &unsafe { as_ref(code, "code") }?.0;
        let y = BitVec::from_bytes(unsafe { bits_in(input, c.len(), "input") }?);
        let cap = (max_iters > 0).then_some(max_iters);
        let r = if c.topology().l() == 2 {
            let mut cfg = AlgorithmIConfig::new(t);
            cfg.max_iters = cap;
            lib(algorithm_i(c, &y, &cfg))?
        } else {
            let mut cfg = AlgorithmIIConfig::new(t, s);
            cfg.cleanup.max_iters = cap;
            lib(algorithm_ii(c, &y, &cfg))?.decode
        };
        unsafe { bits_out(out, c.len(), "out") }?.copy_from_slice(&r.output.to_bytes());
        unsafe {
            put(converged, u8::from(r.converged));
            put(iterations, r.iterations);
        }
        Ok(())
    })
}

fn threshold(out: *mut f64, f: impl FnOnce() -> graphcode::Result<f64>) -> GcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let v = lib(f())?;
        // SAFETY: checked non-null above.
        unsafe { out.write(v) };
        Ok(())
    })
}

/// Error-fraction threshold `σ₀` of the bipartite ensemble with local length `n`
/// and radius `t`.
///
/// # Safety
/// `out` must be valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gc_sigma0_bipartite(n: usize, t: usize, out: *mut f64) -> GcStatus {
    threshold(out, || thresholds::sigma0_bipartite(n, t).map(|r| r.value))
}

/// Threshold `γ₀` of the `l`-partite ensemble.
///
/// # Safety
/// `out` must be valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gc_gamma0_hypergraph(n: usize, t: usize, d0: usize, l: usize, out: *mut f64) -> GcStatus {
    threshold(out, || thresholds::gamma0_hypergraph(n, t, d0, l).map(|r| r.value))
}

/// Relative minimum distance guaranteed for almost every code in the ensemble.
///
/// # Safety
/// `out` must be valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gc_delta_bound(n: usize, d0: usize, l: usize, out: *mut f64) -> GcStatus {
    threshold(out, || thresholds::delta_bound(n, d0, l).map(|r| r.value))
}

/// Large-`n` relative distance for local relative distance `delta0`.
///
/// # Safety
/// `out` must be valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gc_delta_asymptotic(l: usize, delta0: f64, out: *mut f64) -> GcStatus {
    threshold(out, || thresholds::delta_asymptotic(l, delta0).map(|r| r.value))
}

/// Large-`n` `γ₀` with the slack term set to zero.
///
/// # Safety
/// `out` must be valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn gc_gamma0_asymptotic(l: usize, delta0: f64, out: *mut f64) -> GcStatus {
    threshold(out, || {
        thresholds::gamma0_asymptotic(l, delta0, None, EpsMode::Zero).map(|r| r.value)
    })
}
