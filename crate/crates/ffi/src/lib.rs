//! C ABI for coarse-lab.
//!
//! Objects cross the boundary as opaque handles created by `*_new`/`*_from_*`
//! functions and released by the matching `*_free`. Fallible calls return a
//! [`CoarseLabStatus`]; on failure, [`coarse_lab_last_error`] describes the
//! most recent error on the calling thread. Panics never unwind into C: they
//! are caught and reported as [`CoarseLabStatus::Internal`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use coarse_lab::embed::{
    cut_cone_lp, max_separation_sdp, poincare_value_weights, EmbedError, EmbedResult,
};
use coarse_lab::linalg::Matrix;
use coarse_lab::metric::FiniteMetricSpace;
use coarse_lab::sdp::SolveStatus;
use coarse_lab::spectral::{lambda1, FiniteGraph, SpectralError};

/// Result codes shared by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoarseLabStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Input data failed validation (bad metric, bad JSON, bad indices).
    InvalidInput = 2,
    /// No pair of points is at distance at least `R`.
    NoFarPairs = 3,
    /// The instance exceeds a size limit of the solver.
    TooLarge = 4,
    /// A result was produced, but the solver stopped short of its tolerance.
    Marginal = 5,
    /// The graph is disconnected.
    Disconnected = 6,
    /// A caller-provided buffer has the wrong length.
    BufferSize = 7,
    /// Internal failure; see the last error message.
    Internal = 8,
}

/// Opaque finite metric space.
pub struct CoarseLabSpace(FiniteMetricSpace);

/// Opaque result of a separation solve.
pub struct CoarseLabEmbedResult(EmbedResult);

/// Opaque finite simple graph.
pub struct CoarseLabGraph(FiniteGraph);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn embed_status(e: &EmbedError) -> CoarseLabStatus {
    match e {
        EmbedError::NoFarPairs(_) => CoarseLabStatus::NoFarPairs,
        EmbedError::TooLarge { .. } | EmbedError::CutLimitExceeded(_) => CoarseLabStatus::TooLarge,
        EmbedError::Spectral(SpectralError::Disconnected) => CoarseLabStatus::Disconnected,
        _ => CoarseLabStatus::InvalidInput,
    }
}

/// Runs `f`, converting panics into `Internal` and recording messages.
fn guard(f: impl FnOnce() -> Result<CoarseLabStatus, (CoarseLabStatus, String)>) -> CoarseLabStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CoarseLabStatus::Internal
        }
    }
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return Err((CoarseLabStatus::NullPointer, format!("{} is null", stringify!($p))));
        })+
    };
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn coarse_lab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn coarse_lab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a space from a row-major `n × n` distance matrix.
///
/// # Safety
/// `dist` must point to `n * n` readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn coarse_lab_space_from_matrix(
    dist: *const f64,
    n: usize,
    out: *mut *mut CoarseLabSpace,
) -> CoarseLabStatus {
    guard(|| {
        non_null!(dist, out);
        let values = std::slice::from_raw_parts(dist, n * n);
        let rows: Vec<Vec<f64>> = values.chunks(n.max(1)).map(<[f64]>::to_vec).collect();
        let space = coarse_lab::metric::validate_metric(&rows)
            .map_err(|e| (CoarseLabStatus::InvalidInput, e.to_string()))?;
        *out = Box::into_raw(Box::new(CoarseLabSpace(space)));
        Ok(CoarseLabStatus::Ok)
    })
}

/// Builds a space from JSON `{"labels": [...], "dist": [[...]]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn coarse_lab_space_from_json(
    json: *const c_char,
    out: *mut *mut CoarseLabSpace,
) -> CoarseLabStatus {
    guard(|| {
        non_null!(json, out);
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| (CoarseLabStatus::InvalidInput, e.to_string()))?;
        let space: FiniteMetricSpace = serde_json::from_str(text)
            .map_err(|e| (CoarseLabStatus::InvalidInput, e.to_string()))?;
        *out = Box::into_raw(Box::new(CoarseLabSpace(space)));
        Ok(CoarseLabStatus::Ok)
    })
}

/// # Safety
/// `space` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn coarse_lab_space_free(space: *mut CoarseLabSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `space` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn coarse_lab_space_len(space: *const CoarseLabSpace) -> usize {
    space.as_ref().map_or(0, |s| s.0.len())
}

unsafe fn embed_with(
    space: *const CoarseLabSpace,
    r: f64,
    out: *mut *mut CoarseLabEmbedResult,
    solve: fn(&FiniteMetricSpace, f64) -> Result<EmbedResult, EmbedError>,
) -> CoarseLabStatus {
    guard(|| {
        non_null!(space, out);
        let res = solve(&(*space).0, r).map_err(|e| (embed_status(&e), e.to_string()))?;
        let marginal = res.status == SolveStatus::NumericallyMarginal;
        *out = Box::into_raw(Box::new(CoarseLabEmbedResult(res)));
        if marginal {
            set_error("solver stopped before reaching the gap tolerance");
            Ok(CoarseLabStatus::Marginal)
        } else {
            Ok(CoarseLabStatus::Ok)
        }
    })
}

/// Optimal Hilbert separation at scale `r`. On `Ok` or `Marginal`, `*out`
/// receives a result handle.
///
/// # Safety
/// `space` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn coarse_lab_embed_hilbert(
    space: *const CoarseLabSpace,
    r: f64,
    out: *mut *mut CoarseLabEmbedResult,
) -> CoarseLabStatus {
    embed_with(space, r, out, max_separation_sdp)
}

/// Optimal ℓ¹ separation at scale `r` (at most 10 points).
///
/// # Safety
/// `space` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn coarse_lab_embed_l1(
    space: *const CoarseLabSpace,
    r: f64,
    out: *mut *mut CoarseLabEmbedResult,
) -> CoarseLabStatus {
    embed_with(space, r, out, cut_cone_lp)
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn coarse_lab_result_free(result: *mut CoarseLabEmbedResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Optimal separation, or NaN for a null handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn coarse_lab_result_s_star(result: *const CoarseLabEmbedResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.0.s_star)
}

/// Certified Poincaré constant, or NaN for a null handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn coarse_lab_result_certificate_c(result: *const CoarseLabEmbedResult) -> f64 {
    result.as_ref().map_or(f64::NAN, |r| r.0.certificate.c)
}

/// Number of ordered pairs in the certificate support.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn coarse_lab_result_certificate_len(result: *const CoarseLabEmbedResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.certificate.pairs.len())
}

/// Copies the certificate into three parallel arrays of length `len`, which
/// must equal [`coarse_lab_result_certificate_len`].
///
/// # Safety
/// Each array must have room for `len` elements.
#[no_mangle]
pub unsafe extern "C" fn coarse_lab_result_certificate(
    result: *const CoarseLabEmbedResult,
    first: *mut usize,
    second: *mut usize,
    weight: *mut f64,
    len: usize,
) -> CoarseLabStatus {
    guard(|| {
        non_null!(result, first, second, weight);
        let pairs = &(*result).0.certificate.pairs;
        if pairs.len() != len {
            return Err((
                CoarseLabStatus::BufferSize,
                format!("certificate has {} pairs, buffer has {len}", pairs.len()),
            ));
        }
        for (k, &(i, j, w)) in pairs.iter().enumerate() {
            *first.add(k) = i;
            *second.add(k) = j;
            *weight.add(k) = w;
        }
        Ok(CoarseLabStatus::Ok)
    })
}

/// Copies the row-major Gram matrix into `buf` (`len` must be `n * n`).
/// Fails with `InvalidInput` for ℓ¹ results, which carry cuts instead.
///
/// # Safety
/// `buf` must have room for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn coarse_lab_result_gram(
    result: *const CoarseLabEmbedResult,
    buf: *mut f64,
    len: usize,
) -> CoarseLabStatus {
    guard(|| {
        non_null!(result, buf);
        let gram: &Matrix = (*result).0.gram.as_ref().ok_or((
            CoarseLabStatus::InvalidInput,
            "result has no Gram matrix".to_string(),
        ))?;
        let data = gram.as_slice();
        if data.len() != len {
            return Err((
                CoarseLabStatus::BufferSize,
                format!("Gram matrix has {} entries, buffer has {len}", data.len()),
            ));
        }
        std::ptr::copy_nonoverlapping(data.as_ptr(), buf, len);
        Ok(CoarseLabStatus::Ok)
    })
}

/// The result as JSON. Release the string with [`coarse_lab_string_free`].
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn coarse_lab_result_to_json(result: *const CoarseLabEmbedResult) -> *mut c_char {
    let Some(r) = result.as_ref() else {
        return ptr::null_mut();
    };
    serde_json::to_string(&r.0)
        .ok()
        .and_then(|s| CString::new(s).ok())
        .map_or(ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn coarse_lab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `sup Σ w·‖f(x) − f(y)‖²` over 1-Lipschitz maps into Hilbert space, for
/// weights `w[k]` on the ordered pairs `(first[k], second[k])`.
///
/// # Safety
/// The three arrays must hold `len` elements; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn coarse_lab_poincare_value(
    space: *const CoarseLabSpace,
    first: *const usize,
    second: *const usize,
    weight: *const f64,
    len: usize,
    out: *mut f64,
) -> CoarseLabStatus {
    guard(|| {
        non_null!(space, out);
        if len > 0 {
            non_null!(first, second, weight);
        }
        let triples: Vec<(usize, usize, f64)> = (0..len)
            .map(|k| (*first.add(k), *second.add(k), *weight.add(k)))
            .collect();
        let (value, status) = poincare_value_weights(&(*space).0, &triples)
            .map_err(|e| (embed_status(&e), e.to_string()))?;
        *out = value;
        Ok(match status {
            SolveStatus::Optimal => CoarseLabStatus::Ok,
            SolveStatus::NumericallyMarginal => CoarseLabStatus::Marginal,
        })
    })
}

/// Builds a graph on `n` vertices from `m` edges stored as `2m` endpoints.
///
/// # Safety
/// `edges` must hold `2 * m` elements (it may be null when `m = 0`); `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn coarse_lab_graph_from_edges(
    n: usize,
    edges: *const usize,
    m: usize,
    out: *mut *mut CoarseLabGraph,
) -> CoarseLabStatus {
    guard(|| {
        non_null!(out);
        if m > 0 {
            non_null!(edges);
        }
        let list: Vec<(usize, usize)> = (0..m).map(|k| (*edges.add(2 * k), *edges.add(2 * k + 1))).collect();
        let g = FiniteGraph::new(n, list).map_err(|e| (CoarseLabStatus::InvalidInput, e.to_string()))?;
        *out = Box::into_raw(Box::new(CoarseLabGraph(g)));
        Ok(CoarseLabStatus::Ok)
    })
}

/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn coarse_lab_graph_free(graph: *mut CoarseLabGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Second-smallest Laplacian eigenvalue.
///
/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn coarse_lab_graph_lambda1(graph: *const CoarseLabGraph, out: *mut f64) -> CoarseLabStatus {
    guard(|| {
        non_null!(graph, out);
        let v = lambda1(&(*graph).0).map_err(|e| {
            let status = match e {
                SpectralError::Disconnected => CoarseLabStatus::Disconnected,
                SpectralError::TooLarge(_) => CoarseLabStatus::TooLarge,
                _ => CoarseLabStatus::InvalidInput,
            };
            (status, e.to_string())
        })?;
        *out = v;
        Ok(CoarseLabStatus::Ok)
    })
}
