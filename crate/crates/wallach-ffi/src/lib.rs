//! C ABI over the core library.
//!
//! Conventions, uniform across every entry point:
//!
//! - Spaces are opaque [`GwSpace`] handles created by [`gw_space_new`] or
//!   [`gw_space_from_json`] and released with [`gw_space_free`].
//! - All string inputs are NUL-terminated UTF-8. Metrics use the text form
//!   `l1,l2,l3` with rational components (`1,1/2,3`; decimals are converted
//!   to exact rationals). Vectors use `label=value,...` or a dense comma
//!   list over the whole basis.
//! - All structured outputs are heap-allocated JSON strings written to an
//!   out-pointer; release them with [`gw_string_free`]. Exact rational
//!   values appear as strings (`"1/2"`) inside the JSON.
//! - Every function returns a [`GwStatus`]. On any non-OK status the
//!   out-pointers are untouched and a description is available from
//!   [`gw_last_error`]. Panics never unwind across the boundary; they are
//!   reported as [`GwStatus::InternalPanic`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use wallach_core::algebra::AlgebraVector;
use wallach_core::catalog;
use wallach_core::classify::{classify_space, ClassifyOptions};
use wallach_core::families;
use wallach_core::geodesic::{complete, is_geodesic_vector};
use wallach_core::metric::InvariantMetric;
use wallach_core::sampler::{sample_space, SamplerOptions};
use wallach_core::scalar::Rat;
use wallach_core::space::{SpaceDescriptor, SpaceJson};
use wallach_core::{Error, DEFAULT_SEED};

/// Result code of every C-ABI call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GwStatus {
    /// The call succeeded; out-pointers are filled.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The input parsed but was rejected (unknown space, malformed metric
    /// or vector, zero vector, dimension mismatch, ...).
    InvalidArgument = 3,
    /// The computation itself refused the request (e.g. an operation that
    /// is undefined for this space).
    MathError = 4,
    /// A panic was caught at the boundary; this is a bug in the library.
    InternalPanic = 5,
}

/// Opaque handle to a homogeneous-space description.
pub struct GwSpace {
    inner: SpaceDescriptor,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().map(|c| if c == '\0' { ' ' } else { c }).collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(status: GwStatus, msg: &str) -> GwStatus {
    set_error(msg);
    status
}

fn fail_error(e: &Error) -> GwStatus {
    let status = match e {
        Error::InvalidDimension(_)
        | Error::InvalidInput(_)
        | Error::AlgebraMismatch(_)
        | Error::ZeroVector(_)
        | Error::SupportViolation(_)
        | Error::UnknownSpace(_)
        | Error::Json(_) => GwStatus::InvalidArgument,
        Error::NotCompactSemisimple(_) | Error::UnsupportedSpace(_) | Error::Io(_) => {
            GwStatus::MathError
        }
    };
    fail(status, &e.to_string())
}

/// Run a fallible body with panics caught at the boundary.
fn guarded(f: impl FnOnce() -> GwStatus) -> GwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| (*s).to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic with a non-string payload".to_string());
            fail(GwStatus::InternalPanic, &format!("internal panic: {msg}"))
        }
    }
}

/// # Safety
/// `p` must be NULL or a NUL-terminated string valid for reads.
unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, GwStatus> {
    if p.is_null() {
        return Err(fail(GwStatus::NullArgument, &format!("{name} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(GwStatus::InvalidUtf8, &format!("{name} is not valid UTF-8")))
}

/// # Safety
/// `out` must be valid for a write of one pointer.
unsafe fn write_json<T: serde::Serialize>(out: *mut *mut c_char, value: &T) -> GwStatus {
    let text = match serde_json::to_string_pretty(value) {
        Ok(t) => t,
        Err(e) => return fail(GwStatus::InternalPanic, &format!("serialization failed: {e}")),
    };
    match CString::new(text) {
        Ok(c) => {
            *out = c.into_raw();
            GwStatus::Ok
        }
        Err(_) => fail(GwStatus::InternalPanic, "output contained a NUL byte"),
    }
}

unsafe fn space_ref<'a>(space: *const GwSpace) -> Result<&'a SpaceDescriptor, GwStatus> {
    if space.is_null() {
        return Err(fail(GwStatus::NullArgument, "space is NULL"));
    }
    Ok(&(*space).inner)
}

fn parse_metric(s: &str) -> Result<InvariantMetric, GwStatus> {
    InvariantMetric::parse(s).map(|(m, _)| m).map_err(|e| fail_error(&e))
}

/// The default seed used by the seeded entry points when reproducing
/// published reports.
#[no_mangle]
pub extern "C" fn gw_default_seed() -> u64 {
    DEFAULT_SEED
}

/// Returns a pointer to a NUL-terminated description of the last failure on
/// this thread (empty if none). The pointer stays valid until the next
/// failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn gw_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Release a string returned by any `out_json` parameter.
///
/// # Safety
/// `s` must be NULL or a pointer previously returned through an `out_json`
/// parameter of this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The catalog of built-in space families, as a JSON array.
///
/// # Safety
/// `out_json` must be valid for a write of one pointer.
#[no_mangle]
pub unsafe extern "C" fn gw_catalog_json(out_json: *mut *mut c_char) -> GwStatus {
    guarded(|| {
        if out_json.is_null() {
            return fail(GwStatus::NullArgument, "out_json is NULL");
        }
        write_json(out_json, &catalog::list())
    })
}

/// Create a space from a catalog spec such as `"su2_trivial"`,
/// `"stiefel_n:4"`, or `"so_klm:2,2,1"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be valid for a write
/// of one pointer.
#[no_mangle]
pub unsafe extern "C" fn gw_space_new(spec: *const c_char, out: *mut *mut GwSpace) -> GwStatus {
    guarded(|| {
        if out.is_null() {
            return fail(GwStatus::NullArgument, "out is NULL");
        }
        let spec = match read_str(spec, "spec") {
            Ok(s) => s,
            Err(status) => return status,
        };
        match catalog::parse_spec(spec) {
            Ok(desc) => {
                *out = Box::into_raw(Box::new(GwSpace { inner: desc }));
                GwStatus::Ok
            }
            Err(e) => fail_error(&e),
        }
    })
}

/// Create a space from a JSON description (the `description` object
/// produced by `gw_space_describe`). The loaded space is verified.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for a write
/// of one pointer.
#[no_mangle]
pub unsafe extern "C" fn gw_space_from_json(
    json: *const c_char,
    out: *mut *mut GwSpace,
) -> GwStatus {
    guarded(|| {
        if out.is_null() {
            return fail(GwStatus::NullArgument, "out is NULL");
        }
        let json = match read_str(json, "json") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let parsed: SpaceJson = match serde_json::from_str(json) {
            Ok(p) => p,
            Err(e) => return fail(GwStatus::InvalidArgument, &format!("json error: {e}")),
        };
        match SpaceDescriptor::from_json(&parsed) {
            Ok(desc) => {
                *out = Box::into_raw(Box::new(GwSpace { inner: desc }));
                GwStatus::Ok
            }
            Err(e) => fail_error(&e),
        }
    })
}

/// Release a space handle.
///
/// # Safety
/// `space` must be NULL or a handle from `gw_space_new`/
/// `gw_space_from_json`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gw_space_free(space: *mut GwSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// The full JSON description of the space (basis labels, structure
/// constants, module partition); feed it back to `gw_space_from_json`.
///
/// # Safety
/// `space` must be a live handle; `out_json` valid for a write of one
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn gw_space_describe(
    space: *const GwSpace,
    out_json: *mut *mut c_char,
) -> GwStatus {
    guarded(|| {
        if out_json.is_null() {
            return fail(GwStatus::NullArgument, "out_json is NULL");
        }
        let desc = match space_ref(space) {
            Ok(d) => d,
            Err(status) => return status,
        };
        write_json(out_json, &desc.to_json())
    })
}

/// Verify the defining properties of the space (bracket closure, module
/// orthogonality, pairwise brackets landing in the isotropy subalgebra,
/// ...); the JSON report lists each check with its outcome.
///
/// # Safety
/// `space` must be a live handle; `out_json` valid for a write of one
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn gw_space_check(
    space: *const GwSpace,
    out_json: *mut *mut c_char,
) -> GwStatus {
    guarded(|| {
        if out_json.is_null() {
            return fail(GwStatus::NullArgument, "out_json is NULL");
        }
        let desc = match space_ref(space) {
            Ok(d) => d,
            Err(status) => return status,
        };
        write_json(out_json, &desc.verify())
    })
}

/// The six interaction symbols of the module decomposition as JSON.
///
/// # Safety
/// `space` must be a live handle; `out_json` valid for a write of one
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn gw_triple_symbols(
    space: *const GwSpace,
    out_json: *mut *mut c_char,
) -> GwStatus {
    guarded(|| {
        if out_json.is_null() {
            return fail(GwStatus::NullArgument, "out_json is NULL");
        }
        let desc = match space_ref(space) {
            Ok(d) => d,
            Err(status) => return status,
        };
        write_json(out_json, &desc.triple_symbols())
    })
}

/// Decide exactly whether `vector` is a geodesic vector for `metric`.
/// `out_is_geodesic` receives the verdict; `out_json` (optional, may be
/// NULL) receives the residual report.
///
/// # Safety
/// `space` must be a live handle; `metric` and `vector` NUL-terminated
/// strings; `out_is_geodesic` valid for a write of one byte; `out_json`
/// NULL or valid for a write of one pointer.
#[no_mangle]
pub unsafe extern "C" fn gw_geodesic_check(
    space: *const GwSpace,
    metric: *const c_char,
    vector: *const c_char,
    out_is_geodesic: *mut bool,
    out_json: *mut *mut c_char,
) -> GwStatus {
    guarded(|| {
        if out_is_geodesic.is_null() {
            return fail(GwStatus::NullArgument, "out_is_geodesic is NULL");
        }
        let desc = match space_ref(space) {
            Ok(d) => d,
            Err(status) => return status,
        };
        let metric = match read_str(metric, "metric").map(parse_metric) {
            Ok(Ok(m)) => m,
            Ok(Err(status)) | Err(status) => return status,
        };
        let vector = match read_str(vector, "vector") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let x = match AlgebraVector::<Rat>::parse(desc.algebra(), vector) {
            Ok(v) => v,
            Err(e) => return fail_error(&e),
        };
        match is_geodesic_vector(desc, &metric, &x, 0.0) {
            Ok(check) => {
                *out_is_geodesic = check.ok;
                if out_json.is_null() {
                    GwStatus::Ok
                } else {
                    let residuals: Vec<serde_json::Value> = check
                        .residuals
                        .iter()
                        .map(|(label, value)| {
                            serde_json::json!({ "against": label, "value": value.to_string() })
                        })
                        .collect();
                    write_json(
                        out_json,
                        &serde_json::json!({
                            "geodesic": check.ok,
                            "max_residual": check.max_residual,
                            "residuals": residuals,
                        }),
                    )
                }
            }
            Err(e) => fail_error(&e),
        }
    })
}

/// Solve for an isotropy completion of the tangent vector `vector` (its
/// components on the isotropy part are ignored): does some `x_k` make
/// `x_k + x_m` geodesic? `out_exists` receives the answer; `out_json`
/// (optional, may be NULL) receives the ranks and the completion found.
///
/// # Safety
/// Same contract as `gw_geodesic_check`, with `out_exists` in place of
/// `out_is_geodesic`.
#[no_mangle]
pub unsafe extern "C" fn gw_geodesic_complete(
    space: *const GwSpace,
    metric: *const c_char,
    vector: *const c_char,
    out_exists: *mut bool,
    out_json: *mut *mut c_char,
) -> GwStatus {
    guarded(|| {
        if out_exists.is_null() {
            return fail(GwStatus::NullArgument, "out_exists is NULL");
        }
        let desc = match space_ref(space) {
            Ok(d) => d,
            Err(status) => return status,
        };
        let metric = match read_str(metric, "metric").map(parse_metric) {
            Ok(Ok(m)) => m,
            Ok(Err(status)) | Err(status) => return status,
        };
        let vector = match read_str(vector, "vector") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let x = match AlgebraVector::<Rat>::parse(desc.algebra(), vector) {
            Ok(v) => v,
            Err(e) => return fail_error(&e),
        };
        let x_m = desc.project_m(&x);
        match complete(desc, &metric, &x_m) {
            Ok(outcome) => {
                *out_exists = outcome.exists();
                if out_json.is_null() {
                    GwStatus::Ok
                } else {
                    let completion = outcome
                        .completion
                        .as_ref()
                        .map(|c| c.display());
                    write_json(
                        out_json,
                        &serde_json::json!({
                            "exists": outcome.exists(),
                            "rank_a": outcome.rank_a,
                            "rank_augmented": outcome.rank_augmented,
                            "rhs_zero": outcome.rhs_zero,
                            "completion": completion,
                        }),
                    )
                }
            }
            Err(e) => fail_error(&e),
        }
    })
}

/// Enumerate the exact solution families of the geodesic equations (only
/// spaces with a built-in enumeration support this).
///
/// # Safety
/// `space` must be a live handle; `metric` a NUL-terminated string;
/// `out_json` valid for a write of one pointer.
#[no_mangle]
pub unsafe extern "C" fn gw_enumerate(
    space: *const GwSpace,
    metric: *const c_char,
    out_json: *mut *mut c_char,
) -> GwStatus {
    guarded(|| {
        if out_json.is_null() {
            return fail(GwStatus::NullArgument, "out_json is NULL");
        }
        let desc = match space_ref(space) {
            Ok(d) => d,
            Err(status) => return status,
        };
        let metric = match read_str(metric, "metric").map(parse_metric) {
            Ok(Ok(m)) => m,
            Ok(Err(status)) | Err(status) => return status,
        };
        match families::enumerate(desc, &metric) {
            Ok(report) => write_json(out_json, &report),
            Err(e) => fail_error(&e),
        }
    })
}

/// Probe whether the space is geodesic-orbit for every invariant metric or
/// only for the standard one, over the default metric grid plus seeded
/// random metrics and probes.
///
/// # Safety
/// `space` must be a live handle; `out_json` valid for a write of one
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn gw_classify(
    space: *const GwSpace,
    seed: u64,
    out_json: *mut *mut c_char,
) -> GwStatus {
    guarded(|| {
        if out_json.is_null() {
            return fail(GwStatus::NullArgument, "out_json is NULL");
        }
        let desc = match space_ref(space) {
            Ok(d) => d,
            Err(status) => return status,
        };
        match classify_space(desc, seed, ClassifyOptions::default()) {
            Ok(report) => write_json(out_json, &report),
            Err(e) => fail_error(&e),
        }
    })
}

/// Multistart Newton search for geodesic vectors in float coordinates;
/// solutions are deduplicated, canonicalized, and (where an enumeration
/// exists) matched to their nearest family.
///
/// # Safety
/// `space` must be a live handle; `metric` a NUL-terminated string;
/// `out_json` valid for a write of one pointer.
#[no_mangle]
pub unsafe extern "C" fn gw_sample(
    space: *const GwSpace,
    metric: *const c_char,
    seed: u64,
    starts: u32,
    out_json: *mut *mut c_char,
) -> GwStatus {
    guarded(|| {
        if out_json.is_null() {
            return fail(GwStatus::NullArgument, "out_json is NULL");
        }
        let desc = match space_ref(space) {
            Ok(d) => d,
            Err(status) => return status,
        };
        let metric = match read_str(metric, "metric").map(parse_metric) {
            Ok(Ok(m)) => m,
            Ok(Err(status)) | Err(status) => return status,
        };
        let opts = SamplerOptions { starts: starts as usize, ..SamplerOptions::default() };
        match sample_space(desc, &metric, seed, opts) {
            Ok(report) => write_json(out_json, &report),
            Err(e) => fail_error(&e),
        }
    })
}
