//! C ABI over the incidence engine.
//!
//! The surface is deliberately document-shaped: a caller parses or
//! generates a configuration into an opaque handle, runs analyses against
//! it, and receives reports as JSON strings. Every fallible call returns
//! an [`IncStatus`]; anything but `Ok` leaves a human-readable message
//! that [`inc_last_error`] exposes to the calling thread. Strings handed
//! out by the library are owned by the caller and must be released with
//! [`inc_string_free`], handles with [`inc_config_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::sync::Arc;

use incidence_core::config::{parse_config, render_config, ConfigFile, ParsedConfig};
use incidence_core::curves::{count_curve_incidences, curve_bound_ratio, dof_check, Curve};
use incidence_core::extremal::{generate, FamilyId, Generated};
use incidence_core::geometry::Configuration;
use incidence_core::incidence::{
    beck_report, count_incidences, count_incidences_with_threads, rich_lines,
};
use incidence_core::specialize::invariance_check;
use incidence_core::sumproduct::es_report;
use incidence_core::{parse_element, Tower};
use serde::Serialize;

/// Outcome of a library call. Every value except `Ok` is accompanied by a
/// message retrievable with [`inc_last_error`] on the same thread.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IncStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    Utf8 = 2,
    /// The input could not be parsed: JSON document, element expression,
    /// or family name.
    Parse = 3,
    /// The request was well-formed but the engine rejected it (threshold
    /// below two, zero trials, set index out of range, ...).
    Domain = 4,
}

/// A parsed configuration: tower, points, lines, curves, and sets behind
/// one shared coefficient field. Immutable once built.
pub struct IncConfig {
    parsed: ParsedConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn fail(status: IncStatus, msg: impl std::fmt::Display) -> IncStatus {
    let text = msg.to_string();
    let text = CString::new(text)
        .unwrap_or_else(|_| CString::new("error message contained a NUL byte").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
    status
}

/// Reads a required C string argument.
///
/// # Safety
/// `ptr` must be null or point to a NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, IncStatus> {
    if ptr.is_null() {
        return Err(fail(IncStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(IncStatus::Utf8, format!("{what} is not valid UTF-8")))
}

/// Borrows an out-parameter slot.
///
/// # Safety
/// `ptr` must be null or valid for writes.
unsafe fn out_slot<'a, T>(ptr: *mut T, what: &str) -> Result<&'a mut T, IncStatus> {
    if ptr.is_null() {
        Err(fail(IncStatus::NullArgument, format!("{what} is null")))
    } else {
        Ok(&mut *ptr)
    }
}

/// Borrows the configuration behind a handle.
///
/// # Safety
/// `cfg` must be null or a live handle from this library.
unsafe fn config_ref<'a>(cfg: *const IncConfig) -> Result<&'a ParsedConfig, IncStatus> {
    if cfg.is_null() {
        Err(fail(IncStatus::NullArgument, "config handle is null"))
    } else {
        Ok(&(*cfg).parsed)
    }
}

fn emit_json<T: Serialize>(value: &T, out: &mut *mut c_char) -> IncStatus {
    match serde_json::to_string(value) {
        // serde_json output never contains NUL bytes.
        Ok(text) => {
            *out = CString::new(text).expect("JSON is NUL-free").into_raw();
            IncStatus::Ok
        }
        Err(e) => fail(IncStatus::Domain, e),
    }
}

fn store_config(parsed: ParsedConfig, out: &mut *mut IncConfig) -> IncStatus {
    *out = Box::into_raw(Box::new(IncConfig { parsed }));
    IncStatus::Ok
}

/// Library version as a static NUL-terminated string. Never freed.
#[no_mangle]
pub extern "C" fn inc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message from the most recent failing call on this thread, or null if
/// none has failed yet. The pointer stays valid until the next failing
/// call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn inc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |s| s.as_ptr())
    })
}

/// Releases a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn inc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a JSON configuration document into a new handle.
///
/// On success writes the handle to `out`; release it with
/// [`inc_config_free`]. On failure `out` is untouched.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn inc_config_parse(
    json: *const c_char,
    out: *mut *mut IncConfig,
) -> IncStatus {
    let text = match read_str(json, "json") {
        Ok(t) => t,
        Err(st) => return st,
    };
    let out = match out_slot(out, "out") {
        Ok(o) => o,
        Err(st) => return st,
    };
    let file: ConfigFile = match serde_json::from_str(text) {
        Ok(f) => f,
        Err(e) => return fail(IncStatus::Parse, format!("malformed config document: {e}")),
    };
    match parse_config(&file) {
        Ok(parsed) => store_config(parsed, out),
        Err(e) => fail(IncStatus::Parse, e),
    }
}

/// Builds a named extremal family over the rationals.
///
/// `family` accepts the same names as the CLI (`st_grid`, `point_heavy`,
/// `line_heavy`, `square_grid`, `arithmetic_progression`,
/// `geometric_progression`). `ratio` is an optional element expression
/// for the geometric ratio; pass null for families that take none.
///
/// # Safety
/// `family` must be a NUL-terminated string, `ratio` null or the same,
/// and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn inc_config_generate(
    family: *const c_char,
    n: u32,
    ratio: *const c_char,
    out: *mut *mut IncConfig,
) -> IncStatus {
    let family = match read_str(family, "family") {
        Ok(t) => t,
        Err(st) => return st,
    };
    let out = match out_slot(out, "out") {
        Ok(o) => o,
        Err(st) => return st,
    };
    let family: FamilyId = match family.parse() {
        Ok(f) => f,
        Err(e) => return fail(IncStatus::Parse, e),
    };
    let rationals = Tower::rationals();
    let ratio = if ratio.is_null() {
        None
    } else {
        let text = match read_str(ratio, "ratio") {
            Ok(t) => t,
            Err(st) => return st,
        };
        match parse_element(text, &rationals) {
            Ok(e) => Some(e.to_rational().expect("rationals tower element")),
            Err(e) => return fail(IncStatus::Parse, e),
        }
    };
    match generate(family, n, &rationals, ratio.as_ref()) {
        Ok(Generated::Configuration(configuration)) => {
            let tower = Arc::clone(configuration.tower());
            store_config(
                ParsedConfig {
                    tower,
                    configuration,
                    curves: vec![],
                    sets: vec![],
                },
                out,
            )
        }
        Ok(Generated::Set(set)) => {
            let tower = Arc::clone(set.tower());
            let configuration = match Configuration::new(Arc::clone(&tower), vec![], vec![]) {
                Ok(c) => c,
                Err(e) => return fail(IncStatus::Domain, e),
            };
            store_config(
                ParsedConfig {
                    tower,
                    configuration,
                    curves: vec![],
                    sets: vec![set],
                },
                out,
            )
        }
        Err(e) => fail(IncStatus::Domain, e),
    }
}

/// Serializes a handle back to its JSON document form.
///
/// # Safety
/// `cfg` must be a live handle; `out_json` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn inc_config_render(
    cfg: *const IncConfig,
    out_json: *mut *mut c_char,
) -> IncStatus {
    let parsed = match config_ref(cfg) {
        Ok(p) => p,
        Err(st) => return st,
    };
    let out = match out_slot(out_json, "out_json") {
        Ok(o) => o,
        Err(st) => return st,
    };
    let file = render_config(&parsed.configuration, &parsed.curves, &parsed.sets);
    emit_json(&file, out)
}

/// Releases a handle. Null is a no-op.
///
/// # Safety
/// `cfg` must be null or a live handle that has not been freed already.
#[no_mangle]
pub unsafe extern "C" fn inc_config_free(cfg: *mut IncConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Number of points in the configuration; zero if `cfg` is null.
///
/// # Safety
/// `cfg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn inc_config_num_points(cfg: *const IncConfig) -> u64 {
    config_ref(cfg).map_or(0, |p| p.configuration.points().len() as u64)
}

/// Number of lines in the configuration; zero if `cfg` is null.
///
/// # Safety
/// `cfg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn inc_config_num_lines(cfg: *const IncConfig) -> u64 {
    config_ref(cfg).map_or(0, |p| p.configuration.lines().len() as u64)
}

/// Number of curves in the document; zero if `cfg` is null.
///
/// # Safety
/// `cfg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn inc_config_num_curves(cfg: *const IncConfig) -> u64 {
    config_ref(cfg).map_or(0, |p| p.curves.len() as u64)
}

/// Number of element sets in the document; zero if `cfg` is null.
///
/// # Safety
/// `cfg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn inc_config_num_sets(cfg: *const IncConfig) -> u64 {
    config_ref(cfg).map_or(0, |p| p.sets.len() as u64)
}

fn counted(parsed: &ParsedConfig, threads: u32) -> incidence_core::incidence::IncidenceReport {
    if threads == 0 {
        count_incidences(&parsed.configuration)
    } else {
        count_incidences_with_threads(&parsed.configuration, threads as usize)
    }
}

/// Exact point-line incidence count. `threads` of zero lets the library
/// choose; any other value is used as given. The count is exact and
/// identical for every thread count.
///
/// # Safety
/// `cfg` must be a live handle; `out_incidences` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn inc_count(
    cfg: *const IncConfig,
    threads: u32,
    out_incidences: *mut u64,
) -> IncStatus {
    let parsed = match config_ref(cfg) {
        Ok(p) => p,
        Err(st) => return st,
    };
    let out = match out_slot(out_incidences, "out_incidences") {
        Ok(o) => o,
        Err(st) => return st,
    };
    *out = counted(parsed, threads).incidences;
    IncStatus::Ok
}

/// Counting report as JSON: sizes, the exact count, and the bound ratios
/// evaluated in floating point.
///
/// # Safety
/// `cfg` must be a live handle; `out_json` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn inc_count_report(
    cfg: *const IncConfig,
    threads: u32,
    out_json: *mut *mut c_char,
) -> IncStatus {
    let parsed = match config_ref(cfg) {
        Ok(p) => p,
        Err(st) => return st,
    };
    let out = match out_slot(out_json, "out_json") {
        Ok(o) => o,
        Err(st) => return st,
    };
    emit_json(&counted(parsed, threads), out)
}

/// Lines of the configuration meeting at least `threshold` of its points,
/// as JSON. `threshold` must be at least two.
///
/// # Safety
/// `cfg` must be a live handle; `out_json` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn inc_rich_report(
    cfg: *const IncConfig,
    threshold: u64,
    out_json: *mut *mut c_char,
) -> IncStatus {
    let parsed = match config_ref(cfg) {
        Ok(p) => p,
        Err(st) => return st,
    };
    let out = match out_slot(out_json, "out_json") {
        Ok(o) => o,
        Err(st) => return st,
    };
    match rich_lines(&parsed.configuration, threshold) {
        Ok(report) => emit_json(&report, out),
        Err(e) => fail(IncStatus::Domain, e),
    }
}

/// Connecting-line summary for the configuration's points, as JSON.
///
/// # Safety
/// `cfg` must be a live handle; `out_json` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn inc_beck_report(
    cfg: *const IncConfig,
    out_json: *mut *mut c_char,
) -> IncStatus {
    let parsed = match config_ref(cfg) {
        Ok(p) => p,
        Err(st) => return st,
    };
    let out = match out_slot(out_json, "out_json") {
        Ok(o) => o,
        Err(st) => return st,
    };
    emit_json(&beck_report(parsed.configuration.points()), out)
}

/// Sum-set and product-set sizes for the document's `set_index`-th element
/// set, as JSON. The set needs at least two elements.
///
/// # Safety
/// `cfg` must be a live handle; `out_json` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn inc_sum_product_report(
    cfg: *const IncConfig,
    set_index: usize,
    out_json: *mut *mut c_char,
) -> IncStatus {
    let parsed = match config_ref(cfg) {
        Ok(p) => p,
        Err(st) => return st,
    };
    let out = match out_slot(out_json, "out_json") {
        Ok(o) => o,
        Err(st) => return st,
    };
    let Some(set) = parsed.sets.get(set_index) else {
        return fail(
            IncStatus::Domain,
            format!(
                "set index {set_index} out of range ({} sets)",
                parsed.sets.len()
            ),
        );
    };
    match es_report(set) {
        Ok(report) => emit_json(&report, out),
        Err(e) => fail(IncStatus::Domain, e),
    }
}

/// Runs `trials` random rational specializations of the configuration and
/// reports, as JSON, whether every one preserved the whole incidence
/// matrix. Requires a purely transcendental tower and at least one trial.
///
/// # Safety
/// `cfg` must be a live handle; `out_json` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn inc_invariance_report(
    cfg: *const IncConfig,
    trials: u32,
    seed: u64,
    out_json: *mut *mut c_char,
) -> IncStatus {
    let parsed = match config_ref(cfg) {
        Ok(p) => p,
        Err(st) => return st,
    };
    let out = match out_slot(out_json, "out_json") {
        Ok(o) => o,
        Err(st) => return st,
    };
    match invariance_check(&parsed.configuration, trials, seed) {
        Ok(report) => emit_json(&report, out),
        Err(e) => fail(IncStatus::Domain, e),
    }
}

#[derive(Serialize)]
struct DofReport<'a> {
    points: usize,
    curves: usize,
    incidences: u64,
    bound_ratio: f64,
    violations: &'a [incidence_core::curves::DofViolation],
}

/// Degrees-of-freedom audit of the document's curves against its points,
/// as JSON. When the document declares no curves, its lines stand in as
/// degree-one curves. `k` and `s` must be positive.
///
/// # Safety
/// `cfg` must be a live handle; `out_json` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn inc_dof_report(
    cfg: *const IncConfig,
    k: u32,
    s: u32,
    eps: f64,
    out_json: *mut *mut c_char,
) -> IncStatus {
    let parsed = match config_ref(cfg) {
        Ok(p) => p,
        Err(st) => return st,
    };
    let out = match out_slot(out_json, "out_json") {
        Ok(o) => o,
        Err(st) => return st,
    };
    let curves: Vec<Curve> = if parsed.curves.is_empty() {
        parsed
            .configuration
            .lines()
            .iter()
            .map(Curve::from_line)
            .collect()
    } else {
        parsed.curves.clone()
    };
    let points = parsed.configuration.points();
    let incidences = count_curve_incidences(points, &curves);
    let bound_ratio = match curve_bound_ratio(incidences, points.len(), curves.len(), k, eps) {
        Ok(r) => r,
        Err(e) => return fail(IncStatus::Domain, e),
    };
    let violations = match dof_check(points, &curves, k, s) {
        Ok(v) => v,
        Err(e) => return fail(IncStatus::Domain, e),
    };
    emit_json(
        &DofReport {
            points: points.len(),
            curves: curves.len(),
            incidences,
            bound_ratio,
            violations: &violations,
        },
        out,
    )
}
