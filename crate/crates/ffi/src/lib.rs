//! C ABI for the parabraid engine.
//!
//! Every fallible function returns a [`PbStatus`]. On failure a message is
//! stored per thread and can be read with [`pb_last_error_message`].
//! Strings handed out by this library must be released with
//! [`pb_string_free`]; representations with [`pb_representation_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use parabraid::braid::{check_representation, compose_braid, BraidRepresentation, BraidWord};
use parabraid::clifford::{closure_with, reference_generators, PhaseMode};
use parabraid::constraints::{fzc_coefficients, FzcParams, Sign};
use parabraid::logical::braid_clifford_generators;
use parabraid::report;
use parabraid::solver::{solve_all, SolverConfig};
use parabraid::Error;

/// Result codes shared by all functions.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PbStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    SizeBound = 3,
    CheckFailed = 4,
    LimitExceeded = 5,
    BufferTooSmall = 6,
    Internal = 7,
}

/// Opaque braid-group representation on `n_pairs` qudits.
pub struct PbRepresentation {
    inner: BraidRepresentation,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> PbStatus {
    match e {
        Error::SizeBound { .. } => PbStatus::SizeBound,
        Error::LimitExceeded { .. } => PbStatus::LimitExceeded,
        Error::Leakage { .. } | Error::NotASolution { .. } | Error::NonUnitaryCoefficients { .. } => {
            PbStatus::CheckFailed
        }
        Error::Tableau(_) | Error::Invariant(_) => PbStatus::Internal,
        _ => PbStatus::InvalidArgument,
    }
}

fn fail(status: PbStatus, msg: &str) -> PbStatus {
    set_error(msg);
    status
}

/// Run `f`, mapping library errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), (PbStatus, String)>) -> PbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            PbStatus::Ok
        }
        Ok(Err((s, msg))) => fail(s, &msg),
        Err(_) => fail(PbStatus::Internal, "internal panic"),
    }
}

fn lib_err(e: Error) -> (PbStatus, String) {
    (status_of(&e), e.to_string())
}

fn sign_of(sign: c_int) -> Result<Sign, (PbStatus, String)> {
    match sign {
        1 => Ok(Sign::Plus),
        -1 => Ok(Sign::Minus),
        other => Err((PbStatus::InvalidArgument, format!("sign must be 1 or -1, got {other}"))),
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (PbStatus, String)> {
    if s.is_null() {
        return Err((PbStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (PbStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (PbStatus, String)> {
    let c = CString::new(s).map_err(|_| (PbStatus::Internal, "interior NUL in output".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the last failed call on this thread (empty after a success).
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn pb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Build the quadratic-phase representation `(d, r, sign)` on `n_pairs`
/// qudits (`2·n_pairs` parafermions). `sign` is `1` or `-1`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn pb_representation_new(
    d: usize,
    n_pairs: usize,
    r: i64,
    sign: c_int,
    out: *mut *mut PbRepresentation,
) -> PbStatus {
    if out.is_null() {
        return fail(PbStatus::NullPointer, "out is null");
    }
    *out = ptr::null_mut();
    guard(|| {
        let sign = sign_of(sign)?;
        let inner = BraidRepresentation::fzc(d, n_pairs, r, sign).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(PbRepresentation { inner }));
        Ok(())
    })
}

/// # Safety
/// `rep` must be null or a handle from [`pb_representation_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pb_representation_free(rep: *mut PbRepresentation) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// Hilbert-space dimension `d^{n_pairs}`, or 0 for a null handle.
///
/// # Safety
/// `rep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pb_representation_dim(rep: *const PbRepresentation) -> usize {
    rep.as_ref().map_or(0, |r| r.inner.system().dim())
}

/// Operator of a braid word (time-ordered, e.g. `"1 2 -1"`, or a shortcut
/// such as `"F"`, `"S^-1"`), written row-major into `re` and `im`, each of
/// length `len ≥ dim²`.
///
/// # Safety
/// `rep` must be a live handle, `word` a NUL-terminated string, and `re`,
/// `im` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pb_representation_compose(
    rep: *const PbRepresentation,
    word: *const c_char,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> PbStatus {
    guard(|| {
        let rep = rep.as_ref().ok_or((PbStatus::NullPointer, "rep is null".to_string()))?;
        let word = read_str(word, "word")?;
        if re.is_null() || im.is_null() {
            return Err((PbStatus::NullPointer, "output buffer is null".into()));
        }
        let dim = rep.inner.system().dim();
        if len < dim * dim {
            return Err((PbStatus::BufferTooSmall, format!("need {} entries, got {len}", dim * dim)));
        }
        let w = BraidWord::from_shortcut_or_word(word).map_err(lib_err)?;
        let op = compose_braid(&rep.inner, &w).map_err(lib_err)?;
        let re = std::slice::from_raw_parts_mut(re, dim * dim);
        let im = std::slice::from_raw_parts_mut(im, dim * dim);
        for row in 0..dim {
            for col in 0..dim {
                let z = op.get(row, col);
                re[row * dim + col] = z.re;
                im[row * dim + col] = z.im;
            }
        }
        Ok(())
    })
}

/// Largest residual of the representation checks (unitarity, locality,
/// braid relations, parity conservation) into `max_residual`.
///
/// # Safety
/// `rep` must be a live handle and `max_residual` writable.
#[no_mangle]
pub unsafe extern "C" fn pb_representation_check(rep: *const PbRepresentation, max_residual: *mut f64) -> PbStatus {
    guard(|| {
        let rep = rep.as_ref().ok_or((PbStatus::NullPointer, "rep is null".to_string()))?;
        if max_residual.is_null() {
            return Err((PbStatus::NullPointer, "max_residual is null".into()));
        }
        *max_residual = check_representation(&rep.inner).map_err(lib_err)?.max_residual();
        Ok(())
    })
}

/// Coefficients `c_0 … c_{d−1}` of the quadratic-phase solution into `re`, `im`
/// (each of length `len ≥ d`).
///
/// # Safety
/// `re` and `im` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pb_fzc_coefficients(
    d: usize,
    r: i64,
    sign: c_int,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> PbStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err((PbStatus::NullPointer, "output buffer is null".into()));
        }
        let sign = sign_of(sign)?;
        let params = FzcParams::new(d, r, sign).map_err(lib_err)?;
        if len < d {
            return Err((PbStatus::BufferTooSmall, format!("need {d} entries, got {len}")));
        }
        let c = fzc_coefficients(params);
        for (k, z) in c.as_slice().iter().enumerate() {
            *re.add(k) = z.re;
            *im.add(k) = z.im;
        }
        Ok(())
    })
}

/// Gate identification report (JSON) for `braid` in the representation
/// `(d, r, sign)`. Leakage out of the code space gives `CheckFailed`.
///
/// # Safety
/// `braid` must be a NUL-terminated string and `out_json` writable; the
/// returned string must be freed with [`pb_string_free`].
#[no_mangle]
pub unsafe extern "C" fn pb_identify_gate_json(
    d: usize,
    r: i64,
    sign: c_int,
    braid: *const c_char,
    out_json: *mut *mut c_char,
) -> PbStatus {
    if out_json.is_null() {
        return fail(PbStatus::NullPointer, "out_json is null");
    }
    *out_json = ptr::null_mut();
    guard(|| {
        let sign = sign_of(sign)?;
        let braid = read_str(braid, "braid")?;
        let rpt = report::gates_suite(d, r, sign, braid).map_err(lib_err)?;
        let text = serde_json::to_string(&rpt).map_err(|e| (PbStatus::Internal, e.to_string()))?;
        write_string(out_json, text)
    })
}

/// Solver run (JSON: clusters with representatives and classification).
///
/// # Safety
/// `out_json` must be writable; free the result with [`pb_string_free`].
#[no_mangle]
pub unsafe extern "C" fn pb_solve_json(d: usize, restarts: usize, seed: u64, out_json: *mut *mut c_char) -> PbStatus {
    if out_json.is_null() {
        return fail(PbStatus::NullPointer, "out_json is null");
    }
    *out_json = ptr::null_mut();
    guard(|| {
        let cfg = SolverConfig::new(d).with_restarts(restarts).with_seed(seed);
        let out = solve_all(&cfg).map_err(lib_err)?;
        let text = serde_json::to_string(&report::solver_json(&out)).map_err(|e| (PbStatus::Internal, e.to_string()))?;
        write_string(out_json, text)
    })
}

/// Order of the group generated by the braid-derived (`generators = 0`) or
/// reference (`generators = 1`) Clifford generators on `n` logical qudits.
/// With `track_phases = 0` image phases are ignored (order modulo Paulis).
///
/// # Safety
/// `order` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pb_clifford_order(
    d: usize,
    n: usize,
    generators: c_int,
    track_phases: c_int,
    limit: usize,
    order: *mut u64,
) -> PbStatus {
    guard(|| {
        if order.is_null() {
            return Err((PbStatus::NullPointer, "order is null".into()));
        }
        let gens = match generators {
            0 => {
                let rep = BraidRepresentation::fzc(d, 2 * n, 0, Sign::Plus).map_err(lib_err)?;
                braid_clifford_generators(d, n, &rep).map_err(lib_err)?
            }
            1 => reference_generators(d, n).map_err(lib_err)?,
            other => return Err((PbStatus::InvalidArgument, format!("generators must be 0 or 1, got {other}"))),
        };
        let mode = if track_phases != 0 { PhaseMode::Tracked } else { PhaseMode::Ignored };
        *order = closure_with(&gens, limit, mode).map_err(lib_err)?.order() as u64;
        Ok(())
    })
}
