//! C interface to the reslie library.
//!
//! Algebras are opaque handles created by `reslie_algebra_*` constructors and
//! released with `reslie_algebra_free`. Every fallible call returns a
//! [`ReslieStatus`]; on failure the message is available from
//! `reslie_last_error` until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use reslie::catalog::{self, classify};
use reslie::deform::check_deformation;
use reslie::doc::{AlgebraDocument, JetDocument};
use reslie::field::FpVector;
use reslie::lie::{ce_cohomology, LModule};
use reslie::rescoh_2::restricted_cohomology_2;
use reslie::rescoh_p::{restricted_cohomology_p, Setting};
use reslie::restricted::RestrictedAlgebra;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReslieStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Unsupported = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReslieCoefficients {
    Adjoint = 0,
    Trivial = 1,
}

/// Opaque restricted Lie algebra.
pub struct ReslieAlgebra {
    inner: RestrictedAlgebra,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: ReslieStatus, msg: impl AsRef<str>) -> ReslieStatus {
    set_error(msg.as_ref());
    status
}

fn status_of(e: &reslie::Error) -> ReslieStatus {
    match e {
        reslie::Error::CharacteristicUnsupported { .. } | reslie::Error::DegreeOutOfRange { .. } | reslie::Error::OrderUnsupported(_) => {
            ReslieStatus::Unsupported
        }
        reslie::Error::Parse(_) => ReslieStatus::Parse,
        _ => ReslieStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> ReslieStatus) -> ReslieStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == ReslieStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => fail(ReslieStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, ReslieStatus> {
    if s.is_null() {
        return Err(fail(ReslieStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(ReslieStatus::InvalidUtf8, "string is not valid UTF-8"))
}

unsafe fn alg_arg<'a>(a: *const ReslieAlgebra) -> Result<&'a RestrictedAlgebra, ReslieStatus> {
    if a.is_null() {
        return Err(fail(ReslieStatus::NullPointer, "null algebra handle"));
    }
    Ok(&(*a).inner)
}

unsafe fn emit_algebra(alg: RestrictedAlgebra, out: *mut *mut ReslieAlgebra) -> ReslieStatus {
    *out = Box::into_raw(Box::new(ReslieAlgebra { inner: alg }));
    ReslieStatus::Ok
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn reslie_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses an algebra description (JSON) and checks its axioms.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn reslie_algebra_from_json(json: *const c_char, out: *mut *mut ReslieAlgebra) -> ReslieStatus {
    guard(|| {
        if out.is_null() {
            return fail(ReslieStatus::NullPointer, "null output pointer");
        }
        let text = match str_arg(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match reslie::doc::load_algebra(text) {
            Ok(alg) => emit_algebra(alg, out),
            Err(d) => fail(ReslieStatus::Parse, d.to_string()),
        }
    })
}

/// Heisenberg algebra `[x, y] = z` with `e^[p] = θ(e) z`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn reslie_algebra_heisenberg(p: u32, theta_x: i64, theta_y: i64, theta_z: i64, out: *mut *mut ReslieAlgebra) -> ReslieStatus {
    guard(|| {
        if out.is_null() {
            return fail(ReslieStatus::NullPointer, "null output pointer");
        }
        match catalog::heisenberg(p, [theta_x, theta_y, theta_z]) {
            Ok(alg) => emit_algebra(alg, out),
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Witt algebra `W(1)` for `p >= 5`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn reslie_algebra_witt(p: u32, out: *mut *mut ReslieAlgebra) -> ReslieStatus {
    guard(|| {
        if out.is_null() {
            return fail(ReslieStatus::NullPointer, "null output pointer");
        }
        match catalog::witt(p) {
            Ok(alg) => emit_algebra(alg, out),
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `alg` must come from a `reslie_algebra_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn reslie_algebra_free(alg: *mut ReslieAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Dimension and characteristic of an algebra.
///
/// # Safety
/// `alg` must be a live handle; `dim` and `p` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn reslie_algebra_shape(alg: *const ReslieAlgebra, dim: *mut usize, p: *mut u32) -> ReslieStatus {
    guard(|| {
        let a = match alg_arg(alg) {
            Ok(a) => a,
            Err(s) => return s,
        };
        if dim.is_null() || p.is_null() {
            return fail(ReslieStatus::NullPointer, "null output pointer");
        }
        *dim = a.dim();
        *p = a.p();
        ReslieStatus::Ok
    })
}

/// Evaluates the p-map on a coordinate vector of length `dim`; coordinates
/// are reduced mod p.
///
/// # Safety
/// `x` and `out` must point to `len` values and `len` must equal the dimension.
#[no_mangle]
pub unsafe extern "C" fn reslie_pmap_eval(alg: *const ReslieAlgebra, x: *const u32, out: *mut u32, len: usize) -> ReslieStatus {
    guard(|| {
        let a = match alg_arg(alg) {
            Ok(a) => a,
            Err(s) => return s,
        };
        if x.is_null() || out.is_null() {
            return fail(ReslieStatus::NullPointer, "null vector pointer");
        }
        if len != a.dim() {
            return fail(ReslieStatus::InvalidArgument, format!("vector length {len}, algebra dimension {}", a.dim()));
        }
        let f = a.field();
        let vals: Vec<i64> = std::slice::from_raw_parts(x, len).iter().map(|&v| v as i64).collect();
        let y = a.pmap_eval(&FpVector::from_i64(f, &vals));
        std::slice::from_raw_parts_mut(out, len).copy_from_slice(y.raw());
        ReslieStatus::Ok
    })
}

/// Dimension of the restricted cohomology `H^q_*` (or the ordinary one when
/// `restricted` is false) with adjoint or trivial coefficients.
///
/// # Safety
/// `alg` must be a live handle and `dim` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn reslie_cohomology_dim(
    alg: *const ReslieAlgebra,
    degree: usize,
    coefficients: ReslieCoefficients,
    restricted: bool,
    dim: *mut usize,
) -> ReslieStatus {
    guard(|| {
        let a = match alg_arg(alg) {
            Ok(a) => a,
            Err(s) => return s,
        };
        if dim.is_null() {
            return fail(ReslieStatus::NullPointer, "null output pointer");
        }
        let module = match coefficients {
            ReslieCoefficients::Adjoint => LModule::adjoint(&a.lie),
            ReslieCoefficients::Trivial => LModule::trivial(&a.lie),
        };
        let s = Setting::new(a, &module);
        let res = if !restricted {
            ce_cohomology(&a.lie, &module, degree)
        } else if a.p() == 2 {
            restricted_cohomology_2(&s, degree)
        } else {
            restricted_cohomology_p(&s, degree)
        };
        match res {
            Ok(r) => {
                *dim = r.dim;
                ReslieStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Checks a deformation jet (JSON jet description) over the algebra.
/// `passed` receives whether every identity holds up to the jet order.
///
/// # Safety
/// `alg` must be a live handle, `jet_json` a NUL-terminated string and
/// `passed` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn reslie_deformation_check(alg: *const ReslieAlgebra, jet_json: *const c_char, passed: *mut bool) -> ReslieStatus {
    guard(|| {
        let a = match alg_arg(alg) {
            Ok(a) => a,
            Err(s) => return s,
        };
        let text = match str_arg(jet_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        if passed.is_null() {
            return fail(ReslieStatus::NullPointer, "null output pointer");
        }
        let d = match JetDocument::parse(text).and_then(|j| j.deformation(a, Some(text))) {
            Ok(d) => d,
            Err(diag) => return fail(ReslieStatus::Parse, diag.to_string()),
        };
        *passed = check_deformation(&d).passed();
        ReslieStatus::Ok
    })
}

/// Number of isomorphism classes of p-structures on the Heisenberg algebra
/// over the algebraic closure and over `F_p`, for `p <= 7`.
///
/// # Safety
/// `classes` and `fp_classes` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn reslie_classify_heisenberg(p: u32, classes: *mut usize, fp_classes: *mut usize) -> ReslieStatus {
    guard(|| {
        if classes.is_null() || fp_classes.is_null() {
            return fail(ReslieStatus::NullPointer, "null output pointer");
        }
        match classify::classify_heisenberg_pstructures(p, classify::DEFAULT_MAX_P) {
            Ok(c) => {
                *classes = c.classes.len();
                *fp_classes = c.fp_class_count;
                ReslieStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// JSON description of an algebra; release with `reslie_string_free`.
/// Returns null on failure.
///
/// # Safety
/// `alg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn reslie_algebra_to_json(alg: *const ReslieAlgebra) -> *mut c_char {
    let mut result = ptr::null_mut();
    guard(|| {
        let a = match alg_arg(alg) {
            Ok(a) => a,
            Err(s) => return s,
        };
        let text = AlgebraDocument::from_algebra(a).to_json();
        match CString::new(text) {
            Ok(c) => {
                result = c.into_raw();
                ReslieStatus::Ok
            }
            Err(_) => fail(ReslieStatus::Panic, "document contains a NUL byte"),
        }
    });
    result
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from `reslie_algebra_to_json` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn reslie_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
