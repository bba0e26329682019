//! C ABI over the bamkit core: opaque handles for sets, operators, and
//! certificates, status codes instead of `Result`, and a thread-local
//! last-error message. Every function is safe to call with null handles
//! (it reports `BAMKIT_ERR_NULL_ARGUMENT`) and panics never cross the
//! boundary.

#![allow(non_camel_case_types)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use bamkit::bam::{certify_empirical, iterate, BamCertificate, CertifyOutcome};
use bamkit::numkit::Vector;
use bamkit::operators::{OperatorExpr, SampleSpec};
use bamkit::sets::{AffineSubspace, ConvexSet, LinearSubspace};
use bamkit::Error;

/// Closed convex set handle.
pub struct bamkit_set(ConvexSet);

/// Operator expression handle.
pub struct bamkit_op(OperatorExpr);

/// Contraction certificate handle.
pub struct bamkit_cert(BamCertificate);

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum bamkit_status {
    BAMKIT_OK = 0,
    /// A required pointer argument was null.
    BAMKIT_ERR_NULL_ARGUMENT = 1,
    /// A value argument was out of range or inconsistent.
    BAMKIT_ERR_INVALID_ARGUMENT = 2,
    /// Vector or matrix dimensions disagree.
    BAMKIT_ERR_DIMENSION_MISMATCH = 3,
    /// Certification found a counterexample; see `bamkit_last_error`.
    BAMKIT_ERR_REFUTED = 4,
    /// The operation is not defined for these inputs.
    BAMKIT_ERR_UNSUPPORTED = 5,
    /// An unexpected internal failure; see `bamkit_last_error`.
    BAMKIT_ERR_INTERNAL = 6,
}

use bamkit_status::*;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(status: bamkit_status, message: &str) -> bamkit_status {
    set_error(message);
    status
}

fn from_error(e: &Error) -> bamkit_status {
    let status = match e {
        Error::DimensionMismatch { .. } => BAMKIT_ERR_DIMENSION_MISMATCH,
        Error::Unsupported(_) => BAMKIT_ERR_UNSUPPORTED,
        _ => BAMKIT_ERR_INVALID_ARGUMENT,
    };
    fail(status, &e.to_string())
}

/// Runs a fallible body, converting panics into `BAMKIT_ERR_INTERNAL`.
fn catching(body: impl FnOnce() -> bamkit_status) -> bamkit_status {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(BAMKIT_ERR_INTERNAL, "internal panic"),
    }
}

/// Last error message for this thread; empty when no error has occurred.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bamkit_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn bamkit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// ── slices across the boundary ──────────────────────────────────────────────

unsafe fn read_vector(data: *const f64, dim: usize) -> Option<Vector> {
    if data.is_null() || dim == 0 {
        return None;
    }
    let slice = std::slice::from_raw_parts(data, dim);
    Vector::new(slice.to_vec()).ok()
}

unsafe fn write_vector(v: &Vector, out: *mut f64) {
    std::ptr::copy_nonoverlapping(v.entries().as_ptr(), out, v.dim());
}

unsafe fn handle_out<T>(out: *mut *mut T, value: T) -> bamkit_status {
    if out.is_null() {
        return fail(BAMKIT_ERR_NULL_ARGUMENT, "output handle pointer is null");
    }
    *out = Box::into_raw(Box::new(value));
    BAMKIT_OK
}

// ── sets ────────────────────────────────────────────────────────────────────

/// Closed ball with the given center and radius.
#[no_mangle]
pub unsafe extern "C" fn bamkit_set_ball(
    center: *const f64,
    dim: usize,
    radius: f64,
    out: *mut *mut bamkit_set,
) -> bamkit_status {
    catching(|| {
        let Some(center) = read_vector(center, dim) else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "center is null or empty");
        };
        match ConvexSet::ball(center, radius) {
            Ok(set) => handle_out(out, bamkit_set(set)),
            Err(e) => from_error(&e),
        }
    })
}

/// Affine subspace through `anchor` spanned by `count` direction vectors,
/// stored row-major as `count * dim` doubles. `count` may be zero for a
/// single point.
#[no_mangle]
pub unsafe extern "C" fn bamkit_set_affine(
    anchor: *const f64,
    dim: usize,
    spanning: *const f64,
    count: usize,
    out: *mut *mut bamkit_set,
) -> bamkit_status {
    catching(|| {
        let Some(anchor) = read_vector(anchor, dim) else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "anchor is null or empty");
        };
        let par = if count == 0 {
            LinearSubspace::zero(dim)
        } else {
            if spanning.is_null() {
                return fail(BAMKIT_ERR_NULL_ARGUMENT, "spanning is null");
            }
            let rows = std::slice::from_raw_parts(spanning, count * dim);
            let vectors: Vec<Vector> = match rows
                .chunks_exact(dim)
                .map(|r| Vector::new(r.to_vec()))
                .collect::<Result<_, _>>()
            {
                Ok(v) => v,
                Err(e) => return from_error(&e),
            };
            match LinearSubspace::from_spanning(&vectors) {
                Ok(par) => par,
                Err(e) => return from_error(&e),
            }
        };
        match AffineSubspace::new(anchor, par) {
            Ok(sub) => handle_out(out, bamkit_set(ConvexSet::Affine(sub))),
            Err(e) => from_error(&e),
        }
    })
}

/// Nonnegative orthant of the given dimension.
#[no_mangle]
pub unsafe extern "C" fn bamkit_set_orthant(
    dim: usize,
    out: *mut *mut bamkit_set,
) -> bamkit_status {
    catching(|| match ConvexSet::orthant(dim) {
        Ok(set) => handle_out(out, bamkit_set(set)),
        Err(e) => from_error(&e),
    })
}

/// Nonnegative orthant capped at the given radius.
#[no_mangle]
pub unsafe extern "C" fn bamkit_set_orthant_ball(
    dim: usize,
    radius: f64,
    out: *mut *mut bamkit_set,
) -> bamkit_status {
    catching(|| match ConvexSet::orthant_ball(dim, radius) {
        Ok(set) => handle_out(out, bamkit_set(set)),
        Err(e) => from_error(&e),
    })
}

/// One-point set.
#[no_mangle]
pub unsafe extern "C" fn bamkit_set_singleton(
    point: *const f64,
    dim: usize,
    out: *mut *mut bamkit_set,
) -> bamkit_status {
    catching(|| {
        let Some(point) = read_vector(point, dim) else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "point is null or empty");
        };
        handle_out(out, bamkit_set(ConvexSet::singleton(point)))
    })
}

/// Releases a set handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bamkit_set_free(set: *mut bamkit_set) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Ambient dimension of the set, or zero for a null handle.
#[no_mangle]
pub unsafe extern "C" fn bamkit_set_dim(set: *const bamkit_set) -> usize {
    set.as_ref().map_or(0, |s| s.0.ambient_dim())
}

/// Writes the nearest point of the set to `x` into `out` (`dim` doubles).
#[no_mangle]
pub unsafe extern "C" fn bamkit_set_project(
    set: *const bamkit_set,
    x: *const f64,
    dim: usize,
    out: *mut f64,
) -> bamkit_status {
    catching(|| {
        let Some(set) = set.as_ref() else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "set handle is null");
        };
        let Some(x) = read_vector(x, dim) else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "input vector is null or empty");
        };
        if out.is_null() {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "output buffer is null");
        }
        match set.0.project(&x) {
            Ok(p) => {
                write_vector(&p, out);
                BAMKIT_OK
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Sets `*out` to 1 when `x` lies in the set within `tol`, else 0.
#[no_mangle]
pub unsafe extern "C" fn bamkit_set_contains(
    set: *const bamkit_set,
    x: *const f64,
    dim: usize,
    tol: f64,
    out: *mut i32,
) -> bamkit_status {
    catching(|| {
        let Some(set) = set.as_ref() else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "set handle is null");
        };
        let Some(x) = read_vector(x, dim) else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "input vector is null or empty");
        };
        if out.is_null() {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "output flag is null");
        }
        match set.0.contains(&x, tol) {
            Ok(inside) => {
                *out = i32::from(inside);
                BAMKIT_OK
            }
            Err(e) => from_error(&e),
        }
    })
}

// ── operators ───────────────────────────────────────────────────────────────

/// Identity map on `dim` coordinates.
#[no_mangle]
pub unsafe extern "C" fn bamkit_op_identity(
    dim: usize,
    out: *mut *mut bamkit_op,
) -> bamkit_status {
    catching(|| match OperatorExpr::identity(dim) {
        Ok(op) => handle_out(out, bamkit_op(op)),
        Err(e) => from_error(&e),
    })
}

/// Nearest-point projector onto the set. The set handle is copied and may
/// be freed afterwards.
#[no_mangle]
pub unsafe extern "C" fn bamkit_op_projector(
    set: *const bamkit_set,
    out: *mut *mut bamkit_op,
) -> bamkit_status {
    catching(|| {
        let Some(set) = set.as_ref() else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "set handle is null");
        };
        handle_out(out, bamkit_op(OperatorExpr::projector(set.0.clone())))
    })
}

/// Reflection through the set: twice the projection minus the identity.
#[no_mangle]
pub unsafe extern "C" fn bamkit_op_reflector(
    set: *const bamkit_set,
    out: *mut *mut bamkit_op,
) -> bamkit_status {
    catching(|| {
        let Some(set) = set.as_ref() else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "set handle is null");
        };
        handle_out(out, bamkit_op(OperatorExpr::reflector(set.0.clone())))
    })
}

/// Blend `gamma * x + (1 - gamma) * base(x)` with `gamma` in [0, 1].
#[no_mangle]
pub unsafe extern "C" fn bamkit_op_averaged(
    base: *const bamkit_op,
    gamma: f64,
    out: *mut *mut bamkit_op,
) -> bamkit_status {
    catching(|| {
        let Some(base) = base.as_ref() else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "base operator handle is null");
        };
        match OperatorExpr::averaged(base.0.clone(), gamma) {
            Ok(op) => handle_out(out, bamkit_op(op)),
            Err(e) => from_error(&e),
        }
    })
}

/// Composition of `count` operators listed in application order:
/// `ops[0]` acts first. Handles are copied.
#[no_mangle]
pub unsafe extern "C" fn bamkit_op_compose(
    ops: *const *const bamkit_op,
    count: usize,
    out: *mut *mut bamkit_op,
) -> bamkit_status {
    catching(|| {
        let Some(parts) = collect_ops(ops, count) else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "operator list is null or has null entries");
        };
        // The expression tree applies right to left.
        let reversed: Vec<OperatorExpr> = parts.into_iter().rev().collect();
        match OperatorExpr::compose(reversed) {
            Ok(op) => handle_out(out, bamkit_op(op)),
            Err(e) => from_error(&e),
        }
    })
}

/// Convex combination with the given weights (positive, summing to one).
#[no_mangle]
pub unsafe extern "C" fn bamkit_op_combine(
    weights: *const f64,
    ops: *const *const bamkit_op,
    count: usize,
    out: *mut *mut bamkit_op,
) -> bamkit_status {
    catching(|| {
        if weights.is_null() {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "weights pointer is null");
        }
        let Some(parts) = collect_ops(ops, count) else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "operator list is null or has null entries");
        };
        let weights = std::slice::from_raw_parts(weights, count).to_vec();
        match OperatorExpr::convex_combo(weights, parts) {
            Ok(op) => handle_out(out, bamkit_op(op)),
            Err(e) => from_error(&e),
        }
    })
}

unsafe fn collect_ops(ops: *const *const bamkit_op, count: usize) -> Option<Vec<OperatorExpr>> {
    if ops.is_null() || count == 0 {
        return None;
    }
    let handles = std::slice::from_raw_parts(ops, count);
    handles
        .iter()
        .map(|&h| h.as_ref().map(|op| op.0.clone()))
        .collect()
}

/// Releases an operator handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bamkit_op_free(op: *mut bamkit_op) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Ambient dimension of the operator, or zero for a null handle.
#[no_mangle]
pub unsafe extern "C" fn bamkit_op_dim(op: *const bamkit_op) -> usize {
    op.as_ref().map_or(0, |o| o.0.dim())
}

/// Applies the operator to `x`, writing `dim` doubles into `out`.
#[no_mangle]
pub unsafe extern "C" fn bamkit_op_eval(
    op: *const bamkit_op,
    x: *const f64,
    dim: usize,
    out: *mut f64,
) -> bamkit_status {
    catching(|| {
        let Some(op) = op.as_ref() else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "operator handle is null");
        };
        let Some(x) = read_vector(x, dim) else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "input vector is null or empty");
        };
        if out.is_null() {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "output buffer is null");
        }
        match op.0.eval(&x) {
            Ok(y) => {
                write_vector(&y, out);
                BAMKIT_OK
            }
            Err(e) => from_error(&e),
        }
    })
}

// ── certification ───────────────────────────────────────────────────────────

/// Samples `count` points from the box with the given `center` and
/// `half_width` and certifies that `op` contracts toward `fixed_set`. On
/// success `*out` holds the certificate; when sampling finds a
/// counterexample the call returns `BAMKIT_ERR_REFUTED` and the message
/// from `bamkit_last_error` describes the witness.
#[no_mangle]
pub unsafe extern "C" fn bamkit_certify(
    op: *const bamkit_op,
    fixed_set: *const bamkit_set,
    seed: u64,
    count: usize,
    center: *const f64,
    dim: usize,
    half_width: f64,
    out: *mut *mut bamkit_cert,
) -> bamkit_status {
    catching(|| {
        let Some(op) = op.as_ref() else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "operator handle is null");
        };
        let Some(fixed_set) = fixed_set.as_ref() else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "fixed set handle is null");
        };
        let Some(center) = read_vector(center, dim) else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "sample box center is null or empty");
        };
        let spec = match SampleSpec::new(seed, count, center, half_width) {
            Ok(spec) => spec,
            Err(e) => return from_error(&e),
        };
        match certify_empirical(&op.0, &fixed_set.0, &spec) {
            Ok(CertifyOutcome::Certified(cert)) => handle_out(out, bamkit_cert(cert)),
            Ok(CertifyOutcome::Refuted(v)) => fail(
                BAMKIT_ERR_REFUTED,
                &format!("{} at witness {:?} (magnitude {:.3e})", v.kind, v.witness.entries(), v.magnitude),
            ),
            Err(e) => from_error(&e),
        }
    })
}

/// Releases a certificate handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bamkit_cert_free(cert: *mut bamkit_cert) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Contraction factor in [0, 1), or NaN for a null handle.
#[no_mangle]
pub unsafe extern "C" fn bamkit_cert_gamma(cert: *const bamkit_cert) -> f64 {
    cert.as_ref().map_or(f64::NAN, |c| c.0.gamma)
}

/// Regularity constant `1 / (1 - gamma)`, or NaN for a null handle.
#[no_mangle]
pub unsafe extern "C" fn bamkit_cert_kappa(cert: *const bamkit_cert) -> f64 {
    cert.as_ref().map_or(f64::NAN, |c| c.0.kappa)
}

/// Projects `x` onto the certificate's fixed set.
#[no_mangle]
pub unsafe extern "C" fn bamkit_cert_project_fixed(
    cert: *const bamkit_cert,
    x: *const f64,
    dim: usize,
    out: *mut f64,
) -> bamkit_status {
    catching(|| {
        let Some(cert) = cert.as_ref() else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "certificate handle is null");
        };
        let Some(x) = read_vector(x, dim) else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "input vector is null or empty");
        };
        if out.is_null() {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "output buffer is null");
        }
        match cert.0.fixed_set.project(&x) {
            Ok(p) => {
                write_vector(&p, out);
                BAMKIT_OK
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Runs `steps` applications of `op` from `x0` and writes the distance to
/// the certificate's fixed set after each application into `errors`
/// (`steps + 1` doubles, starting with the distance at `x0`).
#[no_mangle]
pub unsafe extern "C" fn bamkit_iterate_errors(
    op: *const bamkit_op,
    cert: *const bamkit_cert,
    x0: *const f64,
    dim: usize,
    steps: usize,
    errors: *mut f64,
) -> bamkit_status {
    catching(|| {
        let Some(op) = op.as_ref() else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "operator handle is null");
        };
        let Some(cert) = cert.as_ref() else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "certificate handle is null");
        };
        let Some(x0) = read_vector(x0, dim) else {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "start vector is null or empty");
        };
        if errors.is_null() {
            return fail(BAMKIT_ERR_NULL_ARGUMENT, "error buffer is null");
        }
        match iterate(&op.0, &cert.0, &x0, steps) {
            Ok(trace) => {
                std::ptr::copy_nonoverlapping(trace.errors.as_ptr(), errors, steps + 1);
                BAMKIT_OK
            }
            Err(e) => from_error(&e),
        }
    })
}
