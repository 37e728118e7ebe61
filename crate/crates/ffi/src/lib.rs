//! C ABI over the `bilin` library.
//!
//! Objects are opaque handles created by `bilin_*_new`/`bilin_*_from_*`
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`BilinStatus`]; the message of the last failure on the
//! calling thread is available from [`bilin_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bilin::analysis::{self, Algorithm, Backend, EstimateOptions};
use bilin::polyring::{random_planted, random_sequence, BilinearSequence, InstanceJson, Params};
use bilin::solvers::{self, HybridConfig, SolveReport, Status};
use bilin::Error;

/// Return code of every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BilinStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    Dimension = 3,
    Domain = 4,
    Budget = 5,
    Malformed = 6,
    BufferTooSmall = 7,
    NotAvailable = 8,
    Internal = 9,
}

/// Outcome stored in a report.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BilinSolveStatus {
    SolutionFound = 0,
    NoSolution = 1,
    Undetermined = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BilinBackend {
    Gaussian = 0,
    Wiedemann = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BilinAlgorithm {
    Yxl = 0,
    Ymxl = 1,
    YhxlGaussian = 2,
    YhxlWiedemann = 3,
    F4 = 4,
    Exhaustive = 5,
}

/// Opaque bilinear sequence.
pub struct BilinSequence(BilinearSequence);

/// Opaque solver report.
pub struct BilinReport(SolveReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: BilinStatus, msg: impl AsRef<str>) -> BilinStatus {
    set_error(msg.as_ref());
    status
}

fn from_error(e: Error) -> BilinStatus {
    let status = match &e {
        Error::Domain(_) => BilinStatus::Domain,
        Error::Dimension(_) => BilinStatus::Dimension,
        Error::InvalidParams(_) => BilinStatus::InvalidParams,
        Error::Budget(_) => BilinStatus::Budget,
        Error::Malformed(_) | Error::Json(_) => BilinStatus::Malformed,
        Error::Io(_) => BilinStatus::Internal,
    };
    fail(status, e.to_string())
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), BilinStatus>) -> BilinStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BilinStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(BilinStatus::Internal, "panic inside the library"),
    }
}

fn lift<T>(r: bilin::Result<T>) -> Result<T, BilinStatus> {
    r.map_err(from_error)
}

unsafe fn seq_ref<'a>(p: *const BilinSequence) -> Result<&'a BilinearSequence, BilinStatus> {
    p.as_ref().map(|s| &s.0).ok_or_else(|| fail(BilinStatus::NullPointer, "null sequence handle"))
}

unsafe fn report_ref<'a>(p: *const BilinReport) -> Result<&'a SolveReport, BilinStatus> {
    p.as_ref().map(|r| &r.0).ok_or_else(|| fail(BilinStatus::NullPointer, "null report handle"))
}

unsafe fn out_ptr<'a, T>(p: *mut T) -> Result<&'a mut T, BilinStatus> {
    p.as_mut().ok_or_else(|| fail(BilinStatus::NullPointer, "null output pointer"))
}

unsafe fn slice<'a>(p: *const u32, n: usize) -> Result<&'a [u32], BilinStatus> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(BilinStatus::NullPointer, "null array"));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

fn to_c_string(s: String) -> Result<*mut c_char, BilinStatus> {
    CString::new(s).map(CString::into_raw).map_err(|_| fail(BilinStatus::Internal, "string contains NUL"))
}

/// Message of the last failed call on this thread. Valid until the next
/// failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn bilin_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from a `*_to_json` call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bilin_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an instance from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bilin_sequence_from_json(json: *const c_char, out: *mut *mut BilinSequence) -> BilinStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = ptr::null_mut();
        if json.is_null() {
            return Err(fail(BilinStatus::NullPointer, "null JSON string"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|_| fail(BilinStatus::Malformed, "JSON is not UTF-8"))?;
        let j: InstanceJson = serde_json::from_str(text).map_err(|e| fail(BilinStatus::Malformed, e.to_string()))?;
        let b = lift(BilinearSequence::from_json(&j))?;
        *out = Box::into_raw(Box::new(BilinSequence(b)));
        Ok(())
    })
}

/// Samples a random instance; `planted != 0` plants a common zero and
/// `homogeneous != 0` drops the affine terms (ignored when planted).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bilin_sequence_random(
    nx: usize,
    ny: usize,
    m: usize,
    q: u32,
    planted: i32,
    homogeneous: i32,
    seed: u64,
    out: *mut *mut BilinSequence,
) -> BilinStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = ptr::null_mut();
        let p = lift(Params::new(nx, ny, m, q))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = if planted != 0 { random_planted(p, &mut rng).0 } else { random_sequence(p, homogeneous != 0, &mut rng) };
        *out = Box::into_raw(Box::new(BilinSequence(b)));
        Ok(())
    })
}

/// # Safety
/// `seq` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn bilin_sequence_free(seq: *mut BilinSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Serializes to JSON; release the string with [`bilin_string_free`].
///
/// # Safety
/// `seq` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bilin_sequence_to_json(seq: *const BilinSequence, out: *mut *mut c_char) -> BilinStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = ptr::null_mut();
        let b = seq_ref(seq)?;
        let s = serde_json::to_string(&b.to_json()).map_err(|e| fail(BilinStatus::Internal, e.to_string()))?;
        *out = to_c_string(s)?;
        Ok(())
    })
}

/// # Safety
/// `seq` must be a valid handle; the output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bilin_sequence_dims(
    seq: *const BilinSequence,
    nx: *mut usize,
    ny: *mut usize,
    m: *mut usize,
    q: *mut u32,
) -> BilinStatus {
    guard(|| {
        let b = seq_ref(seq)?;
        *out_ptr(nx)? = b.nx();
        *out_ptr(ny)? = b.ny();
        *out_ptr(m)? = b.m();
        *out_ptr(q)? = b.params().q;
        Ok(())
    })
}

/// Writes the `m` values `f_k(u, v)` to `out`.
///
/// # Safety
/// `u`, `v` and `out` must point to arrays of the given lengths.
#[no_mangle]
pub unsafe extern "C" fn bilin_sequence_evaluate(
    seq: *const BilinSequence,
    u: *const u32,
    nu: usize,
    v: *const u32,
    nv: usize,
    out: *mut u32,
    nout: usize,
) -> BilinStatus {
    guard(|| {
        let b = seq_ref(seq)?;
        let vals = lift(b.evaluate(slice(u, nu)?, slice(v, nv)?))?;
        if nout < vals.len() {
            return Err(fail(BilinStatus::BufferTooSmall, format!("need {} output slots", vals.len())));
        }
        if out.is_null() {
            return Err(fail(BilinStatus::NullPointer, "null output array"));
        }
        std::slice::from_raw_parts_mut(out, vals.len()).copy_from_slice(&vals);
        Ok(())
    })
}

unsafe fn solve_into(out: *mut *mut BilinReport, f: impl FnOnce() -> bilin::Result<SolveReport>) -> BilinStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = ptr::null_mut();
        let r = lift(f())?;
        *out = Box::into_raw(Box::new(BilinReport(r)));
        Ok(())
    })
}

/// y-XL at degree `d`; `d = 0` selects the witness degree.
///
/// # Safety
/// `seq` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bilin_solve_yxl(seq: *const BilinSequence, d: u32, out: *mut *mut BilinReport) -> BilinStatus {
    let b = match seq_ref(seq) {
        Ok(b) => b,
        Err(s) => return s,
    };
    solve_into(out, || if d == 0 { solvers::y_xl_default(b) } else { solvers::y_xl(b, d) })
}

/// y-MXL with degree bound `d_max`; `0` selects max(3, witness degree).
///
/// # Safety
/// `seq` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bilin_solve_ymxl(seq: *const BilinSequence, d_max: u32, out: *mut *mut BilinReport) -> BilinStatus {
    let b = match seq_ref(seq) {
        Ok(b) => b,
        Err(s) => return s,
    };
    solve_into(out, || {
        let d = if d_max == 0 { analysis::twit_bound(b.nx(), b.ny(), b.m())?.max(3) } else { d_max };
        solvers::y_mxl(b, d)
    })
}

/// Hybrid solver guessing `a_x` x- and `a_y` y-variables.
///
/// # Safety
/// `seq` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bilin_solve_yhxl(
    seq: *const BilinSequence,
    a_x: usize,
    a_y: usize,
    backend: BilinBackend,
    seed: u64,
    out: *mut *mut BilinReport,
) -> BilinStatus {
    let b = match seq_ref(seq) {
        Ok(b) => b,
        Err(s) => return s,
    };
    let backend = match backend {
        BilinBackend::Gaussian => Backend::Gaussian,
        BilinBackend::Wiedemann => Backend::Wiedemann,
    };
    solve_into(out, || solvers::y_hxl(b, &HybridConfig { seed, ..HybridConfig::new(a_x, a_y, backend) }))
}

/// Sets `*one_in_ideal` to 1 iff `1 ∈ J_{y,≤d}`.
///
/// # Safety
/// `seq` must be a valid handle and `one_in_ideal` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bilin_witness_test(seq: *const BilinSequence, d: u32, one_in_ideal: *mut i32) -> BilinStatus {
    guard(|| {
        let b = seq_ref(seq)?;
        let out = out_ptr(one_in_ideal)?;
        *out = lift(solvers::witness_consistency_test(b, d))? as i32;
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn bilin_report_free(report: *mut BilinReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bilin_report_status(report: *const BilinReport, out: *mut BilinSolveStatus) -> BilinStatus {
    guard(|| {
        let r = report_ref(report)?;
        *out_ptr(out)? = match r.status {
            Status::SolutionFound { .. } => BilinSolveStatus::SolutionFound,
            Status::NoSolution => BilinSolveStatus::NoSolution,
            Status::Undetermined => BilinSolveStatus::Undetermined,
        };
        Ok(())
    })
}

/// Copies the solution into `u` and `v`. Returns `NotAvailable` when the
/// report holds no solution.
///
/// # Safety
/// `u` and `v` must point to arrays of the given lengths.
#[no_mangle]
pub unsafe extern "C" fn bilin_report_solution(
    report: *const BilinReport,
    u: *mut u32,
    nu: usize,
    v: *mut u32,
    nv: usize,
) -> BilinStatus {
    guard(|| {
        let r = report_ref(report)?;
        let (su, sv) = r.solution().ok_or_else(|| fail(BilinStatus::NotAvailable, "report holds no solution"))?;
        if nu < su.len() || nv < sv.len() {
            return Err(fail(BilinStatus::BufferTooSmall, format!("need {} and {} slots", su.len(), sv.len())));
        }
        for (dst, src) in [(u, su), (v, sv)] {
            if !src.is_empty() {
                if dst.is_null() {
                    return Err(fail(BilinStatus::NullPointer, "null output array"));
                }
                std::slice::from_raw_parts_mut(dst, src.len()).copy_from_slice(src);
            }
        }
        Ok(())
    })
}

/// Returns `NotAvailable` when no linear polynomial was found.
///
/// # Safety
/// `report` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bilin_report_solving_degree(report: *const BilinReport, out: *mut u32) -> BilinStatus {
    guard(|| {
        let r = report_ref(report)?;
        let out = out_ptr(out)?;
        *out = r.solving_degree.ok_or_else(|| fail(BilinStatus::NotAvailable, "no solving degree"))?;
        Ok(())
    })
}

/// Serializes the full report; release with [`bilin_string_free`].
///
/// # Safety
/// `report` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bilin_report_to_json(report: *const BilinReport, out: *mut *mut c_char) -> BilinStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = ptr::null_mut();
        let r = report_ref(report)?;
        let s = serde_json::to_string(r).map_err(|e| fail(BilinStatus::Internal, e.to_string()))?;
        *out = to_c_string(s)?;
        Ok(())
    })
}

unsafe fn degree_call(out: *mut u32, f: impl FnOnce() -> bilin::Result<u32>) -> BilinStatus {
    guard(|| {
        let out = out_ptr(out)?;
        *out = lift(f())?;
        Ok(())
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bilin_dreg(nx: usize, ny: usize, m: usize, out: *mut u32) -> BilinStatus {
    degree_call(out, || analysis::dreg_formula(nx, ny, m))
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bilin_tff(nx: usize, ny: usize, m: usize, out: *mut u32) -> BilinStatus {
    degree_call(out, || analysis::tff_formula(nx, ny, m))
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bilin_twit(nx: usize, ny: usize, m: usize, out: *mut u32) -> BilinStatus {
    degree_call(out, || analysis::twit_bound(nx, ny, m))
}

/// log2 of the estimated multiplication count.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn bilin_estimate(
    alg: BilinAlgorithm,
    nx: usize,
    ny: usize,
    m: usize,
    q: u32,
    a_x: usize,
    a_y: usize,
    omega: f64,
    out: *mut f64,
) -> BilinStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let alg = match alg {
            BilinAlgorithm::Yxl => Algorithm::Yxl,
            BilinAlgorithm::Ymxl => Algorithm::Ymxl,
            BilinAlgorithm::YhxlGaussian => Algorithm::YhxlGaussian,
            BilinAlgorithm::YhxlWiedemann => Algorithm::YhxlWiedemann,
            BilinAlgorithm::F4 => Algorithm::F4,
            BilinAlgorithm::Exhaustive => Algorithm::Exhaustive,
        };
        let p = lift(Params::new(nx, ny, m, q))?;
        *out = lift(analysis::estimate(alg, p, EstimateOptions { a_x, a_y, omega }))?.log2_mults;
        Ok(())
    })
}

/// Cheapest hybrid configuration and its log2 cost.
///
/// # Safety
/// All output pointers must be valid.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn bilin_optimal_hybrid(
    nx: usize,
    ny: usize,
    m: usize,
    q: u32,
    omega: f64,
    a_x: *mut usize,
    a_y: *mut usize,
    backend: *mut BilinBackend,
    log2_cost: *mut f64,
) -> BilinStatus {
    guard(|| {
        let p = lift(Params::new(nx, ny, m, q))?;
        let h = lift(analysis::optimal_hybrid(p, omega))?;
        *out_ptr(a_x)? = h.a_x;
        *out_ptr(a_y)? = h.a_y;
        *out_ptr(backend)? = match h.backend {
            Backend::Gaussian => BilinBackend::Gaussian,
            Backend::Wiedemann => BilinBackend::Wiedemann,
        };
        *out_ptr(log2_cost)? = h.cost.log2_mults;
        Ok(())
    })
}
