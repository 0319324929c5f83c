//! C ABI over `su2ym`.
//!
//! Every function returns an [`Su2ymStatus`]. On failure a message is kept
//! per thread and read with [`su2ym_last_error_message`]. Strings handed out
//! by this library are released with [`su2ym_string_free`]; trajectories
//! with [`su2ym_trajectory_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use serde::Serialize;

use su2ym::geometry::genus_riemann_hurwitz;
use su2ym::numerics::{integrate, invariant_drift, IntegratorConfig, TimeSpan, Trajectory};
use su2ym::report::Report;
use su2ym::suites::{balance_output, quadrature_checks, random_curve_outputs, separation_checks};
use su2ym::systems::suite::exact_identity_suite;
use su2ym::systems::SystemId;
use su2ym::Error;

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Su2ymStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Arguments were malformed: unknown names, wrong lengths, bad numbers.
    InvalidInput = 2,
    /// The computation itself failed, for example a balance that does not close.
    ComputationFailed = 3,
    /// A Rust panic was caught at the boundary.
    Panic = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Su2ymComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Su2ymComplex> for Complex64 {
    fn from(z: Su2ymComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl From<Complex64> for Su2ymComplex {
    fn from(z: Complex64) -> Self {
        Su2ymComplex { re: z.re, im: z.im }
    }
}

/// Opaque integrated trajectory.
pub struct Su2ymTrajectory {
    inner: Trajectory,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(Su2ymStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidInput(_)
            | Error::DimensionMismatch { .. }
            | Error::Parse(_)
            | Error::MissingVariable(_)
            | Error::Io(_)
            | Error::Csv(_)
            | Error::Json(_) => Su2ymStatus::InvalidInput,
            _ => Su2ymStatus::ComputationFailed,
        };
        Failure(status, e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(Su2ymStatus::ComputationFailed, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(Su2ymStatus::NullPointer, format!("`{what}` is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(Su2ymStatus::InvalidInput, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> Su2ymStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            Su2ymStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("panic: {msg}"));
            Su2ymStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("`{what}` is not UTF-8")))
}

unsafe fn write_json<T: Serialize>(v: &T, out: *mut *mut c_char) -> Result<(), Failure> {
    let s = serde_json::to_string(v)?;
    *out = CString::new(s).expect("JSON has no nul bytes").into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or null after a
/// success. Valid until the next call on this thread; do not free.
#[no_mangle]
pub extern "C" fn su2ym_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn su2ym_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs the exact identity checks. Writes the report as JSON to `*out_json`
/// and whether every check passed to `*out_passed` (may be null).
///
/// # Safety
/// `out_json` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn su2ym_verify_json(out_json: *mut *mut c_char, out_passed: *mut bool) -> Su2ymStatus {
    guard(|| {
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let r = Report::new(None, exact_identity_suite());
        if !out_passed.is_null() {
            *out_passed = r.all_passed();
        }
        write_json(&r, out_json)
    })
}

/// Balance of `system` (`"4d"` or `"5d"`) on the branch `epsilon = ±i`
/// (`branch_sign` is `1` or `-1`), to `order` powers of `t^(1/2)`.
///
/// # Safety
/// `system` must be a nul-terminated string; `out_json` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn su2ym_balance_json(
    system: *const c_char,
    branch_sign: i32,
    order: usize,
    out_json: *mut *mut c_char,
) -> Su2ymStatus {
    guard(|| {
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let id: SystemId = str_arg(system, "system")?.parse()?;
        let eps = match branch_sign {
            1 => su2ym::exact::Scalar::i(),
            -1 => -su2ym::exact::Scalar::i(),
            s => return Err(invalid(format!("branch_sign must be 1 or -1, got {s}"))),
        };
        write_json(&balance_output(&id.definition(), &eps, order)?, out_json)
    })
}

/// Branch points and genus of `curve` (`"C_eps"`, `"H_eps"`, `"Gamma_eps"`
/// or `"P6"`) for `draws` seeded random parameter sets.
///
/// # Safety
/// `curve` must be a nul-terminated string; `out_json` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn su2ym_curves_json(
    curve: *const c_char,
    seed: u64,
    draws: usize,
    cluster_tol: f64,
    out_json: *mut *mut c_char,
) -> Su2ymStatus {
    guard(|| {
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let id = str_arg(curve, "curve")?.parse()?;
        if !(cluster_tol > 0.0 && cluster_tol.is_finite()) {
            return Err(invalid("cluster_tol must be positive"));
        }
        write_json(&random_curve_outputs(id, seed, draws, cluster_tol)?, out_json)
    })
}

/// Genus of an `n_sheets`-sheeted cover with `branch_points` simple branch
/// points.
///
/// # Safety
/// `out_genus` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn su2ym_genus_riemann_hurwitz(
    n_sheets: u32,
    branch_points: usize,
    out_genus: *mut i64,
) -> Su2ymStatus {
    guard(|| {
        if out_genus.is_null() {
            return Err(null("out_genus"));
        }
        *out_genus = genus_riemann_hurwitz(n_sheets, branch_points)?;
        Ok(())
    })
}

/// Integrates `system` from `state[0..dim]` along the straight ray from `t0`
/// to `t1`. `rtol` or `atol` of zero or less select the defaults
/// (`1e-12`, `1e-14`). The trajectory is returned even if the integrator
/// stopped early; see [`su2ym_trajectory_completed`].
///
/// # Safety
/// `system` must be a nul-terminated string, `state` must point to `dim`
/// values and `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn su2ym_integrate(
    system: *const c_char,
    state: *const Su2ymComplex,
    dim: usize,
    a: Su2ymComplex,
    t0: Su2ymComplex,
    t1: Su2ymComplex,
    rtol: f64,
    atol: f64,
    out: *mut *mut Su2ymTrajectory,
) -> Su2ymStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if state.is_null() {
            return Err(null("state"));
        }
        let id: SystemId = str_arg(system, "system")?.parse()?;
        let x: Vec<Complex64> = std::slice::from_raw_parts(state, dim).iter().map(|&z| z.into()).collect();
        let d = IntegratorConfig::default();
        let cfg = IntegratorConfig {
            rtol: if rtol > 0.0 { rtol } else { d.rtol },
            atol: if atol > 0.0 { atol } else { d.atol },
            ..d
        };
        let span = TimeSpan::between(t0.into(), t1.into());
        let inner = integrate(&id.definition(), &x, a.into(), &span, &cfg)?;
        *out = Box::into_raw(Box::new(Su2ymTrajectory { inner }));
        Ok(())
    })
}

/// Releases a trajectory. Null is ignored.
///
/// # Safety
/// `traj` must come from [`su2ym_integrate`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn su2ym_trajectory_free(traj: *mut Su2ymTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Number of stored samples, or 0 for null.
///
/// # Safety
/// `traj` must be null or a live trajectory.
#[no_mangle]
pub unsafe extern "C" fn su2ym_trajectory_len(traj: *const Su2ymTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.inner.samples.len())
}

/// State dimension, or 0 for null.
///
/// # Safety
/// `traj` must be null or a live trajectory.
#[no_mangle]
pub unsafe extern "C" fn su2ym_trajectory_dim(traj: *const Su2ymTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.inner.dim())
}

/// Whether the integration reached the end of the span.
///
/// # Safety
/// `traj` must be null or a live trajectory.
#[no_mangle]
pub unsafe extern "C" fn su2ym_trajectory_completed(traj: *const Su2ymTrajectory) -> bool {
    traj.as_ref().is_some_and(|t| t.inner.completed())
}

/// Copies sample `index`: its time to `*t_out` and its state to
/// `state_out[0..state_len]`; `state_len` must equal the dimension.
///
/// # Safety
/// `traj` must be a live trajectory, `t_out` valid for writes and
/// `state_out` valid for `state_len` writes.
#[no_mangle]
pub unsafe extern "C" fn su2ym_trajectory_sample(
    traj: *const Su2ymTrajectory,
    index: usize,
    t_out: *mut Su2ymComplex,
    state_out: *mut Su2ymComplex,
    state_len: usize,
) -> Su2ymStatus {
    guard(|| {
        let t = traj.as_ref().ok_or_else(|| null("traj"))?;
        if t_out.is_null() {
            return Err(null("t_out"));
        }
        if state_out.is_null() {
            return Err(null("state_out"));
        }
        let smp = t
            .inner
            .samples
            .get(index)
            .ok_or_else(|| invalid(format!("index {index} out of range")))?;
        if state_len != smp.state.len() {
            return Err(Error::DimensionMismatch {
                expected: smp.state.len(),
                got: state_len,
            }
            .into());
        }
        *t_out = smp.t.into();
        let dst = std::slice::from_raw_parts_mut(state_out, state_len);
        for (d, z) in dst.iter_mut().zip(&smp.state) {
            *d = (*z).into();
        }
        Ok(())
    })
}

/// Drift of the system's invariants along the trajectory, as JSON.
///
/// # Safety
/// `traj` must be a live trajectory; `out_json` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn su2ym_trajectory_drift_json(
    traj: *const Su2ymTrajectory,
    out_json: *mut *mut c_char,
) -> Su2ymStatus {
    guard(|| {
        let t = traj.as_ref().ok_or_else(|| null("traj"))?;
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let sys = t.inner.system.ok_or_else(|| invalid("trajectory has no system"))?;
        write_json(&invariant_drift(&sys.definition(), &t.inner)?, out_json)
    })
}

/// Separation and quadrature checks along a 4d trajectory, as a report.
///
/// # Safety
/// `traj` must be a live trajectory; `out_json` valid for writes;
/// `out_passed` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn su2ym_trajectory_checks_json(
    traj: *const Su2ymTrajectory,
    out_json: *mut *mut c_char,
    out_passed: *mut bool,
) -> Su2ymStatus {
    guard(|| {
        let t = traj.as_ref().ok_or_else(|| null("traj"))?;
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        if t.inner.system != Some(SystemId::Sys4) {
            return Err(invalid("separation checks need a 4d trajectory"));
        }
        let mut checks = separation_checks(&t.inner);
        checks.extend(quadrature_checks(&t.inner));
        let r = Report::new(None, checks);
        if !out_passed.is_null() {
            *out_passed = r.all_passed();
        }
        write_json(&r, out_json)
    })
}
