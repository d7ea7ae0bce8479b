//! C interface to the `qec-esd` simulator.
//!
//! Every function returns a [`QecStatus`]. On failure a message describing the
//! error is kept per thread and can be copied out with
//! [`qec_last_error_message`]. Objects handed out as pointers (`QecScenario`,
//! `QecSweep`) are opaque and must be released with their `_free` function.
//! Enumerations travel as `uint32_t` and are checked on entry.
//!
//! Density matrices cross the boundary as 32 doubles: the 16 entries of the
//! 4x4 matrix in row-major order, each as a (real, imaginary) pair.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use qec_esd::analytic::{esd_onset_analytic, esd_onset_numeric};
use qec_esd::channels::ErrorProbability;
use qec_esd::cli::{render_sweep, run_sweep, write_output, OutputFormat, RunConfig, SweepRecord};
use qec_esd::metrics::{concurrence, fidelity_with_initial};
use qec_esd::pipeline::{evolve_pair, ChannelKind, CodeKind, Family, Scenario, TwoQubitState};
use qec_esd::qmat::{c, ComplexMatrix};
use qec_esd::Error;

/// Result of every call. Values 2-4 match the exit codes of the command-line tool.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QecStatus {
    Ok = 0,
    /// Bad probability, angle, enum value or grid size.
    InvalidArgument = 2,
    /// Numerical failure (eigensolver, non-physical state).
    Compute = 3,
    Io = 4,
    /// A required pointer argument was null.
    NullPointer = 5,
    /// The library panicked; this is a bug.
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QecChannel {
    Ad = 0,
    Pd = 1,
    Combined = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QecFamily {
    /// cos(a)|11> + sin(a)|00>
    Phi = 0,
    /// cos(a)|10> + sin(a)|01>
    Psi = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QecCodeKind {
    None = 0,
    Leung4 = 1,
    Phase3 = 2,
    Laflamme5 = 3,
}

/// One point of a sweep.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QecSweepRecord {
    pub p: f64,
    pub c_unc: f64,
    pub c_cor: f64,
    pub f_unc: f64,
    pub f_cor: f64,
}

/// Noise model and protection shared by both qubits.
pub struct QecScenario {
    inner: Scenario,
}

/// Result of `qec_sweep_run`.
pub struct QecSweep {
    config: RunConfig,
    records: Vec<SweepRecord>,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(QecStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e.exit_code() {
            2 => QecStatus::InvalidArgument,
            4 => QecStatus::Io,
            _ => QecStatus::Compute,
        };
        Failure(status, e.to_string())
    }
}

type FfiResult<T = ()> = Result<T, Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(QecStatus::InvalidArgument, msg.into())
}

fn guard(body: impl FnOnce() -> FfiResult) -> QecStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error(String::new());
            QecStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            QecStatus::Panic
        }
    }
}

fn non_null<'a, T>(ptr: *const T, name: &str) -> FfiResult<&'a T> {
    // SAFETY: callers pass pointers obtained from this library or valid for reads.
    unsafe { ptr.as_ref() }.ok_or_else(|| Failure(QecStatus::NullPointer, format!("{name} is null")))
}

fn out_ptr<'a, T>(ptr: *mut T, name: &str) -> FfiResult<&'a mut T> {
    // SAFETY: callers pass pointers valid for writes.
    unsafe { ptr.as_mut() }.ok_or_else(|| Failure(QecStatus::NullPointer, format!("{name} is null")))
}

fn channel(v: u32) -> FfiResult<ChannelKind> {
    Ok(match v {
        0 => ChannelKind::Ad,
        1 => ChannelKind::Pd,
        2 => ChannelKind::Combined,
        _ => return Err(invalid(format!("unknown channel {v}"))),
    })
}

fn family(v: u32) -> FfiResult<Family> {
    Ok(match v {
        0 => Family::Phi,
        1 => Family::Psi,
        _ => return Err(invalid(format!("unknown family {v}"))),
    })
}

fn code(v: u32) -> FfiResult<CodeKind> {
    Ok(match v {
        0 => CodeKind::None,
        1 => CodeKind::Leung4,
        2 => CodeKind::Phase3,
        3 => CodeKind::Laflamme5,
        _ => return Err(invalid(format!("unknown code {v}"))),
    })
}

fn read_rho(ptr: *const f64) -> FfiResult<ComplexMatrix> {
    non_null(ptr, "rho")?;
    // SAFETY: the caller provides 32 readable doubles.
    let raw = unsafe { std::slice::from_raw_parts(ptr, 32) };
    let data = raw.chunks_exact(2).map(|z| c(z[0], z[1])).collect();
    Ok(ComplexMatrix::new(4, 4, data)?)
}

fn write_rho(rho: &ComplexMatrix, ptr: *mut f64) -> FfiResult {
    out_ptr(ptr, "rho_out")?;
    // SAFETY: the caller provides 32 writable doubles.
    let out = unsafe { std::slice::from_raw_parts_mut(ptr, 32) };
    for (dst, z) in out.chunks_exact_mut(2).zip(rho.as_slice()) {
        dst[0] = z.re;
        dst[1] = z.im;
    }
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qec_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (truncated and
/// always NUL-terminated when `len > 0`). Returns the length of the full
/// message excluding the terminator; the message is empty after a success.
///
/// # Safety
/// `buf` is null or points to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn qec_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            // SAFETY: `buf` holds `len` writable bytes.
            unsafe {
                std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
                *buf.add(n) = 0;
            }
        }
        bytes.len()
    })
}

/// Creates a scenario. `p` is the amplitude-damping probability for `AD` and
/// `COMBINED`, the phase-damping probability for `PD`. For `COMBINED` the
/// phase-damping probability follows `1 - (1 - p)^kappa`; `kappa` is ignored
/// otherwise.
///
/// # Safety
/// `out` is null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qec_scenario_new(
    channel_kind: u32,
    code_kind: u32,
    p: f64,
    kappa: f64,
    out: *mut *mut QecScenario,
) -> QecStatus {
    guard(|| {
        let slot = out_ptr(out, "out")?;
        let kind = channel(channel_kind)?;
        let k = (kind == ChannelKind::Combined).then_some(kappa);
        let inner = Scenario::from_parts(kind, code(code_kind)?, ErrorProbability::new(p)?, k)?;
        *slot = Box::into_raw(Box::new(QecScenario { inner }));
        Ok(())
    })
}

/// Releases a scenario; null is ignored.
///
/// # Safety
/// `scenario` is null or came from `qec_scenario_new` and has not been freed.
#[no_mangle]
pub unsafe extern "C" fn qec_scenario_free(scenario: *mut QecScenario) {
    if !scenario.is_null() {
        // SAFETY: the pointer came from `qec_scenario_new` and is freed once.
        drop(unsafe { Box::from_raw(scenario) });
    }
}

/// Evolves `family(alpha)` through the scenario; writes the 4x4 density
/// matrix to `rho_out` (32 doubles).
///
/// # Safety
/// `scenario` is null or live; `rho_out` is null or points to 32 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qec_evolve_pair(
    scenario: *const QecScenario,
    family_kind: u32,
    alpha: f64,
    rho_out: *mut f64,
) -> QecStatus {
    guard(|| {
        let sc = non_null(scenario, "scenario")?;
        let state = TwoQubitState::new(family(family_kind)?, alpha);
        let rho = evolve_pair(&state, &sc.inner)?;
        write_rho(&rho, rho_out)
    })
}

/// Concurrence and fidelity with the initial state after evolving
/// `family(alpha)` through the scenario. Either output may be null.
///
/// # Safety
/// `scenario` is null or live; each output is null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qec_pair_metrics(
    scenario: *const QecScenario,
    family_kind: u32,
    alpha: f64,
    concurrence_out: *mut f64,
    fidelity_out: *mut f64,
) -> QecStatus {
    guard(|| {
        let sc = non_null(scenario, "scenario")?;
        let state = TwoQubitState::new(family(family_kind)?, alpha);
        let rho = evolve_pair(&state, &sc.inner)?;
        // SAFETY: non-null outputs are valid for writes.
        if let Some(c) = unsafe { concurrence_out.as_mut() } {
            *c = concurrence(&rho)?;
        }
        if let Some(f) = unsafe { fidelity_out.as_mut() } {
            *f = fidelity_with_initial(&rho, &state)?;
        }
        Ok(())
    })
}

/// Wootters concurrence of a two-qubit density matrix given as 32 doubles.
///
/// # Safety
/// `rho` is null or points to 32 readable doubles; `out` is null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qec_concurrence(rho: *const f64, out: *mut f64) -> QecStatus {
    guard(|| {
        let m = read_rho(rho)?;
        let slot = out_ptr(out, "out")?;
        *slot = concurrence(&m)?;
        Ok(())
    })
}

/// Onset of sudden death on the simulated curve of `family(alpha)`; the
/// scenario's own probability is ignored. `found` is false when the
/// concurrence never vanishes for p < 1.
///
/// # Safety
/// `scenario` is null or live; each output is null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qec_onset_numeric(
    scenario: *const QecScenario,
    family_kind: u32,
    alpha: f64,
    onset: *mut f64,
    found: *mut bool,
) -> QecStatus {
    guard(|| {
        let sc = non_null(scenario, "scenario")?;
        let hit = esd_onset_numeric(&sc.inner, family(family_kind)?, alpha)?;
        *out_ptr(found, "found")? = hit.is_some();
        *out_ptr(onset, "onset")? = hit.map_or(f64::NAN, |p| p.value());
        Ok(())
    })
}

/// Closed-form onset for the unprotected pair. `kappa` is used for
/// `COMBINED` only.
///
/// # Safety
/// Each output is null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qec_onset_analytic(
    family_kind: u32,
    channel_kind: u32,
    alpha: f64,
    kappa: f64,
    onset: *mut f64,
    found: *mut bool,
) -> QecStatus {
    guard(|| {
        let kind = channel(channel_kind)?;
        let k = (kind == ChannelKind::Combined).then_some(kappa);
        let hit = esd_onset_analytic(family(family_kind)?, kind, alpha, k)?;
        *out_ptr(found, "found")? = hit.is_some();
        *out_ptr(onset, "onset")? = hit.map_or(f64::NAN, |p| p.value());
        Ok(())
    })
}

/// Runs a sweep over `grid` probabilities from 0 to 1 inclusive, with and
/// without `code_kind`.
///
/// # Safety
/// `out` is null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qec_sweep_run(
    channel_kind: u32,
    family_kind: u32,
    alpha: f64,
    kappa: f64,
    code_kind: u32,
    grid: usize,
    out: *mut *mut QecSweep,
) -> QecStatus {
    guard(|| {
        let slot = out_ptr(out, "out")?;
        let mut config = RunConfig::sweep(
            channel(channel_kind)?,
            family(family_kind)?,
            alpha,
            code(code_kind)?,
        );
        config.kappa = kappa;
        config.grid_size = grid;
        let records = run_sweep(&config)?;
        *slot = Box::into_raw(Box::new(QecSweep { config, records }));
        Ok(())
    })
}

/// Number of records in a sweep; 0 for null.
///
/// # Safety
/// `sweep` is null or came from `qec_sweep_run` and has not been freed.
#[no_mangle]
pub unsafe extern "C" fn qec_sweep_len(sweep: *const QecSweep) -> usize {
    // SAFETY: null or a pointer from `qec_sweep_run`.
    unsafe { sweep.as_ref() }.map_or(0, |s| s.records.len())
}

/// Copies record `index` into `out`.
///
/// # Safety
/// `sweep` is null or live; `out` is null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qec_sweep_get(
    sweep: *const QecSweep,
    index: usize,
    out: *mut QecSweepRecord,
) -> QecStatus {
    guard(|| {
        let s = non_null(sweep, "sweep")?;
        let r = s.records.get(index).ok_or_else(|| {
            invalid(format!(
                "index {index} out of range for {} records",
                s.records.len()
            ))
        })?;
        *out_ptr(out, "out")? = QecSweepRecord {
            p: r.p,
            c_unc: r.c_unc,
            c_cor: r.c_cor,
            f_unc: r.f_unc,
            f_cor: r.f_cor,
        };
        Ok(())
    })
}

/// Writes the sweep to `path` as CSV (`json == false`) or JSON, in the same
/// layout as the command-line tool.
///
/// # Safety
/// `sweep` is null or live; `path` is null or a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qec_sweep_write(
    sweep: *const QecSweep,
    path: *const c_char,
    json: bool,
) -> QecStatus {
    guard(|| {
        let s = non_null(sweep, "sweep")?;
        non_null(path, "path")?;
        // SAFETY: `path` is a NUL-terminated string.
        let path = unsafe { CStr::from_ptr(path) }
            .to_str()
            .map_err(|_| invalid("path is not valid UTF-8"))?;
        let mut config = s.config.clone();
        config.format = if json {
            OutputFormat::Json
        } else {
            OutputFormat::Csv
        };
        write_output(&PathBuf::from(path), &render_sweep(&config, &s.records))?;
        Ok(())
    })
}

/// Releases a sweep; null is ignored.
///
/// # Safety
/// `sweep` is null or came from `qec_sweep_run` and has not been freed.
#[no_mangle]
pub unsafe extern "C" fn qec_sweep_free(sweep: *mut QecSweep) {
    if !sweep.is_null() {
        // SAFETY: the pointer came from `qec_sweep_run` and is freed once.
        drop(unsafe { Box::from_raw(sweep) });
    }
}
