//! C ABI over `sshcav`.
//!
//! Every entry point returns an [`SshcavStatus`]; results are written through
//! caller-provided out-pointers, which are left untouched on failure. The
//! message for the most recent failure on the calling thread is available from
//! [`sshcav_last_error_message`]. Panics never cross the boundary.
//!
//! Cavity quantities go through an opaque [`SshcavModel`] handle that caches
//! the Brillouin-zone tables; create it with [`sshcav_model_new`] and release
//! it with [`sshcav_model_free`].

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use nalgebra::DMatrix;
use num_complex::Complex64;
use sshcav::biphoton::{schmidt_decompose, BiphotonState};
use sshcav::cavity::{CavityModel, CavityParams};
use sshcav::kerr::{kerr_from_fit, solve_omega_ladder};
use sshcav::model::{band_gap, zak_phase, SshParams};
use sshcav::numerics::FrequencyGrid;
use sshcav::vertex::{gamma4_direct, InteractionKernel};
use sshcav::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SshcavStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ComputationFailed = 3,
    Panic = 4,
}

/// Opaque cavity model handle.
pub struct SshcavModel {
    inner: CavityModel,
}

/// Kerr fit of the self-consistent photon ladder. Complex values are split
/// into real and imaginary parts.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SshcavKerr {
    pub omega0_re: f64,
    pub omega0_im: f64,
    pub u_re: f64,
    pub u_im: f64,
    pub u_prime_re: f64,
    pub u_prime_im: f64,
    pub fit_residual: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn classify(err: &Error) -> SshcavStatus {
    match err {
        Error::InvalidParameter(_)
        | Error::CriticalPoint { .. }
        | Error::GaplessPoint { .. }
        | Error::GridTooNarrow { .. }
        | Error::GridMismatch
        | Error::ZeroRange
        | Error::BelowThreshold(_)
        | Error::NonPositiveFrequency(_) => SshcavStatus::InvalidArgument,
        _ => SshcavStatus::ComputationFailed,
    }
}

struct Fail(SshcavStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(classify(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(SshcavStatus::NullPointer, format!("{what} is null"))
}

/// Run `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SshcavStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SshcavStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            SshcavStatus::Panic
        }
    }
}

/// Write through an out-pointer, rejecting null.
unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn model_ref<'a>(m: *const SshcavModel) -> Result<&'a CavityModel, Fail> {
    m.as_ref().map(|m| &m.inner).ok_or_else(|| null("model"))
}

fn ssh(t1: f64, t2: f64) -> Result<SshParams, Fail> {
    Ok(SshParams::new(t1, t2)?)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sshcav_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length excluding the NUL, so
/// a caller can size a buffer by passing `len = 0`.
///
/// # Safety
/// `buf` must be valid for `len` bytes, or null when `len` is 0.
#[no_mangle]
pub unsafe extern "C" fn sshcav_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            buf.add(n).write(0);
        }
        msg.len()
    })
}

/// `Delta(k) = 2 |t1 + t2 e^{-ik}|`.
///
/// # Safety
/// `out` must be a valid pointer to a `double`.
#[no_mangle]
pub unsafe extern "C" fn sshcav_band_gap(t1: f64, t2: f64, k: f64, out: *mut f64) -> SshcavStatus {
    guard(|| {
        let p = ssh(t1, t2)?;
        put(out, band_gap(k, &p), "out")
    })
}

/// Zak phase of the lower band, folded to `[0, 2 pi)`.
///
/// # Safety
/// `out` must be a valid pointer to a `double`.
#[no_mangle]
pub unsafe extern "C" fn sshcav_zak_phase(t1: f64, t2: f64, n_k: usize, out: *mut f64) -> SshcavStatus {
    guard(|| {
        let p = ssh(t1, t2)?;
        put(out, zak_phase(&p, n_k)?, "out")
    })
}

/// Build a cavity model; on success `*out` owns a new handle.
///
/// # Safety
/// `out` must be a valid pointer to a handle pointer.
#[no_mangle]
pub unsafe extern "C" fn sshcav_model_new(
    t1: f64,
    t2: f64,
    omega_c: f64,
    mass_beta: f64,
    g: f64,
    eta: f64,
    n_k: usize,
    out: *mut *mut SshcavModel,
) -> SshcavStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let cavity = CavityParams {
            omega_c,
            mass_beta,
            g,
            eta,
        };
        let inner = CavityModel::new(ssh(t1, t2)?, cavity, n_k)?;
        put(out, Box::into_raw(Box::new(SshcavModel { inner })), "out")
    })
}

/// Release a handle from [`sshcav_model_new`]. Null is a no-op.
///
/// # Safety
/// `model` must be null or a live handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn sshcav_model_free(model: *mut SshcavModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Photon self-energy `Sigma(omega, n) = (n + 1) Sigma(omega)`.
///
/// # Safety
/// `model` must be a live handle; `re` and `im` valid `double` pointers.
#[no_mangle]
pub unsafe extern "C" fn sshcav_model_self_energy(
    model: *const SshcavModel,
    omega: f64,
    photon_number: u32,
    re: *mut f64,
    im: *mut f64,
) -> SshcavStatus {
    guard(|| {
        let m = model_ref(model)?;
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let s = m.self_energy_n(omega, photon_number);
        put(re, s.re, "re")?;
        put(im, s.im, "im")
    })
}

/// Photon spectral function `A(omega, q)`.
///
/// # Safety
/// `model` must be a live handle; `out` a valid `double` pointer.
#[no_mangle]
pub unsafe extern "C" fn sshcav_model_spectral(
    model: *const SshcavModel,
    omega: f64,
    q: f64,
    out: *mut f64,
) -> SshcavStatus {
    guard(|| {
        let m = model_ref(model)?;
        put(out, m.spectral(omega, q), "out")
    })
}

/// Solve the photon ladder for `n = 0..=n_max` and fit the Kerr shift.
///
/// # Safety
/// `model` must be a live handle; `out` a valid [`SshcavKerr`] pointer.
#[no_mangle]
pub unsafe extern "C" fn sshcav_model_kerr(
    model: *const SshcavModel,
    n_max: u32,
    tol: f64,
    max_iter: usize,
    out: *mut SshcavKerr,
) -> SshcavStatus {
    guard(|| {
        let m = model_ref(model)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let k = kerr_from_fit(&solve_omega_ladder(m, n_max, tol, max_iter)?)?;
        put(
            out,
            SshcavKerr {
                omega0_re: k.omega0.re,
                omega0_im: k.omega0.im,
                u_re: k.u.re,
                u_im: k.u.im,
                u_prime_re: k.u_prime.re,
                u_prime_im: k.u_prime.im,
                fit_residual: k.fit_residual,
            },
            "out",
        )
    })
}

/// Four-photon vertex by direct Brillouin-zone summation on `n_k2d` points
/// per axis.
///
/// # Safety
/// `re` and `im` must be valid `double` pointers.
#[no_mangle]
pub unsafe extern "C" fn sshcav_gamma4_direct(
    t1: f64,
    t2: f64,
    eta: f64,
    v0: f64,
    zeta: f64,
    n_k2d: usize,
    omega1: f64,
    omega2: f64,
    re: *mut f64,
    im: *mut f64,
) -> SshcavStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let g = gamma4_direct(omega1, omega2, &ssh(t1, t2)?, eta, &InteractionKernel { v0, zeta }, n_k2d)?;
        put(re, g.re, "re")?;
        put(im, g.im, "im")
    })
}

/// Entanglement entropy (nats) of an `n x n` two-photon amplitude stored
/// row-major on the grid `[start, stop]`. `im` may be null for a real state.
///
/// # Safety
/// `re` (and `im` if non-null) must point to `n * n` doubles; `out` must be
/// a valid `double` pointer.
#[no_mangle]
pub unsafe extern "C" fn sshcav_schmidt_entropy(
    re: *const f64,
    im: *const f64,
    n: usize,
    start: f64,
    stop: f64,
    out: *mut f64,
) -> SshcavStatus {
    guard(|| {
        if re.is_null() {
            return Err(null("re"));
        }
        let len = n
            .checked_mul(n)
            .ok_or_else(|| Fail(SshcavStatus::InvalidArgument, format!("state size {n} overflows")))?;
        let re = std::slice::from_raw_parts(re, len);
        let im = (!im.is_null()).then(|| std::slice::from_raw_parts(im, len));
        let amp = DMatrix::from_fn(n, n, |i, j| {
            Complex64::new(re[i * n + j], im.map_or(0.0, |v| v[i * n + j]))
        });
        let state = BiphotonState::new(FrequencyGrid::new(start, stop, n)?, amp)?;
        put(out, schmidt_decompose(&state)?.entropy, "out")
    })
}
