//! C ABI over `wellprobe`.
//!
//! Every function returns a [`WpStatus`] and writes its result through an
//! out-pointer. On failure the out-pointer is left untouched and
//! [`wp_last_error`] returns a message for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wellprobe::dynamics::{self, EvolvedState};
use wellprobe::entangled::{self, GhzSpec};
use wellprobe::{inference, metrology, EigenIndex, Error, ProbeState, WellConfig};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WpStatus {
    Ok = 0,
    InvalidParameter = 1,
    Domain = 2,
    Quadrature = 3,
    FitResidual = 4,
    FlatLikelihood = 5,
    NullPointer = 6,
    Internal = 7,
    Panic = 8,
}

/// Opaque well configuration (width and series truncation).
pub struct WpWell(WellConfig);

/// Opaque probe state.
pub struct WpState(ProbeState);

/// Summary of a Monte Carlo Cramér-Rao experiment.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct WpCrlbResult {
    pub mean: f64,
    pub variance: f64,
    /// `M · Var · F(a)`.
    pub crlb_ratio: f64,
    pub fisher: f64,
    pub measurements: usize,
    pub replicas: usize,
    pub boundary_hits: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> WpStatus {
    match err {
        Error::InvalidParameter(_) => WpStatus::InvalidParameter,
        Error::Domain { .. } => WpStatus::Domain,
        Error::Quadrature { .. } => WpStatus::Quadrature,
        Error::FitResidual { .. } => WpStatus::FitResidual,
        Error::FlatLikelihood => WpStatus::FlatLikelihood,
        Error::Internal(_) => WpStatus::Internal,
    }
}

enum Failure {
    Core(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn guard<T>(out: *mut T, f: impl FnOnce() -> Result<T, Failure>) -> WpStatus {
    if out.is_null() {
        set_error("output pointer is null".into());
        return WpStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(value)) => {
            unsafe { out.write(value) };
            WpStatus::Ok
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("{what} is null"));
            WpStatus::NullPointer
        }
        Err(_) => {
            set_error("panic inside wellprobe".into());
            WpStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

fn index(n: u32) -> Result<EigenIndex, Failure> {
    Ok(EigenIndex::new(n)?)
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn wp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

// Handles

/// Creates a well of the given width. `truncation = 0` selects the default.
#[no_mangle]
pub extern "C" fn wp_well_new(width: f64, truncation: usize, out: *mut *mut WpWell) -> WpStatus {
    guard(out, || {
        let cfg = if truncation == 0 {
            WellConfig::with_width(width)?
        } else {
            WellConfig::new(width, truncation)?
        };
        Ok(Box::into_raw(Box::new(WpWell(cfg))))
    })
}

/// # Safety
/// `well` must come from [`wp_well_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn wp_well_free(well: *mut WpWell) {
    if !well.is_null() {
        drop(Box::from_raw(well));
    }
}

fn new_state(out: *mut *mut WpState, f: impl FnOnce() -> Result<ProbeState, Failure>) -> WpStatus {
    guard(out, || Ok(Box::into_raw(Box::new(WpState(f()?)))))
}

#[no_mangle]
pub extern "C" fn wp_state_eigen(n: u32, out: *mut *mut WpState) -> WpStatus {
    new_state(out, || Ok(ProbeState::eigen(n)?))
}

/// `cos α |ψ_n⟩ + sin α |ψ_m⟩`.
#[no_mangle]
pub extern "C" fn wp_state_superposition(n: u32, m: u32, alpha: f64, out: *mut *mut WpState) -> WpStatus {
    new_state(out, || Ok(ProbeState::superposition(n, m, alpha)?))
}

#[no_mangle]
pub extern "C" fn wp_state_polynomial(p: u32, out: *mut *mut WpState) -> WpStatus {
    new_state(out, || Ok(ProbeState::polynomial(p)?))
}

#[no_mangle]
pub extern "C" fn wp_state_parabolic(out: *mut *mut WpState) -> WpStatus {
    new_state(out, || Ok(ProbeState::Parabolic))
}

/// Unit-norm real amplitudes `f_1 … f_len` in the eigenbasis.
///
/// # Safety
/// `coefficients` must point to `len` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn wp_state_custom(coefficients: *const f64, len: usize, out: *mut *mut WpState) -> WpStatus {
    new_state(out, || {
        if coefficients.is_null() {
            return Err(Failure::Null("coefficients"));
        }
        let v = std::slice::from_raw_parts(coefficients, len).to_vec();
        Ok(ProbeState::custom(v)?)
    })
}

/// # Safety
/// `state` must come from a `wp_state_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn wp_state_free(state: *mut WpState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

// Static metrology

type StaticFn = fn(&ProbeState, &WellConfig) -> wellprobe::Result<f64>;

unsafe fn static_quantity(f: StaticFn, state: *const WpState, well: *const WpWell, out: *mut f64) -> WpStatus {
    guard(out, || {
        let s = deref(state, "state")?;
        let w = deref(well, "well")?;
        Ok(f(&s.0, &w.0)?)
    })
}

/// QFI `H(a)` of a stationary probe.
///
/// # Safety
/// Handles must be live or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_qfi_static(state: *const WpState, well: *const WpWell, out: *mut f64) -> WpStatus {
    static_quantity(metrology::qfi_static, state, well, out)
}

/// Classical FI of a position measurement.
///
/// # Safety
/// Handles must be live or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_fi_position(state: *const WpState, well: *const WpWell, out: *mut f64) -> WpStatus {
    static_quantity(metrology::fi_position, state, well, out)
}

/// Classical FI of an energy measurement.
///
/// # Safety
/// Handles must be live or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_fi_energy(state: *const WpState, well: *const WpWell, out: *mut f64) -> WpStatus {
    static_quantity(metrology::fi_energy, state, well, out)
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_qsnr_eigen(n: u32, out: *mut f64) -> WpStatus {
    guard(out, || Ok(metrology::qsnr_eigen(index(n)?)))
}

/// # Safety
/// `well` must be live or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_qsnr_superposition(
    n: u32,
    m: u32,
    alpha: f64,
    well: *const WpWell,
    out: *mut f64,
) -> WpStatus {
    guard(out, || {
        let w = deref(well, "well")?;
        Ok(metrology::qsnr_superposition(index(n)?, index(m)?, alpha, &w.0)?)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_qsnr_polynomial(p: u32, out: *mut f64) -> WpStatus {
    guard(out, || Ok(metrology::qsnr_polynomial(p)?))
}

// Dynamics

/// QFI after free evolution for time `t`.
///
/// # Safety
/// Handles must be live or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_qfi_time(state: *const WpState, well: *const WpWell, t: f64, out: *mut f64) -> WpStatus {
    guard(out, || {
        let s = deref(state, "state")?;
        let w = deref(well, "well")?;
        Ok(dynamics::qfi_time(&EvolvedState::new(s.0.clone(), t, w.0)?)?)
    })
}

/// Time-dependent QFI of the parabolic state from its closed-form series.
///
/// # Safety
/// `well` must be live or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_qfi_parabolic_time(well: *const WpWell, t: f64, out: *mut f64) -> WpStatus {
    guard(out, || {
        let w = deref(well, "well")?;
        Ok(dynamics::qfi_parabolic_time(&w.0, t)?)
    })
}

// Entangled probes

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_qsnr_two_eigen(n1: u32, n2: u32, out: *mut f64) -> WpStatus {
    guard(out, || Ok(entangled::qsnr_two_eigen(index(n1)?, index(n2)?)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_qsnr_two_polynomial(p1: u32, p2: u32, out: *mut f64) -> WpStatus {
    guard(out, || Ok(entangled::qsnr_two_polynomial(p1, p2)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_qsnr_w3(n1: u32, n2: u32, out: *mut f64) -> WpStatus {
    guard(out, || Ok(entangled::qsnr_w3(index(n1)?, index(n2)?)?))
}

/// GHZ-like probe `|n_1 … n_N⟩ + |m_1 … m_N⟩` where `m` permutes `n`.
///
/// # Safety
/// `n` and `m` must each point to `len` readable integers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_qsnr_ghz(n: *const u32, m: *const u32, len: usize, out: *mut f64) -> WpStatus {
    guard(out, || {
        if n.is_null() {
            return Err(Failure::Null("n"));
        }
        if m.is_null() {
            return Err(Failure::Null("m"));
        }
        let read = |p: *const u32| -> Result<Vec<EigenIndex>, Failure> {
            std::slice::from_raw_parts(p, len).iter().map(|&k| index(k)).collect()
        };
        let spec = GhzSpec::new(read(n)?, read(m)?)?;
        Ok(entangled::qsnr_ghz(&spec))
    })
}

// Inference

/// Runs `replicas` seeded position-measurement experiments of `m` outcomes
/// each and compares the MLE variance with the Cramér-Rao bound.
///
/// # Safety
/// Handles must be live or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wp_crlb_experiment(
    state: *const WpState,
    well: *const WpWell,
    m: usize,
    replicas: usize,
    seed: u64,
    out: *mut WpCrlbResult,
) -> WpStatus {
    guard(out, || {
        let s = deref(state, "state")?;
        let w = deref(well, "well")?;
        let r = inference::crlb_experiment(&s.0, &w.0, m, replicas, seed)?;
        Ok(WpCrlbResult {
            mean: r.mean,
            variance: r.variance,
            crlb_ratio: r.crlb_ratio,
            fisher: r.fisher,
            measurements: r.measurements,
            replicas: r.estimates.len(),
            boundary_hits: r.boundary_hits,
        })
    })
}
