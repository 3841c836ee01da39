//! C interface to `qfs-core`.
//!
//! A surface is created from a JSON configuration and handled through an
//! opaque `QfsSurface*`. Every function returns a [`QfsStatus`]; on failure
//! the message is available from [`qfs_last_error`]. Outputs are written
//! through caller-provided pointers and complex numbers are laid out as
//! consecutive `(re, im)` pairs of doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qfs_core::cocycle::{darboux_residual, symplectic_gram};
use qfs_core::config::{parse_config, SurfaceConfig};
use qfs_core::surface::{FnCoordinates, Representation, Surface};
use qfs_core::{Error, C64};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QfsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed configuration or coordinates.
    InputError = 3,
    /// Numerical failure, such as a non-loxodromic element.
    NumericError = 4,
    /// Coordinates too close to a branch cut.
    BranchFailure = 5,
    IndexOutOfRange = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Opaque surface handle.
pub struct QfsSurface {
    config: SurfaceConfig,
    surface: Surface,
    rep: Representation,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(e: &Error) -> QfsStatus {
    match e {
        Error::BranchFailure(_) => QfsStatus::BranchFailure,
        e if e.is_input_error() => QfsStatus::InputError,
        _ => QfsStatus::NumericError,
    }
}

fn guard(f: impl FnOnce() -> Result<(), QfsStatus>) -> QfsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QfsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            QfsStatus::Panic
        }
    }
}

fn fail(e: Error) -> QfsStatus {
    set_error(e.to_string());
    status_of(&e)
}

unsafe fn handle<'a>(s: *const QfsSurface) -> Result<&'a QfsSurface, QfsStatus> {
    s.as_ref().ok_or_else(|| {
        set_error("null surface handle");
        QfsStatus::NullPointer
    })
}

fn non_null<T>(p: *const T) -> Result<(), QfsStatus> {
    if p.is_null() {
        set_error("null output pointer");
        Err(QfsStatus::NullPointer)
    } else {
        Ok(())
    }
}

unsafe fn write_complex(out: *mut f64, values: &[C64]) {
    for (k, z) in values.iter().enumerate() {
        *out.add(2 * k) = z.re;
        *out.add(2 * k + 1) = z.im;
    }
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`) and returns the full message length in bytes.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn qfs_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Parses a JSON configuration and builds its holonomy. On success `*out`
/// owns a new handle to be released with [`qfs_surface_free`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qfs_surface_from_json(json: *const c_char, out: *mut *mut QfsSurface) -> QfsStatus {
    guard(|| {
        non_null(json)?;
        non_null(out)?;
        *out = ptr::null_mut();
        let text = CStr::from_ptr(json).to_str().map_err(|_| {
            set_error("configuration is not valid UTF-8");
            QfsStatus::InvalidUtf8
        })?;
        let config = parse_config(text).map_err(fail)?;
        let surface = Surface::new(config.graph().map_err(fail)?).map_err(fail)?;
        let rep = surface.holonomy(&config.fn_).map_err(fail)?;
        *out = Box::into_raw(Box::new(QfsSurface { config, surface, rep }));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a handle from [`qfs_surface_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qfs_surface_free(s: *mut QfsSurface) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of decomposition curves `N = 3g − 3`.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qfs_surface_num_curves(s: *const QfsSurface, out: *mut usize) -> QfsStatus {
    guard(|| {
        let s = handle(s)?;
        non_null(out)?;
        *out = s.config.gluings.len();
        Ok(())
    })
}

/// Number of standard generators `2g`.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qfs_surface_num_generators(s: *const QfsSurface, out: *mut usize) -> QfsStatus {
    guard(|| {
        let s = handle(s)?;
        non_null(out)?;
        *out = s.rep.images().len();
        Ok(())
    })
}

/// Replaces the Fenchel–Nielsen coordinates and rebuilds the holonomy.
/// `l` and `tau` each hold `n` complex numbers. On failure the handle keeps
/// its previous coordinates.
///
/// # Safety
/// `s` must be a live handle; `l` and `tau` must be valid for `2n` doubles.
#[no_mangle]
pub unsafe extern "C" fn qfs_surface_set_fn(s: *mut QfsSurface, l: *const f64, tau: *const f64, n: usize) -> QfsStatus {
    guard(|| {
        let s = s.as_mut().ok_or_else(|| {
            set_error("null surface handle");
            QfsStatus::NullPointer
        })?;
        non_null(l)?;
        non_null(tau)?;
        if n != s.config.gluings.len() {
            set_error(format!("expected {} curves, got {n}", s.config.gluings.len()));
            return Err(QfsStatus::InputError);
        }
        let read = |p: *const f64| (0..n).map(|k| C64::new(*p.add(2 * k), *p.add(2 * k + 1))).collect::<Vec<_>>();
        let fn_ = FnCoordinates::new(read(l), read(tau)).map_err(fail)?;
        let rep = s.surface.holonomy(&fn_).map_err(fail)?;
        s.config.fn_ = fn_;
        s.rep = rep;
        Ok(())
    })
}

/// Writes generator `index` as `a, b, c, d` (8 doubles).
///
/// # Safety
/// `s` must be a live handle and `out` valid for 8 doubles.
#[no_mangle]
pub unsafe extern "C" fn qfs_surface_generator(s: *const QfsSurface, index: usize, out: *mut f64) -> QfsStatus {
    guard(|| {
        let s = handle(s)?;
        non_null(out)?;
        let m = s.rep.images().get(index).ok_or_else(|| {
            set_error(format!("generator {index} out of range"));
            QfsStatus::IndexOutOfRange
        })?;
        write_complex(out, &m.entries());
        Ok(())
    })
}

/// Distance of the relator image from the identity.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qfs_surface_relator_residual(s: *const QfsSurface, out: *mut f64) -> QfsStatus {
    guard(|| {
        let s = handle(s)?;
        non_null(out)?;
        *out = s.rep.relator_residual();
        Ok(())
    })
}

/// Complex lengths of the decomposition curves recovered from the
/// holonomy (`N` complex numbers).
///
/// # Safety
/// `s` must be a live handle and `out` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qfs_surface_lengths(s: *const QfsSurface, out: *mut f64, len: usize) -> QfsStatus {
    guard(|| {
        let s = handle(s)?;
        non_null(out)?;
        let ls: Vec<C64> = s
            .rep
            .decomposition_lengths()
            .map_err(fail)?
            .iter()
            .map(|l| l.value())
            .collect();
        if len < 2 * ls.len() {
            set_error(format!("buffer holds {len} doubles, need {}", 2 * ls.len()));
            return Err(QfsStatus::BufferTooSmall);
        }
        write_complex(out, &ls);
        Ok(())
    })
}

/// Antisymmetrized Gram matrix of the Goldman pairing in the basis
/// `(∂/∂l₁ … ∂/∂l_N, ∂/∂τ₁ … ∂/∂τ_N)`, row-major, `(2N)²` complex
/// entries. `h ≤ 0` selects the configured finite-difference step.
///
/// # Safety
/// `s` must be a live handle and `out` valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qfs_surface_gram(s: *const QfsSurface, h: f64, out: *mut f64, len: usize) -> QfsStatus {
    guard(|| {
        let s = handle(s)?;
        non_null(out)?;
        let dim = 2 * s.config.gluings.len();
        if len < 2 * dim * dim {
            set_error(format!("buffer holds {len} doubles, need {}", 2 * dim * dim));
            return Err(QfsStatus::BufferTooSmall);
        }
        let h = if h > 0.0 { h } else { s.config.options.fd_step };
        let g = symplectic_gram(&s.surface, &s.config.fn_, h).map_err(fail)?;
        let flat: Vec<C64> = g.matrix.iter().flatten().copied().collect();
        write_complex(out, &flat);
        Ok(())
    })
}

/// `‖Gram − J‖_max`, together with the least-squares scale `c` of `J`
/// (written to `scale` as two doubles when non-null).
///
/// # Safety
/// `s` must be a live handle, `out` a valid pointer and `scale` null or
/// valid for 2 doubles.
#[no_mangle]
pub unsafe extern "C" fn qfs_surface_darboux_residual(
    s: *const QfsSurface,
    h: f64,
    out: *mut f64,
    scale: *mut f64,
) -> QfsStatus {
    guard(|| {
        let s = handle(s)?;
        non_null(out)?;
        let h = if h > 0.0 { h } else { s.config.options.fd_step };
        let g = symplectic_gram(&s.surface, &s.config.fn_, h).map_err(fail)?;
        *out = darboux_residual(&g);
        if !scale.is_null() {
            write_complex(scale, &[g.fitted_scale()]);
        }
        Ok(())
    })
}
