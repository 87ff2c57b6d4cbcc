//! C ABI over `hoslab-core`.
//!
//! Objects are opaque heap handles created by `*_new` functions and released
//! by the matching `*_free`. Every fallible call returns a [`HoslabStatus`];
//! the message of the most recent failure on the calling thread is available
//! through [`hoslab_last_error`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hoslab_core::evolution::{evolve, SolverConfig};
use hoslab_core::i_method::{self, IOperatorSpec};
use hoslab_core::spectral::{lp_norm, sobolev_norm};
use hoslab_core::{Complex64, Error, Field, GridSpec};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HoslabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    LengthMismatch = 3,
    GridMismatch = 4,
    BlowUp = 5,
    Numerical = 6,
    Panic = 7,
}

/// Periodic grid `[−L, L)^d` with `n` points per axis and dispersion order `k`.
pub struct HoslabGrid(GridSpec);

/// Complex field sampled on a grid.
pub struct HoslabField(Field);

/// Split-step solver settings.
pub struct HoslabSolver(SolverConfig);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HoslabStatus {
    match e {
        Error::LengthMismatch { .. } => HoslabStatus::LengthMismatch,
        Error::GridMismatch => HoslabStatus::GridMismatch,
        Error::BlowUp { .. } => HoslabStatus::BlowUp,
        Error::NonFiniteSymbol { .. } | Error::NonzeroMean | Error::ZeroField | Error::EmptyShell { .. } => {
            HoslabStatus::Numerical
        }
        _ => HoslabStatus::InvalidArgument,
    }
}

/// Runs `body`, translating errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), (HoslabStatus, String)>) -> HoslabStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => HoslabStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            HoslabStatus::Panic
        }
    }
}

fn core(e: Error) -> (HoslabStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (HoslabStatus, String) {
    (HoslabStatus::NullPointer, format!("{what} is null"))
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, (HoslabStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), (HoslabStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL, or
/// 0 when no error has been recorded.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn hoslab_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes();
            if !buf.is_null() && len > 0 {
                let n = bytes.len().min(len - 1);
                ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
            bytes.len()
        }
    })
}

/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn hoslab_grid_new(d: usize, k: u32, half_period: f64, n: usize, out: *mut *mut HoslabGrid) -> HoslabStatus {
    guard(|| {
        let g = GridSpec::new(d, k, half_period, n).map_err(core)?;
        put(out, Box::into_raw(Box::new(HoslabGrid(g))), "out")
    })
}

/// # Safety
/// `grid` must be null or a handle from [`hoslab_grid_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hoslab_grid_free(grid: *mut HoslabGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Number of grid points `n^d`, or 0 for a null handle.
///
/// # Safety
/// `grid` must be null or a live grid handle.
#[no_mangle]
pub unsafe extern "C" fn hoslab_grid_len(grid: *const HoslabGrid) -> usize {
    grid.as_ref().map_or(0, |g| g.0.len())
}

/// Largest resolved frequency `πn/(2L)`, or NaN for a null handle.
///
/// # Safety
/// `grid` must be null or a live grid handle.
#[no_mangle]
pub unsafe extern "C" fn hoslab_grid_nyquist(grid: *const HoslabGrid) -> f64 {
    grid.as_ref().map_or(f64::NAN, |g| g.0.nyquist())
}

/// Builds a field from row-major real and imaginary parts of length `len`.
///
/// # Safety
/// `re` and `im` must be valid for `len` reads; `out` for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn hoslab_field_new(
    grid: *const HoslabGrid,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut HoslabField,
) -> HoslabStatus {
    guard(|| {
        let g = get(grid, "grid")?;
        if re.is_null() || im.is_null() {
            return Err(null("values"));
        }
        let (re, im) = (std::slice::from_raw_parts(re, len), std::slice::from_raw_parts(im, len));
        let values = re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let f = Field::new(g.0, values).map_err(core)?;
        put(out, Box::into_raw(Box::new(HoslabField(f))), "out")
    })
}

/// # Safety
/// `field` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hoslab_field_free(field: *mut HoslabField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Copies the samples into `re` and `im`, which must hold exactly the grid length.
///
/// # Safety
/// `re` and `im` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn hoslab_field_values(field: *const HoslabField, re: *mut f64, im: *mut f64, len: usize) -> HoslabStatus {
    guard(|| {
        let f = get(field, "field")?;
        if re.is_null() || im.is_null() {
            return Err(null("output buffer"));
        }
        let values = f.0.values();
        if values.len() != len {
            return Err(core(Error::LengthMismatch { expected: values.len(), found: len }));
        }
        for (i, v) in values.iter().enumerate() {
            *re.add(i) = v.re;
            *im.add(i) = v.im;
        }
        Ok(())
    })
}

/// `‖f‖_{L^p}`; pass `INFINITY` for the supremum norm.
///
/// # Safety
/// `field` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn hoslab_field_lp_norm(field: *const HoslabField, p: f64, out: *mut f64) -> HoslabStatus {
    guard(|| put(out, lp_norm(&get(field, "field")?.0, p).map_err(core)?, "out"))
}

/// `‖f‖_{H^γ}`, or `‖f‖_{Ḣ^γ}` when `homogeneous` is true.
///
/// # Safety
/// `field` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn hoslab_field_sobolev_norm(field: *const HoslabField, gamma: f64, homogeneous: bool, out: *mut f64) -> HoslabStatus {
    guard(|| put(out, sobolev_norm(&get(field, "field")?.0, gamma, homogeneous).map_err(core)?, "out"))
}

/// Conserved energy `½‖u‖²_{Ḣ^{k/2}} + ¼‖u‖⁴_{L⁴}`.
///
/// # Safety
/// `field` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn hoslab_field_energy(field: *const HoslabField, out: *mut f64) -> HoslabStatus {
    guard(|| put(out, i_method::energy(&get(field, "field")?.0).total, "out"))
}

/// Modified energy `E(I_N u)` with I-operator order `gamma`.
///
/// # Safety
/// `field` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn hoslab_field_modified_energy(field: *const HoslabField, n: f64, gamma: f64, out: *mut f64) -> HoslabStatus {
    guard(|| {
        let f = get(field, "field")?;
        let spec = IOperatorSpec::new(n, gamma, f.0.grid().k()).map_err(core)?;
        put(out, i_method::modified_energy(&f.0, &spec).total, "out")
    })
}

/// Solver with step `dt`, final time `horizon`, dealiasing on.
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn hoslab_solver_new(dt: f64, horizon: f64, out: *mut *mut HoslabSolver) -> HoslabStatus {
    guard(|| {
        let cfg = SolverConfig::new(dt, horizon);
        cfg.validate().map_err(core)?;
        put(out, Box::into_raw(Box::new(HoslabSolver(cfg))), "out")
    })
}

/// # Safety
/// `solver` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hoslab_solver_free(solver: *mut HoslabSolver) {
    if !solver.is_null() {
        drop(Box::from_raw(solver));
    }
}

/// Toggles dealiasing, the nonlinear term and the dispersive term.
///
/// # Safety
/// `solver` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hoslab_solver_configure(solver: *mut HoslabSolver, dealias: bool, nonlinearity: bool, dispersion: bool) -> HoslabStatus {
    guard(|| {
        let s = solver.as_mut().ok_or_else(|| null("solver"))?;
        s.0.dealias = dealias;
        s.0.nonlinearity_on = nonlinearity;
        s.0.dispersion_on = dispersion;
        Ok(())
    })
}

/// Evolves `field` to the solver horizon and returns a new field handle.
///
/// # Safety
/// `solver` and `field` must be live handles; `out` valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn hoslab_evolve(solver: *const HoslabSolver, field: *const HoslabField, out: *mut *mut HoslabField) -> HoslabStatus {
    guard(|| {
        let s = get(solver, "solver")?;
        let f = get(field, "field")?;
        let cfg = SolverConfig { record_every: usize::MAX, ..s.0.clone() };
        let ev = evolve(&f.0, &cfg, &[]).map_err(core)?;
        put(out, Box::into_raw(Box::new(HoslabField(ev.final_field))), "out")
    })
}

/// Exact threshold exponents for dispersion order `k ≥ 3`, as numerator and
/// denominator pairs in the order `γ(k)`, `γ₀(k)`, `α(k)`.
///
/// # Safety
/// `out` must be valid for six writes.
#[no_mangle]
pub unsafe extern "C" fn hoslab_thresholds(k: u32, out: *mut i64) -> HoslabStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let t = i_method::thresholds(k).map_err(core)?;
        for (i, r) in [t.gamma, t.gamma0, t.alpha].iter().enumerate() {
            *out.add(2 * i) = *r.numer();
            *out.add(2 * i + 1) = *r.denom();
        }
        Ok(())
    })
}
