//! C ABI over `catenoid-lab`.
//!
//! Every entry point returns a [`ClStatus`]; on failure the message is
//! available from [`cl_last_error`] on the same thread. Geometry lives behind
//! the opaque [`ClGeometry`] handle, released with [`cl_geometry_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use catenoid_lab::asymptotics;
use catenoid_lab::boundary_geometry::{self, CatenoidGeometry};
use catenoid_lab::conditions;
use catenoid_lab::robin_spectrum::{self, ModeSector, Parity};
use catenoid_lab::{LabError, ParamA, Tolerances};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClStatus {
    Ok = 0,
    NullPointer = 1,
    /// `a <= 1/2` or not finite.
    Domain = 2,
    InvalidInput = 3,
    /// A solver, quadrature or root finder failed.
    Numerical = 4,
    /// A Rust panic was caught at the boundary.
    Panic = 5,
}

/// Opaque solved geometry.
pub struct ClGeometry {
    inner: CatenoidGeometry,
}

/// Scalar summary of a [`ClGeometry`].
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ClGeometryView {
    pub a: f64,
    pub s0: f64,
    pub phi_s0: f64,
    pub r: f64,
    pub b_s0: f64,
    pub coth_r: f64,
    pub h: f64,
    pub y: f64,
    pub g_margin: f64,
    pub g_margin_alt: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ClConditions {
    pub a: f64,
    pub h: f64,
    pub h_prime: f64,
    pub y: f64,
    pub g_margin: f64,
    pub g_margin_alt: f64,
    pub e_value: f64,
    pub fprime_value: f64,
    pub phi_s0: f64,
    pub mode0_min_abs_mu: f64,
    pub phi_positive: bool,
    pub consistent: bool,
    pub hardy_cond1: bool,
    pub hardy_cond2: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ClIndexNullity {
    pub ind_total: u32,
    pub nul_total: u32,
    /// Upper end of the nullity range; equals `nul_total` without flags.
    pub nul_upper: u32,
    pub truncation_k: u32,
    pub truncation_margin: f64,
    pub counts_agree: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ClConstants {
    pub sigma_star: f64,
    pub rho_star: f64,
    pub c_star: f64,
    pub s_val: f64,
    pub c0: f64,
    pub xi1: f64,
    pub i_star: f64,
    pub d_inf: f64,
    pub gamma_quarter: f64,
}

/// Parity selector for [`cl_eigenvalues`]: 0 even, 1 odd.
pub const CL_PARITY_EVEN: u32 = 0;
pub const CL_PARITY_ODD: u32 = 1;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn root_cause(err: &LabError) -> &LabError {
    match err {
        LabError::Context { source, .. } => root_cause(source),
        other => other,
    }
}

fn status_of(err: &LabError) -> ClStatus {
    match root_cause(err) {
        LabError::Domain(_) => ClStatus::Domain,
        LabError::InvalidInput(_) => ClStatus::InvalidInput,
        _ => ClStatus::Numerical,
    }
}

/// Run `body`, translating errors and panics into status codes.
fn guarded<F: FnOnce() -> Result<(), LabError>>(body: F) -> ClStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error(String::new());
            ClStatus::Ok
        }
        Ok(Err(e)) => {
            let status = status_of(&e);
            set_last_error(e.to_string());
            status
        }
        Err(_) => {
            set_last_error("panic inside catenoid-lab".into());
            ClStatus::Panic
        }
    }
}

fn null_pointer(what: &str) -> ClStatus {
    set_last_error(format!("null pointer: {what}"));
    ClStatus::NullPointer
}

/// Static description of a status code. Never null.
#[no_mangle]
pub extern "C" fn cl_status_message(status: ClStatus) -> *const c_char {
    let text: &'static [u8] = match status {
        ClStatus::Ok => b"ok\0",
        ClStatus::NullPointer => b"null pointer argument\0",
        ClStatus::Domain => b"parameter outside a > 1/2\0",
        ClStatus::InvalidInput => b"invalid input\0",
        ClStatus::Numerical => b"numerical failure\0",
        ClStatus::Panic => b"internal panic\0",
    };
    text.as_ptr().cast()
}

/// Detail of the last failure on this thread; empty after a success. The
/// pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cl_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Solve the free-boundary problem at `a` and store a new handle in `*out`.
///
/// # Safety
/// `out` must be null or valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn cl_geometry_new(a: f64, out: *mut *mut ClGeometry) -> ClStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    // SAFETY: `out` is non-null and writable per the contract.
    unsafe { *out = ptr::null_mut() };
    guarded(|| {
        let inner = boundary_geometry::solve_s0(ParamA::new(a)?, &Tolerances::default())?;
        let handle = Box::into_raw(Box::new(ClGeometry { inner }));
        // SAFETY: as above.
        unsafe { *out = handle };
        Ok(())
    })
}

/// Release a handle from [`cl_geometry_new`]. Null is ignored.
///
/// # Safety
/// `geometry` must be null or a live handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn cl_geometry_free(geometry: *mut ClGeometry) {
    if !geometry.is_null() {
        // SAFETY: the handle came from `Box::into_raw` and is released once.
        drop(unsafe { Box::from_raw(geometry) });
    }
}

/// Copy the scalar fields of a handle.
///
/// # Safety
/// `geometry` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cl_geometry_view(geometry: *const ClGeometry, out: *mut ClGeometryView) -> ClStatus {
    if geometry.is_null() {
        return null_pointer("geometry");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    // SAFETY: both pointers are non-null and valid per the contract.
    let g = unsafe { &(*geometry).inner };
    let view = ClGeometryView {
        a: g.a,
        s0: g.s0,
        phi_s0: g.phi_s0,
        r: g.r,
        b_s0: g.b_s0,
        coth_r: g.coth_r,
        h: g.h,
        y: g.y,
        g_margin: g.g_margin(),
        g_margin_alt: g.g_margin_alt(),
    };
    // SAFETY: as above.
    unsafe { *out = view };
    set_last_error(String::new());
    ClStatus::Ok
}

/// Write the first `len` eigenvalues (`len <= 9`) of sector `(k, parity)`.
///
/// # Safety
/// `geometry` must be a live handle; `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn cl_eigenvalues(
    geometry: *const ClGeometry,
    k: u32,
    parity: u32,
    out: *mut f64,
    len: usize,
) -> ClStatus {
    if geometry.is_null() {
        return null_pointer("geometry");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    // SAFETY: non-null, live per the contract.
    let g = unsafe { &(*geometry).inner };
    guarded(|| {
        let parity = match parity {
            CL_PARITY_EVEN => Parity::Even,
            CL_PARITY_ODD => Parity::Odd,
            other => return Err(LabError::InvalidInput(format!("parity must be 0 or 1, got {other}"))),
        };
        if len == 0 || len > robin_spectrum::MAX_INDEX + 1 {
            return Err(LabError::InvalidInput(format!("len must be in 1..={}", robin_spectrum::MAX_INDEX + 1)));
        }
        let report = robin_spectrum::eigenvalues(g, ModeSector::new(k, parity), len - 1, &Tolerances::default())?;
        // SAFETY: `out` holds `len` doubles per the contract.
        let dest = unsafe { std::slice::from_raw_parts_mut(out, len) };
        dest.copy_from_slice(&report.eigenvalues[..len]);
        Ok(())
    })
}

/// Evaluate the named conditions at `a`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cl_conditions(a: f64, out: *mut ClConditions) -> ClStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    guarded(|| {
        let r = conditions::evaluate_conditions(ParamA::new(a)?, &Tolerances::default())?;
        let view = ClConditions {
            a: r.a,
            h: r.h,
            h_prime: r.h_prime,
            y: r.y,
            g_margin: r.g_margin,
            g_margin_alt: r.g_margin_alt,
            e_value: r.e_value,
            fprime_value: r.fprime_value,
            phi_s0: r.phi_s0,
            mode0_min_abs_mu: r.mode0_min_abs_eigenvalue,
            phi_positive: r.phi_positive,
            consistent: r.consistent,
            hardy_cond1: r.hardy.cond1,
            hardy_cond2: r.hardy.cond2,
        };
        // SAFETY: non-null and writable per the contract.
        unsafe { *out = view };
        Ok(())
    })
}

/// Index and nullity at `a`, computing modes `0..=max(k_max, 2)`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cl_index_nullity(a: f64, k_max: u32, out: *mut ClIndexNullity) -> ClStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    guarded(|| {
        let t = conditions::index_nullity(ParamA::new(a)?, k_max, &Tolerances::default())?;
        let narrow = |n: usize| u32::try_from(n).unwrap_or(u32::MAX);
        let view = ClIndexNullity {
            ind_total: narrow(t.ind_total),
            nul_total: narrow(t.nul_total),
            nul_upper: narrow(t.nul_upper),
            truncation_k: t.truncation_k,
            truncation_margin: t.truncation_margin,
            counts_agree: t.counts_agree,
        };
        // SAFETY: non-null and writable per the contract.
        unsafe { *out = view };
        Ok(())
    })
}

/// Closed-form asymptotic constants.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn cl_constants(out: *mut ClConstants) -> ClStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    guarded(|| {
        let c = asymptotics::compute_constants();
        let view = ClConstants {
            sigma_star: c.sigma_star,
            rho_star: c.rho_star,
            c_star: c.c_star,
            s_val: c.s_val,
            c0: c.c0,
            xi1: c.xi1,
            i_star: c.i_star,
            d_inf: c.d_inf,
            gamma_quarter: c.gamma_quarter,
        };
        // SAFETY: non-null and writable per the contract.
        unsafe { *out = view };
        Ok(())
    })
}
