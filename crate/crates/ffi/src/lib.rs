//! C ABI over the equivalent-oscillator engine.
//!
//! Every fallible function returns a [`ShkStatus`] and writes results
//! through out-pointers. On failure the message is kept per thread and
//! read with [`shk_last_error`]. Absent optional values are NaN.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use shocksens::oscillator::{
    barrier_diagram, fixed_points, fold_load, homoclinic_turning_point, localized_barrier,
    maxwell_load, periodic_wave_energy, Branch, HomoclinicStatus, Interval, Stability,
};
use shocksens::systems::{
    make_model, make_rod, make_strut_amplitude, ModelParams, RodParams, System,
};
use shocksens::{EngineConfig, Error, Oscillator};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    LoadOutOfDomain = 3,
    NoHomoclinic = 4,
    BranchAbsent = 5,
    NoMaxwell = 6,
    NonConvergence = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShkBranch {
    Tau = 0,
    Alpha = 1,
    Beta = 2,
    Gamma = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShkStability {
    StableStructure = 0,
    UnstableStructure = 1,
    Degenerate = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShkLoopKind {
    /// Saddle loop with a simple turning point.
    Loop = 0,
    /// Double zero: the orbit connects to the collision fixed point.
    Heteroclinic = 1,
    Absent = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShkEquilibrium {
    pub q: f64,
    pub stability: ShkStability,
    pub branch: ShkBranch,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShkMaxwell {
    pub p_m: f64,
    pub q_collision: f64,
    pub e_star: f64,
    /// NaN when no fold lies in the bracket.
    pub p_l: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShkBarrierRow {
    pub p: f64,
    pub e_lambda: f64,
    pub e_alpha_per_wave: f64,
    pub n_waves: u32,
    pub e_alpha_n: f64,
    pub q_turn: f64,
    pub q_alpha: f64,
    pub q_beta: f64,
}

/// Opaque oscillator handle.
pub struct ShkSystem {
    system: System,
    cfg: EngineConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> ShkStatus {
    match e {
        Error::InvalidParameter(_) => ShkStatus::InvalidArgument,
        Error::LoadOutOfDomain { .. } => ShkStatus::LoadOutOfDomain,
        Error::NoHomoclinic { .. } => ShkStatus::NoHomoclinic,
        Error::BranchAbsent { .. } => ShkStatus::BranchAbsent,
        Error::NoMaxwell { .. } => ShkStatus::NoMaxwell,
        _ => ShkStatus::NonConvergence,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (ShkStatus, String)>) -> ShkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            ShkStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ShkStatus::Panic
        }
    }
}

trait IntoShk<T> {
    fn shk(self) -> Result<T, (ShkStatus, String)>;
}

impl<T> IntoShk<T> for shocksens::Result<T> {
    fn shk(self) -> Result<T, (ShkStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null(what: &str) -> (ShkStatus, String) {
    (ShkStatus::NullPointer, format!("{what} is null"))
}

unsafe fn system<'a>(sys: *const ShkSystem) -> Result<&'a ShkSystem, (ShkStatus, String)> {
    sys.as_ref().ok_or_else(|| null("system"))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), (ShkStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn opt(x: Option<f64>) -> f64 {
    x.unwrap_or(f64::NAN)
}

fn branch_from(b: ShkBranch) -> Branch {
    match b {
        ShkBranch::Tau => Branch::Tau,
        ShkBranch::Alpha => Branch::Alpha,
        ShkBranch::Beta => Branch::Beta,
        ShkBranch::Gamma => Branch::Gamma,
    }
}

fn branch_to(b: Branch) -> ShkBranch {
    match b {
        Branch::Tau => ShkBranch::Tau,
        Branch::Alpha => ShkBranch::Alpha,
        Branch::Beta => ShkBranch::Beta,
        Branch::Gamma => ShkBranch::Gamma,
    }
}

unsafe fn new_system(
    out: *mut *mut ShkSystem,
    make: impl FnOnce() -> shocksens::Result<System>,
) -> ShkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let system = make().shk()?;
        let handle = Box::into_raw(Box::new(ShkSystem {
            system,
            cfg: EngineConfig::default(),
        }));
        out.write(handle);
        Ok(())
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn shk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn shk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Quintic model `V = −½(p_c − p)q² + ¼q⁴ − (γ/6)q⁶`.
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shk_system_new_model(
    gamma: f64,
    p_c: f64,
    out: *mut *mut ShkSystem,
) -> ShkStatus {
    new_system(out, || {
        make_model(ModelParams { gamma, p_c }).map(System::from)
    })
}

/// Free twisted rod; the load `p` of every call is `m`.
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shk_system_new_rod(
    torsional_stiffness: f64,
    out: *mut *mut ShkSystem,
) -> ShkStatus {
    new_system(out, || {
        make_rod(RodParams {
            torsional_stiffness,
        })
        .map(System::from)
    })
}

/// Amplitude oscillator of the strut on a softening foundation.
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shk_system_new_strut_amplitude(
    c: f64,
    out: *mut *mut ShkSystem,
) -> ShkStatus {
    new_system(out, || make_strut_amplitude(c).map(System::from))
}

/// `sys` must come from a `shk_system_new_*` call and not be used again.
#[no_mangle]
pub unsafe extern "C" fn shk_system_free(sys: *mut ShkSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// `sys` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn shk_system_set_tolerances(
    sys: *mut ShkSystem,
    quad_rel: f64,
    root_abs: f64,
) -> ShkStatus {
    guard(|| {
        let s = sys.as_mut().ok_or_else(|| null("system"))?;
        if !(quad_rel > 0.0 && root_abs > 0.0) {
            return Err((
                ShkStatus::InvalidArgument,
                "tolerances must be positive".into(),
            ));
        }
        s.cfg.quad_rel = quad_rel;
        s.cfg.root_tol = root_abs;
        Ok(())
    })
}

/// `sys` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shk_potential(
    sys: *const ShkSystem,
    q: f64,
    p: f64,
    out: *mut f64,
) -> ShkStatus {
    guard(|| write(out, system(sys)?.system.potential(q, p), "out"))
}

/// `sys` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shk_potential_deriv(
    sys: *const ShkSystem,
    q: f64,
    p: f64,
    out: *mut f64,
) -> ShkStatus {
    guard(|| write(out, system(sys)?.system.potential_deriv(q, p), "out"))
}

/// Fixed points at load `p`, trivial state first. `*len` receives the
/// total count; at most `cap` entries are written to `buf`, and
/// `SHK_STATUS_BUFFER_TOO_SMALL` is returned when `cap` is short.
/// `buf` must hold `cap` entries (may be null when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn shk_fixed_points(
    sys: *const ShkSystem,
    p: f64,
    buf: *mut ShkEquilibrium,
    cap: usize,
    len: *mut usize,
) -> ShkStatus {
    guard(|| {
        let s = system(sys)?;
        let eqs = fixed_points(&s.system, p, &s.cfg).shk()?;
        write(len, eqs.len(), "len")?;
        if cap > 0 && buf.is_null() {
            return Err(null("buf"));
        }
        for (i, e) in eqs.iter().take(cap).enumerate() {
            buf.add(i).write(ShkEquilibrium {
                q: e.q,
                stability: match e.stability {
                    Stability::StableStructure => ShkStability::StableStructure,
                    Stability::UnstableStructure => ShkStability::UnstableStructure,
                    Stability::Degenerate => ShkStability::Degenerate,
                },
                branch: branch_to(e.branch),
            });
        }
        if cap < eqs.len() {
            return Err((
                ShkStatus::BufferTooSmall,
                format!("{} fixed points, buffer holds {cap}", eqs.len()),
            ));
        }
        Ok(())
    })
}

/// Turning point of the localized orbit. `*q` is the turning point for a
/// loop, the collision deflection for a heteroclinic, NaN when absent.
/// `sys` must be a live handle; `kind` and `q` writable.
#[no_mangle]
pub unsafe extern "C" fn shk_turning_point(
    sys: *const ShkSystem,
    p: f64,
    kind: *mut ShkLoopKind,
    q: *mut f64,
) -> ShkStatus {
    guard(|| {
        let s = system(sys)?;
        let (k, value) = match homoclinic_turning_point(&s.system, p, &s.cfg).shk()? {
            HomoclinicStatus::Loop { q_turn, .. } => (ShkLoopKind::Loop, q_turn),
            HomoclinicStatus::Heteroclinic { q_collision } => {
                (ShkLoopKind::Heteroclinic, q_collision)
            }
            HomoclinicStatus::Absent { .. } => (ShkLoopKind::Absent, f64::NAN),
        };
        write(kind, k, "kind")?;
        write(q, value, "q")
    })
}

/// Localized barrier `E = 2∫√(2μ(−V)) dq`.
/// `sys` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shk_localized_barrier(
    sys: *const ShkSystem,
    p: f64,
    out: *mut f64,
) -> ShkStatus {
    guard(|| {
        let s = system(sys)?;
        write(out, localized_barrier(&s.system, p, &s.cfg).shk()?, "out")
    })
}

/// Energy of `n_waves` periodic waves on `branch`.
/// `sys` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shk_periodic_energy(
    sys: *const ShkSystem,
    p: f64,
    branch: ShkBranch,
    n_waves: u32,
    out: *mut f64,
) -> ShkStatus {
    guard(|| {
        let s = system(sys)?;
        let e = periodic_wave_energy(&s.system, p, branch_from(branch), n_waves, &s.cfg).shk()?;
        write(out, e, "out")
    })
}

/// Fold load in `[lo, hi]`; NaN when there is none.
/// `sys` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shk_fold_load(
    sys: *const ShkSystem,
    lo: f64,
    hi: f64,
    out: *mut f64,
) -> ShkStatus {
    guard(|| {
        let s = system(sys)?;
        write(
            out,
            opt(fold_load(&s.system, Interval::new(lo, hi), &s.cfg).shk()?),
            "out",
        )
    })
}

/// Maxwell load, collision deflection, E* and fold load in `[lo, hi]`.
/// `sys` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shk_maxwell(
    sys: *const ShkSystem,
    lo: f64,
    hi: f64,
    out: *mut ShkMaxwell,
) -> ShkStatus {
    guard(|| {
        let s = system(sys)?;
        let m = maxwell_load(&s.system, Interval::new(lo, hi), &s.cfg).shk()?;
        write(
            out,
            ShkMaxwell {
                p_m: m.p_m,
                q_collision: m.q_collision,
                e_star: m.e_star,
                p_l: opt(m.p_l),
            },
            "out",
        )
    })
}

/// Barrier rows at `n` loads, written to `rows[0..n]`.
/// `loads` must hold `n` values and `rows` room for `n` rows.
#[no_mangle]
pub unsafe extern "C" fn shk_barrier_diagram(
    sys: *const ShkSystem,
    loads: *const f64,
    n: usize,
    n_waves: u32,
    rows: *mut ShkBarrierRow,
) -> ShkStatus {
    guard(|| {
        let s = system(sys)?;
        if n == 0 {
            return Ok(());
        }
        if loads.is_null() {
            return Err(null("loads"));
        }
        if rows.is_null() {
            return Err(null("rows"));
        }
        let loads = std::slice::from_raw_parts(loads, n);
        let out = barrier_diagram(&s.system, loads, n_waves, &s.cfg).shk()?;
        for (i, r) in out.iter().enumerate() {
            rows.add(i).write(ShkBarrierRow {
                p: r.p,
                e_lambda: opt(r.e_lambda),
                e_alpha_per_wave: opt(r.e_alpha_per_wave),
                n_waves: r.n_waves,
                e_alpha_n: opt(r.e_alpha_n),
                q_turn: opt(r.q_turn),
                q_alpha: opt(r.q_alpha),
                q_beta: opt(r.q_beta),
            });
        }
        Ok(())
    })
}
