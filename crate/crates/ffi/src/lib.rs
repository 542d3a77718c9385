//! C ABI for `nnls-spectra`.
//!
//! Objects cross the boundary as opaque handles created by `*_new`/`nnls_simulate` and
//! released by the matching `*_free`. Every fallible call returns an [`NnlsStatus`]; on a
//! non-zero status the message is available from [`nnls_last_error_message`] on the same
//! thread. Outputs are written through caller-provided pointers and only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nnls_spectra::asymptotics::{classify_ray, leading_term, RaySector, SectorLabel, WindingKind};
use nnls_spectra::scattering::ScatteringData;
use nnls_spectra::sim::{evolve, initial_field, Evolution, SimConfig};
use nnls_spectra::spectrum::{step_spectral_functions, Case, SpectrumReport};
use nnls_spectra::{Error, StepParams, C64};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NnlsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfDomain = 3,
    NonGeneric = 4,
    BoundaryRay = 5,
    Numerical = 6,
    BlowUp = 7,
    IndexOutOfRange = 8,
    BufferTooSmall = 9,
    NotAvailable = 10,
    Panic = 11,
}

impl From<&Error> for NnlsStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidParam(_) | Error::Parse(_) | Error::Io(_) => NnlsStatus::InvalidArgument,
            Error::OutOfDomain(_) => NnlsStatus::OutOfDomain,
            Error::NonGeneric(_) => NnlsStatus::NonGeneric,
            Error::BoundaryRay { .. } => NnlsStatus::BoundaryRay,
            Error::BlowUp { .. } => NnlsStatus::BlowUp,
            _ => NnlsStatus::Numerical,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NnlsCase {
    I = 1,
    II = 2,
}

/// Sector of a ray `ξ = x/(4t)`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NnlsSector {
    DecayLeft = 0,
    PlaneWaveRight = 1,
    DecayMid = 2,
    PeriodicMid = 3,
    WindingPlaneWave = 4,
    WindingDecayLeft = 5,
    WindingDecayRight = 6,
    WindingInversePlaneWave = 7,
    WindingMiddleDecay = 8,
    WindingMiddlePeriodic = 9,
}

impl From<SectorLabel> for NnlsSector {
    fn from(l: SectorLabel) -> Self {
        match l {
            SectorLabel::ZmDecayLeft => NnlsSector::DecayLeft,
            SectorLabel::PlaneWaveRight => NnlsSector::PlaneWaveRight,
            SectorLabel::ZmDecayMid => NnlsSector::DecayMid,
            SectorLabel::PeriodicMid => NnlsSector::PeriodicMid,
            SectorLabel::Winding(k) => match k {
                WindingKind::PlaneWave => NnlsSector::WindingPlaneWave,
                WindingKind::DecayLeft => NnlsSector::WindingDecayLeft,
                WindingKind::DecayRight => NnlsSector::WindingDecayRight,
                WindingKind::InversePlaneWave => NnlsSector::WindingInversePlaneWave,
                WindingKind::MiddleDecay => NnlsSector::WindingMiddleDecay,
                WindingKind::MiddlePeriodic => NnlsSector::WindingMiddlePeriodic,
            },
        }
    }
}

/// Sector with its index `m` and open interval; an infinite end is reported as ±infinity.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NnlsRaySector {
    pub sector: NnlsSector,
    pub m: usize,
    pub lower: f64,
    pub upper: f64,
}

impl From<&RaySector> for NnlsRaySector {
    fn from(s: &RaySector) -> Self {
        Self {
            sector: s.label.into(),
            m: s.m,
            lower: s.lower.unwrap_or(f64::NEG_INFINITY),
            upper: s.upper.unwrap_or(f64::INFINITY),
        }
    }
}

/// Grid and time stepping of a simulation. Fill with [`nnls_sim_options_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NnlsSimOptions {
    pub half_length: f64,
    pub points: usize,
    pub dt: f64,
    pub t_final: f64,
    pub mollify_width: f64,
    pub seam_fraction: f64,
    pub buffer_safety: f64,
    pub blowup_factor: f64,
}

/// Background step with its spectral functions and discrete-spectrum report.
pub struct NnlsSpectrum {
    params: StepParams,
    data: ScatteringData,
    report: SpectrumReport,
}

/// Snapshots of a finished simulation.
pub struct NnlsEvolution {
    inner: Evolution,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: NnlsStatus, msg: impl Into<String>) -> NnlsStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> NnlsStatus {
    let s = NnlsStatus::from(&e);
    fail(s, e.to_string())
}

/// Runs `f`, turning panics into [`NnlsStatus::Panic`].
fn guard(f: impl FnOnce() -> NnlsStatus) -> NnlsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(NnlsStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

macro_rules! deref {
    ($p:expr) => {
        match unsafe { $p.as_ref() } {
            Some(v) => v,
            None => {
                return fail(
                    NnlsStatus::NullPointer,
                    concat!("null pointer: ", stringify!($p)),
                )
            }
        }
    };
}

macro_rules! out {
    ($p:expr) => {
        match unsafe { $p.as_mut() } {
            Some(v) => v,
            None => {
                return fail(
                    NnlsStatus::NullPointer,
                    concat!("null pointer: ", stringify!($p)),
                )
            }
        }
    };
}

/// Message of the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn nnls_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn nnls_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds the spectral data of the step `(A, B, R)`.
///
/// # Safety
/// `out` must be null or valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn nnls_spectrum_new(
    a: f64,
    b: f64,
    r: f64,
    out: *mut *mut NnlsSpectrum,
) -> NnlsStatus {
    guard(|| {
        let out = out!(out);
        let params = match StepParams::new(a, b, r) {
            Ok(p) => p,
            Err(e) => return from_error(e),
        };
        let report = match SpectrumReport::for_step(params) {
            Ok(r) => r,
            Err(e) => return from_error(e),
        };
        let data = step_spectral_functions(params);
        *out = Box::into_raw(Box::new(NnlsSpectrum {
            params,
            data,
            report,
        }));
        NnlsStatus::Ok
    })
}

/// # Safety
/// `h` must be null or a handle from [`nnls_spectrum_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nnls_spectrum_free(h: *mut NnlsSpectrum) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Case and winding count `n`.
///
/// # Safety
/// `h` must be a live handle; `case_out` and `n_out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nnls_spectrum_case(
    h: *const NnlsSpectrum,
    case_out: *mut NnlsCase,
    n_out: *mut usize,
) -> NnlsStatus {
    guard(|| {
        let h = deref!(h);
        let (c, n) = (out!(case_out), out!(n_out));
        *c = match h.report.case {
            Case::I => NnlsCase::I,
            Case::II => NnlsCase::II,
        };
        *n = h.report.n;
        NnlsStatus::Ok
    })
}

/// Winding of `arg(a₁a₂)` at the origin divided by π.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn nnls_spectrum_winding_over_pi(
    h: *const NnlsSpectrum,
    out: *mut f64,
) -> NnlsStatus {
    guard(|| {
        let h = deref!(h);
        *out!(out) = h.report.winding_at_zero_over_pi;
        NnlsStatus::Ok
    })
}

/// Imaginary zero `i·k₀` of `a₁`; [`NnlsStatus::NotAvailable`] when there is none.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn nnls_spectrum_k0(h: *const NnlsSpectrum, out: *mut f64) -> NnlsStatus {
    guard(|| {
        let h = deref!(h);
        let out = out!(out);
        match h.report.k0 {
            Some(k) => {
                *out = k;
                NnlsStatus::Ok
            }
            None => fail(NnlsStatus::NotAvailable, "no imaginary zero"),
        }
    })
}

/// Number of zero pairs `pⱼ, −p̄ⱼ` off the imaginary axis.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn nnls_spectrum_pair_count(
    h: *const NnlsSpectrum,
    out: *mut usize,
) -> NnlsStatus {
    guard(|| {
        let h = deref!(h);
        *out!(out) = h.report.pairs.len();
        NnlsStatus::Ok
    })
}

/// Zero `pⱼ` (negative real part) of pair `index`, ordered by decreasing real part.
///
/// # Safety
/// `h` must be a live handle; `re` and `im` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nnls_spectrum_pair(
    h: *const NnlsSpectrum,
    index: usize,
    re: *mut f64,
    im: *mut f64,
) -> NnlsStatus {
    guard(|| {
        let h = deref!(h);
        let (re, im) = (out!(re), out!(im));
        match h.report.pairs.get(index) {
            Some(p) => {
                *re = p.re;
                *im = p.im;
                NnlsStatus::Ok
            }
            None => fail(
                NnlsStatus::IndexOutOfRange,
                format!("pair {index} of {}", h.report.pairs.len()),
            ),
        }
    })
}

/// `a₁(k)` at a complex point.
///
/// # Safety
/// `h` must be a live handle; `re` and `im` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nnls_spectrum_a1(
    h: *const NnlsSpectrum,
    k_re: f64,
    k_im: f64,
    re: *mut f64,
    im: *mut f64,
) -> NnlsStatus {
    guard(|| {
        let h = deref!(h);
        let (re, im) = (out!(re), out!(im));
        match h.data.a1(C64::new(k_re, k_im)) {
            Ok(v) => {
                *re = v.re;
                *im = v.im;
                NnlsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Reflection coefficients `r₁(k)`, `r₂(k)` at real `k`, as `[re, im]` pairs.
///
/// # Safety
/// `h` must be a live handle; `r1` and `r2` must each be valid for two `double` writes.
#[no_mangle]
pub unsafe extern "C" fn nnls_spectrum_reflection(
    h: *const NnlsSpectrum,
    k: f64,
    r1: *mut f64,
    r2: *mut f64,
) -> NnlsStatus {
    guard(|| {
        let h = deref!(h);
        if r1.is_null() || r2.is_null() {
            return fail(NnlsStatus::NullPointer, "null output buffer");
        }
        let refl = h.data.reflection();
        let (a, b) = match refl.r1(k).and_then(|a| Ok((a, refl.r2(k)?))) {
            Ok(v) => v,
            Err(e) => return from_error(e),
        };
        *r1 = a.re;
        *r1.add(1) = a.im;
        *r2 = b.re;
        *r2.add(1) = b.im;
        NnlsStatus::Ok
    })
}

/// Sector of the ray `xi`. A boundary ray gives [`NnlsStatus::BoundaryRay`].
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn nnls_classify_ray(
    h: *const NnlsSpectrum,
    xi: f64,
    out: *mut NnlsRaySector,
) -> NnlsStatus {
    guard(|| {
        let h = deref!(h);
        let out = out!(out);
        match classify_ray(xi, &h.report) {
            Ok(s) => {
                *out = (&s).into();
                NnlsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Leading asymptotic term `q_as(x, t)`, `t > 0`.
///
/// # Safety
/// `h` must be a live handle; `re` and `im` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nnls_asymptote(
    h: *const NnlsSpectrum,
    x: f64,
    t: f64,
    re: *mut f64,
    im: *mut f64,
) -> NnlsStatus {
    guard(|| {
        let h = deref!(h);
        let (re, im) = (out!(re), out!(im));
        if !(t > 0.0 && t.is_finite() && x.is_finite()) {
            return fail(
                NnlsStatus::InvalidArgument,
                format!("need finite x and t > 0, got x = {x}, t = {t}"),
            );
        }
        let v = classify_ray(x / (4.0 * t), &h.report)
            .and_then(|s| leading_term(x, t, &s, &h.data, &h.report));
        match v {
            Ok(term) => {
                *re = term.value.re;
                *im = term.value.im;
                NnlsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

fn options_of(c: &SimConfig) -> NnlsSimOptions {
    NnlsSimOptions {
        half_length: c.grid.half_length,
        points: c.grid.points,
        dt: c.dt,
        t_final: c.t_final,
        mollify_width: c.mollify_width,
        seam_fraction: c.seam_fraction,
        buffer_safety: c.buffer_safety,
        blowup_factor: c.blowup_factor,
    }
}

/// Default simulation options for the step of `h`.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn nnls_sim_options_default(
    h: *const NnlsSpectrum,
    out: *mut NnlsSimOptions,
) -> NnlsStatus {
    guard(|| {
        let h = deref!(h);
        *out!(out) = options_of(&SimConfig::desk(&h.params));
        NnlsStatus::Ok
    })
}

/// Evolves the mollified step and keeps the fields at `times[0..count]`.
///
/// A run that diverges still returns [`NnlsStatus::Ok`] with a handle; check
/// [`nnls_evolution_diverged`]. Its last snapshot is then the last good state.
///
/// # Safety
/// `h` must be a live handle, `opts` readable, `times` readable for `count` values
/// (or null with `count == 0`), and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn nnls_simulate(
    h: *const NnlsSpectrum,
    opts: *const NnlsSimOptions,
    times: *const f64,
    count: usize,
    out: *mut *mut NnlsEvolution,
) -> NnlsStatus {
    guard(|| {
        let h = deref!(h);
        let o = deref!(opts);
        let out = out!(out);
        if times.is_null() && count > 0 {
            return fail(NnlsStatus::NullPointer, "null snapshot times");
        }
        let mut c = SimConfig::desk(&h.params);
        c.grid.half_length = o.half_length;
        c.grid.points = o.points;
        c.dt = o.dt;
        c.t_final = o.t_final;
        c.mollify_width = o.mollify_width;
        c.seam_fraction = o.seam_fraction;
        c.buffer_safety = o.buffer_safety;
        c.blowup_factor = o.blowup_factor;
        c.snapshot_times = if count == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(times, count).to_vec()
        };
        let run = c
            .validate(&h.params)
            .and_then(|_| initial_field(&h.params, &c))
            .and_then(|q0| evolve(&q0, &c));
        match run {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(NnlsEvolution { inner }));
                NnlsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `e` must be null or a handle from [`nnls_simulate`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nnls_evolution_free(e: *mut NnlsEvolution) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Number of stored snapshots.
///
/// # Safety
/// `e` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn nnls_evolution_snapshot_count(
    e: *const NnlsEvolution,
    out: *mut usize,
) -> NnlsStatus {
    guard(|| {
        let e = deref!(e);
        *out!(out) = e.inner.snapshots.len();
        NnlsStatus::Ok
    })
}

/// Whether the run stopped early, and at which time.
///
/// # Safety
/// `e` must be a live handle; `diverged` and `t` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nnls_evolution_diverged(
    e: *const NnlsEvolution,
    diverged: *mut bool,
    t: *mut f64,
) -> NnlsStatus {
    guard(|| {
        let e = deref!(e);
        let (d, t) = (out!(diverged), out!(t));
        match &e.inner.divergence {
            Some(div) => {
                *d = true;
                *t = div.t;
            }
            None => {
                *d = false;
                *t = f64::NAN;
            }
        }
        NnlsStatus::Ok
    })
}

/// Copies snapshot `index`: its time, and `2·N` doubles `[re₀, im₀, re₁, …]` on the nodes
/// `x_j = −L + 2jL/N`. `capacity` is the length of `values` in doubles.
///
/// # Safety
/// `e` must be a live handle, `t` valid for a write and `values` valid for `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn nnls_evolution_snapshot(
    e: *const NnlsEvolution,
    index: usize,
    t: *mut f64,
    values: *mut f64,
    capacity: usize,
) -> NnlsStatus {
    guard(|| {
        let e = deref!(e);
        let t = out!(t);
        let Some(s) = e.inner.snapshots.get(index) else {
            return fail(
                NnlsStatus::IndexOutOfRange,
                format!("snapshot {index} of {}", e.inner.snapshots.len()),
            );
        };
        let need = 2 * s.values.len();
        if capacity < need {
            return fail(
                NnlsStatus::BufferTooSmall,
                format!("need {need} doubles, got {capacity}"),
            );
        }
        if values.is_null() {
            return fail(NnlsStatus::NullPointer, "null values buffer");
        }
        let dst = std::slice::from_raw_parts_mut(values, need);
        for (pair, v) in dst.chunks_exact_mut(2).zip(&s.values) {
            pair[0] = v.re;
            pair[1] = v.im;
        }
        *t = s.t;
        NnlsStatus::Ok
    })
}
