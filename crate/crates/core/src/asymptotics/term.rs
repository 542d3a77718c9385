//! Leading asymptotic terms along a ray and their remainder orders.

use std::f64::consts::{LN_2, PI};
use std::io::Write;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sector::{classify_ray, RaySector, SectorLabel, WindingKind};
use crate::cauchy::{compute_nu, default_k0_tilde, DeltaEvaluator, NuValue, Pole};
use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::scattering::ScatteringData;
use crate::spectrum::SpectrumReport;

/// Relative margin of the periodic denominator: evaluation is refused when
/// `|16B² − …| < BLOWUP_MARGIN·16B²`.
pub const BLOWUP_MARGIN: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaId {
    ZakharovManakovLeft,
    ZakharovManakovMiddle,
    PlaneWave,
    Periodic,
    WindingPlaneWave,
    WindingInversePlaneWave,
    WindingPeriodic,
    /// Only a decay order is known; the value is `0`.
    Decay,
}

/// `q_as(x, t)` with the order `t^{error_exponent}` (times `log t` when `error_log`) of the
/// remainder.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticTerm {
    pub value: C64,
    pub error_exponent: f64,
    pub error_log: bool,
    pub formula_id: FormulaId,
}

/// Which Zakharov–Manakov amplitude.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Amplitude {
    /// `α₁`, for `ξ < −|B|`.
    Left,
    /// `α₂`, for `|ξ| < |B|` and `B > 0`.
    Middle,
}

fn nonzero_nu(nu: NuValue, xi: f64) -> Result<C64> {
    let v = nu.value();
    if v.norm() < 1e-15 {
        return Err(Error::ZeroExponent(format!(
            "nu = 0 at xi = {xi}; no limit is taken"
        )));
    }
    Ok(v)
}

fn reflection_or_err(r: C64, what: &str, at: f64) -> Result<C64> {
    if !(r.norm() > 0.0) {
        return Err(Error::VanishingReflection(format!(
            "{what} vanishes at {at}"
        )));
    }
    Ok(r)
}

/// `α₁(ξ)` or `α₂(ξ)`.
///
/// `α₁ = √π·exp{−(π/2)ν̄ + iπ/4 − 2χ̄(ξ, −ξ) − 3iν̄ log 2}/(conj(r₂(ξ))·Γ(−iν̄))` with
/// `ν̄ = conj(ν(ξ))`; `α₂` uses `ν(−ξ)`, `+2(χ₁ + χ₂)(−ξ, ξ; −|B|)` (the regular part in ℂ⁻)
/// and `r₁(−ξ)`.
pub fn zakharov_manakov_amplitude(xi: f64, which: Amplitude, data: &ScatteringData) -> Result<C64> {
    if data.amplitude() == 0.0 {
        return Err(Error::VanishingReflection(
            "A = 0: r1 and r2 vanish identically".into(),
        ));
    }
    let b = data.wavenumber();
    let i = C64::new(0.0, 1.0);
    let sqrt_pi = PI.sqrt();
    match which {
        Amplitude::Left => {
            if !(xi < -b.abs()) {
                return Err(Error::OutOfDomain(format!(
                    "alpha_1 needs xi < -|B|, got {xi}"
                )));
            }
            let r2 = reflection_or_err(data.reflection().r2(xi)?, "r2", xi)?;
            let ev = DeltaEvaluator::delta(data, -xi)?;
            let nub = nonzero_nu(ev.nu(), xi)?.conj();
            let chib = ev
                .chi_at_stationary_point(crate::cauchy::CutSide::Minus)?
                .conj();
            let e = -PI / 2.0 * nub + i * (PI / 4.0) - 2.0 * chib - 3.0 * i * nub * LN_2;
            Ok(sqrt_pi * e.exp() / (r2.conj() * gamma(-i * nub)?))
        }
        Amplitude::Middle => {
            if !(b > 0.0 && xi.abs() < b) {
                return Err(Error::OutOfDomain(format!(
                    "alpha_2 needs B > 0 and |xi| < B, got B = {b}, xi = {xi}"
                )));
            }
            let r1 = reflection_or_err(data.reflection().r1(-xi)?, "r1", -xi)?;
            let ev = DeltaEvaluator::hat(data, xi, Pole::for_wavenumber(b), default_k0_tilde(b))?;
            let nu = nonzero_nu(ev.nu(), xi)?;
            let chi = ev.chi_at_stationary_point(crate::cauchy::CutSide::Minus)?;
            let e = -PI / 2.0 * nu + i * (PI / 4.0) + 2.0 * chi - 3.0 * i * nu * LN_2;
            Ok(sqrt_pi * e.exp() / (r1 * gamma(-i * nu)?))
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Shape {
    /// `t^{power}·α·exp{4itξ² − i·re_nu·log t}`
    Zm {
        alpha: C64,
        power: f64,
        re_nu: f64,
    },
    /// `coef·e^{2iBx − 4iB²t}`
    Plane {
        coef: C64,
    },
    /// `coef·e^{−2iBx − 4iB²t}`
    InversePlane {
        coef: C64,
    },
    /// `num·e^{2iBx − 4iB²t}/(16B² − den·e^{4iBx})`
    Periodic {
        num: C64,
        den: C64,
    },
    Zero,
}

/// The ξ-dependent part of a leading term, prepared once per ray.
#[derive(Clone, Copy, Debug)]
pub struct RayFormula {
    pub xi: f64,
    pub sector: RaySector,
    b: f64,
    shape: Shape,
    error_exponent: f64,
    error_log: bool,
    formula_id: FormulaId,
}

/// `R₁`/`R₂` orders as `(exponent, log factor)`; `s` is the exponent shift `Im ν − m`.
fn zm_remainder(s: f64, left: bool) -> (f64, bool) {
    let s = if left { s } else { -s };
    if s > 0.0 {
        (-1.0, false)
    } else if s == 0.0 {
        (-1.0, true)
    } else {
        (-1.0 + 2.0 * s.abs(), false)
    }
}

fn pair_products(report: &SpectrumReport, m: usize) -> Vec<C64> {
    // p_{n−s} for s = 0, …, m; pairs[j − 1] is p_j
    let n = report.n;
    (0..=m.min(n))
        .filter(|&s| s < n)
        .map(|s| C64::new(report.pairs[n - s - 1].re, report.pairs[n - s - 1].im))
        .collect()
}

impl RayFormula {
    /// Prepares the formula of `sector` on the ray `ξ` (which must lie in it).
    pub fn prepare(
        xi: f64,
        sector: RaySector,
        data: &ScatteringData,
        report: &SpectrumReport,
    ) -> Result<Self> {
        if !sector.contains(xi) {
            return Err(Error::OutOfDomain(format!(
                "xi = {xi} is outside the sector {sector:?}"
            )));
        }
        let b = data.wavenumber();
        if b != report.params.b {
            return Err(Error::InvalidParam(format!(
                "report B = {} does not match the data (B = {b})",
                report.params.b
            )));
        }
        let a = data.amplitude();
        let m = sector.m;
        let n = report.n;
        let mk = |shape, (error_exponent, error_log): (f64, bool), formula_id| RayFormula {
            xi,
            sector,
            b,
            shape,
            error_exponent,
            error_log,
            formula_id,
        };
        let kb = C64::new(-b, 0.0);
        match sector.label {
            SectorLabel::ZmDecayLeft => {
                let nu = compute_nu(data, -xi)?;
                let alpha = zakharov_manakov_amplitude(xi, Amplitude::Left, data)?;
                let shape = Shape::Zm {
                    alpha,
                    power: -0.5 - nu.im,
                    re_nu: nu.re,
                };
                Ok(mk(
                    shape,
                    zm_remainder(nu.im - nu.m as f64, true),
                    FormulaId::ZakharovManakovLeft,
                ))
            }
            SectorLabel::ZmDecayMid => {
                let nu = compute_nu(data, xi)?;
                let alpha = zakharov_manakov_amplitude(xi, Amplitude::Middle, data)?;
                let shape = Shape::Zm {
                    alpha,
                    power: -0.5 + nu.im,
                    re_nu: nu.re,
                };
                Ok(mk(
                    shape,
                    zm_remainder(nu.im - nu.m as f64, false),
                    FormulaId::ZakharovManakovMiddle,
                ))
            }
            SectorLabel::PlaneWaveRight => {
                let ev = DeltaEvaluator::delta(data, xi)?;
                let d = ev.eval(kb, None)?;
                let s = ev.nu().im - ev.nu().m as f64;
                Ok(mk(
                    Shape::Plane { coef: a * d * d },
                    (-0.5 + s.abs(), false),
                    FormulaId::PlaneWave,
                ))
            }
            SectorLabel::PeriodicMid | SectorLabel::Winding(WindingKind::MiddlePeriodic) => {
                let pole = Pole::for_wavenumber(b);
                let k0t = default_k0_tilde(b);
                let here = DeltaEvaluator::hat(data, xi, pole, k0t)?;
                let mirror = DeltaEvaluator::hat(data, -xi, pole, k0t)?;
                let dh = here.eval(kb, None)?;
                let dm = mirror.eval(kb, None)?.conj();
                let (mut fnum, mut fden) = (C64::new(1.0, 0.0), C64::new(1.0, 0.0));
                if n > 0 {
                    let ps = pair_products(report, n - 1);
                    fnum = C64::new((b - xi).powi(2 * n as i32), 0.0);
                    let mut ratio = C64::new(1.0, 0.0);
                    for p in ps {
                        fnum /= (b + p) * (b + p);
                        ratio *= (b - p) / (b + p);
                    }
                    fden = C64::new(((b - xi) / (b + xi)).powi(2 * n as i32), 0.0) * ratio * ratio;
                }
                let num = 16.0 * a * b * b * fnum * dh * dh;
                let den = a * a * fden * dm * dm * dh * dh;
                let s = here.nu().im - here.nu().m as f64;
                let id = if sector.label == SectorLabel::PeriodicMid {
                    FormulaId::Periodic
                } else {
                    FormulaId::WindingPeriodic
                };
                Ok(mk(
                    Shape::Periodic { num, den },
                    (-0.5 + s.abs(), false),
                    id,
                ))
            }
            SectorLabel::Winding(WindingKind::PlaneWave) => {
                let ev = DeltaEvaluator::delta(data, xi)?;
                let d = ev.eval(kb, None)?;
                let mut coef = a * xi.powi(2 * m as i32) * d * d;
                if m > 0 {
                    for p in pair_products(report, m - 1) {
                        coef /= p * p;
                    }
                }
                let s = ev.nu().im - m as f64;
                Ok(mk(
                    Shape::Plane { coef },
                    (-0.5 + s.abs(), false),
                    FormulaId::WindingPlaneWave,
                ))
            }
            SectorLabel::Winding(WindingKind::InversePlaneWave) => {
                let ev = DeltaEvaluator::delta(data, -xi)?;
                let d = ev.eval(kb, None)?.conj();
                let mut coef = C64::new(-4.0, 0.0) / (a * xi.powi(2 * m as i32) * d * d);
                for p in pair_products(report, m) {
                    coef *= p * p;
                }
                let s = ev.nu().im - m as f64;
                Ok(mk(
                    Shape::InversePlane { coef },
                    (-0.5 + s.abs(), false),
                    FormulaId::WindingInversePlaneWave,
                ))
            }
            SectorLabel::Winding(WindingKind::DecayLeft) => {
                let nu = compute_nu(data, -xi)?;
                Ok(mk(
                    Shape::Zero,
                    (-0.5 - nu.im + m as f64, false),
                    FormulaId::Decay,
                ))
            }
            SectorLabel::Winding(WindingKind::DecayRight) => {
                let nu = compute_nu(data, xi)?;
                Ok(mk(
                    Shape::Zero,
                    (-0.5 + nu.im - m as f64, false),
                    FormulaId::Decay,
                ))
            }
            SectorLabel::Winding(WindingKind::MiddleDecay) => {
                let nu = compute_nu(data, xi)?;
                Ok(mk(
                    Shape::Zero,
                    (-0.5 + (nu.im - nu.m as f64).abs(), false),
                    FormulaId::Decay,
                ))
            }
        }
    }

    /// Power of `t` in `|q|` for the decaying formulas with a nonzero leading term.
    pub fn decay_power(&self) -> Option<f64> {
        match self.shape {
            Shape::Zm { power, .. } => Some(power),
            _ => None,
        }
    }

    /// The formula at `(x, t)`; spectral quantities stay those of the prepared ray.
    pub fn eval_at(&self, x: f64, t: f64) -> Result<AsymptoticTerm> {
        if !(t > 0.0) || !x.is_finite() || !t.is_finite() {
            return Err(Error::InvalidParam(format!(
                "need finite x and t > 0, got ({x}, {t})"
            )));
        }
        let b = self.b;
        let i = C64::new(0.0, 1.0);
        let wave = (i * (2.0 * b * x - 4.0 * b * b * t)).exp();
        let value = match self.shape {
            Shape::Zm {
                alpha,
                power,
                re_nu,
            } => t.powf(power) * alpha * (i * (4.0 * t * self.xi * self.xi - re_nu * t.ln())).exp(),
            Shape::Plane { coef } => coef * wave,
            Shape::InversePlane { coef } => coef * (i * (-2.0 * b * x - 4.0 * b * b * t)).exp(),
            Shape::Periodic { num, den } => {
                let d = 16.0 * b * b - den * (4.0 * i * b * x).exp();
                if d.norm() < BLOWUP_MARGIN * 16.0 * b * b {
                    return Err(Error::NearSingular(format!(
                        "|16B^2 - ...| = {:.3e} below {BLOWUP_MARGIN}*16B^2 at (x, t) = ({x}, {t})",
                        d.norm()
                    )));
                }
                num * wave / d
            }
            Shape::Zero => C64::new(0.0, 0.0),
        };
        Ok(AsymptoticTerm {
            value,
            error_exponent: self.error_exponent,
            error_log: self.error_log,
            formula_id: self.formula_id,
        })
    }
}

/// Leading term at `(x, t)` on the ray `ξ = x/(4t)`, which must lie in `sector`.
pub fn leading_term(
    x: f64,
    t: f64,
    sector: &RaySector,
    data: &ScatteringData,
    report: &SpectrumReport,
) -> Result<AsymptoticTerm> {
    if !(t > 0.0) {
        return Err(Error::InvalidParam(format!("need t > 0, got {t}")));
    }
    RayFormula::prepare(x / (4.0 * t), *sector, data, report)?.eval_at(x, t)
}

/// One row of an asymptotic sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub x: f64,
    pub t: f64,
    pub xi: f64,
    pub sector: String,
    pub re_q: f64,
    pub im_q: f64,
    pub abs_q: f64,
    pub error_exponent: f64,
}

/// Evaluates the leading term at every `(x, t)`, in parallel. Points whose ray is a
/// boundary, or where the evaluation fails, are returned as errors in place.
pub fn sweep(
    points: &[(f64, f64)],
    data: &ScatteringData,
    report: &SpectrumReport,
) -> Vec<Result<SweepRow>> {
    points
        .par_iter()
        .map(|&(x, t)| {
            if !(t > 0.0) {
                return Err(Error::InvalidParam(format!("need t > 0, got {t}")));
            }
            let xi = x / (4.0 * t);
            let sector = classify_ray(xi, report)?;
            let term = leading_term(x, t, &sector, data, report)?;
            Ok(SweepRow {
                x,
                t,
                xi,
                sector: sector.label.to_string(),
                re_q: term.value.re,
                im_q: term.value.im,
                abs_q: term.value.norm(),
                error_exponent: term.error_exponent,
            })
        })
        .collect()
}

/// Writes rows as CSV with columns `x, t, xi, sector, re_q, im_q, abs_q, error_exponent`.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    w.flush()?;
    Ok(())
}
