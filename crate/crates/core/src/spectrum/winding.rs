//! Winding of `arg(a₁a₂)` along the negative half-line.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::argument::{track_argument, ArgOptions, ArgSample};
use crate::error::{Error, Result};
use crate::scattering::ScatteringData;

/// Spectral case: I has an imaginary zero and odd winding at the origin, II neither.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    I,
    II,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingProfile {
    /// `ω₁ > ω₂ > … > ωₙ`, the points where the cumulative argument equals `π, 3π, …`
    /// counted from `−|B|` outwards.
    pub omegas: Vec<f64>,
    /// `θ` in `(0, π)`: the cumulative argument tends to `2πn − θ` as `k ↑ −|B|`.
    pub theta_minus_b: f64,
    /// Continuous argument of `a₁a₂` at `k = 0`, counted from `arg = 0` at `−∞` and passing
    /// above the pole at `−|B|`.
    pub winding_at_zero: f64,
    pub case: Case,
    pub n: usize,
}

/// Controls for the winding computation.
#[derive(Clone, Copy, Debug)]
pub struct WindingOptions {
    /// Initial uniform cells per leg before adaptive refinement.
    pub cells: usize,
    /// Distance from `−|B|` at which tracking stops, relative to `max(1, |B|)`.
    pub pole_gap: f64,
    /// Slack allowed in the band checks.
    pub band_tol: f64,
}

impl Default for WindingOptions {
    fn default() -> Self {
        Self {
            cells: 400,
            pole_gap: 1e-5,
            band_tol: 1e-6,
        }
    }
}

/// Continuous argument path of `a₁a₂` on `(−∞, 0]`, split at the pole `−|B|`.
#[derive(Clone, Debug)]
pub struct ArgumentPath {
    pub before_pole: Vec<ArgSample>,
    pub after_pole: Vec<ArgSample>,
    /// Limit of the cumulative argument as `k ↑ −|B|`, taken from the residue.
    pub limit_before: f64,
    pub start_k: f64,
}

pub(crate) fn nearest_branch(principal: f64, target: f64) -> f64 {
    principal + 2.0 * PI * ((target - principal) / (2.0 * PI)).round()
}

/// Left end beyond which `|a₁a₂ − 1| < 1/4`, so no winding accumulates further out.
pub(crate) fn far_left(data: &ScatteringData) -> Result<f64> {
    let b = data.wavenumber().abs();
    let mut k = 2.0 * (b + data.amplitude() + 1.0);
    let cap = data.k_cutoff().unwrap_or(1e4).max(k);
    loop {
        let ok = [k, 2.0 * k, 4.0 * k]
            .iter()
            .map(|&s| data.a1a2(-s.min(cap)).map(|v| (v - 1.0).norm() < 0.25))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .all(|x| x);
        if ok {
            return Ok(-k);
        }
        if k >= cap {
            return Err(Error::Inconsistent(format!(
                "a1*a2 does not approach 1 for k down to -{cap}"
            )));
        }
        k = (2.0 * k).min(cap);
    }
}

/// Tracks `arg(a₁a₂)` from `−∞` to `0`, passing above the pole at `−|B|` (a `+π` turn).
pub fn argument_path(data: &ScatteringData, opts: &WindingOptions) -> Result<ArgumentPath> {
    let b = data.wavenumber().abs();
    if b == 0.0 {
        return Err(Error::InvalidParam(
            "winding profile requires B != 0".into(),
        ));
    }
    let res = data.require_residues()?;
    let left = far_left(data)?;
    let gap = opts.pole_gap * b.max(1.0);
    let aopts = ArgOptions {
        floor: 1e-12,
        ..ArgOptions::default()
    };
    let f = |k: f64| data.a1a2(k);

    let start = f(left)?.arg();
    let before = track_argument(f, left, -b - gap, opts.cells, start, &aopts)?;
    // near −|B|: a₁a₂ ≈ a₂(−|B|)·res/(k + |B|), and arg 1/(k + |B|) = −π from the left
    let pole_res = if data.wavenumber() > 0.0 {
        res.a1_minus_b
    } else {
        res.a1_plus_b
    };
    let a2_at = data.a2(C64::new(-b, 0.0))?;
    let tracked = before.last().map_or(0.0, |s| s.arg);
    let limit_before = nearest_branch((pole_res * a2_at).arg() - PI, tracked);
    if (limit_before - tracked).abs() > PI / 4.0 {
        return Err(Error::Inconsistent(format!(
            "argument just left of -|B| ({tracked}) disagrees with the residue limit ({limit_before})"
        )));
    }
    let after_start = f(-b + gap)?.arg();
    let after_arg = nearest_branch(after_start, limit_before + PI);
    let after = track_argument(f, -b + gap, 0.0, opts.cells, after_arg, &aopts)?;
    Ok(ArgumentPath {
        before_pole: before,
        after_pole: after,
        limit_before,
        start_k: left,
    })
}

/// Solves `cumulative arg = level` between two neighbouring samples by bisection.
fn locate_level(data: &ScatteringData, lo: ArgSample, hi: ArgSample, level: f64) -> Result<f64> {
    let (mut a, mut b) = (lo.s, hi.s);
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        let v = data.a1a2(m)?;
        let arg = lo.arg + (v / lo.value).arg();
        if arg < level {
            a = m;
        } else {
            b = m;
        }
        if b - a <= 1e-14 * m.abs().max(1.0) {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

/// Winding profile of `a₁a₂` with the band conditions of the spectral cases enforced.
pub fn winding_profile(data: &ScatteringData) -> Result<WindingProfile> {
    winding_profile_with(data, &WindingOptions::default())
}

pub fn winding_profile_with(
    data: &ScatteringData,
    opts: &WindingOptions,
) -> Result<WindingProfile> {
    let path = argument_path(data, opts)?;
    let lim = path.limit_before;
    let n = (lim / (2.0 * PI)).ceil();
    let theta = 2.0 * n * PI - lim;
    if !(theta > 0.0 && theta < PI) || n < 0.0 {
        return Err(Error::Inconsistent(format!(
            "argument {lim} at -|B| lies on a band edge; theta would be {theta}"
        )));
    }
    let n = n as usize;

    // upward crossings of the odd levels π, 3π, …, (2n−1)π; a downward crossing breaks the bands
    let mut crossings: Vec<f64> = Vec::with_capacity(n);
    let tol = opts.band_tol;
    for w in path.before_pole.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (a0, a1) = (lo.arg, hi.arg);
        let lvl_lo = ((a0 / PI - 1.0) / 2.0).floor();
        let lvl_hi = ((a1 / PI - 1.0) / 2.0).floor();
        if lvl_hi < lvl_lo {
            return Err(Error::Inconsistent(format!(
                "cumulative argument decreases through an odd multiple of pi near k = {}",
                lo.s
            )));
        }
        for l in (lvl_lo as i64 + 1)..=(lvl_hi as i64) {
            let level = (2 * l + 1) as f64 * PI;
            crossings.push(locate_level(data, lo, hi, level)?);
        }
        if a1 < -PI - tol {
            return Err(Error::Inconsistent(format!(
                "cumulative argument below -pi at k = {}",
                hi.s
            )));
        }
    }
    if crossings.len() != n {
        return Err(Error::Inconsistent(format!(
            "{} odd-level crossings before -|B| but the limit there implies n = {n}",
            crossings.len()
        )));
    }
    crossings.reverse();

    let top = 2.0 * PI * n as f64;
    for s in &path.after_pole {
        if s.arg < top - tol || s.arg > top + PI + tol {
            return Err(Error::Inconsistent(format!(
                "argument {} at k = {} leaves the band [2 pi n, 2 pi n + pi] right of -|B|",
                s.arg, s.s
            )));
        }
    }
    let at_zero = path.after_pole.last().map_or(lim + PI, |s| s.arg);
    let case = if (at_zero - top - PI).abs() < 1e-3 * PI {
        Case::I
    } else if (at_zero - top).abs() < 1e-3 * PI {
        Case::II
    } else {
        return Err(Error::Inconsistent(format!(
            "winding at zero {at_zero} is not 2 pi n or 2 pi n + pi"
        )));
    };
    Ok(WindingProfile {
        omegas: crossings,
        theta_minus_b: theta,
        winding_at_zero: at_zero,
        case,
        n,
    })
}
