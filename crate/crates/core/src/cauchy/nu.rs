//! The exponent `ν(−ξ) = −(1/2π)·log(1 + r₁r₂)(−ξ)` on the cumulative branch.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scattering::ScatteringData;
use crate::spectrum::argument::{track_argument, ArgOptions};
use crate::spectrum::{argument_path, far_left, WindingOptions};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NuValue {
    pub re: f64,
    pub im: f64,
    /// Integer shift between the cumulative and the principal branch: `im − m ∈ [−1/2, 1/2]`.
    pub m: i64,
}

impl NuValue {
    pub const ZERO: NuValue = NuValue {
        re: 0.0,
        im: 0.0,
        m: 0,
    };

    pub fn value(&self) -> C64 {
        C64::new(self.re, self.im)
    }
}

fn pole_gap(b: f64) -> f64 {
    WindingOptions::default().pole_gap * b.max(1.0)
}

/// Continuous argument of `a₁a₂` at the real point `x`, counted from `0` at `−∞` and passing
/// above the poles at `±|B|`. Points within the pole gap of `±|B|` are refused.
pub fn cumulative_argument(data: &ScatteringData, x: f64) -> Result<f64> {
    let b = data.wavenumber().abs();
    if b == 0.0 {
        return Err(Error::InvalidParam(
            "cumulative argument requires B != 0".into(),
        ));
    }
    if !x.is_finite() {
        return Err(Error::InvalidParam(format!("non-finite point {x}")));
    }
    if (x.abs() - b).abs() <= pole_gap(b) {
        return Err(Error::OutOfDomain(format!(
            "x = {x} sits on a zero of 1 + r1 r2 (transition ray |xi| = |B| = {b})"
        )));
    }
    if x > 0.0 {
        // a₁a₂(−k) = conj(a₁a₂(k)) on ℝ: the increment over (0, x) equals the one over (−x, 0)
        let at_zero = cumulative_nonpositive(data, 0.0)?;
        return Ok(2.0 * at_zero - cumulative_nonpositive(data, -x)?);
    }
    cumulative_nonpositive(data, x)
}

fn cumulative_nonpositive(data: &ScatteringData, x: f64) -> Result<f64> {
    let b = data.wavenumber().abs();
    let f = |k: f64| data.a1a2(k);
    let aopts = ArgOptions {
        floor: 1e-12,
        ..ArgOptions::default()
    };
    if x < -b {
        let left = far_left(data)?.min(x - 1.0);
        let path = track_argument(f, left, x, 400, f(left)?.arg(), &aopts)?;
        return Ok(path.last().map_or(0.0, |s| s.arg));
    }
    let path = argument_path(data, &WindingOptions::default())?;
    let after = &path.after_pole;
    let i = after.partition_point(|s| s.s <= x).max(1) - 1;
    let s = after[i];
    Ok(s.arg + (f(x)? / s.value).arg())
}

/// `ν(−ξ)` with its imaginary part on the cumulative branch of `arg(1 + r₁r₂)`.
///
/// The real part and the principal argument come from `1 + r₁r₂` formed from the reflection
/// coefficients; the cumulative argument comes from tracking `a₁a₂`. The two must differ by an
/// integer multiple of `2π`, which becomes `m`.
pub fn compute_nu(data: &ScatteringData, xi: f64) -> Result<NuValue> {
    if data.amplitude() == 0.0 {
        return Ok(NuValue::ZERO);
    }
    let x = -xi;
    let cumulative = cumulative_argument(data, x)?;
    let refl = data.reflection();
    let direct = 1.0 + refl.r1(x)? * refl.r2(x)?;
    if direct.norm() == 0.0 || !direct.is_finite() {
        return Err(Error::OutOfDomain(format!(
            "1 + r1 r2 vanishes or diverges at {x}"
        )));
    }
    let im = cumulative / (2.0 * PI);
    let principal_im = -direct.arg() / (2.0 * PI);
    let shift = im - principal_im;
    let m = shift.round();
    if (shift - m).abs() > 1e-8 {
        return Err(Error::Inconsistent(format!(
            "cumulative argument {cumulative} is not a branch of arg(1 + r1 r2) = {} at {x}",
            -direct.arg()
        )));
    }
    Ok(NuValue {
        re: -direct.norm().ln() / (2.0 * PI),
        im,
        m: m as i64,
    })
}
