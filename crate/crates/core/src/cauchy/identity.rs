//! The identity `a₂(B) = δ̂₋(B, ξ)·conj(δ̂(−B, −ξ))` (exact without an imaginary zero
//! of `a₁`), checked through principal values of the raw Cauchy integrals.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::delta::{default_k0_tilde, CauchyOptions, DeltaEvaluator, Pole};
use crate::error::{Error, Result};
use crate::quad::{
    integrate, integrate_left_infinite, integrate_right_infinite, principal_value, QuadOptions,
};

use crate::scattering::ScatteringData;

const I2PI: C64 = C64::new(0.0, 2.0 * PI);

/// `(1/2πi)∫_{−∞}^{b} F/(ζ − k)` for real `k`, as a principal value when `k < b`.
fn cut_integral(ev: &DeltaEvaluator, k: f64) -> Result<C64> {
    // the jump is a ratio of two functions singular at the pole, so roundoff there sits near 1e-11
    let q = &QuadOptions {
        abs_tol: 1e-10,
        ..CauchyOptions::default().quad
    };
    let z = ev.far_cut();
    let b = ev.end();
    let tail = match ev.pole() {
        Some(_) => integrate_left_infinite(|t| ev.log_h(t) / (t - k), z, &[], q)?.value,
        None => C64::new(0.0, 0.0),
    };
    let mut breaks: Vec<f64> = ev.pole().into_iter().collect();
    breaks.push(-10.0);
    breaks.push(-100.0);
    let err = std::cell::RefCell::new(None);
    let f = |t: f64| {
        ev.log_jump(t).unwrap_or_else(|e| {
            err.borrow_mut().get_or_insert(e);
            C64::new(f64::NAN, 0.0)
        })
    };
    let body = if k > z && k < b {
        let fk = ev.log_jump(k)?;
        principal_value(f, fk, z, b, k, &breaks, q)
    } else {
        integrate(|t| f(t) / (t - k), z, b, &breaks, q)
    };
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok((tail + body?.value) / I2PI)
}

/// `(1/2πi)∫_{b}^{∞} log h/(ζ − k)` for real `k`, as a principal value when `k > b`.
fn right_integral(ev: &DeltaEvaluator, k: f64) -> Result<C64> {
    if ev.pole().is_none() {
        return Ok(C64::new(0.0, 0.0));
    }
    let q = &CauchyOptions::default().quad;
    let b = ev.end();
    let v = if k > b {
        let d = 2.0 * k - b + 1.0;
        let pv = principal_value(|t| ev.log_h(t), ev.log_h(k), b, d, k, &[], q)?;
        pv.value + integrate_right_infinite(|t| ev.log_h(t) / (t - k), d, &[], q)?.value
    } else {
        let d = b + 1.0;
        integrate(|t| ev.log_h(t) / (t - k), b, d, &[], q)?.value
            + integrate_right_infinite(|t| ev.log_h(t) / (t - k), d, &[], q)?.value
    };
    Ok(v / I2PI)
}

/// Principal part `(1/2πi)PV∫ F/(ζ − s)` of `log δ` (or `log δ̂`) at a real point, without
/// the `±F(s)/2` jump term. Independent of the integration-by-parts route used by
/// [`DeltaEvaluator::eval`].
pub fn principal_log_value(ev: &DeltaEvaluator, s: f64) -> Result<C64> {
    if !(s > ev.far_cut()) || s == ev.end() {
        return Err(Error::OutOfDomain(format!(
            "principal value needs {} < s != {}, got {s}",
            ev.far_cut(),
            ev.end()
        )));
    }
    Ok(cut_integral(ev, s)? + right_integral(ev, s)?)
}

/// Both factors of the identity: `δ̂₋(B, ξ)` and `δ̂(−B, −ξ)`, for `B < 0` and `|ξ| < −B`.
pub fn a2_identity_factors(data: &ScatteringData, xi: f64, k0_tilde: C64) -> Result<(C64, C64)> {
    let b = data.wavenumber();
    if !(b < 0.0) {
        return Err(Error::InvalidParam(format!(
            "the a2 identity is stated for B < 0, got B = {b}"
        )));
    }
    let first = DeltaEvaluator::hat(data, xi, Pole::PlusB, k0_tilde)?;
    // lower boundary value at the pole: −F(B)/2 plus the principal value
    let at_pole = -0.5 * first.log_jump(b)? + cut_integral(&first, b)? + right_integral(&first, b)?;
    let second = DeltaEvaluator::hat(data, -xi, Pole::PlusB, k0_tilde)?;
    // −B lies on (ξ, ∞), where δ̂ is continuous; take the lower value of the right integral
    let s = -b;
    let mirrored = cut_integral(&second, s)? + right_integral(&second, s)? - 0.5 * second.log_h(s);
    Ok((at_pole.exp(), mirrored.exp()))
}

/// `|a₂(B) − δ̂₋(B, ξ)·conj(δ̂(−B, −ξ))|` with the default `k̃₀`.
pub fn verify_a2_identity(data: &ScatteringData, xi: f64, b: f64) -> Result<f64> {
    if b != data.wavenumber() {
        return Err(Error::InvalidParam(format!(
            "B = {b} does not match the data (B = {})",
            data.wavenumber()
        )));
    }
    verify_a2_identity_with(data, xi, default_k0_tilde(b))
}

pub fn verify_a2_identity_with(data: &ScatteringData, xi: f64, k0_tilde: C64) -> Result<f64> {
    let (lower, mirrored) = a2_identity_factors(data, xi, k0_tilde)?;
    let a2 = data.a2(C64::new(data.wavenumber(), 0.0))?;
    Ok((a2 - lower * mirrored.conj()).norm())
}

/// Factor `(B − ik₀)/(B + ξ)` picked up by `δ̂₋(B, ξ)·conj(δ̂(−B, −ξ))` when `a₁` has the
/// imaginary zero `ik₀`; `1` without it.
pub fn imaginary_zero_factor(b: f64, xi: f64, imaginary_zero: Option<f64>) -> C64 {
    match imaginary_zero {
        Some(k0) => C64::new(b, -k0) / (b + xi),
        None => C64::new(1.0, 0.0),
    }
}

/// `|a₂(B)·f − δ̂₋(B, ξ)·conj(δ̂(−B, −ξ))|` with `f` from [`imaginary_zero_factor`].
pub fn verify_a2_identity_with_zero(
    data: &ScatteringData,
    xi: f64,
    imaginary_zero: Option<f64>,
) -> Result<f64> {
    let b = data.wavenumber();
    let (lower, mirrored) = a2_identity_factors(data, xi, default_k0_tilde(b))?;
    let a2 = data.a2(C64::new(b, 0.0))?;
    Ok((a2 * imaginary_zero_factor(b, xi, imaginary_zero) - lower * mirrored.conj()).norm())
}
