//! Case I / II tagging and rejection of threshold parameters.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::step::step_spectral_functions;
use super::winding::{winding_profile, Case, WindingProfile};
use super::zeros::{find_real_zeros, find_zeros, ZeroSet, THRESHOLD_RTOL};
use crate::error::{Error, Result};
use crate::params::StepParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseTag {
    pub case: Case,
    pub n: usize,
}

/// Rejects parameters on the thresholds excluded by the asymptotic results: real zeros of `a₁`,
/// `4B² = A²`, `R²(4B² − A²)/π²` a squared integer, or `2R√(4B² + A²)/π` an odd integer.
pub fn check_generic(params: StepParams) -> Result<()> {
    let StepParams { a, b, r } = params;
    let real = find_real_zeros(params);
    if !real.is_empty() {
        let ks: Vec<f64> = real.iter().map(|z| z.k).collect();
        return Err(Error::NonGeneric(format!(
            "a1 has real zeros at {ks:?} for A={a}, B={b}, R={r}"
        )));
    }
    let gap = 4.0 * b * b - a * a;
    if gap > 0.0 {
        let m = r * gap.sqrt() / PI;
        if (m - m.round()).abs() <= THRESHOLD_RTOL * m.max(1.0) {
            return Err(Error::NonGeneric(format!(
                "R^2(4B^2-A^2)/pi^2 = {} is a squared integer",
                m * m
            )));
        }
    }
    let s = 2.0 * r * (4.0 * b * b + a * a).sqrt() / PI;
    let odd = (s - 1.0) / 2.0;
    if r > 0.0 && (odd - odd.round()).abs() <= THRESHOLD_RTOL * s.max(1.0) {
        return Err(Error::NonGeneric(format!(
            "R = {r} sits on the threshold 2R sqrt(4B^2+A^2)/pi = {s}"
        )));
    }
    Ok(())
}

/// Combines the zero set and the winding profile into a case tag, verifying their consistency
/// and the interlacing `Re pₙ < ωₙ < … < Re p₁ < ω₁ < −|B|`.
pub fn classify_case(zeros: &ZeroSet, winding: &WindingProfile, b: f64) -> Result<CaseTag> {
    if !zeros.real_zeros.is_empty() {
        return Err(Error::NonGeneric("a1 vanishes on the real line".into()));
    }
    let expected = if zeros.imaginary_zero.is_some() {
        Case::I
    } else {
        Case::II
    };
    if expected != winding.case {
        return Err(Error::Inconsistent(format!(
            "imaginary zero {} but winding at zero is {} pi",
            if zeros.imaginary_zero.is_some() {
                "present"
            } else {
                "absent"
            },
            winding.winding_at_zero / PI
        )));
    }
    let n = zeros.complex_pairs.len();
    if n != winding.n {
        return Err(Error::Inconsistent(format!(
            "{n} complex pairs but winding implies n = {}",
            winding.n
        )));
    }
    let mut prev = -b.abs();
    for (p, w) in zeros.complex_pairs.iter().zip(&winding.omegas) {
        if !(*w < prev && p.p.re < *w) {
            return Err(Error::Inconsistent(format!(
                "interlacing fails: Re p = {}, omega = {w}, previous bound {prev}",
                p.p.re
            )));
        }
        prev = p.p.re;
    }
    Ok(CaseTag { case: expected, n })
}

/// Zeros, winding and case tag of the pure step, rejecting non-generic parameters.
pub fn classify_step(params: StepParams) -> Result<(ZeroSet, WindingProfile, CaseTag)> {
    params.require_winding_regime(true)?;
    check_generic(params)?;
    let zeros = find_zeros(params)?;
    let winding = winding_profile(&step_spectral_functions(params))?;
    let tag = classify_case(&zeros, &winding, params.b)?;
    Ok((zeros, winding, tag))
}
