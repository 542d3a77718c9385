//! Zeros of `a₁` for the pure step: real, purely imaginary and complex pairs.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::argument::{count_zeros_argument_principle, Rect};
use super::step::StepSpectralFunctions;
use crate::error::{invalid, Error, Result};
use crate::params::StepParams;

/// Relative tolerance for the exact-threshold conditions on `(A, B, R)`.
pub const THRESHOLD_RTOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealZero {
    pub k: f64,
    pub multiplicity: u32,
}

/// Symmetric pair `{p, −p̄}` with `p = (−τ + iy)/(4R)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexPair {
    pub tau: f64,
    pub y: f64,
    pub p: C64,
}

impl ComplexPair {
    pub fn partner(&self) -> C64 {
        -self.p.conj()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub real_zeros: Vec<RealZero>,
    pub imaginary_zero: Option<f64>,
    /// Ordered so that `Re p₁ > Re p₂ > …`.
    pub complex_pairs: Vec<ComplexPair>,
}

impl ZeroSet {
    /// Number of zeros in the open upper half-plane.
    pub fn upper_count(&self) -> usize {
        self.imaginary_zero.is_some() as usize + 2 * self.complex_pairs.len()
    }

    /// All zeros in the open upper half-plane.
    pub fn upper_zeros(&self) -> Vec<C64> {
        let mut v: Vec<C64> = self
            .imaginary_zero
            .map(|k0| C64::new(0.0, k0))
            .into_iter()
            .collect();
        for c in &self.complex_pairs {
            v.push(c.p);
            v.push(c.partner());
        }
        v
    }
}

fn near(x: f64, target: f64) -> bool {
    (x - target).abs() <= THRESHOLD_RTOL * x.abs().max(target.abs()).max(f64::MIN_POSITIVE)
}

/// Real zeros, present only on the threshold sets of `(A, B, R)`.
pub fn find_real_zeros(params: StepParams) -> Vec<RealZero> {
    let StepParams { a, b, r } = params;
    let mut out = Vec::new();
    if a == 0.0 {
        return out;
    }
    let gap = 4.0 * b * b - a * a;
    if near(4.0 * b * b, a * a) {
        out.push(RealZero {
            k: 0.0,
            multiplicity: 2,
        });
    } else if gap > 0.0 && r > 0.0 {
        // π²n² = R²(4B² − A²), n ≥ 1: zeros ±πn/(2R) inside (−|B|, |B|)
        let target = r * r * gap;
        let n = (target.sqrt() / PI).round();
        if n >= 1.0 && near(PI * PI * n * n, target) {
            let k = PI * n / (2.0 * r);
            out.push(RealZero {
                k: -k,
                multiplicity: 1,
            });
            out.push(RealZero { k, multiplicity: 1 });
        }
    }
    if r > 0.0 {
        // π²(n + 1/2)² = R²(4B² + A²): zeros ±√(4B² + A²)/2
        let target = r * r * (4.0 * b * b + a * a);
        let n = (target.sqrt() / PI - 0.5).round();
        if n >= 0.0 && near(PI * PI * (n + 0.5) * (n + 0.5), target) {
            let k = (4.0 * b * b + a * a).sqrt() / 2.0;
            out.push(RealZero {
                k: -k,
                multiplicity: 1,
            });
            out.push(RealZero { k, multiplicity: 1 });
        }
    }
    out.sort_by(|x, y| x.k.total_cmp(&y.k));
    out
}

/// The unique `k₀ > 0` with `A²e^{−4k₀R} = 4(B² + k₀²)`, present iff `A² > 4B²`.
pub fn find_imaginary_zero(params: StepParams) -> Option<f64> {
    let StepParams { a, b, r } = params;
    if !(a * a > 4.0 * b * b) || near(a * a, 4.0 * b * b) {
        return None;
    }
    let g = |k: f64| a * a * (-4.0 * k * r).exp() - 4.0 * (b * b + k * k);
    let dg = |k: f64| -4.0 * r * a * a * (-4.0 * k * r).exp() - 8.0 * k;
    // g(0) > 0 and g(A/2) ≤ 0; g strictly decreasing
    let (mut lo, mut hi) = (0.0_f64, a / 2.0);
    while hi - lo > 1e-12 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut k = 0.5 * (lo + hi);
    for _ in 0..2 {
        let step = g(k) / dg(k);
        if step.is_finite() && (k - step) > 0.0 {
            k -= step;
        }
    }
    Some(k)
}

/// Positive branch `y(τ) = −τ cot τ + √(τ²cot²τ + τ² − 16B²R²)`, in a cancellation-free form.
pub fn zero_curve_y(params: StepParams, tau: f64) -> f64 {
    let c = 16.0 * params.b * params.b * params.r * params.r;
    let (s, co) = tau.sin_cos();
    let d = (tau * tau - c * s * s).max(0.0).sqrt();
    if co < 0.0 {
        -s * (tau * tau - c) / (d - tau * co)
    } else {
        -(tau * co + d) / s
    }
}

/// `y·e^y + 2A²R²·sin τ/τ`, vanishing at the complex zeros.
pub fn zero_curve_residual(params: StepParams, tau: f64) -> f64 {
    let y = zero_curve_y(params, tau);
    let ar = params.a * params.r;
    y * y.exp() + 2.0 * ar * ar * tau.sin() / tau
}

/// Number of complex pairs: indices `n ≥ 1` with `4A²R² > π²(2n−1)² − 16B²R²`.
pub fn complex_pair_count(params: StepParams) -> usize {
    let StepParams { a, b, r } = params;
    if r == 0.0 || a == 0.0 {
        return 0;
    }
    let bound = 4.0 * r * r * (a * a + 4.0 * b * b);
    // (2n − 1)π < √bound
    let m = bound.sqrt() / PI;
    let mut n = ((m + 1.0) / 2.0).floor() as usize;
    while n > 0 && PI * PI * ((2 * n - 1) as f64).powi(2) >= bound {
        n -= 1;
    }
    while PI * PI * ((2 * n + 1) as f64).powi(2) < bound {
        n += 1;
    }
    n
}

fn solve_pair(params: StepParams, n: usize) -> Result<ComplexPair> {
    let t0 = (2 * n - 1) as f64 * PI;
    let t1 = 2.0 * n as f64 * PI;
    let f = |t: f64| zero_curve_residual(params, t);
    // F(t0) = 0 with negative slope, F → +∞ at t1: find a negative and a positive sample
    let mut samples: Vec<f64> = (1..60).map(|j| t0 + PI * 0.5f64.powi(j)).collect();
    samples.extend((1..256).map(|i| t0 + PI * i as f64 / 256.0));
    samples.sort_by(f64::total_cmp);
    let neg = samples
        .iter()
        .copied()
        .find(|&t| f(t) < 0.0)
        .ok_or_else(|| {
            Error::Numerical(format!("no sign change on interval {n} of the zero curve"))
        })?;
    let pos = samples
        .iter()
        .copied()
        .filter(|&t| t > neg)
        .find(|&t| f(t) > 0.0)
        .ok_or_else(|| {
            Error::Numerical(format!(
                "no positive sample on interval {n} of the zero curve"
            ))
        })?;
    let (mut lo, mut hi) = (neg, pos);
    while hi - lo > 1e-12 * t1 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tau = 0.5 * (lo + hi);
    let y = zero_curve_y(params, tau);
    let s = StepSpectralFunctions { params };
    let mut p = C64::new(-tau, y) / (4.0 * params.r);
    for _ in 0..2 {
        let d = s.a1_derivative_raw(p);
        let step = s.a1_raw(p) / d;
        if step.is_finite() {
            p -= step;
        }
    }
    let z = p * 4.0 * params.r;
    Ok(ComplexPair {
        tau: -z.re,
        y: z.im,
        p,
    })
}

/// Complex pairs `{pⱼ, −p̄ⱼ}` with `τⱼ ∈ ((2j−1)π, 2jπ)`.
pub fn find_complex_zeros(params: StepParams) -> Result<Vec<ComplexPair>> {
    if params.shift_phase() > PI {
        return invalid(format!(
            "complex zero search requires 4|B|R <= pi, got {}",
            params.shift_phase()
        ));
    }
    let n = complex_pair_count(params);
    (1..=n).map(|j| solve_pair(params, j)).collect()
}

/// Every zero of `a₁` for the pure step.
pub fn find_zeros(params: StepParams) -> Result<ZeroSet> {
    Ok(ZeroSet {
        real_zeros: find_real_zeros(params),
        imaginary_zero: find_imaginary_zero(params),
        complex_pairs: find_complex_zeros(params)?,
    })
}

/// Rectangle in `ℂ⁺` enclosing all non-real zeros, from `|k| ≤ A/2 + |B|`.
pub fn zero_search_rectangle(params: StepParams) -> Rect {
    let w = params.a / 2.0 + params.b.abs() + 1.0;
    Rect {
        x0: -w,
        x1: w,
        y0: 1e-3,
        y1: w,
    }
}

/// Argument-principle count of the zeros of the closed-form `a₁` inside `rect`.
pub fn count_step_zeros(params: StepParams, rect: Rect, samples_per_side: usize) -> Result<i64> {
    let s = StepSpectralFunctions { params };
    // e^{4ikR} turns 4R radians per unit length: keep at least 8 samples per turn
    let side = (rect.x1 - rect.x0).max(rect.y1 - rect.y0);
    let floor = (8.0 * 4.0 * params.r * side / (2.0 * PI)).ceil() as usize;
    count_zeros_argument_principle(|k| Ok(s.a1_raw(k)), rect, samples_per_side.max(floor))
}
