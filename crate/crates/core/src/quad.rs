//! Adaptive Gauss–Kronrod quadrature for complex-valued integrands of a real variable.
//!
//! Finite intervals use a global adaptive G7/K15 scheme. Semi-infinite intervals are mapped to
//! `(0, π/2)` by `ζ = b − tan u` (left) or `ζ = a + tan u` (right). Principal values are taken by
//! subtracting the singular part on a window around the pole and adding it back in closed form.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-11,
            rel_tol: 1e-10,
            max_intervals: 40_000,
        }
    }
}

/// Value and error estimate of a quadrature.
#[derive(Clone, Copy, Debug)]
pub struct Estimate {
    pub value: C64,
    pub error: f64,
}

fn kronrod15<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    ((k * h), ((k - g) * h).norm())
}

struct Piece {
    a: f64,
    b: f64,
    value: C64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over `[a, b]`, splitting first at the given interior break points.
pub fn integrate<F: Fn(f64) -> C64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    opts: &QuadOptions,
) -> Result<Estimate> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Quadrature(format!("non-finite bounds [{a}, {b}]")));
    }
    if a == b {
        return Ok(Estimate {
            value: C64::new(0.0, 0.0),
            error: 0.0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut nodes = vec![lo];
    let mut inner: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&x| x > lo && x < hi)
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    nodes.extend(inner);
    nodes.push(hi);

    let mut heap = BinaryHeap::new();
    let mut total = C64::new(0.0, 0.0);
    let mut total_err = 0.0;
    // Pieces too narrow to split further are parked here with their error.
    let mut settled_err = 0.0;
    for w in nodes.windows(2) {
        let (v, e) = kronrod15(&f, w[0], w[1]);
        total += v;
        total_err += e;
        heap.push(Piece {
            a: w[0],
            b: w[1],
            value: v,
            error: e,
        });
    }
    let mut count = heap.len();
    loop {
        if !total.re.is_finite() || !total.im.is_finite() {
            return Err(Error::Quadrature(
                "integrand produced a non-finite value".into(),
            ));
        }
        let tol = opts.abs_tol.max(opts.rel_tol * total.norm());
        if total_err <= tol {
            break;
        }
        let Some(p) = heap.pop() else { break };
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) || (p.b - p.a) <= 1e-15 * p.a.abs().max(p.b.abs()).max(1.0) {
            settled_err += p.error;
            if settled_err > tol {
                return Err(Error::Quadrature(format!(
                    "unresolvable error {settled_err:.3e} near x = {mid}"
                )));
            }
            continue;
        }
        let (v1, e1) = kronrod15(&f, p.a, mid);
        let (v2, e2) = kronrod15(&f, mid, p.b);
        total += v1 + v2 - p.value;
        total_err += e1 + e2 - p.error;
        heap.push(Piece {
            a: p.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Piece {
            a: mid,
            b: p.b,
            value: v2,
            error: e2,
        });
        count += 1;
        if count > opts.max_intervals {
            return Err(Error::Quadrature(format!(
                "interval budget {} exhausted with error {total_err:.3e} (target {tol:.3e})",
                opts.max_intervals
            )));
        }
    }
    // Recompute the sum to shed accumulated cancellation from the running updates.
    let value: C64 = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum::<f64>() + settled_err;
    Ok(Estimate {
        value: value * sign,
        error,
    })
}

/// `∫_{−∞}^{b} f(ζ) dζ` through `ζ = b − tan u`.
pub fn integrate_left_infinite<F: Fn(f64) -> C64>(
    f: F,
    b: f64,
    breaks: &[f64],
    opts: &QuadOptions,
) -> Result<Estimate> {
    let ub: Vec<f64> = breaks
        .iter()
        .filter(|&&z| z < b)
        .map(|&z| (b - z).atan())
        .collect();
    integrate(
        |u| {
            let t = u.tan();
            let s = 1.0 + t * t;
            f(b - t) * s
        },
        0.0,
        FRAC_PI_2,
        &ub,
        opts,
    )
}

/// `∫_{a}^{∞} f(ζ) dζ` through `ζ = a + tan u`.
pub fn integrate_right_infinite<F: Fn(f64) -> C64>(
    f: F,
    a: f64,
    breaks: &[f64],
    opts: &QuadOptions,
) -> Result<Estimate> {
    let ub: Vec<f64> = breaks
        .iter()
        .filter(|&&z| z > a)
        .map(|&z| (z - a).atan())
        .collect();
    integrate(
        |u| {
            let t = u.tan();
            let s = 1.0 + t * t;
            f(a + t) * s
        },
        0.0,
        FRAC_PI_2,
        &ub,
        opts,
    )
}

/// Principal value `PV ∫_a^b f(ζ)/(ζ − s) dζ` for `a < s < b`, finite bounds.
///
/// The window `[s − d, s + d]` is handled by subtracting `f(s)`; `f_at_s` is that value.
pub fn principal_value<F: Fn(f64) -> C64>(
    f: F,
    f_at_s: C64,
    a: f64,
    b: f64,
    s: f64,
    breaks: &[f64],
    opts: &QuadOptions,
) -> Result<Estimate> {
    if !(a < s && s < b) {
        return Err(Error::Quadrature(format!("pole {s} not inside ({a}, {b})")));
    }
    let g = |z: f64| {
        if z == s {
            C64::new(0.0, 0.0)
        } else {
            (f(z) - f_at_s) / (z - s)
        }
    };
    let mut br: Vec<f64> = breaks.to_vec();
    br.push(s);
    let reg = integrate(g, a, b, &br, opts)?;
    let log_part = f_at_s * ((b - s) / (s - a)).ln();
    Ok(Estimate {
        value: reg.value + log_part,
        error: reg.error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn re(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> C64 {
        move |x| C64::new(f(x), 0.0)
    }

    #[test]
    fn polynomial_exact() {
        let e = integrate(
            re(|x| x.powi(5) - 3.0 * x),
            0.0,
            2.0,
            &[],
            &QuadOptions::default(),
        )
        .unwrap();
        assert!((e.value.re - (64.0 / 6.0 - 6.0)).abs() < 1e-13);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let o = QuadOptions::default();
        let a = integrate(re(f64::exp), 0.0, 1.0, &[], &o).unwrap().value;
        let b = integrate(re(f64::exp), 1.0, 0.0, &[], &o).unwrap().value;
        assert!((a + b).norm() < 1e-14);
    }

    #[test]
    fn log_endpoint_singularity() {
        let e = integrate(re(|x: f64| x.ln()), 0.0, 1.0, &[], &QuadOptions::default()).unwrap();
        assert!((e.value.re + 1.0).abs() < 1e-9);
    }

    #[test]
    fn left_tail_lorentzian() {
        let e = integrate_left_infinite(
            re(|x| 1.0 / (1.0 + x * x)),
            0.0,
            &[],
            &QuadOptions::default(),
        )
        .unwrap();
        assert!((e.value.re - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn right_tail_algebraic_decay() {
        // ∫_1^∞ dx/x³ = 1/2, and ∫_0^∞ e^{-x}·(1 + i x) dx = 1 + i
        let o = QuadOptions::default();
        let v = integrate_right_infinite(re(|x| x.powi(-3)), 1.0, &[], &o)
            .unwrap()
            .value;
        assert!((v.re - 0.5).abs() < 1e-10);
        let w = integrate_right_infinite(|x| (-x).exp() * C64::new(1.0, x), 0.0, &[], &o)
            .unwrap()
            .value;
        assert!((w - C64::new(1.0, 1.0)).norm() < 1e-10);
    }

    #[test]
    fn principal_value_of_reciprocal() {
        // PV ∫_{-1}^{2} dζ/(ζ) = ln 2
        let e = principal_value(
            re(|_| 1.0),
            C64::new(1.0, 0.0),
            -1.0,
            2.0,
            0.0,
            &[],
            &QuadOptions::default(),
        )
        .unwrap();
        assert!((e.value.re - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn principal_value_smooth_numerator() {
        // PV ∫_{-1}^{1} e^ζ/ζ dζ = Shi-type value 2·Shi(1)
        let shi1 = 1.057_250_875_375_728_5;
        let e = principal_value(
            re(f64::exp),
            C64::new(1.0, 0.0),
            -1.0,
            1.0,
            0.0,
            &[],
            &QuadOptions::default(),
        )
        .unwrap();
        assert!((e.value.re - 2.0 * shi1).abs() < 1e-11);
    }
}
