//! Cauchy integrals `δ` and `δ̂` of `log(1 + r₁r₂)` along the cut `(−∞, −ξ)`.
//!
//! With `F` the logarithm of the jump on the cut and `b = −ξ`,
//! `log δ(k) = (1/2πi)∫_{−∞}^{b} F(ζ)/(ζ − k) dζ`. The integral is split into
//!
//! * a far tail `(−∞, −Z)`, where only the closed-form factor of `δ̂` is kept (the spectral
//!   part is `O(ζ⁻²)` there);
//! * a direct piece `(−Z, c)`, with principal values and `±iπF` on the cut;
//! * a near piece `(c, b)` integrated by parts, `F(b)log(k − b) − F(c)log(k − c) −
//!   ∫ log(k − ζ)F'(ζ)dζ`, which exposes the factor `(k + ξ)^{iν}` exactly.
//!
//! `δ̂` multiplies the jump by `h(ζ) = (ζ + k̃₀)/(ζ − p)` on the cut, adds the integral of
//! `log h` over `(b, ∞)` and carries `(k − p)/(k + k̃₀)` in the upper half-plane.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::nu::{compute_nu, NuValue};
use crate::error::{Error, Result};
use crate::quad::{
    integrate, integrate_left_infinite, integrate_right_infinite, principal_value, QuadOptions,
};
use crate::scattering::ScatteringData;
use crate::spectrum::argument::{track_argument, ArgOptions};
use crate::spectrum::nearest_branch;

/// Which boundary value to take on the cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutSide {
    Plus,
    Minus,
}

impl CutSide {
    fn sign(self) -> f64 {
        match self {
            CutSide::Plus => 1.0,
            CutSide::Minus => -1.0,
        }
    }
}

/// Pole label of `δ̂`: the point `p = B` or `p = −B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pole {
    PlusB,
    MinusB,
}

impl Pole {
    pub fn point(self, b: f64) -> f64 {
        match self {
            Pole::PlusB => b,
            Pole::MinusB => -b,
        }
    }

    /// The label whose point is `−|B|`.
    pub fn for_wavenumber(b: f64) -> Pole {
        if b < 0.0 {
            Pole::PlusB
        } else {
            Pole::MinusB
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CauchyOptions {
    /// The spectral part of the jump is integrated over `(−far_cut, −ξ)` only.
    pub far_cut: f64,
    /// Initial cells for the argument tracking along the cut.
    pub cells: usize,
    pub quad: QuadOptions,
}

impl Default for CauchyOptions {
    fn default() -> Self {
        Self {
            far_cut: 1e4,
            cells: 400,
            quad: QuadOptions {
                abs_tol: 1e-12,
                rel_tol: 1e-11,
                max_intervals: 400_000,
            },
        }
    }
}

/// Default auxiliary point `k̃₀ = i(1 + |B|)`.
pub fn default_k0_tilde(b: f64) -> C64 {
    C64::new(0.0, 1.0 + b.abs())
}

/// `log w`, with the argument `±π` on the negative axis chosen by `sgn` (the sign of the
/// infinitesimal imaginary part of `w`).
fn side_log(w: C64, sgn: f64) -> C64 {
    if w.im == 0.0 && w.re < 0.0 {
        C64::new((-w.re).ln(), sgn * PI)
    } else {
        w.ln()
    }
}

/// Runs a quadrature on a fallible integrand, reporting the first evaluation error.
fn fallible<T>(
    f: impl Fn(f64) -> Result<C64>,
    run: impl FnOnce(&dyn Fn(f64) -> C64) -> Result<T>,
) -> Result<T> {
    let err: RefCell<Option<Error>> = RefCell::new(None);
    let g = |z: f64| match f(z) {
        Ok(v) => v,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            C64::new(f64::NAN, f64::NAN)
        }
    };
    let out = run(&g);
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    out
}

/// Evaluator of `δ(k, ξ)` or `δ̂(k, ξ; p)` for fixed scattering data and `ξ`.
#[derive(Clone, Debug)]
pub struct DeltaEvaluator {
    data: ScatteringData,
    xi: f64,
    end: f64,
    pole: Option<f64>,
    k0t: C64,
    split: f64,
    far: f64,
    left: f64,
    /// `(ζ, arg G(ζ))` along `[left, end]`, with `G` the jump (times `h` for `δ̂`).
    table: Vec<(f64, f64)>,
    nu: NuValue,
    opts: CauchyOptions,
}

impl DeltaEvaluator {
    /// `δ(k, ξ)`, defined when the cut `(−∞, −ξ)` avoids the zeros `±|B|` of `1 + r₁r₂`.
    pub fn delta(data: &ScatteringData, xi: f64) -> Result<Self> {
        Self::delta_with(data, xi, CauchyOptions::default())
    }

    pub fn delta_with(data: &ScatteringData, xi: f64, opts: CauchyOptions) -> Result<Self> {
        let b = data.wavenumber().abs();
        if data.amplitude() != 0.0 && -xi >= -b {
            return Err(Error::OutOfDomain(format!(
                "delta needs xi > |B| = {b} so that the cut avoids the zero of 1 + r1 r2; got xi = {xi}"
            )));
        }
        Self::build(data, xi, None, C64::new(0.0, 1.0), opts)
    }

    /// `δ̂(k, ξ; p)` with `p = −|B|` inside the cut, `0 ≤ |ξ| < |B|`.
    pub fn hat(data: &ScatteringData, xi: f64, pole: Pole, k0_tilde: C64) -> Result<Self> {
        Self::hat_with(data, xi, pole, k0_tilde, CauchyOptions::default())
    }

    pub fn hat_with(
        data: &ScatteringData,
        xi: f64,
        pole: Pole,
        k0_tilde: C64,
        opts: CauchyOptions,
    ) -> Result<Self> {
        if !(k0_tilde.im > 0.0) || !k0_tilde.is_finite() {
            return Err(Error::InvalidParam(format!(
                "k0 tilde must lie in the open upper half-plane, got {k0_tilde}"
            )));
        }
        let b = data.wavenumber();
        if b == 0.0 {
            return Err(Error::InvalidParam("delta hat requires B != 0".into()));
        }
        let p = pole.point(b);
        if p != -b.abs() {
            return Err(Error::InvalidParam(format!(
                "pole {pole:?} gives p = {p}; the zero of 1 + r1 r2 on the cut is at -|B| = {}",
                -b.abs()
            )));
        }
        if !(xi.abs() < b.abs()) {
            return Err(Error::OutOfDomain(format!(
                "delta hat needs |xi| < |B| = {}, got xi = {xi}",
                b.abs()
            )));
        }
        Self::build(data, xi, Some(p), k0_tilde, opts)
    }

    fn build(
        data: &ScatteringData,
        xi: f64,
        pole: Option<f64>,
        k0t: C64,
        opts: CauchyOptions,
    ) -> Result<Self> {
        if !xi.is_finite() {
            return Err(Error::InvalidParam(format!("non-finite xi {xi}")));
        }
        let end = -xi;
        let mut far = opts.far_cut.max(4.0 * (end.abs() + 1.0));
        if let Some(cut) = data.k_cutoff() {
            far = far.min(cut);
        }
        let w = match pole {
            Some(p) => (0.5 * (end - p)).min(1.0),
            None => 1.0,
        };
        let mut ev = Self {
            data: data.clone(),
            xi,
            end,
            pole,
            k0t,
            split: end - w,
            far,
            left: end,
            table: Vec::new(),
            nu: NuValue::ZERO,
            opts,
        };
        ev.left = ev.far_left()?;
        if ev.left <= -far {
            return Err(Error::Numerical(format!(
                "jump does not settle near 1 before the far cut -{far} (left end {})",
                ev.left
            )));
        }
        // without reflection the jump of δ̂ is h alone, whose principal logarithm is the
        // boundary value of a function analytic in ℂ⁺; no branch tracking is needed
        if data.amplitude() != 0.0 {
            let aopts = ArgOptions {
                floor: 1e-12,
                ..ArgOptions::default()
            };
            let g = |z: f64| ev.jump(z);
            let start = g(ev.left)?.arg();
            let path = track_argument(g, ev.left, end, opts.cells, start, &aopts)?;
            ev.table = path.iter().map(|s| (s.s, s.arg)).collect();
        }

        // ν from the endpoint values of the logarithms must match the tracked ν(−ξ)
        let nu = compute_nu(data, xi)?;
        let fb = ev.log_jump(end)? - ev.pole.map_or(C64::new(0.0, 0.0), |_| ev.log_h(end));
        let from_table = -fb / (2.0 * PI);
        if (from_table.re - nu.re).abs() > 1e-8 || (from_table.im - nu.im).abs() > 1e-8 {
            return Err(Error::Inconsistent(format!(
                "nu from the cut logarithm ({from_table}) disagrees with the tracked nu ({})",
                nu.value()
            )));
        }
        ev.nu = nu;
        Ok(ev)
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn nu(&self) -> NuValue {
        self.nu
    }

    pub(crate) fn end(&self) -> f64 {
        self.end
    }

    pub fn pole(&self) -> Option<f64> {
        self.pole
    }

    pub fn k0_tilde(&self) -> C64 {
        self.k0t
    }

    /// Lower end of the range on which boundary values are available.
    pub fn far_cut(&self) -> f64 {
        -self.far
    }

    /// Jump `1 + r₁r₂ = 1/(a₁a₂)`, times `h` for `δ̂`.
    pub(crate) fn jump(&self, z: f64) -> Result<C64> {
        match self.pole {
            None => Ok(1.0 / self.data.a1a2(z)?),
            Some(p) => {
                // the ratio is smooth through p but 0/0 in floating point: interpolate across
                let w = 1e-5 * p.abs().max(1.0);
                let raw =
                    |z: f64| -> Result<C64> { Ok((z + self.k0t) / ((z - p) * self.data.a1a2(z)?)) };
                if (z - p).abs() < w && self.data.amplitude() != 0.0 {
                    let (lo, hi) = (raw(p - w)?, raw(p + w)?);
                    Ok(lo + (hi - lo) * ((z - p + w) / (2.0 * w)))
                } else {
                    raw(z)
                }
            }
        }
    }

    /// Logarithm of [`Self::jump`] on the branch continuous from `0` at `−∞`.
    pub(crate) fn log_jump(&self, z: f64) -> Result<C64> {
        let v = self.jump(z)?;
        let arg = if z <= self.left || self.table.is_empty() {
            v.arg()
        } else {
            let i = self
                .table
                .partition_point(|e| e.0 <= z)
                .clamp(1, self.table.len() - 1);
            let (z0, a0) = self.table[i - 1];
            let (z1, a1) = self.table[i];
            let t = if z1 > z0 {
                ((z - z0) / (z1 - z0)).clamp(0.0, 1.0)
            } else {
                0.0
            };
            nearest_branch(v.arg(), a0 + t * (a1 - a0))
        };
        Ok(C64::new(v.norm().ln(), arg))
    }

    fn dlog_jump(&self, z: f64) -> Result<C64> {
        let mut d = -self.data.log_derivative_a1a2(z)?;
        if let Some(p) = self.pole {
            d += 1.0 / (z + self.k0t) - 1.0 / (z - p);
        }
        Ok(d)
    }

    /// `log h(ζ)`, `h = (ζ + k̃₀)/(ζ − p)`, continuous on each side of `p` and `→ 0` at `±∞`.
    pub(crate) fn log_h(&self, z: f64) -> C64 {
        let p = self.pole.unwrap_or(0.0);
        if z > p {
            (z + self.k0t).ln() - (z - p).ln()
        } else {
            ((z + self.k0t) / (z - p)).ln()
        }
    }

    fn dlog_h(&self, z: f64) -> C64 {
        1.0 / (z + self.k0t) - 1.0 / (z - self.pole.unwrap_or(0.0))
    }

    fn far_left(&self) -> Result<f64> {
        let scale = self.data.wavenumber().abs() + self.data.amplitude() + self.k0t.norm() + 1.0;
        let mut k = (4.0 * scale).max(1.0 - self.end);
        loop {
            let mut ok = true;
            for s in [k, 2.0 * k, 4.0 * k] {
                let z = -s.min(self.far);
                if (self.jump(z)? - 1.0).norm() >= 0.25 {
                    ok = false;
                }
            }
            if ok {
                return Ok(-k);
            }
            if k >= self.far {
                return Ok(-self.far);
            }
            k = (2.0 * k).min(self.far);
        }
    }

    fn breaks_in(&self, lo: f64, hi: f64, k: C64) -> Vec<f64> {
        let mut v: Vec<f64> = Vec::new();
        let mut m = 10.0;
        while m < self.far {
            v.push(-m);
            m *= 10.0;
        }
        v.push(self.left);
        if let Some(p) = self.pole {
            v.push(p);
        }
        v.push(k.re);
        v.retain(|&z| z > lo && z < hi);
        v
    }

    /// `(1/2πi)∫ F/(ζ − k)` over the cut and, for `δ̂`, `log h` over `(b, ∞)`. With
    /// `at_end` the point is `k = b` and the `log(k − b)` terms are dropped.
    fn log_integral(&self, k: C64, sgn: f64, at_end: bool) -> Result<C64> {
        let q = &self.opts.quad;
        let b = self.end;
        let z = -self.far;
        let on_axis = k.im == 0.0;
        let mut c = self.split;
        if on_axis && (k.re - c).abs() < 1e-3 * (b - c) {
            c -= 0.25 * (b - c);
        }
        let mut total = C64::new(0.0, 0.0);

        if self.pole.is_some() {
            if on_axis && k.re <= z {
                return Err(Error::OutOfDomain(format!(
                    "boundary values need k > {z}, got {k}"
                )));
            }
            let tail = integrate_left_infinite(|t| self.log_h(t) / (t - k), z, &[], q)?;
            total += tail.value;
        }

        // direct piece on (−Z, c)
        let br = self.breaks_in(z, c, k);
        if on_axis && k.re > z && k.re < c {
            let s = k.re;
            let fs = self.log_jump(s)?;
            let pv = fallible(
                |t| self.log_jump(t),
                |f| principal_value(f, fs, z, c, s, &br, q),
            )?;
            total += pv.value + C64::new(0.0, sgn * PI) * fs;
        } else {
            if on_axis && k.re <= z {
                return Err(Error::OutOfDomain(format!(
                    "boundary values need k > {z}, got {k}"
                )));
            }
            let direct = fallible(
                |t| Ok(self.log_jump(t)? / (t - k)),
                |f| integrate(f, z, c, &br, q),
            )?;
            total += direct.value;
        }

        // near piece on (c, b), by parts
        let fb = self.log_jump(b)?;
        let fc = self.log_jump(c)?;
        if !at_end {
            total += fb * side_log(k - b, sgn);
        }
        total -= fc * side_log(k - c, sgn);
        let br = self.breaks_in(c, b, k);
        let near = fallible(
            |t| Ok(side_log(k - t, sgn) * self.dlog_jump(t)?),
            |f| integrate(f, c, b, &br, q),
        )?;
        total -= near.value;

        if self.pole.is_some() {
            // (b, d) by parts, then (d, ∞); d stays clear of a real evaluation point
            let d = if on_axis && (k.re - (b + 1.0)).abs() < 0.25 {
                b + 1.5
            } else {
                b + 1.0
            };
            let f2b = self.log_h(b);
            let f2d = self.log_h(d);
            if !at_end {
                total -= f2b * side_log(b - k, -sgn);
            }
            total += f2d * side_log(d - k, -sgn);
            let br: Vec<f64> = [k.re].into_iter().filter(|&t| t > b && t < d).collect();
            let near2 = integrate(|t| side_log(t - k, -sgn) * self.dlog_h(t), b, d, &br, q)?;
            total -= near2.value;
            if on_axis && k.re > d {
                let s = k.re;
                let big = 2.0 * s - d + 1.0;
                let fs = self.log_h(s);
                let pv = principal_value(|t| self.log_h(t), fs, d, big, s, &[], q)?;
                let tail = integrate_right_infinite(|t| self.log_h(t) / (t - k), big, &[], q)?;
                total += pv.value + C64::new(0.0, sgn * PI) * fs + tail.value;
            } else {
                let br: Vec<f64> = [k.re].into_iter().filter(|&t| t > d).collect();
                let tail = integrate_right_infinite(|t| self.log_h(t) / (t - k), d, &br, q)?;
                total += tail.value;
            }
        }
        Ok(total / C64::new(0.0, 2.0 * PI))
    }

    fn resolve_side(&self, k: C64, side: Option<CutSide>) -> Result<f64> {
        if !k.is_finite() {
            return Err(Error::InvalidParam(format!("non-finite k = {k}")));
        }
        if k.im > 0.0 {
            return Ok(1.0);
        }
        if k.im < 0.0 {
            return Ok(-1.0);
        }
        if k.re > self.end {
            return Ok(side.map_or(-1.0, CutSide::sign));
        }
        if k.re == self.end {
            return Err(Error::OutOfDomain(format!(
                "k = {k} is the singular endpoint -xi of the cut"
            )));
        }
        side.map(CutSide::sign).ok_or_else(|| {
            Error::OutOfDomain(format!(
                "k = {k} lies on the cut (-inf, {}]; a side is required",
                self.end
            ))
        })
    }

    /// `log` of the value, before the upper half-plane factor of `δ̂`.
    pub fn log_value(&self, k: C64, side: Option<CutSide>) -> Result<C64> {
        let sgn = self.resolve_side(k, side)?;
        self.log_integral(k, sgn, false)
    }

    /// Value off the cut, or a boundary value on it when `side` is given.
    pub fn eval(&self, k: C64, side: Option<CutSide>) -> Result<C64> {
        let sgn = self.resolve_side(k, side)?;
        let v = self.log_integral(k, sgn, false)?.exp();
        Ok(match self.pole {
            Some(p) if sgn > 0.0 => v * (k - p) / (k + self.k0t),
            _ => v,
        })
    }

    /// Boundary value at the real point `s` on the cut.
    pub fn boundary(&self, s: f64, side: CutSide) -> Result<C64> {
        self.eval(C64::new(s, 0.0), Some(side))
    }

    /// Regular part `χ` with `δ = (k + ξ)^{iν}e^{χ}` (for `δ̂`: `δ₁δ₂ = (k + ξ)^{iν}e^{χ₁+χ₂}`).
    pub fn chi(&self, k: C64, side: Option<CutSide>) -> Result<C64> {
        let sgn = self.resolve_side(k, side)?;
        let e = self.log_integral(k, sgn, false)?;
        Ok(e - C64::new(0.0, 1.0) * self.nu.value() * side_log(k - self.end, sgn))
    }

    /// `χ` at the stationary point `k = −ξ`, approached from the half-plane of `side`.
    pub fn chi_at_stationary_point(&self, side: CutSide) -> Result<C64> {
        let sgn = side.sign();
        let e = self.log_integral(C64::new(self.end, 0.0), sgn, true)?;
        let jump_term = if self.pole.is_some() {
            sgn * 0.5 * self.log_h(self.end)
        } else {
            C64::new(0.0, 0.0)
        };
        Ok(e + jump_term)
    }
}

/// `δ(k, ξ)` off the cut.
pub fn compute_delta(data: &ScatteringData, xi: f64, k: C64) -> Result<C64> {
    DeltaEvaluator::delta(data, xi)?.eval(k, None)
}

/// `δ̂(k, ξ; p)` off the cut. Debug builds repeat the evaluation with a second `k̃₀` and
/// require agreement.
pub fn compute_hat_delta(
    data: &ScatteringData,
    xi: f64,
    pole: Pole,
    k0_tilde: C64,
    k: C64,
) -> Result<C64> {
    let v = DeltaEvaluator::hat(data, xi, pole, k0_tilde)?.eval(k, None)?;
    if cfg!(debug_assertions) {
        let alt = if (k0_tilde - C64::new(1.0, 2.0)).norm() > 1e-3 {
            C64::new(1.0, 2.0)
        } else {
            C64::new(0.0, 1.0)
        };
        let w = DeltaEvaluator::hat(data, xi, pole, alt)?.eval(k, None)?;
        if (v - w).norm() > 1e-6 * v.norm().max(1.0) {
            return Err(Error::Inconsistent(format!(
                "delta hat depends on k0 tilde: {v} vs {w} at k = {k}"
            )));
        }
    }
    Ok(v)
}
