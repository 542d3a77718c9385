use num_complex::Complex64 as C64;

use super::data::{Residues, ScatteringData};
use crate::error::{Error, Result};

/// Value at 0 of the polynomial interpolating `(w_j, g_j)`.
pub(crate) fn interpolate_at_zero(w: &[C64], g: &[C64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..w.len() {
        let mut l = C64::new(1.0, 0.0);
        for m in 0..w.len() {
            if m != j {
                l *= -w[m] / (w[j] - w[m]);
            }
        }
        acc += g[j] * l;
    }
    acc
}

const RING_POINTS: usize = 8;
const RING_RADIUS: f64 = 1e-2;
const FIT_TOL: f64 = 1e-6;

fn ring_residue(data: &ScatteringData, center: f64, rho: f64) -> Result<C64> {
    let mut w = Vec::with_capacity(RING_POINTS);
    let mut g = Vec::with_capacity(RING_POINTS);
    for j in 0..RING_POINTS {
        let phi = std::f64::consts::PI * j as f64 / (RING_POINTS - 1) as f64;
        let z = C64::from_polar(rho, phi);
        let z = if j == 0 || j == RING_POINTS - 1 {
            C64::new(z.re, 0.0)
        } else {
            z
        };
        w.push(z / rho);
        g.push(z * data.a1(C64::new(center, 0.0) + z)?);
    }
    Ok(interpolate_at_zero(&w, &g))
}

fn line_residue(data: &ScatteringData, center: f64, rho: f64) -> Result<C64> {
    let mut w = Vec::with_capacity(RING_POINTS);
    let mut g = Vec::with_capacity(RING_POINTS);
    for j in 0..RING_POINTS {
        let t = (2.0 * j as f64 - (RING_POINTS - 1) as f64) / (RING_POINTS - 1) as f64;
        w.push(C64::new(t, 0.0));
        g.push(rho * t * data.b(center + rho * t)?);
    }
    Ok(interpolate_at_zero(&w, &g))
}

/// Richardson combination of two fits at radii ρ and ρ/2 (interpolation error O(ρ⁸)).
fn refined(f: impl Fn(f64) -> Result<C64>, rho: f64, what: &str) -> Result<C64> {
    let coarse = f(rho)?;
    let fine = f(0.5 * rho)?;
    let p = 2f64.powi(RING_POINTS as i32);
    let est = (fine * p - coarse) / (p - 1.0);
    let spread = (fine - coarse).norm();
    if spread > FIT_TOL * est.norm().max(1.0) {
        return Err(Error::Numerical(format!(
            "Laurent fit for {what} is not consistent with a simple pole (spread {spread:.3e})"
        )));
    }
    Ok(est)
}

/// Laurent-fit residues of `a₁` at `±B` (upper half-ring) and of `b` at `B` (real segment).
pub fn residue_coefficients(data: &ScatteringData) -> Result<Residues> {
    let b = data.wavenumber();
    if b == 0.0 {
        return Err(Error::InvalidParam("residues at ±B need B ≠ 0".into()));
    }
    let rho = RING_RADIUS.min(0.25 * b.abs());
    let plus = refined(|r| ring_residue(data, b, r), rho, "a1 at +B")?;
    let minus = refined(|r| ring_residue(data, -b, r), rho, "a1 at -B")?;
    let bb = refined(|r| line_residue(data, b, r), rho, "b at B")?;
    Ok(Residues {
        a1_plus_b: plus,
        a1_minus_b: minus,
        b_b: bb,
    })
}

/// Defects of the residue relations: `a₁^B + (A/2i)·conj(b(−B))`, `a₁^{−B} + conj(a₁^B)` and
/// `a₁^B·(a₂(B) − (2i/A)·b^B)`.
pub fn residue_relation_defects(data: &ScatteringData, res: &Residues) -> Result<[f64; 3]> {
    let a = data.amplitude();
    let b = data.wavenumber();
    let i = C64::new(0.0, 1.0);
    let first = res.a1_plus_b + (a / (2.0 * i)) * data.b(-b)?.conj();
    let second = res.a1_minus_b + res.a1_plus_b.conj();
    let third = if a == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        res.a1_plus_b * (data.a2(C64::new(b, 0.0))? - (2.0 * i / a) * res.b_b)
    };
    Ok([first.norm(), second.norm(), third.norm()])
}
