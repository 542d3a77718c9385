//! Explicit meromorphic solution of the model problem with simple poles at `k = ±B`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::term::BLOWUP_MARGIN;
use crate::cauchy::{default_k0_tilde, CutSide, DeltaEvaluator, Pole};
use crate::error::{Error, Result};
use crate::scattering::ScatteringData;

/// `M(k) = [[(k + A₁)/(k − B), A₃/(k + B)], [A₂/(k − B), (k + A₄)/(k + B)]]`, normalised to
/// `I` at infinity, whose first column has residue `c₁·M⁽²⁾(B)` at `B` and whose second
/// column has residue `c₂·M⁽¹⁾(−B)` at `−B`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelRhSolution {
    pub b: f64,
    pub c1: C64,
    pub c2: C64,
    /// `A₁, A₂, A₃, A₄`.
    pub coeffs: [C64; 4],
}

/// Solves for `A₁…A₄`. Refuses `|4B² + c₁c₂| < 0.05·4B²`.
pub fn model_rh_solution(b: f64, c1: C64, c2: C64) -> Result<ModelRhSolution> {
    if b == 0.0 || !b.is_finite() {
        return Err(Error::InvalidParam(format!(
            "model problem needs finite B != 0, got {b}"
        )));
    }
    let b2 = 4.0 * b * b;
    let c = c1 * c2;
    let den = b2 + c;
    if den.norm() < BLOWUP_MARGIN * b2 {
        return Err(Error::NearSingular(format!(
            "|4B^2 + c1 c2| = {:.3e}",
            den.norm()
        )));
    }
    let coeffs = [
        (b * c - b2 * b) / den,
        b2 * c1 / den,
        b2 * c2 / den,
        (b2 * b - b * c) / den,
    ];
    Ok(ModelRhSolution { b, c1, c2, coeffs })
}

impl ModelRhSolution {
    pub fn matrix(&self, k: C64) -> [[C64; 2]; 2] {
        let [a1, a2, a3, a4] = self.coeffs;
        let (m, p) = (k - self.b, k + self.b);
        [[(k + a1) / m, a3 / p], [a2 / m, (k + a4) / p]]
    }

    /// `q = 2i·lim k·M₁₂ = 2i·A₃`.
    pub fn potential(&self) -> C64 {
        C64::new(0.0, 2.0) * self.coeffs[2]
    }

    /// Residue defects of both conditions, with the residues taken by the trapezoidal rule
    /// on circles of radius `|B|/4` (exact for the simple poles up to rounding).
    pub fn residue_defects(&self) -> (f64, f64) {
        let b = self.b;
        let r = 0.25 * b.abs();
        let n = 256;
        let residue = |centre: f64, col: usize| -> [C64; 2] {
            let mut s = [C64::new(0.0, 0.0); 2];
            for j in 0..n {
                let w = C64::from_polar(r, 2.0 * PI * j as f64 / n as f64);
                let m = self.matrix(centre + w);
                // (1/2πi)∮ f dk with dk = i·w·dφ
                for (row, acc) in s.iter_mut().enumerate() {
                    *acc += m[row][col] * w / n as f64;
                }
            }
            s
        };
        let at = |k: f64, col: usize| {
            let m = self.matrix(C64::new(k, 0.0));
            [m[0][col], m[1][col]]
        };
        let r1 = residue(b, 0);
        let t1 = at(b, 1);
        let d1 = ((r1[0] - self.c1 * t1[0]).norm()).max((r1[1] - self.c1 * t1[1]).norm());
        let r2 = residue(-b, 1);
        let t2 = at(-b, 0);
        let d2 = ((r2[0] - self.c2 * t2[0]).norm()).max((r2[1] - self.c2 * t2[1]).norm());
        (d1, d2)
    }
}

/// `c₁(x, t) = (A/2i)·a₂²(B)·δ̂₋⁻²(B, ξ)·e^{2iBx+4iB²t}` and
/// `c₂(x, t) = (A/2i)·δ̂²(−B, ξ)·e^{2iBx−4iB²t}` for `B < 0` and `|ξ| < |B|`.
pub fn model_coefficients(data: &ScatteringData, x: f64, t: f64) -> Result<(C64, C64)> {
    let b = data.wavenumber();
    if !(b < 0.0) {
        return Err(Error::InvalidParam(format!(
            "the model problem is set up for B < 0, got {b}"
        )));
    }
    if !(t > 0.0) {
        return Err(Error::InvalidParam(format!("need t > 0, got {t}")));
    }
    let xi = x / (4.0 * t);
    let ev = DeltaEvaluator::hat(data, xi, Pole::for_wavenumber(b), default_k0_tilde(b))?;
    let lower = ev.boundary(b, CutSide::Minus)?;
    let upper = ev.eval(C64::new(-b, 0.0), None)?;
    let a2 = data.a2(C64::new(b, 0.0))?;
    let half = C64::new(0.0, -0.5) * data.amplitude();
    let i = C64::new(0.0, 1.0);
    let c1 = half * a2 * a2 / (lower * lower) * (i * (2.0 * b * x + 4.0 * b * b * t)).exp();
    let c2 = half * upper * upper * (i * (2.0 * b * x - 4.0 * b * b * t)).exp();
    Ok((c1, c2))
}

/// Residuals `(|A₃(x) − conj(A₂(−x))|, |A₃(x) + conj(A₂(−x))|)` at time `t`.
pub fn reflection_residuals(data: &ScatteringData, x: f64, t: f64) -> Result<(f64, f64)> {
    let b = data.wavenumber();
    let (c1, c2) = model_coefficients(data, x, t)?;
    let here = model_rh_solution(b, c1, c2)?;
    let (d1, d2) = model_coefficients(data, -x, t)?;
    let there = model_rh_solution(b, d1, d2)?;
    let a3 = here.coeffs[2];
    let a2 = there.coeffs[1].conj();
    Ok(((a3 - a2).norm(), (a3 + a2).norm()))
}
