use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::StepParams;

/// Residues of `a₁` at `±B` and of `b` at `B`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residues {
    pub a1_plus_b: C64,
    pub a1_minus_b: C64,
    pub b_b: C64,
}

/// Source of the spectral functions. Implementations may assume the domain checks of
/// [`ScatteringData`] have already been applied.
pub trait SpectralSource: Send + Sync {
    fn a1(&self, k: C64) -> Result<C64>;
    fn a2(&self, k: C64) -> Result<C64>;
    fn b(&self, k: C64) -> Result<C64>;

    fn a1_derivative(&self, k: C64) -> Result<C64> {
        central_difference(|z| self.a1(z), k)
    }

    fn a2_derivative(&self, k: C64) -> Result<C64> {
        central_difference(|z| self.a2(z), k)
    }

    /// Largest |k| at which the source can be evaluated at acceptable cost, if bounded.
    fn k_cutoff(&self) -> Option<f64> {
        None
    }
}

/// Real-direction central difference, step scaled to |k|.
pub(crate) fn central_difference(f: impl Fn(C64) -> Result<C64>, k: C64) -> Result<C64> {
    let h = 1e-5 * (1.0 + k.norm());
    Ok((f(k + h)? - f(k - h)?) / (2.0 * h))
}

/// Evaluators for `a₁` (closed upper half-plane minus `±B`), `a₂` (closed lower half-plane)
/// and `b` (real line minus `B`), with the residue coefficients.
#[derive(Clone)]
pub struct ScatteringData {
    background: StepParams,
    source: Arc<dyn SpectralSource>,
    residues: Option<Residues>,
}

impl fmt::Debug for ScatteringData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScatteringData")
            .field("background", &self.background)
            .field("residues", &self.residues)
            .finish()
    }
}

const HALF_PLANE_SLACK: f64 = 1e-12;

impl ScatteringData {
    pub fn new(
        background: StepParams,
        source: Arc<dyn SpectralSource>,
        residues: Option<Residues>,
    ) -> Self {
        Self {
            background,
            source,
            residues,
        }
    }

    pub fn background(&self) -> StepParams {
        self.background
    }

    pub fn amplitude(&self) -> f64 {
        self.background.a
    }

    pub fn wavenumber(&self) -> f64 {
        self.background.b
    }

    /// Residues, absent when `B = 0` (double pole at the origin).
    pub fn residues(&self) -> Option<Residues> {
        self.residues
    }

    pub fn require_residues(&self) -> Result<Residues> {
        self.residues.ok_or_else(|| {
            Error::InvalidParam("residue coefficients are undefined for B = 0".into())
        })
    }

    pub(crate) fn with_residues(mut self, r: Residues) -> Self {
        self.residues = Some(r);
        self
    }

    pub fn k_cutoff(&self) -> Option<f64> {
        self.source.k_cutoff()
    }

    fn at_pole(&self, k: C64, poles: &[f64]) -> bool {
        let scale = self.background.b.abs().max(1.0);
        poles.iter().any(|&p| (k - p).norm() <= 1e-14 * scale)
    }

    pub fn a1(&self, k: C64) -> Result<C64> {
        if k.im < -HALF_PLANE_SLACK {
            return Err(Error::OutOfDomain(format!(
                "a1 is defined on the closed upper half-plane, got k = {k}"
            )));
        }
        let b = self.background.b;
        if self.at_pole(k, &[b, -b]) && self.background.a != 0.0 {
            return Err(Error::OutOfDomain(format!("a1 has a pole at k = {k}")));
        }
        self.source.a1(k)
    }

    pub fn a2(&self, k: C64) -> Result<C64> {
        if k.im > HALF_PLANE_SLACK {
            return Err(Error::OutOfDomain(format!(
                "a2 is defined on the closed lower half-plane, got k = {k}"
            )));
        }
        self.source.a2(k)
    }

    pub fn b(&self, k: f64) -> Result<C64> {
        if self.at_pole(C64::new(k, 0.0), &[self.background.b]) && self.background.a != 0.0 {
            return Err(Error::OutOfDomain(format!("b has a pole at k = {k}")));
        }
        self.source.b(C64::new(k, 0.0))
    }

    pub fn a1_derivative(&self, k: C64) -> Result<C64> {
        self.a1(k)?;
        self.source.a1_derivative(k)
    }

    pub fn a2_derivative(&self, k: C64) -> Result<C64> {
        self.a2(k)?;
        self.source.a2_derivative(k)
    }

    /// `a₁(k)a₂(k)` on the real line.
    pub fn a1a2(&self, k: f64) -> Result<C64> {
        let z = C64::new(k, 0.0);
        Ok(self.a1(z)? * self.a2(z)?)
    }

    /// `d/dk log(a₁a₂)` on the real line.
    pub fn log_derivative_a1a2(&self, k: f64) -> Result<C64> {
        let z = C64::new(k, 0.0);
        Ok(self.a1_derivative(z)? / self.a1(z)? + self.a2_derivative(z)? / self.a2(z)?)
    }

    /// `a₁a₂ + b·conj(b(−k)) − 1`, zero for consistent data.
    pub fn determinant_defect(&self, k: f64) -> Result<C64> {
        Ok(self.a1a2(k)? + self.b(k)? * self.b(-k)?.conj() - 1.0)
    }

    pub fn reflection(&self) -> Reflection<'_> {
        Reflection { data: self }
    }
}

/// Reflection coefficients `r₁ = b/a₁` and `r₂ = conj(b(−k))/a₂` on ℝ∖{±B}.
pub struct Reflection<'a> {
    data: &'a ScatteringData,
}

impl Reflection<'_> {
    pub fn r1(&self, k: f64) -> Result<C64> {
        let a1 = self.data.a1(C64::new(k, 0.0))?;
        if a1.norm() == 0.0 {
            return Err(Error::Inconsistent(format!("a1 vanishes at real k = {k}")));
        }
        Ok(self.data.b(k)? / a1)
    }

    pub fn r2(&self, k: f64) -> Result<C64> {
        let a2 = self.data.a2(C64::new(k, 0.0))?;
        if a2.norm() == 0.0 {
            return Err(Error::Inconsistent(format!("a2 vanishes at real k = {k}")));
        }
        Ok(self.data.b(-k)?.conj() / a2)
    }

    /// `1 + r₁r₂`, computed as `1/(a₁a₂)`.
    pub fn one_plus_r1r2(&self, k: f64) -> Result<C64> {
        let p = self.data.a1a2(k)?;
        if p.norm() == 0.0 {
            return Err(Error::Inconsistent(format!(
                "a1*a2 vanishes at real k = {k}"
            )));
        }
        Ok(1.0 / p)
    }
}
