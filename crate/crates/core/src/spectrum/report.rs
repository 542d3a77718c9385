//! JSON summary of the discrete spectrum and winding data.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::classify::{classify_step, CaseTag};
use super::winding::{Case, WindingProfile};
use super::zeros::{ComplexPair, RealZero, ZeroSet};
use crate::error::Result;
use crate::params::StepParams;
use crate::scattering::NormingConstants;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairEntry {
    pub re: f64,
    pub im: f64,
    pub tau: f64,
    pub y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexEntry {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexEntry {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexEntry> for C64 {
    fn from(z: ComplexEntry) -> Self {
        C64::new(z.re, z.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub params: StepParams,
    pub real_zeros: Vec<RealZero>,
    pub k0: Option<f64>,
    /// `pⱼ` with negative real part; each implies the partner `−p̄ⱼ`.
    pub pairs: Vec<PairEntry>,
    pub omegas: Vec<f64>,
    #[serde(rename = "theta_minusB")]
    pub theta_minus_b: f64,
    pub winding_at_zero_over_pi: f64,
    pub case: Case,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma0: Option<ComplexEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub etas: Vec<ComplexEntry>,
}

impl SpectrumReport {
    pub fn assemble(
        params: StepParams,
        zeros: &ZeroSet,
        winding: &WindingProfile,
        tag: CaseTag,
    ) -> Self {
        Self {
            params,
            real_zeros: zeros.real_zeros.clone(),
            k0: zeros.imaginary_zero,
            pairs: zeros
                .complex_pairs
                .iter()
                .map(|c| PairEntry {
                    re: c.p.re,
                    im: c.p.im,
                    tau: c.tau,
                    y: c.y,
                })
                .collect(),
            omegas: winding.omegas.clone(),
            theta_minus_b: winding.theta_minus_b,
            winding_at_zero_over_pi: winding.winding_at_zero / PI,
            case: tag.case,
            n: tag.n,
            gamma0: None,
            etas: Vec::new(),
        }
    }

    /// Full report for the pure step.
    pub fn for_step(params: StepParams) -> Result<Self> {
        let (z, w, t) = classify_step(params)?;
        Ok(Self::assemble(params, &z, &w, t))
    }

    pub fn with_norming(mut self, c: &NormingConstants) -> Self {
        self.gamma0 = c.gamma0.map(Into::into);
        self.etas = c.etas.iter().map(|&e| e.into()).collect();
        self
    }

    /// Upper-half-plane zeros with negative real part, `Re p₁ > Re p₂ > …`.
    pub fn pair_points(&self) -> Vec<C64> {
        self.pairs.iter().map(|p| C64::new(p.re, p.im)).collect()
    }

    pub fn zero_set(&self) -> ZeroSet {
        ZeroSet {
            real_zeros: self.real_zeros.clone(),
            imaginary_zero: self.k0,
            complex_pairs: self
                .pairs
                .iter()
                .map(|p| ComplexPair {
                    tau: p.tau,
                    y: p.y,
                    p: C64::new(p.re, p.im),
                })
                .collect(),
        }
    }
}
