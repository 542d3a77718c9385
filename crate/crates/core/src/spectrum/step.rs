//! Closed-form spectral functions of the pure step.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::params::StepParams;
use crate::scattering::{Residues, ScatteringData, SpectralSource};

const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug)]
pub struct StepSpectralFunctions {
    pub params: StepParams,
}

impl StepSpectralFunctions {
    /// `a₁(k) = 1 + A²e^{4ikR}/(4(k²−B²))`, no domain checks.
    pub fn a1_raw(&self, k: C64) -> C64 {
        let StepParams { a, b, r } = self.params;
        1.0 + a * a * (4.0 * I * k * r).exp() / (4.0 * (k * k - b * b))
    }

    /// `(k − B)(k + B)·(a₁(k) − 1)`, the entire part of `a₁`.
    pub fn a1_numerator(&self, k: C64) -> C64 {
        let StepParams { a, r, .. } = self.params;
        a * a * (4.0 * I * k * r).exp() / 4.0
    }

    pub fn a1_derivative_raw(&self, k: C64) -> C64 {
        let StepParams { a, b, r } = self.params;
        let d = k * k - b * b;
        let e = (4.0 * I * k * r).exp();
        a * a / 4.0 * e * (4.0 * I * r / d - 2.0 * k / (d * d))
    }

    pub fn b_raw(&self, k: C64) -> C64 {
        let StepParams { a, b, r } = self.params;
        -I * a * (2.0 * I * r * (k - b)).exp() / (2.0 * (k - b))
    }

    pub fn residues(&self) -> Option<Residues> {
        let StepParams { a, b, r } = self.params;
        if b == 0.0 {
            return None;
        }
        let plus = a * a * (4.0 * I * b * r).exp() / (8.0 * b);
        Some(Residues {
            a1_plus_b: plus,
            a1_minus_b: -plus.conj(),
            b_b: -I * a / 2.0,
        })
    }
}

impl SpectralSource for StepSpectralFunctions {
    fn a1(&self, k: C64) -> Result<C64> {
        Ok(self.a1_raw(k))
    }

    fn a2(&self, _k: C64) -> Result<C64> {
        Ok(C64::new(1.0, 0.0))
    }

    fn b(&self, k: C64) -> Result<C64> {
        Ok(self.b_raw(k))
    }

    fn a1_derivative(&self, k: C64) -> Result<C64> {
        Ok(self.a1_derivative_raw(k))
    }

    fn a2_derivative(&self, _k: C64) -> Result<C64> {
        Ok(C64::new(0.0, 0.0))
    }
}

/// Scattering data of the pure step, with residues in closed form.
pub fn step_spectral_functions(params: StepParams) -> ScatteringData {
    let s = StepSpectralFunctions { params };
    ScatteringData::new(params, Arc::new(s), s.residues())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, b: f64, r: f64) -> StepParams {
        StepParams::new(a, b, r).unwrap()
    }

    #[test]
    fn a1_at_origin() {
        let d = step_spectral_functions(p(2.0, 0.5, 0.2));
        assert!((d.a1(C64::new(0.0, 0.0)).unwrap() - C64::new(-3.0, 0.0)).norm() < 1e-15);
        assert_eq!(d.a2(C64::new(0.0, 0.0)).unwrap(), C64::new(1.0, 0.0));
    }

    #[test]
    fn a1_vanishes_at_i_for_zero_shift() {
        let d = step_spectral_functions(p(2.0, 0.0, 0.0));
        assert!(d.a1(I).unwrap().norm() < 1e-15);
        assert!(d.residues().is_none());
    }

    #[test]
    fn a1_tends_to_one_up_the_imaginary_axis() {
        let d = step_spectral_functions(p(2.0, 0.5, 0.2));
        let v = d.a1(C64::new(0.0, 1e4)).unwrap();
        assert!((v - 1.0).norm() < 1e-8);
    }

    #[test]
    fn residue_at_plus_b_is_unimodular_for_reference_step() {
        let r = step_spectral_functions(p(2.0, 0.5, 0.2))
            .residues()
            .unwrap();
        assert!((r.a1_plus_b - C64::new(0.0, 0.4).exp()).norm() < 1e-15);
        assert!((r.a1_minus_b + r.a1_plus_b.conj()).norm() < 1e-15);
    }

    #[test]
    fn analytic_derivative_matches_difference_quotient() {
        let s = StepSpectralFunctions {
            params: p(2.0, 0.5, 0.2),
        };
        for &k in &[C64::new(0.1, 0.0), C64::new(-1.3, 0.4), C64::new(2.0, 1.0)] {
            let h = 1e-6;
            let fd = (s.a1_raw(k + h) - s.a1_raw(k - h)) / (2.0 * h);
            assert!((fd - s.a1_derivative(k).unwrap()).norm() < 1e-7 * (1.0 + fd.norm()));
        }
    }

    #[test]
    fn poles_and_half_planes_are_enforced() {
        let d = step_spectral_functions(p(2.0, 0.5, 0.2));
        assert!(d.a1(C64::new(0.5, 0.0)).is_err());
        assert!(d.a1(C64::new(-0.5, 0.0)).is_err());
        assert!(d.a1(C64::new(0.0, -0.1)).is_err());
        assert!(d.a2(C64::new(0.0, 0.1)).is_err());
        assert!(d.b(0.5).is_err());
        assert!(d.b(-0.5).is_ok());
    }
}
