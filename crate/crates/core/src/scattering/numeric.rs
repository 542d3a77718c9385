//! Scattering data of a sampled datum through determinants of Jost columns at x = 0.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::data::{ScatteringData, SpectralSource};
use super::datum::InitialDatum;
use super::jost::{det2, jost_column_with_step, JostOptions, Side};
use super::residues::residue_coefficients;
use crate::error::Result;

/// Spectral functions evaluated by integrating the Jost solutions for each `k`.
#[derive(Clone, Debug)]
pub struct NumericalSpectralFunctions {
    pub datum: Arc<InitialDatum>,
    pub opts: JostOptions,
    pub k_cutoff: f64,
}

impl NumericalSpectralFunctions {
    pub fn new(datum: InitialDatum) -> Self {
        Self {
            datum: Arc::new(datum),
            opts: JostOptions::default(),
            k_cutoff: 400.0,
        }
    }

    fn column(&self, side: Side, col: usize, k: C64, step: f64) -> Result<[C64; 2]> {
        jost_column_with_step(&self.datum, side, col, k, 0.0, step)
    }

    fn a1_step(&self, k: C64, step: f64) -> Result<C64> {
        Ok(det2(
            self.column(Side::Left, 0, k, step)?,
            self.column(Side::Right, 1, k, step)?,
        ))
    }

    fn a2_step(&self, k: C64, step: f64) -> Result<C64> {
        Ok(det2(
            self.column(Side::Right, 0, k, step)?,
            self.column(Side::Left, 1, k, step)?,
        ))
    }

    fn step(&self, k: C64) -> f64 {
        self.opts.max_step(&self.datum, k)
    }

    /// Difference quotient with both evaluations on the same step grid.
    fn derivative(&self, f: impl Fn(C64, f64) -> Result<C64>, k: C64) -> Result<C64> {
        let h = 1e-4 * (1.0 + k.norm());
        let s = self.step(k + h);
        // fourth-order central difference
        let d = (f(k - 2.0 * h, s)? - 8.0 * f(k - h, s)? + 8.0 * f(k + h, s)? - f(k + 2.0 * h, s)?)
            / (12.0 * h);
        Ok(d)
    }
}

impl SpectralSource for NumericalSpectralFunctions {
    fn a1(&self, k: C64) -> Result<C64> {
        self.a1_step(k, self.step(k))
    }

    fn a2(&self, k: C64) -> Result<C64> {
        self.a2_step(k, self.step(k))
    }

    fn b(&self, k: C64) -> Result<C64> {
        let s = self.step(k);
        Ok(det2(
            self.column(Side::Right, 0, k, s)?,
            self.column(Side::Left, 0, k, s)?,
        ))
    }

    fn a1_derivative(&self, k: C64) -> Result<C64> {
        self.derivative(|z, s| self.a1_step(z, s), k)
    }

    fn a2_derivative(&self, k: C64) -> Result<C64> {
        self.derivative(|z, s| self.a2_step(z, s), k)
    }

    fn k_cutoff(&self) -> Option<f64> {
        Some(self.k_cutoff)
    }
}

/// One row of a scattering table; entries outside their domain are `None`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ScatteringRow {
    pub k: C64,
    pub a1: Option<C64>,
    pub a2: Option<C64>,
    pub b: Option<C64>,
}

/// Scattering data of `datum` with its values tabulated on `k_grid`.
#[derive(Clone, Debug)]
pub struct ScatteringTable {
    pub data: ScatteringData,
    pub rows: Vec<ScatteringRow>,
}

/// Default puncture radius around `±B` for real-line sampling.
pub fn default_puncture(b: f64) -> f64 {
    1e-3 * b.abs().max(1.0)
}

/// Numerical scattering data of a datum. Grid points within `puncture` of `±B` are skipped.
pub fn compute_scattering(
    datum: &InitialDatum,
    k_grid: &[C64],
    puncture: f64,
) -> Result<ScatteringTable> {
    let src = NumericalSpectralFunctions::new(datum.clone());
    let background = datum.background;
    let mut data = ScatteringData::new(background, Arc::new(src), None);
    if background.b != 0.0 {
        let res = residue_coefficients(&data)?;
        data = data.with_residues(res);
    } else if background.a == 0.0 {
        let z = C64::new(0.0, 0.0);
        data = data.with_residues(super::Residues {
            a1_plus_b: z,
            a1_minus_b: z,
            b_b: z,
        });
    }
    let b = background.b;
    let rows = k_grid
        .par_iter()
        .filter(|k| (**k - b).norm() > puncture && (**k + b).norm() > puncture)
        .map(|&k| -> Result<ScatteringRow> {
            let a1 = if k.im >= 0.0 { Some(data.a1(k)?) } else { None };
            let a2 = if k.im <= 0.0 { Some(data.a2(k)?) } else { None };
            let bv = if k.im == 0.0 {
                Some(data.b(k.re)?)
            } else {
                None
            };
            Ok(ScatteringRow { k, a1, a2, b: bv })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScatteringTable { data, rows })
}
