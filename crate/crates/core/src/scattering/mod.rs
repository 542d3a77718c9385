//! Jost solutions, scattering data, residue coefficients and norming constants of step-like data.

mod data;
mod datum;
pub mod io;
mod jost;
mod norming;
mod numeric;
mod residues;

pub use data::{Reflection, Residues, ScatteringData, SpectralSource};
pub use datum::{
    build_initial_datum, mollified_step_value, plane_wave, sharp_step, smooth_transition, GridSpec,
    InitialDatum, Perturbation,
};
pub use jost::{
    integrate_jost, integrate_jost_with, jost_column, jost_column_with_step, JostMatrix,
    JostOptions, Side,
};
pub use norming::{norming_constants, NormingConstants};
pub use numeric::{
    compute_scattering, default_puncture, NumericalSpectralFunctions, ScatteringRow,
    ScatteringTable,
};
pub use residues::{residue_coefficients, residue_relation_defects};
