//! Ray classification and the leading long-time terms in each sector.

mod model;
mod sector;
mod term;

pub use model::{model_coefficients, model_rh_solution, reflection_residuals, ModelRhSolution};
pub use sector::{
    boundary_rays, classify_ray, phase_theta, RaySector, SectorLabel, WindingKind, BOUNDARY_TOL,
};
pub use term::{
    leading_term, sweep, write_sweep_csv, zakharov_manakov_amplitude, Amplitude, AsymptoticTerm,
    FormulaId, RayFormula, SweepRow, BLOWUP_MARGIN,
};
