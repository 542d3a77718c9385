//! Split-step Fourier integration of the nonlocal NLS from mollified step data on a periodic
//! grid, and comparison of the snapshots with the leading asymptotic terms.

mod compare;
mod config;
mod evolve;
mod field;

pub use compare::{
    compare_period, compare_ray, measure_period, CompareRow, PeriodCheck, RayComparison, SlopeFit,
};
pub use config::{
    default_half_length, SimConfig, SimGrid, DEFAULT_BLOWUP_FACTOR, DEFAULT_BUFFER_SAFETY,
    DEFAULT_DT, DEFAULT_POINTS, DEFAULT_SEAM_FRACTION, DEFAULT_T_FINAL,
};
pub use evolve::{evolve, free_evolution, Divergence, Evolution, LinearPropagator};
pub use field::{
    initial_field, mollified_step, nonlinear_substep, read_snapshots_csv, seam_window,
    write_snapshots_csv, FieldSnapshot,
};
