//! Pure-step spectral functions, zeros of `a₁`, winding profiles and case tagging.

pub mod argument;
mod classify;
mod report;
mod step;
mod winding;
mod zeros;

pub use argument::{count_zeros_argument_principle, Rect};
pub use classify::{check_generic, classify_case, classify_step, CaseTag};
pub use report::{ComplexEntry, PairEntry, SpectrumReport};
pub use step::{step_spectral_functions, StepSpectralFunctions};
pub use winding::{
    argument_path, winding_profile, winding_profile_with, ArgumentPath, Case, WindingOptions,
    WindingProfile,
};
pub(crate) use winding::{far_left, nearest_branch};
pub use zeros::{
    complex_pair_count, count_step_zeros, find_complex_zeros, find_imaginary_zero, find_real_zeros,
    find_zeros, zero_curve_residual, zero_curve_y, zero_search_rectangle, ComplexPair, RealZero,
    ZeroSet, THRESHOLD_RTOL,
};
