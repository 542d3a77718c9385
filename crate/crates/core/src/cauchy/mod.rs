//! Cauchy integrals built on the jump `1 + r₁r₂`: `ν`, `δ`, `δ̂`, `χ` and the `a₂(B)` identity.

mod delta;
mod identity;
mod nu;
mod profile;

pub use delta::{
    compute_delta, compute_hat_delta, default_k0_tilde, CauchyOptions, CutSide, DeltaEvaluator,
    Pole,
};
pub use identity::{
    a2_identity_factors, imaginary_zero_factor, principal_log_value, verify_a2_identity,
    verify_a2_identity_with, verify_a2_identity_with_zero,
};
pub use nu::{compute_nu, cumulative_argument, NuValue};
pub use profile::write_delta_profile;
