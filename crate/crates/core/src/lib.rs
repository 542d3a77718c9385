//! Spectral data, long-time asymptotics and split-step simulation for the nonlocal
//! (PT-symmetric) NLS equation `iq_t + q_xx + 2q²(x,t)·conj(q(−x,t)) = 0` with step-like
//! boundary values `q → 0` as `x → −∞` and `q → A·e^{2iBx−4iB²t}` as `x → +∞`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cauchy;
pub mod cli;
pub mod error;
pub mod gamma;
pub mod params;
pub mod quad;
pub mod scattering;
pub mod sim;
pub mod spectrum;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use params::StepParams;
