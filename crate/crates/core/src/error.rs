use thiserror::Error;

/// Errors raised by the spectral, asymptotic and simulation routines.
///
/// Variants split into two families: input validation (bad parameters,
/// points outside a domain of definition) and numerical failures
/// (non-convergence, blow-up, non-generic parameters). The CLI maps the
/// first family to exit code 2 and the second to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("point outside the domain of definition: {0}")]
    OutOfDomain(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("non-generic parameters: {0}")]
    NonGeneric(String),

    #[error("transition region, out of scope: xi = {xi} lies on the boundary ray {boundary}; nearest sectors: {below} / {above}")]
    BoundaryRay {
        xi: f64,
        boundary: f64,
        below: String,
        above: String,
    },

    #[error("vanishing reflection coefficient: {0}")]
    VanishingReflection(String),

    #[error("singular exponent nu vanishes, Gamma(-i nu) has a pole: {0}")]
    ZeroExponent(String),

    #[error("denominator near zero (blow-up neighbourhood): {0}")]
    NearSingular(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("inconsistent spectral data: {0}")]
    Inconsistent(String),

    #[error("solution diverged at t = {t}: {reason}")]
    BlowUp { t: f64, reason: String },
}

impl Error {
    /// True for errors caused by the caller's input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParam(_) | Error::OutOfDomain(_) | Error::Parse(_) | Error::Io(_)
        )
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_validation() {
            2
        } else {
            3
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParam(msg.into()))
}
