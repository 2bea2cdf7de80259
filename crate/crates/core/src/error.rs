use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// `z^{-1} e^{βε} - 1 <= 0`: the Bose occupation diverges.
    #[error("occupation singularity at z = {z}, beta_eps = {beta_eps}")]
    Singularity { z: f64, beta_eps: f64 },

    /// A structural precondition was violated (empty range, too few steps, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(
        "series did not converge within {terms} terms (partial sum {partial_sum:e}, last term {last_term:e})"
    )]
    Truncation {
        terms: usize,
        partial_sum: f64,
        last_term: f64,
    },

    #[error(
        "quadrature did not reach the requested accuracy (estimate {estimate:e}, error {error:e})"
    )]
    Quadrature { estimate: f64, error: f64 },

    #[error(
        "root bracket [{lo}, {hi}] could not be narrowed below {tol:e} in {iterations} iterations"
    )]
    NonConvergence {
        lo: f64,
        hi: f64,
        tol: f64,
        iterations: usize,
    },

    /// Error raised while classifying one point of a sweep.
    #[error("at p0 = {p0}: {source}")]
    AtMomentum {
        p0: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Strips any `AtMomentum` context wrappers.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::AtMomentum { source, .. } => source.root_cause(),
            other => other,
        }
    }
}
