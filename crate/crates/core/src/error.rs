use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("trace must be 1 (got {trace})")]
    Trace { trace: f64 },

    #[error("block positivity violated in {block}: {product} < {coherence_sq} = |coherence|^2")]
    Negativity {
        block: &'static str,
        product: f64,
        coherence_sq: f64,
    },

    #[error("argument out of range: {0}")]
    Range(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("quadrature failed to reach relative tolerance {rel_tol:e} (error estimate {error:e} on value {value:e})")]
    Quadrature {
        rel_tol: f64,
        error: f64,
        value: f64,
    },

    #[error("threshold {threshold:e} not bracketed on theta in [{theta_lo:e}, {theta_hi:e}]")]
    Bracket {
        threshold: f64,
        theta_lo: f64,
        theta_hi: f64,
    },

    #[error("outside supported domain: {0}")]
    Domain(String),

    #[error("Fock truncation too small: mode omega={omega}, theta={theta}, n_fock={n_fock} leaves thermal tail {tail:e} >= {bound:e}")]
    Truncation {
        omega: f64,
        theta: f64,
        n_fock: usize,
        tail: f64,
        bound: f64,
    },

    #[error("level {level} not reached by the decoherence exponent within tau <= {window}")]
    NotReached { level: f64, window: f64 },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("at grid point (theta={theta}, tau={tau}): {source}")]
    GridPoint {
        theta: f64,
        tau: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_grid_point(self, theta: f64, tau: f64) -> Error {
        Error::GridPoint {
            theta,
            tau,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
