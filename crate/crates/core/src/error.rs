use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("{func} failed to converge after {iterations} iterations")]
    Convergence {
        func: &'static str,
        iterations: usize,
    },

    #[error("invalid triplet (K={k}, M={m}, N={n}): {reason}")]
    InvalidTriplet {
        k: u64,
        m: u64,
        n: u64,
        reason: &'static str,
    },

    #[error("invalid phase point (rho={rho}, delta={delta}, N={n}, eps={eps}): {reason}")]
    InvalidPhasePoint {
        rho: f64,
        delta: f64,
        n: f64,
        eps: f64,
        reason: &'static str,
    },

    /// ln ln N_s is undefined or the support count is too small for the Gumbel constants.
    #[error("degenerate support count: ln N_s = {log_ns}")]
    DegenerateSupportCount { log_ns: f64 },

    #[error("Foucart-Lai function is singular at left RIC {left}")]
    Singular { left: f64 },

    #[error("exhaustive enumeration of {supports} supports exceeds the limit of {limit}")]
    Infeasible { supports: f64, limit: u64 },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("sparse vector is identically zero")]
    ZeroVector,

    #[error("boundary has no resolved points")]
    EmptyBoundary,

    #[error("invalid curve: {0}")]
    InvalidCurve(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}
