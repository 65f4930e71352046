//! Distributions of restricted-isometry random variables for Gaussian encoders,
//! the critical functions built from them, phase-transition boundaries of the L1
//! decoder, and Monte Carlo checks of all of it.
//!
//! Everything lives in the `(K, M, N)` world: `K`-sparse vectors, `M` measurements,
//! `N` ambient dimensions. Support counts `C(N, K)` are only ever handled as logs.

// `!(x >= 0.0)` is how argument checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod critical;
pub mod error;
pub mod grid;
pub mod mc;
pub mod phase;
pub mod rivdist;
mod roots;
pub mod specfun;

pub use critical::{
    level_curve, u_crit, v_crit, CriticalValue, CurveKind, CurvePoint, CurveSeries, PhasePoint,
    SolvedCurve,
};
pub use error::{Error, Result};
pub use grid::GridSpec;
pub use mc::{validate, MCConfig, MCReport, XRule};
pub use phase::{
    measurement_bound, mu_fl, mu_gfa, mu_riv, pt_boundary, Boundary, MeasurementBound, Method,
    RivParams,
};
pub use rivdist::{GumbelParams, RivShape, SupportBand, Triplet, WeibullParams};
pub use specfun::LogValue;
