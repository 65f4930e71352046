//! Phase-transition boundaries of the L1 decoder and the measurement bounds they imply.
//!
//! The RIV boundary solves `μ^{RIV}(ρ, δ) = 1`, where `μ^{RIV}` is the Foucart-Lai
//! function evaluated at the critical values for sparsity `2K`. The GFA boundary
//! solves the closed form `μ^{RV}(ρ, δ) = 1`. Both functions increase in `ρ` over
//! the search interval, which is what makes bisection valid.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::critical::{self, CurveKind, PhasePoint, Solved, SolvedCurve};
use crate::error::{domain, Error, Result};
use crate::roots;

const FL_CONST: f64 = (1.0 + std::f64::consts::SQRT_2) / 4.0;

/// Foucart-Lai function `((1+√2)/4) ((1 + δ^R)/(1 - δ^L) - 1)`.
pub fn mu_fl(left: f64, right: f64) -> Result<f64> {
    if !(left >= 0.0) {
        return Err(domain(
            "mu_fl",
            format!("left RIC must be >= 0, got {left}"),
        ));
    }
    if !(left < 1.0) {
        return Err(Error::Singular { left });
    }
    if !(right >= 0.0) {
        return Err(domain(
            "mu_fl",
            format!("right RIC must be >= 0, got {right}"),
        ));
    }
    Ok(FL_CONST * ((1.0 + right) / (1.0 - left) - 1.0))
}

/// `μ^{RIV}` together with the critical values it was built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuRiv {
    /// `+inf` when the left critical value reaches 1.
    pub value: f64,
    pub left: critical::CriticalValue,
    pub right: critical::CriticalValue,
    /// Set when `u(2ρ, δ) >= 1`, which makes the recovery condition unsatisfiable.
    pub unsatisfiable: bool,
}

/// `μ^{RIV}(ρ, δ, N)`: Foucart-Lai at `u(2ρ, δ)` and `v(2ρ, δ)`.
pub fn mu_riv(p: &PhasePoint) -> Result<MuRiv> {
    let doubled = p.with_rho(2.0 * p.rho())?;
    let left = critical::u_crit(&doubled)?;
    let right = critical::v_crit(&doubled)?;
    if left.value >= 1.0 {
        return Ok(MuRiv {
            value: f64::INFINITY,
            left,
            right,
            unsatisfiable: true,
        });
    }
    Ok(MuRiv {
        value: mu_fl(left.value, right.value)?,
        left,
        right,
        unsatisfiable: false,
    })
}

/// GFA (Rudelson-Vershynin) function `ρ (12 + 8 ln(1/ρδ)) γ²(ρδ)`,
/// with `γ(x) = exp(ln(1 + 2 ln(e/x)) / (4 ln(e/x)))`.
pub fn mu_gfa(rho: f64, delta: f64) -> Result<f64> {
    let x = rho * delta;
    if !(rho > 0.0 && x > 0.0 && x < 1.0) {
        return Err(domain(
            "mu_gfa",
            format!("expected 0 < rho*delta < 1, got rho={rho}, delta={delta}"),
        ));
    }
    let l = 1.0 - x.ln();
    let gamma = ((1.0 + 2.0 * l).ln() / (4.0 * l)).exp();
    Ok(rho * (12.0 + 8.0 * (-x.ln())) * gamma * gamma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Riv,
    Gfa,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Riv => "riv",
            Method::Gfa => "gfa",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "riv" => Ok(Method::Riv),
            "gfa" => Ok(Method::Gfa),
            other => Err(Error::Config(format!(
                "unknown method {other:?}, expected riv or gfa"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RivParams {
    pub ambient_n: f64,
    pub eps: f64,
}

/// A strong-equivalence boundary `ρ_s(δ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Boundary {
    pub method: Method,
    /// Present for the RIV method.
    pub params: Option<RivParams>,
    pub curve: SolvedCurve,
}

impl Boundary {
    /// Solves for `ρ_s` at one `δ`, outside of any grid.
    pub fn rho_at(&self, delta: f64) -> Result<Option<f64>> {
        let solved = solve_point(self.method, self.params, delta)?;
        Ok(match solved {
            Solved::Root { rho, .. } => Some(rho),
            Solved::NoRoot => None,
        })
    }
}

fn solve_point(method: Method, params: Option<RivParams>, delta: f64) -> Result<Solved> {
    match method {
        Method::Riv => {
            let RivParams { ambient_n, eps } =
                params.ok_or_else(|| Error::Config("RIV boundary needs N and eps".into()))?;
            if delta * ambient_n < 2.0 {
                return Ok(Solved::NoRoot);
            }
            // K >= 1, and 2K <= min(M, N/2) keeps μ increasing in ρ
            let lo = critical::rho_floor(delta, ambient_n);
            let hi = 0.5f64.min(0.25 / delta);
            let eval = |rho: f64| -> Result<f64> {
                let p = PhasePoint::new(rho, delta, ambient_n, eps)?;
                let mu = mu_riv(&p)?.value;
                Ok(if mu.is_infinite() { f64::MAX } else { mu - 1.0 })
            };
            critical::solve_rho(eval, lo, hi)
        }
        Method::Gfa => {
            let hi = 1.0f64.min((1.0 - 1e-12) / delta);
            critical::solve_rho(|rho| Ok(mu_gfa(rho, delta)? - 1.0), 1e-12, hi)
        }
    }
}

/// Boundary `ρ_s(δ)` solving `μ(ρ, δ) = 1` at each grid `δ`.
pub fn pt_boundary(
    method: Method,
    params: Option<RivParams>,
    delta_grid: &[f64],
) -> Result<Boundary> {
    if delta_grid.iter().any(|&d| !(d > 0.0 && d <= 1.0)) {
        return Err(Error::Config("delta grid must lie in (0, 1]".into()));
    }
    let solved: Vec<Result<Solved>> = delta_grid
        .par_iter()
        .map(|&delta| solve_point(method, params, delta))
        .collect();
    let curve = critical::assemble(CurveKind::PtBoundary, delta_grid, solved)?;
    if curve
        .series
        .points()
        .iter()
        .any(|p| !(p.value > 0.0 && p.value < 1.0))
    {
        return Err(Error::InvalidCurve("boundary values must lie in (0, 1)"));
    }
    Ok(Boundary {
        method,
        params: match method {
            Method::Riv => params,
            Method::Gfa => None,
        },
        curve,
    })
}

/// `c` in `M >= cK`, with the maximizing `δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBound {
    pub c: f64,
    pub rho_max: f64,
    pub delta_at_max: f64,
}

/// `c = 1 / max_δ ρ_s(δ)`: grid maximum refined by golden-section search between its neighbours.
pub fn measurement_bound(b: &Boundary) -> Result<MeasurementBound> {
    let pts = b.curve.series.points();
    let (imax, best) = pts
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.value.total_cmp(&y.1.value))
        .ok_or(Error::EmptyBoundary)?;
    let lo = if imax > 0 {
        pts[imax - 1].delta
    } else {
        best.delta
    };
    let hi = if imax + 1 < pts.len() {
        pts[imax + 1].delta
    } else {
        best.delta
    };

    let (mut delta_at_max, mut rho_max) = (best.delta, best.value);
    if hi > lo {
        let objective = |d: f64| -> Result<f64> { Ok(b.rho_at(d)?.unwrap_or(f64::NEG_INFINITY)) };
        let (d, r) = roots::golden_max(objective, lo, hi, 1e-9 * hi)?;
        if r > rho_max {
            delta_at_max = d;
            rho_max = r;
        }
    }
    Ok(MeasurementBound {
        c: 1.0 / rho_max,
        rho_max,
        delta_at_max,
    })
}

/// A constant reported by the literature rather than computed here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CitedConstant {
    pub approach: &'static str,
    pub kind: &'static str,
    pub c: f64,
    pub provenance: &'static str,
}

/// Measurement-bound constants for the polytope and eigenvalue approaches, as published.
pub fn cited_constants() -> [CitedConstant; 2] {
    [
        CitedConstant {
            approach: "polytope",
            kind: "geometric",
            c: 5.9,
            provenance: "paper",
        },
        CitedConstant {
            approach: "ev",
            kind: "rip-based",
            c: 317.0,
            provenance: "paper",
        },
    ]
}

pub fn cited_ev_constant() -> f64 {
    317.0
}
