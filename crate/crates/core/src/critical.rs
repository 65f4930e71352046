//! RIC critical functions over the phase-transition space and their level curves.
//!
//! `u(ρ, δ)` and `v(ρ, δ)` are the `1 - ε` quantiles of the asymptotic left and
//! right RIV laws at the continuous triplet `K = ρδN`, `M = δN`. They are obtained
//! by inverting the Weibull and Gumbel CDFs directly, so the round trip
//! `F(u(ρ, δ)) = 1 - ε` holds to rounding.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rivdist::RivShape;
use crate::roots;
use crate::specfun;

pub const DEFAULT_EPS: f64 = 1e-3;
pub const DEFAULT_AMBIENT_N: f64 = 1e4;

/// A point `(ρ, δ) = (K/M, M/N)` of the phase-transition space, with ambient `N` and tolerance `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    rho: f64,
    delta: f64,
    ambient_n: f64,
    eps: f64,
}

impl PhasePoint {
    pub fn new(rho: f64, delta: f64, ambient_n: f64, eps: f64) -> Result<Self> {
        let bad = |reason| Error::InvalidPhasePoint {
            rho,
            delta,
            n: ambient_n,
            eps,
            reason,
        };
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(bad("rho must lie in (0, 1]"));
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(bad("delta must lie in (0, 1]"));
        }
        if !(ambient_n.is_finite() && ambient_n > 0.0) {
            return Err(bad("N must be positive and finite"));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(bad("eps must lie in (0, 1)"));
        }
        if delta * ambient_n < 2.0 {
            return Err(bad("M = delta * N must be at least 2"));
        }
        if rho * delta * ambient_n < 1.0 - 1e-12 {
            return Err(bad("K = rho * delta * N must be at least 1"));
        }
        Ok(PhasePoint {
            rho,
            delta,
            ambient_n,
            eps,
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn ambient_n(&self) -> f64 {
        self.ambient_n
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn measurements(&self) -> f64 {
        self.delta * self.ambient_n
    }

    pub fn sparsity(&self) -> f64 {
        (self.rho * self.delta * self.ambient_n).max(1.0)
    }

    /// Same `δ`, `N`, `ε` at a different sparsity ratio.
    pub fn with_rho(&self, rho: f64) -> Result<Self> {
        PhasePoint::new(rho, self.delta, self.ambient_n, self.eps)
    }

    /// The RIV law parameters at the continuous triplet.
    pub fn shape(&self) -> Result<RivShape> {
        let log_ns = specfun::log_binomial(self.ambient_n, self.sparsity())?;
        RivShape::new(self.measurements(), log_ns)
    }
}

/// A critical value and whether it had to be clamped into its valid range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalValue {
    /// The clamped value: `[0, 1]` for the left RIC, `[0, ∞)` for the right.
    pub value: f64,
    /// The quantile before clamping.
    pub raw: f64,
    pub clamped: bool,
}

impl CriticalValue {
    fn clamp(raw: f64, lo: f64, hi: f64) -> Self {
        let value = raw.clamp(lo, hi);
        CriticalValue {
            value,
            raw,
            clamped: value != raw,
        }
    }
}

/// Critical function of the left RIC: the `u` with `F_L^∞(u) = 1 - ε`.
pub fn u_crit(p: &PhasePoint) -> Result<CriticalValue> {
    let raw = p.shape()?.weibull().upper_quantile(p.eps);
    Ok(CriticalValue::clamp(raw, 0.0, 1.0))
}

/// Critical function of the right RIC: the `v` with `F_R^∞(v) = 1 - ε`.
pub fn v_crit(p: &PhasePoint) -> Result<CriticalValue> {
    let raw = p.shape()?.gumbel()?.upper_quantile(p.eps);
    Ok(CriticalValue::clamp(raw, 0.0, f64::INFINITY))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    LevelCurve,
    SupportBand,
    PtBoundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub delta: f64,
    pub value: f64,
}

/// An ordered `(δ, value)` series with strictly increasing `δ` and finite values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSeries {
    kind: CurveKind,
    points: Vec<CurvePoint>,
}

impl CurveSeries {
    pub fn new(kind: CurveKind, points: Vec<CurvePoint>) -> Result<Self> {
        if points
            .iter()
            .any(|p| !p.value.is_finite() || !p.delta.is_finite())
        {
            return Err(Error::InvalidCurve("non-finite entry"));
        }
        if points.windows(2).any(|w| w[0].delta >= w[1].delta) {
            return Err(Error::InvalidCurve("deltas must be strictly increasing"));
        }
        Ok(CurveSeries { kind, points })
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A curve solved point-by-point from an equation in `ρ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolvedCurve {
    pub series: CurveSeries,
    /// `|f(ρ(δ), δ) - target|` for each emitted point, aligned with `series`.
    pub residuals: Vec<f64>,
    /// Grid deltas where the equation has no root in range.
    pub unresolved: Vec<f64>,
}

pub(crate) enum Solved {
    Root { rho: f64, residual: f64 },
    NoRoot,
}

/// Solves `f(ρ) = 0` for a nondecreasing `f` on `[lo, hi]`, reporting a missing bracket as `NoRoot`.
pub(crate) fn solve_rho<F>(mut f: F, lo: f64, hi: f64) -> Result<Solved>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo < hi) {
        return Ok(Solved::NoRoot);
    }
    if f(lo)? > 0.0 || f(hi)? < 0.0 {
        return Ok(Solved::NoRoot);
    }
    let rho = roots::bisect(&mut f, lo, hi)?;
    Ok(Solved::Root {
        rho,
        residual: f(rho)?.abs(),
    })
}

pub(crate) fn assemble(
    kind: CurveKind,
    deltas: &[f64],
    solved: Vec<Result<Solved>>,
) -> Result<SolvedCurve> {
    let mut points = Vec::new();
    let mut residuals = Vec::new();
    let mut unresolved = Vec::new();
    for (&delta, s) in deltas.iter().zip(solved) {
        match s? {
            Solved::Root { rho, residual } => {
                points.push(CurvePoint { delta, value: rho });
                residuals.push(residual);
            }
            Solved::NoRoot => unresolved.push(delta),
        }
    }
    Ok(SolvedCurve {
        series: CurveSeries::new(kind, points)?,
        residuals,
        unresolved,
    })
}

/// Smallest `ρ` giving `K = ρδN >= 1`.
pub(crate) fn rho_floor(delta: f64, n: f64) -> f64 {
    1.0 / (delta * n)
}

/// Level curve `{(ρ, δ) : u(ρ, δ) = level}`: for each `δ`, the `ρ` solving it by bisection.
///
/// `u` increases with `ρ` while `K <= N/2`, so the search interval is
/// `[1/(δN), min(1, 1/(2δ))]`. Grid points without a root there are listed in
/// `unresolved`.
pub fn level_curve(level: f64, n: f64, eps: f64, delta_grid: &[f64]) -> Result<SolvedCurve> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Config(format!(
            "level must lie in (0, 1), got {level}"
        )));
    }
    if delta_grid.iter().any(|&d| !(d > 0.0 && d <= 1.0)) {
        return Err(Error::Config("delta grid must lie in (0, 1]".into()));
    }
    let solved: Vec<Result<Solved>> = delta_grid
        .par_iter()
        .map(|&delta| {
            if delta * n < 2.0 {
                return Ok(Solved::NoRoot);
            }
            let lo = rho_floor(delta, n);
            let hi = (0.5 / delta).min(1.0);
            let eval = |rho: f64| -> Result<f64> {
                let p = PhasePoint::new(rho, delta, n, eps)?;
                Ok(u_crit(&p)?.raw - level)
            };
            solve_rho(eval, lo, hi)
        })
        .collect();
    assemble(CurveKind::LevelCurve, delta_grid, solved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rivdist::Triplet;

    fn pp(rho: f64, delta: f64) -> PhasePoint {
        PhasePoint::new(rho, delta, DEFAULT_AMBIENT_N, DEFAULT_EPS).unwrap()
    }

    #[test]
    fn phase_point_validation() {
        assert!(PhasePoint::new(0.0, 0.5, 1e4, 1e-3).is_err());
        assert!(PhasePoint::new(0.5, 1.5, 1e4, 1e-3).is_err());
        assert!(PhasePoint::new(0.5, 0.5, 1e4, 0.0).is_err());
        assert!(PhasePoint::new(0.5, 1e-4, 1e4, 1e-3).is_err());
        assert!(PhasePoint::new(1e-5, 0.5, 1e4, 1e-3).is_err());
        assert!(PhasePoint::new(1.0, 1.0, 1e4, 1e-3).is_ok());
    }

    #[test]
    fn shape_matches_integer_triplet() {
        let p = PhasePoint::new(0.025, 0.2, 1000.0, 1e-3).unwrap();
        let t = Triplet::new(5, 200, 1000).unwrap();
        let (a, b) = (p.shape().unwrap(), t.shape());
        assert!((a.dof - b.dof).abs() < 1e-12);
        assert!((a.log_ns - b.log_ns).abs() < 1e-10);
    }

    #[test]
    fn u_crit_round_trip() {
        for &(rho, delta) in &[(0.1, 0.2), (0.05, 0.5), (0.3, 0.9), (0.01, 0.05)] {
            let p = pp(rho, delta);
            let u = u_crit(&p).unwrap();
            let f = p.shape().unwrap().weibull().cdf(u.raw);
            assert!((f - (1.0 - p.eps())).abs() < 1e-9);
        }
    }

    #[test]
    fn u_crit_reference_point() {
        // 50-digit evaluation at (ρ, δ, N, ε) = (0.05, 0.5, 1e4, 1e-3)
        let u = u_crit(&pp(0.05, 0.5)).unwrap();
        assert!(!u.clamped);
        assert!((u.value - 0.308_144_855_827_546_77).abs() < 1e-11);
    }

    #[test]
    fn v_crit_reference_point_is_clamped() {
        // raw Gumbel quantile from a 50-digit evaluation: negative, so clamped to zero
        let v = v_crit(&pp(0.05, 0.5)).unwrap();
        assert!((v.raw + 0.295_929_117_977_032_4).abs() < 1e-10);
        assert!(v.clamped);
        assert_eq!(v.value, 0.0);
    }

    #[test]
    fn v_crit_round_trip() {
        for &(rho, delta) in &[(0.1, 0.2), (0.3, 0.9), (0.5, 0.05)] {
            let p = pp(rho, delta);
            let v = v_crit(&p).unwrap();
            let f = p.shape().unwrap().gumbel().unwrap().cdf(v.raw);
            assert!((f - (1.0 - p.eps())).abs() < 1e-9);
        }
    }

    #[test]
    fn v_crit_decreases_toward_single_support_limit() {
        // As ρ shrinks toward K = 1 the Gumbel quantile falls to that of N_s = N.
        let delta = 0.5;
        let n = 1e4;
        let floor = rho_floor(delta, n);
        let mut prev = f64::INFINITY;
        for k in [40.0, 20.0, 10.0, 5.0, 2.0, 1.0] {
            let p = PhasePoint::new(k * floor, delta, n, 1e-3).unwrap();
            let v = v_crit(&p).unwrap().raw;
            assert!(v < prev);
            prev = v;
        }
        let single = RivShape::new(delta * n, n.ln())
            .unwrap()
            .gumbel()
            .unwrap()
            .upper_quantile(1e-3);
        assert!((prev - single).abs() < 1e-9);
    }

    #[test]
    fn u_crit_nonincreasing_in_delta() {
        let mut prev = f64::INFINITY;
        for i in 1..=40 {
            let delta = i as f64 / 40.0;
            let u = u_crit(&pp(0.1, delta)).unwrap().value;
            assert!(u <= prev, "delta={delta}");
            prev = u;
        }
    }

    #[test]
    fn critical_values_in_range_on_lattice() {
        for i in 1..=20 {
            for j in 1..=20 {
                let p = pp((i as f64 - 0.5) / 20.0, (j as f64 - 0.5) / 20.0);
                let u = u_crit(&p).unwrap();
                let v = v_crit(&p).unwrap();
                assert!((0.0..=1.0).contains(&u.value));
                assert!(v.value >= 0.0);
            }
        }
    }

    #[test]
    fn level_curve_residuals_and_shape() {
        let grid = crate::grid::GridSpec::log(0.02, 1.0, 40).points().unwrap();
        let c = level_curve(0.6, 1e4, 1e-3, &grid).unwrap();
        assert!(!c.series.is_empty());
        assert!(c.residuals.iter().all(|&r| r <= 1e-8));
        for pt in c.series.points() {
            let u = u_crit(&pp(pt.value, pt.delta)).unwrap();
            assert!((u.value - 0.6).abs() <= 1e-8);
        }
        let rhos: Vec<f64> = c.series.points().iter().map(|p| p.value).collect();
        assert!(rhos.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn level_curve_rejects_bad_input() {
        assert!(level_curve(1.2, 1e4, 1e-3, &[0.5]).is_err());
        assert!(level_curve(0.6, 1e4, 1e-3, &[0.0]).is_err());
    }

    #[test]
    fn curve_series_invariants() {
        let pt = |d, v| CurvePoint { delta: d, value: v };
        assert!(CurveSeries::new(CurveKind::LevelCurve, vec![pt(0.1, 0.0), pt(0.1, 0.1)]).is_err());
        assert!(CurveSeries::new(CurveKind::LevelCurve, vec![pt(0.1, f64::NAN)]).is_err());
        assert!(CurveSeries::new(CurveKind::LevelCurve, vec![pt(0.1, 0.0), pt(0.2, 0.1)]).is_ok());
    }
}
