//! Distributions of the left and right restricted isometry random variables.
//!
//! For a Gaussian encoder with entry variance `1/M`, the ratio `‖Ax‖²/‖x‖²` on a
//! fixed support is a scaled Chi-square with `M` degrees of freedom, i.e.
//! `Gamma(M/2, scale 2/M)` with unit mean. The left RIV is `1 - min` and the right
//! RIV is `max - 1` over `N_s = C(N, K)` such ratios taken as i.i.d.
//!
//! Every law here depends on the triplet only through `M` and `ln N_s`, which is
//! what [`RivShape`] carries. CDFs are computed as `exp(N_s · ln tail)` so that
//! `N_s` never has to be formed; results below `e^{-745}` underflow to zero.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::{self, LogValue};

/// A problem size `(K, M, N)` with `1 <= K <= M < N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Triplet {
    k: u64,
    m: u64,
    n: u64,
    log_ns: LogValue,
}

impl Triplet {
    pub fn new(k: u64, m: u64, n: u64) -> Result<Self> {
        let bad = |reason| Error::InvalidTriplet { k, m, n, reason };
        if k < 1 {
            return Err(bad("K must be at least 1"));
        }
        if k > m {
            return Err(bad("K must not exceed M"));
        }
        if m >= n {
            return Err(bad("M must be smaller than N"));
        }
        let log_ns = LogValue::new(specfun::log_binomial(n as f64, k as f64)?)?;
        Ok(Triplet { k, m, n, log_ns })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `ln C(N, K)`.
    pub fn log_ns(&self) -> LogValue {
        self.log_ns
    }

    pub fn shape(&self) -> RivShape {
        RivShape {
            dof: self.m as f64,
            log_ns: self.log_ns.ln(),
        }
    }

    /// `(log N_s)^{-2}`, the order of the distance to the extreme-value limit.
    pub fn convergence_indicator(&self) -> f64 {
        self.shape().convergence_indicator()
    }

    /// Asymptotic regime when `(log N_s)^{-2} < eta`.
    pub fn regime(&self, eta: f64) -> Regime {
        if self.convergence_indicator() < eta {
            Regime::Asymptotic
        } else {
            Regime::NonAsymptotic
        }
    }
}

impl std::fmt::Display for Triplet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.k, self.m, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Asymptotic,
    NonAsymptotic,
}

/// The two numbers every RIV law depends on: degrees of freedom `M` and `ln N_s`.
///
/// Unlike [`Triplet`] both may be non-integral, which is how the critical
/// functions evaluate the laws at `K = ρδN`, `M = δN`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RivShape {
    pub dof: f64,
    pub log_ns: f64,
}

impl RivShape {
    pub fn new(dof: f64, log_ns: f64) -> Result<Self> {
        if !(dof >= 1.0) || !dof.is_finite() {
            return Err(domain(
                "RivShape::new",
                format!("expected M >= 1, got {dof}"),
            ));
        }
        if !(log_ns >= 0.0) || !log_ns.is_finite() {
            return Err(domain(
                "RivShape::new",
                format!("expected finite ln N_s >= 0, got {log_ns}"),
            ));
        }
        Ok(RivShape { dof, log_ns })
    }

    fn half_dof(&self) -> f64 {
        0.5 * self.dof
    }

    pub fn convergence_indicator(&self) -> f64 {
        self.log_ns.powi(-2)
    }

    fn check_u(func: &'static str, u: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&u) {
            return Err(domain(func, format!("expected 0 <= u <= 1, got {u}")));
        }
        Ok(())
    }

    fn check_v(func: &'static str, v: f64) -> Result<()> {
        if !(v >= 0.0) {
            return Err(domain(func, format!("expected v >= 0, got {v}")));
        }
        Ok(())
    }

    pub fn left_cdf(&self, u: f64) -> Result<f64> {
        Self::check_u("left_riv_cdf", u)?;
        let a = self.half_dof();
        let log_tail = specfun::log_reg_upper_gamma(a, a * (1.0 - u))?;
        Ok(pow_ns(self.log_ns, log_tail).exp())
    }

    pub fn left_log_pdf(&self, u: f64) -> Result<f64> {
        Self::check_u("left_riv_pdf", u)?;
        let a = self.half_dof();
        let log_tail = specfun::log_reg_upper_gamma(a, a * (1.0 - u))?;
        Ok(self.log_ns
            + pow_ns_minus_one(self.log_ns, log_tail)
            + ratio_log_pdf_unchecked(self.dof, 1.0 - u))
    }

    pub fn left_pdf(&self, u: f64) -> Result<f64> {
        Ok(self.left_log_pdf(u)?.exp())
    }

    pub fn right_cdf(&self, v: f64) -> Result<f64> {
        Self::check_v("right_riv_cdf", v)?;
        let a = self.half_dof();
        let log_body = specfun::log_reg_lower_gamma(a, a * (v + 1.0))?;
        Ok(pow_ns(self.log_ns, log_body).exp())
    }

    pub fn right_log_pdf(&self, v: f64) -> Result<f64> {
        Self::check_v("right_riv_pdf", v)?;
        let a = self.half_dof();
        let log_body = specfun::log_reg_lower_gamma(a, a * (v + 1.0))?;
        Ok(self.log_ns
            + pow_ns_minus_one(self.log_ns, log_body)
            + ratio_log_pdf_unchecked(self.dof, v + 1.0))
    }

    pub fn right_pdf(&self, v: f64) -> Result<f64> {
        Ok(self.right_log_pdf(v)?.exp())
    }

    /// Weibull constants of the asymptotic left RIV.
    pub fn weibull(&self) -> WeibullParams {
        let a = self.half_dof();
        let log_scale = (6.0 / self.dof).ln() + (libm::lgamma(a) + a.ln() - self.log_ns) / a;
        WeibullParams {
            q: log_scale.exp(),
            beta: a,
            location: 0.0,
        }
    }

    /// Gumbel constants of the asymptotic right RIV; needs `N_s >= 3`.
    pub fn gumbel(&self) -> Result<GumbelParams> {
        if !(self.log_ns >= 3f64.ln() * (1.0 - 1e-12)) {
            return Err(Error::DegenerateSupportCount {
                log_ns: self.log_ns,
            });
        }
        let a = self.half_dof();
        let s = 2.0 / self.dof;
        let l = s * (self.log_ns + (a - 1.0) * self.log_ns.ln() - libm::lgamma(a));
        Ok(GumbelParams { s, l })
    }

    pub fn left_cdf_asym(&self, u: f64) -> Result<f64> {
        Self::check_u("left_riv_cdf_asym", u)?;
        Ok(self.weibull().cdf(u))
    }

    pub fn left_pdf_asym(&self, u: f64) -> Result<f64> {
        Self::check_u("left_riv_pdf_asym", u)?;
        Ok(self.weibull().pdf(u))
    }

    pub fn right_cdf_asym(&self, v: f64) -> Result<f64> {
        Self::check_v("right_riv_cdf_asym", v)?;
        Ok(self.gumbel()?.cdf(v))
    }

    pub fn right_pdf_asym(&self, v: f64) -> Result<f64> {
        Self::check_v("right_riv_pdf_asym", v)?;
        Ok(self.gumbel()?.pdf(v))
    }
}

/// `N_s · ln z` for `ln z <= 0`, formed without `N_s` itself.
fn pow_ns(log_ns: f64, ln_z: f64) -> f64 {
    if ln_z == 0.0 {
        0.0
    } else {
        -(log_ns + (-ln_z).ln()).exp()
    }
}

/// `(N_s - 1) · ln z`.
fn pow_ns_minus_one(log_ns: f64, ln_z: f64) -> f64 {
    if ln_z == 0.0 {
        0.0
    } else if ln_z == f64::NEG_INFINITY {
        if log_ns == 0.0 {
            0.0
        } else {
            f64::NEG_INFINITY
        }
    } else {
        pow_ns(log_ns, ln_z) - ln_z
    }
}

/// Weibull law of the asymptotic left RIV: `F(u) = exp(-((1-u)/q)^β)` for `u <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeibullParams {
    pub q: f64,
    pub beta: f64,
    pub location: f64,
}

impl WeibullParams {
    /// The scale before the factor-of-3 correction, i.e. the one-term solution of
    /// `F_C(x) = 1/N_s`.
    pub fn one_term_scale(&self) -> f64 {
        self.q / 3.0
    }

    fn reduced(&self, u: f64) -> f64 {
        (1.0 - u - self.location) / self.q
    }

    pub fn cdf(&self, u: f64) -> f64 {
        let z = self.reduced(u);
        if z <= 0.0 {
            return 1.0;
        }
        (-(self.beta * z.ln()).exp()).exp()
    }

    pub fn pdf(&self, u: f64) -> f64 {
        self.log_pdf(u).exp()
    }

    pub fn log_pdf(&self, u: f64) -> f64 {
        let z = self.reduced(u);
        if z < 0.0 {
            return f64::NEG_INFINITY;
        }
        if z == 0.0 {
            return match self.beta.partial_cmp(&1.0) {
                Some(std::cmp::Ordering::Greater) => f64::NEG_INFINITY,
                Some(std::cmp::Ordering::Equal) => (self.beta / self.q).ln(),
                _ => f64::INFINITY,
            };
        }
        let lz = z.ln();
        (self.beta / self.q).ln() + (self.beta - 1.0) * lz - (self.beta * lz).exp()
    }

    /// The `u` with `cdf(u) = p`, unclamped.
    pub fn quantile(&self, p: f64) -> f64 {
        self.quantile_from_log_inverse(-p.ln())
    }

    /// The `u` with `cdf(u) = 1 - eps`, accurate for tiny `eps`.
    pub fn upper_quantile(&self, eps: f64) -> f64 {
        self.quantile_from_log_inverse(-(-eps).ln_1p())
    }

    // exp(-z^β) = p  ⇒  z = (ln 1/p)^{1/β}
    fn quantile_from_log_inverse(&self, log_inv_p: f64) -> f64 {
        1.0 - self.location - self.q * (log_inv_p.ln() / self.beta).exp()
    }
}

/// Gumbel law of the asymptotic right RIV: `F(v) = exp(-exp(-(v+1-l)/s))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GumbelParams {
    pub s: f64,
    pub l: f64,
}

impl GumbelParams {
    fn reduced(&self, v: f64) -> f64 {
        (v + 1.0 - self.l) / self.s
    }

    pub fn cdf(&self, v: f64) -> f64 {
        (-(-self.reduced(v)).exp()).exp()
    }

    pub fn pdf(&self, v: f64) -> f64 {
        let z = self.reduced(v);
        (-((-z).exp() + z)).exp() / self.s
    }

    /// Mode of the density, at `v = l - 1`.
    pub fn mode(&self) -> f64 {
        self.l - 1.0
    }

    pub fn quantile(&self, p: f64) -> f64 {
        self.l - 1.0 - self.s * (-p.ln()).ln()
    }

    /// The `v` with `cdf(v) = 1 - eps`.
    pub fn upper_quantile(&self, eps: f64) -> f64 {
        self.l - 1.0 - self.s * (-(-eps).ln_1p()).ln()
    }
}

/// Effective support `[LESP, UESP]` of the asymptotic left RIV density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportBand {
    pub lesp: f64,
    pub uesp: f64,
    /// True when either endpoint had to be clamped into `[0, 1]`.
    pub clamped: bool,
}

impl SupportBand {
    pub fn width(&self) -> f64 {
        self.uesp - self.lesp
    }
}

/// `ln p_C(x)` with no argument checks; `x <= 0` handled by the `M` cases.
fn ratio_log_pdf_unchecked(dof: f64, x: f64) -> f64 {
    let a = 0.5 * dof;
    if x <= 0.0 {
        return if a > 1.0 {
            f64::NEG_INFINITY
        } else if a == 1.0 {
            0.0
        } else {
            f64::INFINITY
        };
    }
    // (a^a / Γ(a)) x^{a-1} e^{-a x} = a · [ (ax)^a e^{-ax} / Γ(a) ] / (a x)
    specfun::log_gamma_prefactor(a, a * x) - x.ln()
}

fn check_ratio_args(func: &'static str, m: u64, x: f64) -> Result<()> {
    if m < 1 {
        return Err(domain(func, "expected M >= 1"));
    }
    if !(x >= 0.0) {
        return Err(domain(func, format!("expected x >= 0, got {x}")));
    }
    Ok(())
}

/// Density of the ratio `‖Ax‖²/‖x‖²`, a Chi-square with `M` degrees of freedom scaled to unit mean.
pub fn ratio_pdf(m: u64, x: f64) -> Result<f64> {
    check_ratio_args("ratio_pdf", m, x)?;
    Ok(ratio_log_pdf_unchecked(m as f64, x).exp())
}

pub fn ratio_log_pdf(m: u64, x: f64) -> Result<f64> {
    check_ratio_args("ratio_log_pdf", m, x)?;
    Ok(ratio_log_pdf_unchecked(m as f64, x))
}

/// `F_C(x) = P(M/2, Mx/2)`.
pub fn ratio_cdf(m: u64, x: f64) -> Result<f64> {
    check_ratio_args("ratio_cdf", m, x)?;
    let a = 0.5 * m as f64;
    specfun::reg_lower_gamma(a, a * x)
}

pub fn left_riv_cdf(t: &Triplet, u: f64) -> Result<f64> {
    t.shape().left_cdf(u)
}

pub fn left_riv_pdf(t: &Triplet, u: f64) -> Result<f64> {
    t.shape().left_pdf(u)
}

pub fn left_riv_log_pdf(t: &Triplet, u: f64) -> Result<f64> {
    t.shape().left_log_pdf(u)
}

pub fn right_riv_cdf(t: &Triplet, v: f64) -> Result<f64> {
    t.shape().right_cdf(v)
}

pub fn right_riv_pdf(t: &Triplet, v: f64) -> Result<f64> {
    t.shape().right_pdf(v)
}

pub fn right_riv_log_pdf(t: &Triplet, v: f64) -> Result<f64> {
    t.shape().right_log_pdf(v)
}

/// `δ_K = max(δ_K^L, δ_K^R)`.
pub fn symmetric_ric(left: f64, right: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&left) {
        return Err(domain(
            "symmetric_ric",
            format!("left RIC must lie in [0, 1], got {left}"),
        ));
    }
    if !(right >= 0.0) {
        return Err(domain(
            "symmetric_ric",
            format!("right RIC must be >= 0, got {right}"),
        ));
    }
    Ok(left.max(right))
}

pub fn weibull_params(t: &Triplet) -> WeibullParams {
    t.shape().weibull()
}

pub fn gumbel_params(t: &Triplet) -> Result<GumbelParams> {
    t.shape().gumbel()
}

pub fn left_riv_cdf_asym(t: &Triplet, u: f64) -> Result<f64> {
    t.shape().left_cdf_asym(u)
}

pub fn left_riv_pdf_asym(t: &Triplet, u: f64) -> Result<f64> {
    t.shape().left_pdf_asym(u)
}

pub fn right_riv_cdf_asym(t: &Triplet, v: f64) -> Result<f64> {
    t.shape().right_cdf_asym(v)
}

pub fn right_riv_pdf_asym(t: &Triplet, v: f64) -> Result<f64> {
    t.shape().right_pdf_asym(v)
}

/// LESP and UESP of the asymptotic left RIV at tail mass `eps`.
pub fn left_support(t: &Triplet, eps: f64) -> Result<SupportBand> {
    support_band(&t.shape(), eps)
}

pub fn support_band(shape: &RivShape, eps: f64) -> Result<SupportBand> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(domain(
            "left_support",
            format!("expected 0 < eps < 0.5, got {eps}"),
        ));
    }
    let w = shape.weibull();
    let lesp = w.quantile(eps);
    let uesp = w.upper_quantile(eps);
    let clamp = |x: f64| x.clamp(0.0, 1.0);
    Ok(SupportBand {
        lesp: clamp(lesp),
        uesp: clamp(uesp),
        clamped: clamp(lesp) != lesp || clamp(uesp) != uesp,
    })
}

/// The `eps` whose support band is closest to `(lesp, uesp)` in squared error.
///
/// Scans `ln eps` over `[-700, ln 0.49]` and refines the best cell by golden section.
pub fn calibrate_support_eps(shape: &RivShape, lesp: f64, uesp: f64) -> Result<f64> {
    if !(lesp.is_finite() && uesp.is_finite() && lesp <= uesp) {
        return Err(domain(
            "calibrate_support_eps",
            format!("expected lesp <= uesp, got {lesp}, {uesp}"),
        ));
    }
    let objective = |ln_eps: f64| -> Result<f64> {
        let band = support_band(shape, ln_eps.exp())?;
        Ok(-((band.lesp - lesp).powi(2) + (band.uesp - uesp).powi(2)))
    };
    let (lo, hi) = (-700.0, 0.49f64.ln());
    let steps = 700;
    let h = (hi - lo) / steps as f64;
    let mut best = (lo, f64::NEG_INFINITY);
    for i in 0..=steps {
        let x = lo + h * i as f64;
        let f = objective(x)?;
        if f > best.1 {
            best = (x, f);
        }
    }
    let (x, _) =
        crate::roots::golden_max(objective, (best.0 - h).max(lo), (best.0 + h).min(hi), 1e-10)?;
    Ok(x.exp())
}
