//! Acceptance criteria. Runs without the libtest harness so that every criterion
//! prints its `ACCEPTANCE <id> PASS|FAIL <summary>` line; exits nonzero if any fails.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use common::{doubling_upper, iid_extremes, integrate, ks};
use riv_lab::critical::{self, PhasePoint};
use riv_lab::grid::GridSpec;
use riv_lab::mc::{self, MCConfig, XRule};
use riv_lab::phase::{self, Method, RivParams};
use riv_lab::rivdist::{self, RivShape, Triplet};
use riv_lab::specfun;

fn verdict(
    id: u32,
    name: &str,
    passed: bool,
    elapsed: Duration,
    limit_s: f64,
    detail: String,
) -> bool {
    let in_time = elapsed.as_secs_f64() < limit_s;
    let ok = passed && in_time;
    println!(
        "ACCEPTANCE {id:>2} {} {name}: {detail}; runtime {:.2}s (limit {limit_s}s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    ok
}

fn t268() -> Triplet {
    Triplet::new(2, 6, 8).unwrap()
}

fn c01_ratio_moments() -> bool {
    let start = Instant::now();
    let cfg = MCConfig::with_options(t268(), 100_000, 1, 1.0 / 6.0, XRule::EqualEntries).unwrap();
    let r = mc::validate(&cfg).unwrap();
    let mean_ok = (r.ratio_mean - 1.0).abs() <= 0.01;
    let var_ok = (r.ratio_var / (2.0 / 6.0) - 1.0).abs() <= 0.10;
    verdict(
        1,
        "ratio moments",
        mean_ok && var_ok,
        start.elapsed(),
        10.0,
        format!(
            "mean {:.5} (1 ± 0.01), var {:.5} (0.33333 ± 10%)",
            r.ratio_mean, r.ratio_var
        ),
    )
}

fn c02_ratio_distribution_and_x_invariance() -> bool {
    let start = Instant::now();
    let cfg = MCConfig::with_options(t268(), 100_000, 2, 1.0 / 6.0, XRule::EqualEntries).unwrap();
    let r = mc::validate(&cfg).unwrap();
    let cfg_rand =
        MCConfig::with_options(t268(), 100_000, 3, 1.0 / 6.0, XRule::SeededRandom).unwrap();
    let r_rand = mc::validate(&cfg_rand).unwrap();
    let diff = (r.ks_ratio - r.ks_ratio_alt).abs();
    let diff_rand = (r_rand.ks_ratio - r_rand.ks_ratio_alt).abs();
    let passed =
        r.ks_ratio <= 0.01 && r_rand.ks_ratio <= 0.01 && diff <= 0.005 && diff_rand <= 0.005;
    verdict(
        2,
        "ratio distribution",
        passed,
        start.elapsed(),
        30.0,
        format!(
            "KS {:.5} / {:.5} (<= 0.01); x-rule KS differences {:.5} ({} vs {}), {:.5} ({} vs {}) (<= 0.005)",
            r.ks_ratio, r_rand.ks_ratio, diff, r.config.x_rule(), r.alt_x_rule, diff_rand, r_rand.config.x_rule(), r_rand.alt_x_rule
        ),
    )
}

fn c03_sandwich_and_ev_dominance() -> bool {
    let start = Instant::now();
    let cfg = MCConfig::new(t268(), 10_000, 4).unwrap();
    let r = mc::validate(&cfg).unwrap();
    verdict(
        3,
        "sandwich and EV dominance",
        r.sandwich_violations == 0 && r.ev_dominance_violations == 0,
        start.elapsed(),
        60.0,
        format!(
            "{} sandwich and {} dominance violations over 10^4 encoders x 28 supports; mean gaps L-ΔL {:.4}, U-ΔR {:.4}",
            r.sandwich_violations, r.ev_dominance_violations, r.ev_mean_gap_left, r.ev_mean_gap_right
        ),
    )
}

fn c04_exact_laws_match_iid_oracle() -> bool {
    let start = Instant::now();
    let t = Triplet::new(2, 4, 6).unwrap();
    let (mins, maxs) = iid_extremes(4, 15, 1_000_000, 44);
    let lefts: Vec<f64> = mins.iter().map(|r| 1.0 - r).collect();
    let rights: Vec<f64> = maxs.iter().map(|r| r - 1.0).collect();
    // The laws live on u in [0, 1] and v >= 0; samples outside see the boundary value.
    let d_left = ks(&lefts, |u| {
        rivdist::left_riv_cdf(&t, u.clamp(0.0, 1.0)).unwrap()
    });
    let d_right = ks(&rights, |v| rivdist::right_riv_cdf(&t, v.max(0.0)).unwrap());
    verdict(
        4,
        "exact laws vs i.i.d. oracle",
        d_left <= 0.005 && d_right <= 0.005,
        start.elapsed(),
        60.0,
        format!("KS left {d_left:.5}, right {d_right:.5} (<= 0.005) over 10^6 replicates"),
    )
}

fn c05_dependent_sampling_ordering() -> bool {
    let start = Instant::now();
    let cfg = MCConfig::new(t268(), 10_000, 5).unwrap();
    let r = mc::validate(&cfg).unwrap();
    let min_margin = |g: &[mc::GridCdf]| g.iter().map(|p| p.margin).fold(f64::INFINITY, f64::min);
    let (ml, mr) = (min_margin(&r.emp_left_cdf), min_margin(&r.emp_right_cdf));
    let all_points = r.emp_left_cdf.len() == 50 && r.emp_right_cdf.len() == 50;
    verdict(
        5,
        "dependent vs i.i.d. ordering",
        all_points && ml >= 0.0 && mr >= 0.0,
        start.elapsed(),
        60.0,
        format!("smallest margin (emp - analytic + 3 se) left {ml:.5}, right {mr:.5} over 50 points each"),
    )
}

fn sup_gap(exact: impl Fn(f64) -> f64, asym: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    (0..200)
        .map(|i| lo + (hi - lo) * i as f64 / 199.0)
        .map(|x| (exact(x) - asym(x)).abs())
        .fold(0.0, f64::max)
}

fn c06_asymptotic_convergence() -> bool {
    let start = Instant::now();
    let (rho, delta) = (0.1, 0.25);
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut lines = Vec::new();
    for n in [40u64, 80, 160, 320, 640] {
        let m = (delta * n as f64).round() as u64;
        let k = (rho * m as f64).round() as u64;
        let t = Triplet::new(k, m, n).unwrap();
        let s = t.shape();
        let gl = sup_gap(
            |u| s.left_cdf(u).unwrap(),
            |u| s.left_cdf_asym(u).unwrap(),
            0.0,
            1.0,
        );
        let hi = doubling_upper(|v| s.right_cdf(v).unwrap(), 0.25, 1.0 - 1e-9);
        let gr = sup_gap(
            |v| s.right_cdf(v).unwrap(),
            |v| s.right_cdf_asym(v).unwrap(),
            0.0,
            hi,
        );
        let l2 = t.log_ns().ln().powi(2);
        lines.push(format!(
            "N={n} {t}: left {gl:.4} right {gr:.4} (x(ln N_s)^2: {:.2}, {:.2})",
            gl * l2,
            gr * l2
        ));
        left.push((gl, gl * l2));
        right.push((gr, gr * l2));
    }
    let decreasing = |g: &[(f64, f64)]| g.windows(2).all(|w| w[1].0 < w[0].0);
    let bounded = |g: &[(f64, f64)]| {
        let hi = g.iter().map(|x| x.1).fold(0.0, f64::max);
        let lo = g.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
        hi <= 4.0 * lo
    };
    let passed = decreasing(&left) && decreasing(&right) && bounded(&left) && bounded(&right);
    verdict(
        6,
        "asymptotic convergence",
        passed,
        start.elapsed(),
        10.0,
        lines.join("; "),
    )
}

fn c07_critical_round_trips() -> bool {
    let start = Instant::now();
    let (n, eps) = (1e4, 1e-3);
    let mut worst_left = 0.0f64;
    let mut worst_right = 0.0f64;
    for i in 1..=20 {
        for j in 1..=20 {
            let rho = (i as f64 - 0.5) / 20.0;
            let delta = (j as f64 - 0.5) / 20.0;
            let p = PhasePoint::new(rho, delta, n, eps).unwrap();
            let s = p.shape().unwrap();
            let u = critical::u_crit(&p).unwrap();
            let v = critical::v_crit(&p).unwrap();
            worst_left = worst_left.max((s.weibull().cdf(u.raw) - (1.0 - eps)).abs());
            worst_right = worst_right.max((s.gumbel().unwrap().cdf(v.raw) - (1.0 - eps)).abs());
        }
    }
    verdict(
        7,
        "critical round trips",
        worst_left <= 1e-9 && worst_right <= 1e-9,
        start.elapsed(),
        5.0,
        format!("max |F(crit) - (1 - eps)| left {worst_left:.2e}, right {worst_right:.2e} on 20x20 lattice"),
    )
}

fn c08_level_curve_crossing() -> bool {
    let start = Instant::now();
    let (n, eps) = (1e4, 1e-3);
    let deltas = GridSpec::linear(0.05, 0.5, 451).points().unwrap();
    let curve = critical::level_curve(0.6, n, eps, &deltas).unwrap();
    let pts = curve.series.points();
    let crossing = pts
        .windows(2)
        .find(|w| (w[0].value - 0.1) * (w[1].value - 0.1) <= 0.0)
        .map(|w| {
            w[0].delta + (0.1 - w[0].value) * (w[1].delta - w[0].delta) / (w[1].value - w[0].value)
        });
    let detail = match crossing {
        Some(d) => {
            let u = critical::u_crit(&PhasePoint::new(0.1, d, n, eps).unwrap())
                .unwrap()
                .value;
            format!("curve crosses rho = 0.1 at delta = {d:.4} (target 0.2 ± 0.03), u_crit there {u:.6}")
        }
        None => "no crossing of rho = 0.1 on [0.05, 0.5]".into(),
    };
    let passed = crossing.is_some_and(|d| (d - 0.2).abs() <= 0.03);
    verdict(
        8,
        "level-0.6 crossing",
        passed,
        start.elapsed(),
        5.0,
        detail,
    )
}

fn c09_measurement_constants() -> bool {
    let start = Instant::now();
    let deltas = GridSpec::default_delta().points().unwrap();
    let params = RivParams {
        ambient_n: 1e4,
        eps: 1e-3,
    };
    let riv =
        phase::measurement_bound(&phase::pt_boundary(Method::Riv, Some(params), &deltas).unwrap())
            .unwrap();
    let gfa =
        phase::measurement_bound(&phase::pt_boundary(Method::Gfa, None, &deltas).unwrap()).unwrap();
    let ratio = phase::cited_ev_constant() / riv.c;
    let passed =
        (riv.c - 16.8).abs() <= 0.5 && (gfa.c - 56.0).abs() <= 2.0 && (ratio - 18.8).abs() <= 0.6;
    verdict(
        9,
        "measurement constants",
        passed,
        start.elapsed(),
        30.0,
        format!(
            "c_riv {:.3} (16.8 ± 0.5, max at delta {:.3}), c_gfa {:.3} (56 ± 2), 317 / c_riv {:.3} (18.8 ± 0.6)",
            riv.c, riv.delta_at_max, gfa.c, ratio
        ),
    )
}

fn c10_support_band_spot_check() -> bool {
    let start = Instant::now();
    // M = 1000 fixed, δ = 0.2 ⇒ N = 5000, K = ρM = 50.
    let (m, delta, rho) = (1000.0, 0.2, 0.05);
    let n = m / delta;
    let shape = RivShape::new(m, specfun::log_binomial(n, rho * m).unwrap()).unwrap();
    let eps = rivdist::calibrate_support_eps(&shape, 0.354, 0.397).unwrap();
    let band = rivdist::support_band(&shape, eps).unwrap();
    let passed = (band.lesp - 0.354).abs() <= 0.01
        && (band.uesp - 0.397).abs() <= 0.01
        && (band.width() - 0.043).abs() <= 0.005;
    verdict(
        10,
        "support band",
        passed,
        start.elapsed(),
        5.0,
        format!(
            "calibrated eps {eps:.3e}: LESP {:.4} (0.354 ± 0.01), UESP {:.4} (0.397 ± 0.01), width {:.4} (0.043 ± 0.005)",
            band.lesp,
            band.uesp,
            band.width()
        ),
    )
}

fn c11_normalization_and_consistency() -> bool {
    let start = Instant::now();
    let mut worst_mass = 0.0f64;
    let mut worst_fd = 0.0f64;
    for (k, m, n) in [
        (5u64, 200u64, 1000u64),
        (3, 20, 60),
        (2, 10, 40),
        (10, 60, 400),
    ] {
        let s = Triplet::new(k, m, n).unwrap().shape();
        let w = s.weibull();
        let g = s.gumbel().unwrap();
        let v_hi = doubling_upper(|v| s.right_cdf(v).unwrap(), 0.25, 1.0 - 1e-14);
        let u_lo = 1.0 - w.q * 40f64.powf(1.0 / w.beta);
        let (g_lo, g_hi) = (g.l - 1.0 - 5.0 * g.s, g.l - 1.0 + 40.0 * g.s);
        let masses = [
            integrate(|u| s.left_pdf(u).unwrap(), 0.0, 1.0, 400, 1e-10),
            integrate(|v| s.right_pdf(v).unwrap(), 0.0, v_hi, 400, 1e-10),
            integrate(|u| w.pdf(u), u_lo, 1.0, 400, 1e-10),
            integrate(|v| g.pdf(v), g_lo, g_hi, 400, 1e-10),
        ];
        for mass in masses {
            worst_mass = worst_mass.max((mass - 1.0).abs());
        }

        let h = 1e-4 / (m as f64).sqrt();
        type Pair<'a> = (
            Box<dyn Fn(f64) -> f64 + 'a>,
            Box<dyn Fn(f64) -> f64 + 'a>,
            f64,
            f64,
            f64,
        );
        let pairs: Vec<Pair> = vec![
            (
                Box::new(|u| s.left_cdf(u.clamp(0.0, 1.0)).unwrap()),
                Box::new(|u| s.left_pdf(u).unwrap()),
                0.0,
                1.0,
                h,
            ),
            (
                Box::new(|v| s.right_cdf(v.max(0.0)).unwrap()),
                Box::new(|v| s.right_pdf(v).unwrap()),
                0.0,
                v_hi,
                h,
            ),
            (
                Box::new(|u| w.cdf(u)),
                Box::new(|u| w.pdf(u)),
                u_lo,
                1.0,
                1e-3 * w.q / w.beta,
            ),
            (
                Box::new(|v| g.cdf(v)),
                Box::new(|v| g.pdf(v)),
                g_lo,
                g_hi,
                1e-3 * g.s,
            ),
        ];
        for (cdf, pdf, lo, hi, h) in pairs {
            let xs: Vec<f64> = (1..2000)
                .map(|i| lo + (hi - lo) * i as f64 / 2000.0)
                .collect();
            let peak = xs.iter().map(|&x| pdf(x)).fold(0.0, f64::max);
            for x in xs {
                let p = pdf(x);
                if p >= 1e-3 * peak {
                    let d = common::derivative(&cdf, x, h);
                    worst_fd = worst_fd.max((d - p).abs() / p);
                }
            }
        }
    }
    verdict(
        11,
        "normalization and consistency",
        worst_mass <= 1e-6 && worst_fd <= 1e-6,
        start.elapsed(),
        30.0,
        format!("max |mass - 1| {worst_mass:.2e} (<= 1e-6), max relative CDF'/PDF gap {worst_fd:.2e} (<= 1e-6)"),
    )
}

fn c12_validate_is_deterministic() -> bool {
    let start = Instant::now();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_riv-lab"))
            .args([
                "validate",
                "--triplet",
                "2,6,8",
                "--trials",
                "2000",
                "--seed",
                "12",
            ])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    let same =
        a.status.success() && b.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout;
    verdict(
        12,
        "deterministic validate",
        same,
        start.elapsed(),
        60.0,
        format!(
            "two runs with seed 12: {} bytes, identical = {}",
            a.stdout.len(),
            a.stdout == b.stdout
        ),
    )
}

type Criterion = (&'static str, fn() -> bool);

fn main() {
    let criteria: [Criterion; 12] = [
        ("c01_ratio_moments", c01_ratio_moments),
        (
            "c02_ratio_distribution_and_x_invariance",
            c02_ratio_distribution_and_x_invariance,
        ),
        (
            "c03_sandwich_and_ev_dominance",
            c03_sandwich_and_ev_dominance,
        ),
        (
            "c04_exact_laws_match_iid_oracle",
            c04_exact_laws_match_iid_oracle,
        ),
        (
            "c05_dependent_sampling_ordering",
            c05_dependent_sampling_ordering,
        ),
        ("c06_asymptotic_convergence", c06_asymptotic_convergence),
        ("c07_critical_round_trips", c07_critical_round_trips),
        ("c08_level_curve_crossing", c08_level_curve_crossing),
        ("c09_measurement_constants", c09_measurement_constants),
        ("c10_support_band_spot_check", c10_support_band_spot_check),
        (
            "c11_normalization_and_consistency",
            c11_normalization_and_consistency,
        ),
        (
            "c12_validate_is_deterministic",
            c12_validate_is_deterministic,
        ),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let ok = std::panic::catch_unwind(run).unwrap_or_else(|_| {
            println!("ACCEPTANCE FAIL {name}: panicked");
            false
        });
        if !ok {
            failed.push(name);
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed.len(),
        criteria.len()
    );
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
