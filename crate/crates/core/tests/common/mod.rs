//! Oracles shared by the integration tests. Nothing here calls into the library's numerics.
#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature of `f` on `[a, b]`, split first into `pieces` panels
/// so narrow peaks are not stepped over.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, pieces: usize, tol: f64) -> f64 {
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let (lo, hi) = (a + h * i as f64, a + h * (i + 1) as f64);
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
            simpson_step(&f, lo, hi, fa, fm, fb, whole, tol / pieces as f64, 50)
        })
        .sum()
}

/// Five-point central difference.
pub fn derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h)
}

/// `P(a, x)` for integer `a` from the Poisson sum `1 - e^{-x} Σ_{j<a} x^j / j!`.
pub fn poisson_lower_gamma(a: u32, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..a {
        term *= x / j as f64;
        sum += term;
    }
    1.0 - (-x).exp() * sum
}

/// Minima and maxima of `count` i.i.d. `χ²_M / M` variates, over `reps` replicates.
pub fn iid_extremes(m: u64, count: usize, reps: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gamma = Gamma::new(0.5 * m as f64, 2.0 / m as f64).unwrap();
    let mut mins = Vec::with_capacity(reps);
    let mut maxs = Vec::with_capacity(reps);
    for _ in 0..reps {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for _ in 0..count {
            let r: f64 = gamma.sample(&mut rng);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        mins.push(lo);
        maxs.push(hi);
    }
    (mins, maxs)
}

/// Two-sided KS distance of `samples` against `cdf`.
pub fn ks<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

/// Smallest `x` on the doubling ladder from `start` with `cdf(x) >= p`.
pub fn doubling_upper<F: Fn(f64) -> f64>(cdf: F, start: f64, p: f64) -> f64 {
    let mut x = start;
    while cdf(x) < p {
        x *= 2.0;
    }
    x
}
