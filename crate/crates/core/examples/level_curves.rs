//! Level curves of the left critical function `u(ρ, δ)` at `N = 10^4`, `ε = 10^-3`.

use riv_lab::critical::{self, PhasePoint};
use riv_lab::grid::GridSpec;

fn main() -> riv_lab::Result<()> {
    let (n, eps) = (1e4, 1e-3);
    let p = PhasePoint::new(0.1, 0.2, n, eps)?;
    let (u, v) = (critical::u_crit(&p)?, critical::v_crit(&p)?);
    println!(
        "at rho = 0.1, delta = 0.2: u_crit = {:.6}, v_crit = {:.6}\n",
        u.value, v.value
    );

    let deltas = GridSpec::log(0.01, 1.0, 12).points()?;
    for level in [0.2, 0.4, 0.6, 0.8] {
        let curve = critical::level_curve(level, n, eps, &deltas)?;
        let row: Vec<String> = curve
            .series
            .points()
            .iter()
            .map(|p| format!("({:.3}, {:.4})", p.delta, p.value))
            .collect();
        println!("level {level}: {}", row.join(" "));
        if !curve.unresolved.is_empty() {
            println!("  no root at delta {:?}", curve.unresolved);
        }
    }
    Ok(())
}
