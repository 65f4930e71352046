//! Strong-equivalence boundaries of the L1 decoder and the measurement bounds `M >= cK`.

use riv_lab::grid::GridSpec;
use riv_lab::phase::{self, Method, RivParams};

fn main() -> riv_lab::Result<()> {
    let deltas = GridSpec::default_delta().points()?;
    let params = RivParams {
        ambient_n: 1e4,
        eps: 1e-3,
    };
    let riv = phase::pt_boundary(Method::Riv, Some(params), &deltas)?;
    let gfa = phase::pt_boundary(Method::Gfa, None, &deltas)?;

    println!("{:>8} {:>12} {:>12}", "delta", "rho_s riv", "rho_s gfa");
    for d in [0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 1.0] {
        let r = riv.rho_at(d)?.unwrap_or(f64::NAN);
        let g = gfa.rho_at(d)?.unwrap_or(f64::NAN);
        println!("{d:>8} {r:>12.6} {g:>12.6}");
    }

    let c_riv = phase::measurement_bound(&riv)?;
    let c_gfa = phase::measurement_bound(&gfa)?;
    println!(
        "\ncomputed: riv c = {:.2} (max at delta {:.3}), gfa c = {:.2}",
        c_riv.c, c_riv.delta_at_max, c_gfa.c
    );
    for c in phase::cited_constants() {
        println!("cited ({}): {} c = {}", c.provenance, c.approach, c.c);
    }
    println!("ev / riv = {:.2}", phase::cited_ev_constant() / c_riv.c);
    Ok(())
}
