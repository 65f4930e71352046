//! LESP/UESP band of the asymptotic left RIV along a δ sweep with `M = 1000` fixed.
//!
//! The tolerance is calibrated once so that the band at `δ = 0.2, ρ = 0.05`
//! reads `[0.354, 0.397]`, then reused for every other point.

use riv_lab::rivdist::{self, RivShape};
use riv_lab::specfun;

fn shape(m: f64, rho: f64, delta: f64) -> riv_lab::Result<RivShape> {
    RivShape::new(m, specfun::log_binomial(m / delta, rho * m)?)
}

fn main() -> riv_lab::Result<()> {
    let m = 1000.0;
    let eps = rivdist::calibrate_support_eps(&shape(m, 0.05, 0.2)?, 0.354, 0.397)?;
    println!("calibrated eps = {eps:.3e}\n");

    println!(
        "{:>6} {:>6} {:>9} {:>9} {:>9}",
        "rho", "delta", "LESP", "UESP", "width"
    );
    for rho in [0.05, 0.1, 0.2] {
        for delta in [0.1, 0.2, 0.4, 0.6, 0.8] {
            let band = rivdist::support_band(&shape(m, rho, delta)?, eps)?;
            println!(
                "{rho:>6} {delta:>6} {:>9.4} {:>9.4} {:>9.4}",
                band.lesp,
                band.uesp,
                band.width()
            );
        }
    }
    Ok(())
}
