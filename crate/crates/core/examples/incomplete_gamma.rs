//! Regularized incomplete gamma functions and log binomials, the numerical base of every law.

use riv_lab::specfun;

fn main() -> riv_lab::Result<()> {
    println!(
        "{:>8} {:>8} {:>22} {:>22}",
        "a", "x", "P(a, x)", "ln Q(a, x)"
    );
    for (a, x) in [
        (2.0, 1.0),
        (100.0, 80.0),
        (100.0, 250.0),
        (350.0, 280.0),
        (5000.0, 5200.0),
    ] {
        println!(
            "{a:>8} {x:>8} {:>22.15e} {:>22.15}",
            specfun::reg_lower_gamma(a, x)?,
            specfun::log_reg_upper_gamma(a, x)?
        );
    }

    let x = specfun::inv_reg_lower_gamma(100.0, 1e-12)?;
    println!("\nP(100, x) = 1e-12 at x = {x:.12}");

    for (n, k) in [(1000.0, 5.0), (1e4, 50.0), (1e6, 2e5)] {
        println!("ln C({n}, {k}) = {:.6}", specfun::log_binomial(n, k)?);
    }
    Ok(())
}
