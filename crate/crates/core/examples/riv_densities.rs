//! Exact and asymptotic densities of the left and right RIVs for one triplet.
//!
//! `cargo run --example riv_densities -- 5 200 1000`

use riv_lab::rivdist::Triplet;

fn main() -> riv_lab::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let (k, m, n) = match args.as_slice() {
        [k, m, n] => (*k, *m, *n),
        _ => (5, 200, 1000),
    };
    let t = Triplet::new(k, m, n)?;
    let s = t.shape();
    let w = s.weibull();
    let g = s.gumbel()?;

    println!(
        "triplet {t}: ln N_s = {:.4}, (ln N_s)^-2 = {:.2e} ({:?})",
        t.log_ns().ln(),
        t.convergence_indicator(),
        t.regime(1e-2)
    );
    println!(
        "Weibull q = {:.6}, beta = {}; Gumbel s = {:.6}, l = {:.6}\n",
        w.q, w.beta, g.s, g.l
    );

    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>12}",
        "x", "left", "left asym", "right", "right asym"
    );
    for i in 0..=20 {
        let x = i as f64 / 20.0;
        println!(
            "{x:>6.2} {:>12.5} {:>12.5} {:>12.5} {:>12.5}",
            s.left_pdf(x)?,
            s.left_pdf_asym(x)?,
            s.right_pdf(x)?,
            s.right_pdf_asym(x)?
        );
    }
    Ok(())
}
