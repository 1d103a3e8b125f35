//! Stability of the `p`-covered catenoid: the lowest radial eigenvalue as
//! the neck is stretched, and the instants where it crosses `-k^2`.

use semistiff::spectrum::{
    bifurcation_instant, kernel_report, mu1, radial_spectrum, stable_unstable_root, transversality,
};

fn main() -> semistiff::Result<()> {
    let p: i32 = std::env::args().nth(1).map_or(3, |s| s.parse().expect("p"));
    println!("x tanh x = 1 at x = {:.10}", stable_unstable_root());

    println!("\n{:>8} {:>14}", "t", "mu_1(t)");
    for k in 0..12 {
        let t = 0.25 * (k + 1) as f64 / p as f64;
        println!("{t:>8.4} {:>14.8}", mu1(p, t)?);
    }
    println!("limit -p^2 = {}", -(p * p));

    println!();
    for k in 0..p {
        let t = bifurcation_instant(p, k, 1e-12)?;
        let kernel = kernel_report(p, t, 1e-6)?;
        println!(
            "t_{k} = {t:.10}  kernel modes {:?}, dimension {} ({} symmetric)",
            kernel.modes, kernel.dimension, kernel.symmetric_dimension
        );
    }
    if p >= 2 {
        let t1 = bifurcation_instant(p, 1, 1e-12)?;
        println!("d lambda_2 / dt at t_1 = {:.6}", transversality(p, t1, 1e-3)?);
        let s = radial_spectrum(p, t1, 3, 2001)?;
        print!("\n{}", s.to_csv());
    }
    Ok(())
}
