//! Radial critical points `f(r) e^{i p theta}` and where they stop being
//! minimizing.

use num_complex::Complex64 as C64;
use semistiff::annulus::{dirichlet_energy, hopf_constant_check, AnnulusGrid};
use semistiff::radial::{
    comparison_gap, minimality_test, radial_energy, steklov_compatibility, threshold_table, Kind, RadialSolution,
};

fn main() -> semistiff::Result<()> {
    let rho = 0.5;
    let grid = AnnulusGrid::new(rho, 401, 256)?;
    println!("rho = {rho}");
    println!("{:>2} {:>4} {:>14} {:>14} {:>14}", "p", "kind", "E closed", "E quadrature", "c");
    for p in 1..=4 {
        for kind in [Kind::Catenoidal, Kind::Helicoidal] {
            let sol = RadialSolution::new(p, rho, kind)?;
            let u = sol.field();
            println!(
                "{p:>2} {kind:>4} {:>14.10} {:>14.10} {:>14.6e}",
                radial_energy(p, rho, kind)?,
                dirichlet_energy(&u, &grid),
                hopf_constant_check(&u, &grid).c_estimate,
            );
        }
    }

    println!("\n{}", threshold_table(8)?);
    for p in 2..=4 {
        for r in [0.2, 0.5, 0.8] {
            println!(
                "p = {p}, rho = {r}: gap {:+.5}, {:?}",
                comparison_gap(p, r)?,
                minimality_test(p, r)?
            );
        }
    }

    // Boundary data whose extension is critical under the free-phase condition.
    println!();
    for (q, alpha) in [(2, C64::new(1.0, 0.0)), (2, C64::new(-1.0, 0.0)), (2, C64::i()), (1, C64::new(1.0, 0.0))] {
        let v = steklov_compatibility(2, q, alpha, rho, &grid)?;
        println!("p = 2, q = {q}, alpha = {alpha}: sup |u ^ du/dn| = {v:.3e}");
    }
    Ok(())
}
