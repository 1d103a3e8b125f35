//! Harmonic extension of unimodular boundary data on an annulus, and the
//! quantities measured on it.
//!
//! ```text
//! cargo run --example annulus_energies -- 0.4
//! ```

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use semistiff::annulus::{
    capacity, degree_difference_integral, dirichlet_energy, harmonic_extension, hopf_constant_check,
    kelvin_reflect, winding_degree, AnnulusGrid, BoundaryTrace,
};

fn main() -> semistiff::Result<()> {
    let rho: f64 = std::env::args().nth(1).map_or(0.4, |s| s.parse().expect("rho must be a number"));
    let grid = AnnulusGrid::new(rho, 201, 128)?;

    // degree 2 outside, degree -1 inside, with a wobble in the phase
    let outer = BoundaryTrace::sample(128, 1.0, |t| C64::from_polar(1.0, 2.0 * t + 0.3 * (3.0 * t).sin()));
    let inner = BoundaryTrace::sample(128, rho, |t| C64::from_polar(1.0, -t + 0.2 * t.cos()));
    println!("degrees: outer {}, inner {}", winding_degree(&outer)?, winding_degree(&inner)?);

    let u = harmonic_extension(&inner, &outer, rho, 64)?;
    let e = dirichlet_energy(&u, &grid);
    let d = degree_difference_integral(&u, &grid);
    println!("E(u)             = {e:.10}");
    println!("int u_x ^ u_y    = {d:.10}  (pi (p - q) = {:.10})", 3.0 * PI);
    println!("E of reflection  = {:.10}", dirichlet_energy(&kelvin_reflect(&u, rho), &grid));
    println!("capacity         = {:.10}", capacity(rho)?);

    let hopf = hopf_constant_check(&u, &grid);
    println!(
        "z^2 H_u: mean {:.4e}, spread {:.3e} (a generic extension is not a critical point)",
        hopf.c_estimate, hopf.max_real_deviation
    );
    Ok(())
}
