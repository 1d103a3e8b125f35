//! Holomorphic maps with prescribed zeros, unimodular on both circles.
//!
//! ```text
//! cargo run --example holomorphic_minimizer -- 3 -2 0.4
//! ```

use num_complex::Complex64 as C64;
use semistiff::annulus::AnnulusGrid;
use semistiff::holo::{build_solution, make_zero_set, validate_solution};

fn main() -> semistiff::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |k: usize, default: &str| args.get(k).cloned().unwrap_or_else(|| default.to_string());
    let p: i32 = arg(0, "2").parse().expect("p");
    let q: i32 = arg(1, "-1").parse().expect("q");
    let rho: f64 = arg(2, "0.5").parse().expect("rho");

    // Default placement first, then a lopsided one; the zero set is rescaled
    // so the modulus constraint holds either way.
    let lopsided: Vec<C64> = (0..p - q)
        .map(|k| C64::from_polar(0.55 + 0.05 * k as f64, 0.4 * k as f64))
        .collect();
    for seeds in [vec![], lopsided] {
        let zs = make_zero_set(p, q, rho, &seeds)?;
        println!("zeros:");
        for z in zs.zeros() {
            println!("  {:.6} at angle {:+.4}", z.norm(), z.arg());
        }
        let u = build_solution(zs, 1e-14)?;
        println!("truncation order {}", u.truncation_order());
        let report = validate_solution(&u, &AnnulusGrid::new(rho, 201, 256)?);
        print!("{}", report.to_csv()?);
        println!();
    }
    Ok(())
}
