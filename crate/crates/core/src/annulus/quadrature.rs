//! Integrals over the annulus: Dirichlet energy, capacity, the Jacobian
//! (degree-difference) integral, and the Hopf differential check.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use rustfft::FftPlanner;

use super::field::{FieldSampler, Jet, PolarFn};
use super::grid::{check_rho, AnnulusGrid};
use crate::error::Result;

/// Jets of `f` at every grid node, row-major (radius-major).
///
/// Samplers without an analytic jet are differentiated spectrally in
/// `theta` (FFT on each ring) and by fourth-order central differences in
/// `r` with the radial node spacing as step.
pub fn node_jets<F: FieldSampler + ?Sized>(f: &F, grid: &AnnulusGrid) -> Vec<Jet> {
    let h = grid.dr();
    let nt = grid.n_theta();
    let thetas = grid.thetas();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(nt);
    let inv = planner.plan_fft_inverse(nt);
    let mut out = Vec::with_capacity(grid.n_r() * nt);
    let mut ring = vec![C64::new(0.0, 0.0); nt];
    for i in 0..grid.n_r() {
        let r = grid.radius(i);
        if let Some(first) = f.analytic_jet(r, thetas[0]) {
            out.push(first);
            for &t in &thetas[1..] {
                out.push(f.analytic_jet(r, t).expect("analytic jet is available everywhere"));
            }
            continue;
        }
        for (slot, &t) in ring.iter_mut().zip(&thetas) {
            *slot = f.value(r, t);
        }
        let values = ring.clone();
        fwd.process(&mut ring);
        for (k, c) in ring.iter_mut().enumerate() {
            let n = if k < nt / 2 {
                k as f64
            } else if k == nt / 2 {
                0.0
            } else {
                k as f64 - nt as f64
            };
            *c *= C64::new(0.0, n / nt as f64);
        }
        inv.process(&mut ring);
        for (j, &t) in thetas.iter().enumerate() {
            let g = |s: f64| f.value(r + s, t);
            let dr = (-g(2.0 * h) + 8.0 * g(h) - 8.0 * g(-h) + g(-2.0 * h)) / (12.0 * h);
            out.push(Jet {
                value: values[j],
                dr,
                dtheta: ring[j],
            });
        }
    }
    out
}

/// Simpson in `r`, trapezoid in `theta`, of `integrand(r, jet)`.
fn integrate<F, G>(f: &F, grid: &AnnulusGrid, integrand: G) -> f64
where
    F: FieldSampler + ?Sized,
    G: Fn(f64, &Jet) -> f64,
{
    let jets = node_jets(f, grid);
    let w = grid.radial_weights();
    let nt = grid.n_theta();
    let mut total = 0.0;
    for i in 0..grid.n_r() {
        let r = grid.radius(i);
        let ring: f64 = jets[i * nt..(i + 1) * nt]
            .iter()
            .map(|j| integrand(r, j))
            .sum();
        total += w[i] * ring;
    }
    total * grid.dtheta()
}

/// `E(u) = 1/2 int_A |grad u|^2`, i.e.
/// `1/2 int (|u_r|^2 + r^-2 |u_theta|^2) r dr dtheta`.
pub fn dirichlet_energy<F: FieldSampler + ?Sized>(f: &F, grid: &AnnulusGrid) -> f64 {
    0.5 * integrate(f, grid, |r, j| {
        (j.dr.norm_sqr() + j.dtheta.norm_sqr() / (r * r)) * r
    })
}

/// `int_A du/dx ^ du/dy dx dy = int u_r ^ u_theta dr dtheta`.
///
/// Equals `pi (p - q)` for maps with unimodular boundary data of degrees
/// `p` (outer) and `q` (inner). For other maps this is just the raw
/// Jacobian integral.
pub fn degree_difference_integral<F: FieldSampler + ?Sized>(f: &F, grid: &AnnulusGrid) -> f64 {
    integrate(f, grid, |_, j| wedge(j.dr, j.dtheta))
}

/// `a ^ b` for vectors of the plane written as complex numbers.
pub fn wedge(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Capacity `2 pi / ln(1/rho)` of `A_rho`.
pub fn capacity(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(TAU / (1.0 / rho).ln())
}

/// Quadrature of `int_A |grad V|^2` for the harmonic `V = ln r / ln rho`
/// (0 on the outer circle, 1 on the inner), which equals [`capacity`].
pub fn capacity_by_quadrature(grid: &AnnulusGrid) -> f64 {
    let l = grid.rho().ln();
    let v = PolarFn(move |r: f64, _t: f64| C64::new(r.ln() / l, 0.0));
    2.0 * dirichlet_energy(&v, grid)
}

/// `z^2 H_u(z)` from a jet, with `H_u = (d_z u)(d_z conj u)`:
/// `4 z^2 H_u = r^2 |u_r|^2 - |u_theta|^2 - 2 i r <u_r, u_theta>`.
pub fn z2_hopf(r: f64, j: &Jet) -> C64 {
    let dot = (j.dr * j.dtheta.conj()).re;
    C64::new(r * r * j.dr.norm_sqr() - j.dtheta.norm_sqr(), -2.0 * r * dot) * 0.25
}

/// `H_u(z) = (d_z u)(d_z conj u)` from a jet.
pub fn hopf_differential(r: f64, theta: f64, j: &Jet) -> C64 {
    let z = C64::from_polar(r, theta);
    z2_hopf(r, j) / (z * z)
}

/// Constancy diagnostics of `z^2 H_u` over the interior nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopfReport {
    /// Mean of `Re(z^2 H_u)`.
    pub c_estimate: f64,
    /// `sup |Re(z^2 H_u) - c_estimate|`.
    pub max_real_deviation: f64,
    /// `sup |Im(z^2 H_u)|`.
    pub max_imag_part: f64,
}

impl HopfReport {
    pub fn to_csv(&self) -> String {
        format!(
            "c_estimate,max_real_deviation,max_imag_part\n{:.17e},{:.17e},{:.17e}\n",
            self.c_estimate, self.max_real_deviation, self.max_imag_part
        )
    }
}

/// Checks that `z^2 H_u` is a real constant, as it is for solutions of the
/// semi-stiff problem. Uses the interior nodes only.
pub fn hopf_constant_check<F: FieldSampler + ?Sized>(f: &F, grid: &AnnulusGrid) -> HopfReport {
    let jets = node_jets(f, grid);
    let nt = grid.n_theta();
    let mut values = Vec::with_capacity((grid.n_r() - 2) * nt);
    for i in 1..grid.n_r() - 1 {
        let r = grid.radius(i);
        values.extend(jets[i * nt..(i + 1) * nt].iter().map(|j| z2_hopf(r, j)));
    }
    let c = values.iter().map(|v| v.re).sum::<f64>() / values.len() as f64;
    let max_real_deviation = values.iter().map(|v| (v.re - c).abs()).fold(0.0, f64::max);
    let max_imag_part = values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    HopfReport {
        c_estimate: c,
        max_real_deviation,
        max_imag_part,
    }
}

/// `z -> f(rho / conj z)`: the anti-conformal inversion of `A_rho` fixing
/// `|z| = sqrt(rho)`. In polar form `(r, theta) -> (rho / r, theta)`.
pub struct Kelvin<F> {
    inner: F,
    rho: f64,
}

pub fn kelvin_reflect<F: FieldSampler>(f: F, rho: f64) -> Kelvin<F> {
    Kelvin { inner: f, rho }
}

impl<F: FieldSampler> FieldSampler for Kelvin<F> {
    fn value(&self, r: f64, theta: f64) -> C64 {
        self.inner.value(self.rho / r, theta)
    }

    fn analytic_jet(&self, r: f64, theta: f64) -> Option<Jet> {
        let s = self.rho / r;
        self.inner.analytic_jet(s, theta).map(|j| Jet {
            value: j.value,
            dr: j.dr * (-s / r),
            dtheta: j.dtheta,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annulus::field::{HarmonicField, Holomorphic, Mode};
    use std::f64::consts::PI;

    fn radial(p: i32, rho: f64, sign: f64) -> HarmonicField {
        let rp = rho.powi(p);
        let n = 1.0 + sign * rp;
        HarmonicField {
            rho,
            a0: C64::new(0.0, 0.0),
            b0: C64::new(0.0, 0.0),
            modes: vec![Mode {
                n: p,
                a: C64::new(1.0 / n, 0.0),
                b: C64::new(sign * rp / n, 0.0),
            }],
        }
    }

    #[test]
    fn energy_of_u1() {
        let g = AnnulusGrid::new(0.5, 201, 64).unwrap();
        let e = dirichlet_energy(&radial(1, 0.5, 1.0), &g);
        assert!((e - TAU / 3.0).abs() < 1e-8, "{e}");
    }

    #[test]
    fn energy_of_u2_matches_closed_form() {
        let g = AnnulusGrid::new(0.5, 201, 64).unwrap();
        let e = dirichlet_energy(&radial(2, 0.5, 1.0), &g);
        assert!((e - 2.4 * PI).abs() < 1e-8 * e, "{e}");
    }

    #[test]
    fn energy_of_constant_is_zero() {
        let g = AnnulusGrid::new(0.5, 21, 16).unwrap();
        let f = HarmonicField::constant(C64::new(0.3, -1.0), 0.5).unwrap();
        assert_eq!(dirichlet_energy(&f, &g), 0.0);
    }

    #[test]
    fn finite_difference_path_matches_analytic_path() {
        let g = AnnulusGrid::new(0.4, 101, 64).unwrap();
        let f = radial(3, 0.4, 1.0);
        let sampled = PolarFn(|r: f64, t: f64| f.value(r, t));
        let a = dirichlet_energy(&f, &g);
        let b = dirichlet_energy(&sampled, &g);
        assert!((a - b).abs() < 1e-6 * a, "{a} vs {b}");
    }

    #[test]
    fn capacity_values() {
        assert!((capacity((-TAU).exp()).unwrap() - 1.0).abs() < 1e-14);
        assert!((capacity((-1.0f64).exp()).unwrap() - TAU).abs() < 1e-14);
        let g = AnnulusGrid::new(0.5, 401, 16).unwrap();
        let c = capacity(0.5).unwrap();
        assert!((c - 9.064720283654388).abs() < 1e-12);
        assert!((capacity_by_quadrature(&g) - c).abs() < 1e-8);
        assert!(capacity(1.5).is_err());
    }

    #[test]
    fn jacobian_integral() {
        let g = AnnulusGrid::new(0.5, 201, 64).unwrap();
        let d = degree_difference_integral(&radial(2, 0.5, 1.0), &g);
        assert!(d.abs() < 1e-7, "{d}");
        // Identity map: the raw integral is the area of the annulus.
        let id = Holomorphic(|z: C64| z, |_z: C64| C64::new(1.0, 0.0));
        let area = PI * (1.0 - 0.25);
        assert!((degree_difference_integral(&id, &g) - area).abs() < 1e-10);
    }

    #[test]
    fn hopf_constants_of_radial_families() {
        let g = AnnulusGrid::new(0.5, 41, 32).unwrap();
        let cat = hopf_constant_check(&radial(2, 0.5, 1.0), &g);
        assert!((cat.c_estimate + 0.64).abs() < 1e-12);
        assert!(cat.max_imag_part < 1e-12 && cat.max_real_deviation < 1e-12);
        let hel = hopf_constant_check(&radial(2, 0.5, -1.0), &g);
        assert!((hel.c_estimate - 16.0 / 9.0).abs() < 1e-12);
        let id = Holomorphic(|z: C64| z, |_z: C64| C64::new(1.0, 0.0));
        let h = hopf_constant_check(&id, &g);
        assert!(h.c_estimate.abs() < 1e-14 && h.max_imag_part < 1e-14);
    }

    #[test]
    fn kelvin_reflection() {
        let rho = 0.5;
        let g = AnnulusGrid::new(rho, 201, 64).unwrap();
        let u = radial(2, rho, 1.0);
        let ut = radial(2, rho, -1.0);
        for &(r, t) in &[(0.6, 0.1), (0.8, 2.0), (0.95, 4.0)] {
            assert!((kelvin_reflect(&u, rho).value(r, t) - u.value(r, t)).norm() < 1e-14);
            assert!((kelvin_reflect(&ut, rho).value(r, t) + ut.value(r, t)).norm() < 1e-14);
        }
        let k = HarmonicField::constant(C64::new(2.0, 0.0), rho).unwrap();
        assert_eq!(kelvin_reflect(&k, rho).value(0.7, 1.0), C64::new(2.0, 0.0));
        // Conformal invariance of the energy, on a field that is not
        // reflection invariant.
        let w = PolarFn(|r: f64, t: f64| C64::new(r * t.cos(), r * r * (2.0 * t).sin()));
        let e0 = dirichlet_energy(&w, &g);
        let e1 = dirichlet_energy(&kelvin_reflect(&w, rho), &g);
        assert!((e0 - e1).abs() < 1e-8 * e0, "{e0} {e1}");
    }
}
