//! Radial solutions `u_p` (catenoidal) and `u~_p` (helicoidal), their
//! energies, the non-minimality threshold `rho'_p`, and the boundary test
//! that singles them out among harmonic extensions of pure modes.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::annulus::{
    check_rho, harmonic_extension, wedge, AnnulusGrid, BoundaryTrace, HarmonicField, Mode,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// `u_p = alpha (r^p + rho^p r^-p) e^{i p theta} / (1 + rho^p)`; lifts to a catenoid.
    Catenoidal,
    /// `u~_p = alpha (r^p - rho^p r^-p) e^{i p theta} / (1 - rho^p)`; lifts to a helicoid.
    Helicoidal,
}

impl Kind {
    fn sign(self) -> f64 {
        match self {
            Kind::Catenoidal => 1.0,
            Kind::Helicoidal => -1.0,
        }
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cat" | "catenoidal" => Ok(Kind::Catenoidal),
            "hel" | "helicoidal" => Ok(Kind::Helicoidal),
            _ => Err(Error::InvalidParameter(format!("unknown kind {s:?}"))),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Catenoidal => "cat",
            Kind::Helicoidal => "hel",
        })
    }
}

/// A member of one of the two radial families. Negative `p` uses
/// `|p|` in the radial profile and `e^{i p theta}` in angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialSolution {
    pub p: i32,
    pub rho: f64,
    pub kind: Kind,
    pub alpha: C64,
}

impl RadialSolution {
    pub fn new(p: i32, rho: f64, kind: Kind) -> Result<Self> {
        Self::with_alpha(p, rho, kind, C64::new(1.0, 0.0))
    }

    pub fn with_alpha(p: i32, rho: f64, kind: Kind, alpha: C64) -> Result<Self> {
        check_rho(rho)?;
        if p == 0 {
            return Err(Error::InvalidParameter("p must be nonzero".into()));
        }
        if (alpha.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("|alpha| = {} != 1", alpha.norm())));
        }
        Ok(Self { p, rho, kind, alpha })
    }

    pub fn field(&self) -> HarmonicField {
        let rp = self.rho.powi(self.p.abs());
        let s = self.kind.sign();
        let norm = 1.0 + s * rp;
        HarmonicField {
            rho: self.rho,
            a0: C64::new(0.0, 0.0),
            b0: C64::new(0.0, 0.0),
            modes: vec![Mode {
                n: self.p,
                a: self.alpha / norm,
                b: self.alpha * (s * rp / norm),
            }],
        }
    }

    /// `z^2 H_u` for this solution: `-p^2 rho^p/(1+rho^p)^2` (catenoidal)
    /// or `p^2 rho^p/(1-rho^p)^2` (helicoidal).
    pub fn hopf_constant(&self) -> f64 {
        hopf_constant(self.p, self.rho, self.kind)
    }

    pub fn energy(&self) -> f64 {
        energy_closed_form(self.p, self.rho, self.kind)
    }
}

pub fn hopf_constant(p: i32, rho: f64, kind: Kind) -> f64 {
    let m = p.abs();
    let rp = rho.powi(m);
    let p2 = (m * m) as f64;
    match kind {
        Kind::Catenoidal => -p2 * rp / ((1.0 + rp) * (1.0 + rp)),
        Kind::Helicoidal => p2 * rp / ((1.0 - rp) * (1.0 - rp)),
    }
}

fn energy_closed_form(p: i32, rho: f64, kind: Kind) -> f64 {
    let m = p.abs();
    let rp = rho.powi(m);
    let s = kind.sign();
    TAU * m as f64 * (1.0 - s * rp) / (1.0 + s * rp)
}

/// `E(u_p) = 2 pi p (1 - rho^p)/(1 + rho^p)`,
/// `E(u~_p) = 2 pi p (1 + rho^p)/(1 - rho^p)`.
pub fn radial_energy(p: i32, rho: f64, kind: Kind) -> Result<f64> {
    RadialSolution::new(p, rho, kind).map(|s| s.energy())
}

/// `g_p(rho) = (p - 1) rho^p + p rho^(p-1) - 1`. Negative exactly when
/// `E(u_p) > E(u_1) + 2 pi (p - 1)`.
pub fn g_p(p: i32, rho: f64) -> f64 {
    let pf = p as f64;
    (pf - 1.0) * rho.powi(p) + pf * rho.powi(p - 1) - 1.0
}

/// Root `rho'_p` of `g_p` in `(0, 1)`, by bisection to `1e-12`.
pub fn threshold_rho_prime(p: i32) -> Result<f64> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!("threshold needs p >= 2, got {p}")));
    }
    let (mut lo, mut hi) = (1e-9, 1.0 - 1e-9);
    debug_assert!(g_p(p, lo) < 0.0 && g_p(p, hi) > 0.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if g_p(p, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// CSV `p,rho_prime` for `p = 2..=p_max`.
pub fn threshold_table(p_max: i32) -> Result<String> {
    let mut out = String::from("p,rho_prime\n");
    for p in 2..=p_max {
        out.push_str(&format!("{p},{:.12}\n", threshold_rho_prime(p)?));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Minimality {
    /// `rho < rho'_p`: some map in the same degree class has lower energy.
    NonMinimizing,
    /// The energy comparison says nothing; the uniqueness threshold is unknown.
    Inconclusive,
}

pub fn minimality_test(p: i32, rho: f64) -> Result<Minimality> {
    check_rho(rho)?;
    if p < 2 {
        return Err(Error::InvalidParameter(format!("minimality test needs p >= 2, got {p}")));
    }
    Ok(if g_p(p, rho) < 0.0 {
        Minimality::NonMinimizing
    } else {
        Minimality::Inconclusive
    })
}

/// `sup |u ^ du/dnu|` over both boundary circles for the harmonic
/// extension of `e^{i p theta}` (outer) and `alpha e^{i q theta}` (inner).
/// Vanishes exactly when `q = p` and `alpha = +-1`.
pub fn steklov_compatibility(p: i32, q: i32, alpha: C64, rho: f64, grid: &AnnulusGrid) -> Result<f64> {
    check_rho(rho)?;
    let n = grid.n_theta();
    let outer = BoundaryTrace::sample(n, 1.0, |t| C64::from_polar(1.0, p as f64 * t));
    let inner = BoundaryTrace::sample(n, rho, |t| alpha * C64::from_polar(1.0, q as f64 * t));
    let field = harmonic_extension(&inner, &outer, rho, n / 2 - 1)?;
    let mut sup: f64 = 0.0;
    for t in grid.thetas() {
        for (r, normal) in [(1.0, 1.0), (rho, -1.0)] {
            let j = field.eval(r, t)?;
            sup = sup.max(wedge(j.value, normal * j.dr).abs());
        }
    }
    Ok(sup)
}

/// `sup_theta |du/dr|` on the circle `r = sqrt(rho)`, where the catenoidal
/// family has a horizontal tangent plane.
pub fn half_annulus_reduction_check(sol: &RadialSolution, grid: &AnnulusGrid) -> Result<f64> {
    let f = sol.field();
    let r = sol.rho.sqrt();
    let mut sup: f64 = 0.0;
    for t in grid.thetas() {
        sup = sup.max(f.eval(r, t)?.dr.norm());
    }
    Ok(sup)
}

/// `E(u_p) - E(u_1) - 2 pi (p - 1)`; positive below the threshold.
pub fn comparison_gap(p: i32, rho: f64) -> Result<f64> {
    Ok(radial_energy(p, rho, Kind::Catenoidal)?
        - radial_energy(1, rho, Kind::Catenoidal)?
        - 2.0 * PI * (p - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annulus::{dirichlet_energy, hopf_constant_check};
    use proptest::prelude::*;

    #[test]
    fn energies() {
        assert!((radial_energy(1, 0.5, Kind::Catenoidal).unwrap() - TAU / 3.0).abs() < 1e-15);
        assert!((radial_energy(1, 1e-12, Kind::Helicoidal).unwrap() - TAU).abs() < 1e-10);
        let e = radial_energy(3, 0.4, Kind::Catenoidal).unwrap();
        let g = AnnulusGrid::new(0.4, 401, 32).unwrap();
        let sampled = dirichlet_energy(&RadialSolution::new(3, 0.4, Kind::Catenoidal).unwrap().field(), &g);
        assert!((e - sampled).abs() < 1e-8 * e);
        assert!((e - 16.582).abs() < 1e-3);
        assert!(radial_energy(0, 0.4, Kind::Catenoidal).is_err());
    }

    #[test]
    fn thresholds() {
        let r2 = threshold_rho_prime(2).unwrap();
        assert!((r2 - (2f64.sqrt() - 1.0)).abs() < 1e-11);
        assert_eq!(g_p(2, 0.0), -1.0);
        let r3 = threshold_rho_prime(3).unwrap();
        assert!(g_p(3, r3).abs() < 1e-10);
        assert!(r2 < r3 && r3 < 1.0);
        assert!(threshold_rho_prime(1).is_err());
    }

    #[test]
    fn minimality() {
        assert_eq!(minimality_test(2, 0.3).unwrap(), Minimality::NonMinimizing);
        assert_eq!(minimality_test(2, 0.9).unwrap(), Minimality::Inconclusive);
        let r5 = threshold_rho_prime(5).unwrap();
        let want = if 0.5 < r5 { Minimality::NonMinimizing } else { Minimality::Inconclusive };
        assert_eq!(minimality_test(5, 0.5).unwrap(), want);
    }

    #[test]
    fn hopf_constants_match_quadrature() {
        let g = AnnulusGrid::new(0.5, 21, 32).unwrap();
        for kind in [Kind::Catenoidal, Kind::Helicoidal] {
            let s = RadialSolution::new(2, 0.5, kind).unwrap();
            let h = hopf_constant_check(&s.field(), &g);
            assert!((h.c_estimate - s.hopf_constant()).abs() < 1e-12);
        }
        assert!((hopf_constant(2, 0.5, Kind::Catenoidal) + 0.64).abs() < 1e-15);
    }

    #[test]
    fn steklov_classification() {
        let g = AnnulusGrid::new(0.5, 11, 64).unwrap();
        let one = C64::new(1.0, 0.0);
        assert!(steklov_compatibility(2, 2, one, 0.5, &g).unwrap() < 1e-12);
        assert!(steklov_compatibility(2, 2, -one, 0.5, &g).unwrap() < 1e-12);
        assert!(steklov_compatibility(2, 1, one, 0.5, &g).unwrap() > 1e-2);
    }

    #[test]
    fn geometric_mean_circle() {
        let g = AnnulusGrid::new(0.5, 11, 64).unwrap();
        let u2 = RadialSolution::new(2, 0.5, Kind::Catenoidal).unwrap();
        let ut2 = RadialSolution::new(2, 0.5, Kind::Helicoidal).unwrap();
        assert!(half_annulus_reduction_check(&u2, &g).unwrap() < 1e-14);
        assert!(half_annulus_reduction_check(&ut2, &g).unwrap() > 1.0);
        for rho in [0.1, 0.5, 0.9] {
            let u1 = RadialSolution::new(1, rho, Kind::Catenoidal).unwrap();
            assert!(half_annulus_reduction_check(&u1, &g).unwrap() < 1e-14);
        }
    }

    #[test]
    fn unit_modulus_on_both_circles() {
        let s = RadialSolution::with_alpha(-3, 0.3, Kind::Helicoidal, C64::from_polar(1.0, 0.7)).unwrap();
        let f = s.field();
        for k in 0..20 {
            let t = k as f64 * 0.31;
            assert!((f.eval(1.0, t).unwrap().value.norm() - 1.0).abs() < 1e-14);
            assert!((f.eval(0.3, t).unwrap().value.norm() - 1.0).abs() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn helicoidal_energy_exceeds_catenoidal(p in 1i32..12, rho in 0.01f64..0.99) {
            // Below this the two energies agree to rounding.
            prop_assume!(rho.powi(p) > 1e-14);
            prop_assert!(radial_energy(p, rho, Kind::Helicoidal).unwrap()
                > radial_energy(p, rho, Kind::Catenoidal).unwrap());
        }

        #[test]
        fn g_p_is_increasing(p in 2i32..10, a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assume!(hi - lo > 1e-9);
            prop_assert!(g_p(p, lo) < g_p(p, hi));
        }

        #[test]
        fn comparison_flips_at_threshold(p in 2i32..9, frac in 0.02f64..0.98) {
            let t = threshold_rho_prime(p).unwrap();
            let below = t * frac;
            let above = t + (1.0 - t) * frac;
            prop_assert!(comparison_gap(p, below).unwrap() > 0.0);
            prop_assert!(comparison_gap(p, above).unwrap() < 0.0);
        }
    }
}
