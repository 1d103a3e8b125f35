//! Complex fields on the annulus and their first derivatives in polar
//! coordinates.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::grid::check_rho;
use crate::error::{Error, Result};

/// Value and polar first derivatives `(u, du/dr, du/dtheta)` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: C64,
    pub dr: C64,
    pub dtheta: C64,
}

/// Anything that can be evaluated at polar coordinates `(r, theta)`.
///
/// Samplers that know their derivatives in closed form override
/// [`FieldSampler::analytic_jet`]; everything else is differentiated with
/// fourth-order central differences, so a sampler must stay finite a few
/// steps outside the annulus.
pub trait FieldSampler: Sync {
    fn value(&self, r: f64, theta: f64) -> C64;

    fn analytic_jet(&self, _r: f64, _theta: f64) -> Option<Jet> {
        None
    }
}

impl<T: FieldSampler + ?Sized> FieldSampler for &T {
    fn value(&self, r: f64, theta: f64) -> C64 {
        (**self).value(r, theta)
    }
    fn analytic_jet(&self, r: f64, theta: f64) -> Option<Jet> {
        (**self).analytic_jet(r, theta)
    }
}

impl<T: FieldSampler + ?Sized> FieldSampler for Box<T> {
    fn value(&self, r: f64, theta: f64) -> C64 {
        (**self).value(r, theta)
    }
    fn analytic_jet(&self, r: f64, theta: f64) -> Option<Jet> {
        (**self).analytic_jet(r, theta)
    }
}

/// Adapter turning a closure `(r, theta) -> u` into a [`FieldSampler`].
pub struct PolarFn<F>(pub F);

impl<F: Fn(f64, f64) -> C64 + Sync> FieldSampler for PolarFn<F> {
    fn value(&self, r: f64, theta: f64) -> C64 {
        (self.0)(r, theta)
    }
}

/// Adapter for a holomorphic `z -> u(z)` with its complex derivative `u'(z)`.
pub struct Holomorphic<F, D>(pub F, pub D);

impl<F, D> FieldSampler for Holomorphic<F, D>
where
    F: Fn(C64) -> C64 + Sync,
    D: Fn(C64) -> C64 + Sync,
{
    fn value(&self, r: f64, theta: f64) -> C64 {
        (self.0)(C64::from_polar(r, theta))
    }

    fn analytic_jet(&self, r: f64, theta: f64) -> Option<Jet> {
        let e = C64::from_polar(1.0, theta);
        let z = r * e;
        let d = (self.1)(z);
        Some(Jet {
            value: (self.0)(z),
            dr: d * e,
            dtheta: C64::i() * z * d,
        })
    }
}

/// Jet of `f` at `(r, theta)`: analytic when available, otherwise
/// fourth-order central differences with steps `h_r`, `h_theta`.
pub fn jet<F: FieldSampler + ?Sized>(f: &F, r: f64, theta: f64, h_r: f64, h_theta: f64) -> Jet {
    if let Some(j) = f.analytic_jet(r, theta) {
        return j;
    }
    let d4 = |g: &dyn Fn(f64) -> C64, h: f64| {
        (-g(2.0 * h) + 8.0 * g(h) - 8.0 * g(-h) + g(-2.0 * h)) / (12.0 * h)
    };
    Jet {
        value: f.value(r, theta),
        dr: d4(&|s| f.value(r + s, theta), h_r),
        dtheta: d4(&|s| f.value(r, theta + s), h_theta),
    }
}

/// One angular mode `(A_n r^|n| + B_n r^-|n|) e^{i n theta}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub n: i32,
    pub a: C64,
    pub b: C64,
}

/// Harmonic map on `A_rho` in separated form
/// `u = A_0 + B_0 ln r + sum_n (A_n r^|n| + B_n r^-|n|) e^{i n theta}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicField {
    pub rho: f64,
    pub a0: C64,
    pub b0: C64,
    pub modes: Vec<Mode>,
}

impl HarmonicField {
    pub fn constant(value: C64, rho: f64) -> Result<Self> {
        check_rho(rho)?;
        Ok(Self {
            rho,
            a0: value,
            b0: C64::new(0.0, 0.0),
            modes: Vec::new(),
        })
    }

    /// Evaluates the series with its term-wise derivatives.
    pub fn eval(&self, r: f64, theta: f64) -> Result<Jet> {
        let slack = 1e-12;
        if !(r >= self.rho * (1.0 - slack) && r <= 1.0 + slack) {
            return Err(Error::OutOfDomain { r, rho: self.rho });
        }
        Ok(self.eval_unchecked(r, theta))
    }

    fn eval_unchecked(&self, r: f64, theta: f64) -> Jet {
        let mut value = self.a0 + self.b0 * r.ln();
        let mut dr = self.b0 / r;
        let mut dtheta = C64::new(0.0, 0.0);
        for m in &self.modes {
            let k = m.n.unsigned_abs() as i32;
            let e = C64::from_polar(1.0, m.n as f64 * theta);
            let up = r.powi(k);
            let down = 1.0 / up;
            let radial = m.a * up + m.b * down;
            let radial_d = (m.a * up - m.b * down) * (k as f64 / r);
            let term = radial * e;
            value += term;
            dr += radial_d * e;
            dtheta += C64::new(0.0, m.n as f64) * term;
        }
        Jet { value, dr, dtheta }
    }

    /// Largest coefficient modulus among the nonconstant modes.
    pub fn max_mode_coefficient(&self) -> f64 {
        self.modes
            .iter()
            .map(|m| m.a.norm().max(m.b.norm()))
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&FieldJson::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: FieldJson = serde_json::from_str(s)?;
        check_rho(j.rho)?;
        Ok(Self {
            rho: j.rho,
            a0: C64::new(j.a0.re, j.a0.im),
            b0: C64::new(j.b0.re, j.b0.im),
            modes: j
                .modes
                .into_iter()
                .map(|m| Mode {
                    n: m.n,
                    a: C64::new(m.a_re, m.a_im),
                    b: C64::new(m.b_re, m.b_im),
                })
                .collect(),
        })
    }
}

impl FieldSampler for HarmonicField {
    fn value(&self, r: f64, theta: f64) -> C64 {
        self.eval_unchecked(r, theta).value
    }

    fn analytic_jet(&self, r: f64, theta: f64) -> Option<Jet> {
        Some(self.eval_unchecked(r, theta))
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct ModeJson {
    n: i32,
    #[serde(rename = "ARe")]
    a_re: f64,
    #[serde(rename = "AIm")]
    a_im: f64,
    #[serde(rename = "BRe")]
    b_re: f64,
    #[serde(rename = "BIm")]
    b_im: f64,
}

#[derive(Serialize, Deserialize)]
struct FieldJson {
    rho: f64,
    a0: ComplexJson,
    b0: ComplexJson,
    modes: Vec<ModeJson>,
}

impl From<&HarmonicField> for FieldJson {
    fn from(f: &HarmonicField) -> Self {
        Self {
            rho: f.rho,
            a0: ComplexJson { re: f.a0.re, im: f.a0.im },
            b0: ComplexJson { re: f.b0.re, im: f.b0.im },
            modes: f
                .modes
                .iter()
                .map(|m| ModeJson {
                    n: m.n,
                    a_re: m.a.re,
                    a_im: m.a.im,
                    b_re: m.b.re,
                    b_im: m.b.im,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn u_p(p: i32, rho: f64) -> HarmonicField {
        let rp = rho.powi(p);
        HarmonicField {
            rho,
            a0: C64::new(0.0, 0.0),
            b0: C64::new(0.0, 0.0),
            modes: vec![Mode {
                n: p,
                a: C64::new(1.0 / (1.0 + rp), 0.0),
                b: C64::new(rp / (1.0 + rp), 0.0),
            }],
        }
    }

    #[test]
    fn unit_modulus_on_outer_circle() {
        let f = u_p(1, 0.5);
        for k in 0..32 {
            let j = f.eval(1.0, k as f64 * PI / 16.0).unwrap();
            assert!((j.value.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_field() {
        let f = HarmonicField::constant(C64::new(1.0, 0.0), 0.4).unwrap();
        let j = f.eval(0.7, 1.3).unwrap();
        assert_eq!(j.value, C64::new(1.0, 0.0));
        assert_eq!(j.dr, C64::new(0.0, 0.0));
    }

    #[test]
    fn radial_derivative_vanishes_at_geometric_mean() {
        let rho: f64 = 0.5;
        let f = u_p(2, rho);
        for k in 0..16 {
            let j = f.eval(rho.sqrt(), k as f64 * 0.4).unwrap();
            assert!(j.dr.norm() < 1e-15, "{}", j.dr.norm());
        }
    }

    #[test]
    fn rejects_points_outside() {
        let f = u_p(1, 0.5);
        assert!(matches!(f.eval(0.4, 0.0), Err(Error::OutOfDomain { .. })));
        assert!(f.eval(1.1, 0.0).is_err());
    }

    #[test]
    fn finite_difference_jet_matches_analytic() {
        let f = u_p(3, 0.3);
        let g = PolarFn(|r: f64, t: f64| f.value(r, t));
        let a = jet(&f, 0.6, 0.9, 1e-3, 1e-3);
        let b = jet(&g, 0.6, 0.9, 1e-3, 1e-3);
        assert!((a.dr - b.dr).norm() < 1e-9);
        assert!((a.dtheta - b.dtheta).norm() < 1e-9);
    }

    #[test]
    fn json_schema_keys() {
        let f = u_p(2, 0.5);
        let s = f.to_json().unwrap();
        for key in ["\"rho\"", "\"a0\"", "\"b0\"", "\"modes\"", "\"ARe\"", "\"BIm\""] {
            assert!(s.contains(key), "{key} missing in {s}");
        }
        assert_eq!(HarmonicField::from_json(&s).unwrap(), f);
    }
}
