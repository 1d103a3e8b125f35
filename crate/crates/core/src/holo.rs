//! Explicit holomorphic minimizers in the degree class `(p, q)`, `p > 0 > q`:
//!
//! `u(z) = z^q prod_i |x_i| f_{x_i}(z)` with
//! `f_x(z) = (1 - z/x)/(1 - z conj(x)) prod_{k>=1} (1 - rho^2k z/x)(1 - rho^2k x/z) / ((1 - rho^2k/(z conj x))(1 - rho^2k z conj x))`,
//! where the `p - q` zeros `x_i` satisfy `sum ln|x_i| / ln rho = -q`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::annulus::{
    check_rho, degree_difference_integral, dirichlet_energy, hopf_constant_check,
    winding_degree_adaptive, AnnulusGrid, FieldSampler, Jet,
};
use crate::error::{Error, Result};

/// Product of many complex factors kept as `exp(log_mod) * unit` so that
/// long products neither underflow nor overflow.
#[derive(Clone, Copy)]
struct LogProduct {
    log_mod: f64,
    unit: C64,
}

impl LogProduct {
    fn one() -> Self {
        Self {
            log_mod: 0.0,
            unit: C64::new(1.0, 0.0),
        }
    }

    fn mul(&mut self, w: C64) {
        let m = w.norm();
        if m == 0.0 {
            self.log_mod = f64::NEG_INFINITY;
            return;
        }
        self.log_mod += m.ln();
        self.unit *= w / m;
    }

    fn value(&self) -> C64 {
        self.unit * self.log_mod.exp()
    }
}

/// `p - q` prescribed zeros in `A_rho` satisfying the log-modulus
/// constraint `sum ln|x_i| / ln rho = -q`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    rho: f64,
    p: i32,
    q: i32,
    zeros: Vec<C64>,
    constraint_residual: f64,
}

impl ZeroSet {
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn p(&self) -> i32 {
        self.p
    }
    pub fn q(&self) -> i32 {
        self.q
    }
    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }
    /// `|sum ln|x_i| / ln rho + q|`.
    pub fn constraint_residual(&self) -> f64 {
        self.constraint_residual
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ZeroSetJson {
            rho: self.rho,
            p: self.p,
            q: self.q,
            zeros: self.zeros.iter().map(|z| Point { re: z.re, im: z.im }).collect(),
        })?)
    }

    /// Parses and re-projects, so the loaded set satisfies the constraint.
    pub fn from_json(s: &str) -> Result<Self> {
        let j: ZeroSetJson = serde_json::from_str(s)?;
        let seeds: Vec<C64> = j.zeros.iter().map(|z| C64::new(z.re, z.im)).collect();
        make_zero_set(j.p, j.q, j.rho, &seeds)
    }
}

#[derive(Serialize, Deserialize)]
struct Point {
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct ZeroSetJson {
    rho: f64,
    p: i32,
    q: i32,
    zeros: Vec<Point>,
}

fn residual(zeros: &[C64], rho: f64, q: i32) -> f64 {
    let l = rho.ln();
    (zeros.iter().map(|x| x.norm().ln() / l).sum::<f64>() + q as f64).abs()
}

/// Builds a [`ZeroSet`] from `p - q` seeds by rescaling every modulus
/// `|x| -> |x|^s` with one common exponent so that the constraint holds;
/// arguments are kept. Empty `seeds` places the zeros equally spaced in
/// angle at modulus `rho^(|q|/(p-q))`.
pub fn make_zero_set(p: i32, q: i32, rho: f64, seeds: &[C64]) -> Result<ZeroSet> {
    check_rho(rho)?;
    if !(p > 0 && q < 0) {
        return Err(Error::InvalidParameter(format!(
            "holomorphic minimizers need p > 0 > q, got ({p}, {q})"
        )));
    }
    let count = (p - q) as usize;
    let zeros = if seeds.is_empty() {
        let modulus = rho.powf(-q as f64 / count as f64);
        (0..count)
            .map(|k| C64::from_polar(modulus, TAU * k as f64 / count as f64))
            .collect::<Vec<_>>()
    } else {
        if seeds.len() != count {
            return Err(Error::InvalidParameter(format!(
                "expected {count} seeds, got {}",
                seeds.len()
            )));
        }
        let l = rho.ln();
        let mut fractions = Vec::with_capacity(count);
        for (index, x) in seeds.iter().enumerate() {
            let m = x.norm();
            if !(m > rho && m < 1.0) {
                return Err(Error::InfeasibleZero { index, modulus: m });
            }
            fractions.push(m.ln() / l);
        }
        // sum s * fraction_i = -q is linear in s.
        let s = -q as f64 / fractions.iter().sum::<f64>();
        let mut out = Vec::with_capacity(count);
        for (index, (x, f)) in seeds.iter().zip(&fractions).enumerate() {
            let scaled = s * f;
            let modulus = rho.powf(scaled);
            if !(scaled > 0.0 && scaled < 1.0) {
                return Err(Error::InfeasibleZero { index, modulus });
            }
            out.push(C64::from_polar(modulus, x.arg()));
        }
        out
    };
    let constraint_residual = residual(&zeros, rho, q);
    Ok(ZeroSet {
        rho,
        p,
        q,
        zeros,
        constraint_residual,
    })
}

/// Number of product terms so the neglected tail is below `eps`:
/// `ceil(ln(eps (1 - rho^2)) / (2 ln rho)) + 5`.
pub fn truncation_order(rho: f64, eps: f64) -> usize {
    let k = ((eps * (1.0 - rho * rho)).ln() / (2.0 * rho.ln())).ceil();
    k.max(0.0) as usize + 5
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("eps = {eps} not in (0, 1)")))
    }
}

/// Poles of `f_x` up to product order `k_max`.
fn poles(x: C64, rho: f64, k_max: usize) -> impl Iterator<Item = C64> {
    let xb = x.conj();
    (0..=k_max).flat_map(move |k| {
        let r2k = rho.powi(2 * k as i32);
        let inner = std::iter::once(r2k / xb);
        let outer = (k > 0).then(|| 1.0 / (r2k * xb));
        inner.chain(outer)
    })
}

fn factor_terms(x: C64, z: C64, rho: f64, k_max: usize, acc: &mut LogProduct) {
    let xb = x.conj();
    acc.mul((1.0 - z / x) / (1.0 - z * xb));
    let mut r2k = 1.0;
    for _ in 1..=k_max {
        r2k *= rho * rho;
        acc.mul((1.0 - r2k * z / x) * (1.0 - r2k * x / z) / ((1.0 - r2k / (z * xb)) * (1.0 - r2k * z * xb)));
    }
}

/// Logarithmic derivative of `f_x` at `z`.
fn factor_log_derivative(x: C64, z: C64, rho: f64, k_max: usize) -> C64 {
    let xb = x.conj();
    // d/dz ln(1 - z/a) = 1/(z - a);  d/dz ln(1 - b/z) = b / (z (z - b)).
    let lin = |a: C64| 1.0 / (z - a);
    let inv = |b: C64| b / (z * (z - b));
    let mut s = lin(x) - lin(1.0 / xb);
    let mut r2k = 1.0;
    for _ in 1..=k_max {
        r2k *= rho * rho;
        s += lin(x / r2k) + inv(r2k * x) - inv(r2k / xb) - lin(1.0 / (r2k * xb));
    }
    s
}

/// Truncated `f_x(z)` with the tail below `eps`.
pub fn f_factor(x: C64, z: C64, rho: f64, eps: f64) -> Result<C64> {
    check_rho(rho)?;
    check_eps(eps)?;
    if !(x.norm() > rho && x.norm() < 1.0) {
        return Err(Error::InvalidParameter(format!("|x| = {} not in (rho, 1)", x.norm())));
    }
    let k = truncation_order(rho, eps);
    for pole in poles(x, rho, k) {
        let d = (z - pole).norm();
        if d < eps {
            return Err(Error::NearPole { distance: d });
        }
    }
    if z.norm() == 0.0 {
        return Err(Error::NearPole { distance: 0.0 });
    }
    let mut acc = LogProduct::one();
    factor_terms(x, z, rho, k, &mut acc);
    Ok(acc.value())
}

/// Evaluator for `u(z) = z^q prod |x_i| f_{x_i}(z)`.
#[derive(Debug, Clone)]
pub struct ProductSolution {
    zero_set: ZeroSet,
    truncation_order: usize,
    eps: f64,
}

pub fn build_solution(zs: ZeroSet, eps: f64) -> Result<ProductSolution> {
    check_eps(eps)?;
    let k = truncation_order(zs.rho, eps);
    Ok(ProductSolution {
        zero_set: zs,
        truncation_order: k,
        eps,
    })
}

/// Products of more factors than this are accumulated in log space.
const LOG_SPACE_FACTORS: usize = 8;

impl ProductSolution {
    pub fn zero_set(&self) -> &ZeroSet {
        &self.zero_set
    }

    pub fn truncation_order(&self) -> usize {
        self.truncation_order
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Same zeros, explicit truncation order (for convergence studies).
    pub fn with_truncation_order(&self, k: usize) -> Self {
        Self {
            truncation_order: k,
            ..self.clone()
        }
    }

    pub fn eval(&self, z: C64) -> C64 {
        let zs = &self.zero_set;
        let k = self.truncation_order;
        if zs.zeros.len() > LOG_SPACE_FACTORS {
            let mut acc = LogProduct::one();
            acc.mul(z.powi(zs.q));
            for x in &zs.zeros {
                acc.mul(C64::new(x.norm(), 0.0));
                factor_terms(*x, z, zs.rho, k, &mut acc);
            }
            acc.value()
        } else {
            let mut v = z.powi(zs.q);
            for x in &zs.zeros {
                let mut acc = LogProduct::one();
                factor_terms(*x, z, zs.rho, k, &mut acc);
                v *= x.norm() * acc.value();
            }
            v
        }
    }

    /// Complex derivative `u'(z)`.
    pub fn derivative(&self, z: C64) -> C64 {
        let zs = &self.zero_set;
        let near_zero = zs.zeros.iter().any(|x| (z - x).norm() < 1e-6);
        if near_zero {
            let h = 1e-4;
            let mut d = C64::new(0.0, 0.0);
            for (w, s) in [(-1.0, 2.0), (8.0, 1.0), (-8.0, -1.0), (1.0, -2.0)] {
                d += w * self.eval(z + s * h);
            }
            return d / (12.0 * h);
        }
        let mut log_d = zs.q as f64 / z;
        for x in &zs.zeros {
            log_d += factor_log_derivative(*x, z, zs.rho, self.truncation_order);
        }
        self.eval(z) * log_d
    }

    /// `max ||u| - 1|` over `n` samples of both boundary circles.
    pub fn boundary_modulus_deviation(&self, n: usize) -> f64 {
        let rho = self.zero_set.rho;
        (0..n)
            .flat_map(|j| {
                let t = TAU * j as f64 / n as f64;
                [C64::from_polar(1.0, t), C64::from_polar(rho, t)]
            })
            .map(|z| (self.eval(z).norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

impl FieldSampler for ProductSolution {
    fn value(&self, r: f64, theta: f64) -> C64 {
        self.eval(C64::from_polar(r, theta))
    }

    fn analytic_jet(&self, r: f64, theta: f64) -> Option<Jet> {
        let e = C64::from_polar(1.0, theta);
        let z = r * e;
        let d = self.derivative(z);
        Some(Jet {
            value: self.eval(z),
            dr: d * e,
            dtheta: C64::i() * z * d,
        })
    }
}

/// Number of zeros of `u` in `r_inner < |z| < r_outer`, as the difference
/// of the winding numbers on the two circles. A zero on a contour moves
/// the contour slightly inward and retries, up to three times.
pub fn argument_principle_count<F: FieldSampler + ?Sized>(
    u: &F,
    r_inner: f64,
    r_outer: f64,
    n_samples: usize,
) -> Result<i64> {
    if !(r_inner > 0.0 && r_inner < r_outer) {
        return Err(Error::InvalidParameter(format!(
            "contour radii {r_inner}, {r_outer} out of order"
        )));
    }
    let wind = |r: f64| winding_degree_adaptive(|t| u.value(r, t), n_samples);
    let nudge = 1e-3 * (r_outer - r_inner);
    let mut last = None;
    for attempt in 0..4 {
        let shift = attempt as f64 * nudge;
        match (wind(r_outer - shift), wind(r_inner + shift)) {
            (Ok(a), Ok(b)) => return Ok(a - b),
            (Err(e), _) | (_, Err(e)) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// One named check of a [`ValidationReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// CSV with columns `check,value,expected,tolerance,pass`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["check", "value", "expected", "tolerance", "pass"])?;
        for c in &self.checks {
            w.write_record(&[
                c.name.to_string(),
                format!("{:.12e}", c.value),
                format!("{:.12e}", c.expected),
                format!("{:.3e}", c.tolerance),
                if c.pass { "pass" } else { "fail" }.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Tolerances used by [`validate_solution`].
pub const MODULUS_TOL: f64 = 1e-8;
pub const ENERGY_REL_TOL: f64 = 1e-4;
pub const HOPF_TOL: f64 = 1e-6;

/// Validates any sampled map against the properties of a minimizer in the
/// class `(p, q)`: unimodular boundary values, boundary degrees, zero count,
/// energy `pi (p + |q|)`, vanishing Hopf differential, and the Jacobian
/// integral `pi (p - q)`.
pub fn validate_field<F: FieldSampler + ?Sized>(
    u: &F,
    p: i32,
    q: i32,
    grid: &AnnulusGrid,
) -> ValidationReport {
    let rho = grid.rho();
    let n = grid.n_theta();
    let thetas = grid.thetas();
    let modulus_dev = thetas
        .iter()
        .flat_map(|&t| [u.value(1.0, t), u.value(rho, t)])
        .map(|v| (v.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    let degree = |r: f64| -> f64 {
        winding_degree_adaptive(|t| u.value(r, t), n).map_or(f64::NAN, |d| d as f64)
    };
    let count = argument_principle_count(u, rho, 1.0, n).map_or(f64::NAN, |c| c as f64);
    let energy = dirichlet_energy(u, grid);
    let target = PI * (p + q.abs()) as f64;
    let hopf = hopf_constant_check(u, grid);
    let jac = degree_difference_integral(u, grid);
    let exact = |name, value: f64, expected: f64| Check {
        name,
        value,
        expected,
        tolerance: 0.0,
        pass: value == expected,
    };
    let within = |name, value: f64, expected: f64, tolerance: f64| Check {
        name,
        value,
        expected,
        tolerance,
        pass: (value - expected).abs() <= tolerance,
    };
    ValidationReport {
        checks: vec![
            within("boundary_modulus_deviation", modulus_dev, 0.0, MODULUS_TOL),
            exact("degree_outer", degree(1.0), p as f64),
            exact("degree_inner", degree(rho), q as f64),
            exact("zero_count", count, (p - q) as f64),
            within("energy", energy, target, ENERGY_REL_TOL * target),
            within("hopf_c", hopf.c_estimate, 0.0, HOPF_TOL),
            within("hopf_imag", hopf.max_imag_part, 0.0, HOPF_TOL),
            within("jacobian_integral", jac, PI * (p - q) as f64, ENERGY_REL_TOL * target),
        ],
    }
}

pub fn validate_solution(u: &ProductSolution, grid: &AnnulusGrid) -> ValidationReport {
    validate_field(u, u.zero_set.p, u.zero_set.q, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annulus::{Holomorphic, HarmonicField};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn feasible_seeds_are_kept() {
        let rho: f64 = 0.5;
        let seeds = [C64::from_polar(rho.sqrt(), 0.3), C64::from_polar(rho.sqrt(), 2.0)];
        let zs = make_zero_set(1, -1, rho, &seeds).unwrap();
        for (a, b) in zs.zeros().iter().zip(&seeds) {
            assert!((a - b).norm() < 1e-15);
        }
        let m = 0.3f64.powf(1.0 / 3.0);
        let seeds: Vec<_> = (0..3).map(|k| C64::from_polar(m, k as f64)).collect();
        let zs = make_zero_set(2, -1, 0.3, &seeds).unwrap();
        assert!(zs.constraint_residual() < 1e-14);
    }

    #[test]
    fn random_seeds_are_projected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho: f64 = 0.5;
        for _ in 0..20 {
            let seeds: Vec<_> = (0..4)
                .map(|_| C64::from_polar(rho.powf(rng.gen_range(0.3..0.7)), rng.gen_range(0.0..TAU)))
                .collect();
            let zs = make_zero_set(2, -2, rho, &seeds).unwrap();
            let direct: f64 = zs.zeros().iter().map(|x| x.norm().ln() / rho.ln()).sum();
            assert!((direct - 2.0).abs() < 1e-14);
            for (a, b) in zs.zeros().iter().zip(&seeds) {
                assert!((a.arg() - b.arg()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn infeasible_seeds_name_the_offender() {
        let rho: f64 = 0.5;
        let seeds = [
            C64::from_polar(rho.powf(0.9), 0.0),
            C64::from_polar(rho.powf(0.1), 1.0),
            C64::from_polar(rho.powf(0.1), 2.0),
            C64::from_polar(rho.powf(0.1), 3.0),
        ];
        let e = make_zero_set(2, -2, rho, &seeds);
        assert!(matches!(e, Err(Error::InfeasibleZero { index: 0, .. })), "{e:?}");
        let outside = [C64::new(0.2, 0.0), C64::new(0.7, 0.0)];
        assert!(matches!(
            make_zero_set(1, -1, rho, &outside),
            Err(Error::InfeasibleZero { index: 0, .. })
        ));
    }

    #[test]
    fn sign_conditions_are_enforced() {
        assert!(make_zero_set(1, 0, 0.5, &[]).is_err());
        assert!(make_zero_set(0, -1, 0.5, &[]).is_err());
        assert!(make_zero_set(2, 1, 0.5, &[]).is_err());
    }

    #[test]
    fn factor_identities() {
        let rho = 0.4;
        let eps = 1e-14;
        let x = C64::from_polar(0.6, 0.8);
        assert!(f_factor(x, x, rho, eps).unwrap().norm() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let z = C64::from_polar(1.0, rng.gen_range(0.0..TAU));
            let v = f_factor(x, z, rho, eps).unwrap() * f_factor(x.conj(), 1.0 / z, rho, eps).unwrap();
            assert!((v * x.norm_sqr() - 1.0).norm() < 1e-12);
            let z = C64::from_polar(rho, rng.gen_range(0.0..TAU));
            let v = f_factor(x, z, rho, eps).unwrap() * f_factor(x.conj(), rho * rho / z, rho, eps).unwrap();
            assert!((v - 1.0).norm() < 1e-12);
            let z = C64::from_polar(rng.gen_range(rho..1.0), rng.gen_range(0.0..TAU));
            let a = f_factor(x, z, rho, eps).unwrap().conj();
            let b = f_factor(x.conj(), z.conj(), rho, eps).unwrap();
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn pole_is_rejected() {
        let rho = 0.4;
        let x = C64::from_polar(0.6, 0.8);
        let pole = rho * rho / x.conj();
        assert!(matches!(f_factor(x, pole, rho, 1e-10), Err(Error::NearPole { .. })));
    }

    #[test]
    fn solution_is_unimodular_on_the_boundary() {
        let zs = make_zero_set(2, -1, 0.3, &[]).unwrap();
        let u = build_solution(zs.clone(), 1e-13).unwrap();
        assert!(u.boundary_modulus_deviation(128) < 1e-12);
        for x in zs.zeros() {
            assert!(u.eval(*x).norm() < 1e-14);
        }
    }

    #[test]
    fn boundary_error_decays_with_truncation_order() {
        let rho: f64 = 0.6;
        let zs = make_zero_set(1, -1, rho, &[]).unwrap();
        let u = build_solution(zs, 1e-14).unwrap();
        let errs: Vec<f64> = (1..6).map(|k| u.with_truncation_order(k).boundary_modulus_deviation(64)).collect();
        for w in errs.windows(2) {
            let ratio = w[1] / w[0];
            assert!(ratio < 1.5 * rho * rho && ratio > 0.5 * rho * rho * rho * rho, "{errs:?}");
        }
    }

    #[test]
    fn log_space_agrees_with_direct_product() {
        let zs = make_zero_set(6, -4, 0.5, &[]).unwrap();
        let u = build_solution(zs.clone(), 1e-13).unwrap();
        let z = C64::from_polar(0.8, 0.3);
        let mut direct = z.powi(-4);
        for x in zs.zeros() {
            direct *= x.norm() * f_factor(*x, z, 0.5, 1e-13).unwrap();
        }
        assert!((u.eval(z) - direct).norm() < 1e-12 * direct.norm().max(1.0));
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let u = build_solution(make_zero_set(2, -1, 0.4, &[]).unwrap(), 1e-14).unwrap();
        let z = C64::from_polar(0.7, 1.1);
        let h = 1e-5;
        let fd = (u.eval(z + h) - u.eval(z - h)) / (2.0 * h);
        assert!((u.derivative(z) - fd).norm() < 1e-8);
    }

    #[test]
    fn zero_counts() {
        let x0 = C64::new(0.3, 0.2);
        let f = Holomorphic(move |z: C64| z - x0, |_z: C64| C64::new(1.0, 0.0));
        assert_eq!(argument_principle_count(&f, 0.1, 1.0, 64).unwrap(), 1);
        for (p, q) in [(1, -1), (3, -2)] {
            let u = build_solution(make_zero_set(p, q, 0.5, &[]).unwrap(), 1e-13).unwrap();
            assert_eq!(argument_principle_count(&u, 0.5, 1.0, 64).unwrap(), (p - q) as i64);
        }
    }

    #[test]
    fn validation_of_a_minimizer() {
        let rho: f64 = 0.5;
        let s = rho.sqrt();
        let zs = make_zero_set(1, -1, rho, &[C64::new(s, 0.0), C64::new(-s, 0.0)]).unwrap();
        let u = build_solution(zs, 1e-13).unwrap();
        let g = AnnulusGrid::new(rho, 201, 128).unwrap();
        let rep = validate_solution(&u, &g);
        assert!(rep.all_pass(), "{}", rep.to_csv().unwrap());
        assert!((rep.get("energy").unwrap().value - TAU).abs() < 1e-4 * TAU);
        assert!(rep.to_csv().unwrap().starts_with("check,value,expected,tolerance,pass\n"));
    }

    #[test]
    fn degrees_for_two_minus_one() {
        let u = build_solution(make_zero_set(2, -1, 0.3, &[]).unwrap(), 1e-13).unwrap();
        let g = AnnulusGrid::new(0.3, 101, 128).unwrap();
        let rep = validate_solution(&u, &g);
        assert_eq!(rep.get("degree_outer").unwrap().value, 2.0);
        assert_eq!(rep.get("degree_inner").unwrap().value, -1.0);
        assert_eq!(rep.get("zero_count").unwrap().value, 3.0);
    }

    #[test]
    fn constant_map_fails_validation() {
        let g = AnnulusGrid::new(0.5, 21, 32).unwrap();
        let c = HarmonicField::constant(C64::new(1.0, 0.0), 0.5).unwrap();
        let rep = validate_field(&c, 1, -1, &g);
        assert!(!rep.all_pass());
        assert_eq!(rep.get("energy").unwrap().value, 0.0);
        assert_eq!(rep.get("degree_outer").unwrap().value, 0.0);
        assert_eq!(rep.get("degree_inner").unwrap().value, 0.0);
    }

    #[test]
    fn zero_set_json_round_trip() {
        let zs = make_zero_set(2, -1, 0.3, &[]).unwrap();
        let s = zs.to_json().unwrap();
        assert!(s.contains("\"zeros\"") && s.contains("\"re\""));
        let back = ZeroSet::from_json(&s).unwrap();
        for (a, b) in back.zeros().iter().zip(zs.zeros()) {
            assert!((a - b).norm() < 1e-14);
        }
    }
}
