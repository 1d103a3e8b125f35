//! Jacobi spectrum of the `p`-covered catenoid
//! `X_t(r, theta) = (cosh(tpr) cos(p theta), cosh(tpr) sin(p theta), tpr)`,
//! `(r, theta) in [-1, 1] x [-pi, pi]`.
//!
//! After rescaling `r -> t r` and separating `e^{i n theta}`, the Jacobi
//! problem reduces to the radial Sturm-Liouville problem
//! `-w'' - 2p^2/cosh^2(pr) w = mu w` on `[-t, t]` with Dirichlet ends, and
//! the full eigenvalues are `lambda = mu + n^2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Root of `x tanh x = 1`, by bisection. `p t_0` equals this for every `p`.
pub fn stable_unstable_root() -> f64 {
    let (mut lo, mut hi) = (0.5f64, 2.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid.tanh() < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatenoidFamily {
    pub p: i32,
    pub t: f64,
}

impl CatenoidFamily {
    pub fn new(p: i32, t: f64) -> Result<Self> {
        if p < 1 {
            return Err(Error::InvalidParameter(format!("covering number p = {p} < 1")));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("t = {t} must be positive")));
        }
        Ok(Self { p, t })
    }

    pub fn immersion(&self, r: f64, theta: f64) -> [f64; 3] {
        let a = self.t * self.p as f64 * r;
        let phi = self.p as f64 * theta;
        [a.cosh() * phi.cos(), a.cosh() * phi.sin(), a]
    }

    /// Unit normal `(cos(p theta)/cosh, sin(p theta)/cosh, -tanh)` at `tpr`.
    pub fn normal(&self, r: f64, theta: f64) -> [f64; 3] {
        let a = self.t * self.p as f64 * r;
        let phi = self.p as f64 * theta;
        let c = a.cosh();
        [phi.cos() / c, phi.sin() / c, -a.tanh()]
    }
}

/// First (`E, F, G`) and second (`e, f, g`) fundamental forms of `X_t`
/// and its Gauss curvature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundamentalForms {
    pub first_e: f64,
    pub first_f: f64,
    pub first_g: f64,
    pub second_e: f64,
    pub second_f: f64,
    pub second_g: f64,
    pub gauss: f64,
}

impl FundamentalForms {
    /// `(eG - 2fF + gE) / (2(EG - F^2))`.
    pub fn mean_curvature(&self) -> f64 {
        (self.second_e * self.first_g - 2.0 * self.second_f * self.first_f
            + self.second_g * self.first_e)
            / (2.0 * (self.first_e * self.first_g - self.first_f * self.first_f))
    }
}

pub fn fundamental_forms(p: i32, t: f64, r: f64) -> Result<FundamentalForms> {
    let fam = CatenoidFamily::new(p, t)?;
    let pf = fam.p as f64;
    let c = (t * pf * r).cosh();
    let c2 = c * c;
    Ok(FundamentalForms {
        first_e: t * t * pf * pf * c2,
        first_f: 0.0,
        first_g: pf * pf * c2,
        second_e: t * t * pf * pf,
        second_f: 0.0,
        second_g: -pf * pf,
        gauss: -1.0 / (c2 * c2),
    })
}

/// Radial potential `2 p^2 / cosh^2(p r)`.
pub fn potential(p: i32, r: f64) -> f64 {
    let pf = p as f64;
    let c = (pf * r).cosh();
    2.0 * pf * pf / (c * c)
}

/// Symmetric tridiagonal finite-difference matrix of
/// `-d^2/dr^2 - potential` on the interior nodes of `[-t, t]`.
#[derive(Debug, Clone)]
pub struct RadialOperator {
    pub nodes: Vec<f64>,
    pub diag: Vec<f64>,
    pub off: f64,
    pub h: f64,
}

impl RadialOperator {
    pub fn new(p: i32, t: f64, n_grid: usize) -> Self {
        let h = 2.0 * t / (n_grid - 1) as f64;
        let nodes: Vec<f64> = (1..n_grid - 1).map(|i| -t + i as f64 * h).collect();
        let diag = nodes.iter().map(|&r| 2.0 / (h * h) - potential(p, r)).collect();
        Self {
            nodes,
            diag,
            off: -1.0 / (h * h),
            h,
        }
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    pub fn count_below(&self, x: f64) -> usize {
        let e2 = self.off * self.off;
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - x } else { d - x - e2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + x.abs()).max(1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// `k`-th eigenvalue (1-based) by bisection on Sturm counts.
    pub fn eigenvalue(&self, k: usize) -> Result<f64> {
        let m = self.diag.len();
        if k == 0 || k > m {
            return Err(Error::Bracket {
                n_grid: m + 2,
                reason: format!("eigenvalue index {k} out of 1..={m}"),
            });
        }
        let spread = 2.0 * self.off.abs();
        let mut lo = self.diag.iter().cloned().fold(f64::INFINITY, f64::min) - spread;
        let mut hi = self.diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + spread;
        if self.count_below(lo) >= k || self.count_below(hi) < k {
            return Err(Error::Bracket {
                n_grid: m + 2,
                reason: "Gershgorin bracket does not contain the eigenvalue".into(),
            });
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) >= k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Eigenvector for the eigenvalue `mu` by inverse iteration, normalized
    /// to `sum w_i^2 h = 1` and positive sum.
    pub fn eigenvector(&self, mu: f64) -> Vec<f64> {
        let m = self.diag.len();
        let shift = mu + 1e-10 * mu.abs().max(1.0);
        let mut v: Vec<f64> = (0..m).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
        for _ in 0..4 {
            v = solve_tridiagonal(&self.diag, self.off, shift, &v);
            let norm = (v.iter().map(|x| x * x).sum::<f64>() * self.h).sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
        }
        if v.iter().sum::<f64>() < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        v
    }
}

/// Solves `(T - shift I) x = b` for symmetric tridiagonal `T` with constant
/// off-diagonal, by Gaussian elimination with partial pivoting.
fn solve_tridiagonal(diag: &[f64], off: f64, shift: f64, b: &[f64]) -> Vec<f64> {
    let n = diag.len();
    // Rows hold up to three nonzeros after pivoting: (main, upper1, upper2).
    let mut a: Vec<[f64; 3]> = (0..n)
        .map(|i| [diag[i] - shift, if i + 1 < n { off } else { 0.0 }, 0.0])
        .collect();
    let mut lower: Vec<f64> = vec![off; n];
    let mut rhs = b.to_vec();
    for i in 0..n.saturating_sub(1) {
        let sub = lower[i + 1];
        if sub.abs() > a[i][0].abs() {
            // swap rows i and i+1
            let next = [sub, diag[i + 1] - shift, if i + 2 < n { off } else { 0.0 }];
            let cur = a[i];
            a[i] = next;
            rhs.swap(i, i + 1);
            let f = cur[0] / a[i][0];
            a[i + 1] = [cur[1] - f * a[i][1], cur[2] - f * a[i][2], 0.0];
            rhs[i + 1] -= f * rhs[i];
        } else {
            let f = sub / a[i][0];
            a[i + 1][0] -= f * a[i][1];
            a[i + 1][1] -= f * a[i][2];
            rhs[i + 1] -= f * rhs[i];
        }
        lower[i + 1] = 0.0;
    }
    let tiny = f64::EPSILON * diag.iter().fold(0.0f64, |m, d| m.max(d.abs())).max(1.0);
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        if i + 1 < n {
            s -= a[i][1] * x[i + 1];
        }
        if i + 2 < n {
            s -= a[i][2] * x[i + 2];
        }
        let d = if a[i][0].abs() < tiny { tiny } else { a[i][0] };
        x[i] = s / d;
    }
    x
}

/// Lowest radial eigenvalues at `(p, t)` with a one-doubling Richardson
/// correction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub t: f64,
    pub p: i32,
    pub n_grid: usize,
    /// Richardson-extrapolated eigenvalues, increasing.
    pub mus: Vec<f64>,
    /// Eigenvalues on the `n_grid` grid itself.
    pub raw_mus: Vec<f64>,
    /// `|extrapolated - fine-grid|` per eigenvalue.
    pub estimates: Vec<f64>,
    /// Largest entry of `estimates`.
    pub refinement_estimate: f64,
    /// Interior nodes of the `n_grid` grid.
    pub nodes: Vec<f64>,
    /// Eigenvectors on `nodes`, normalized in discrete `L^2`.
    pub eigenvectors: Vec<Vec<f64>>,
}

impl SpectrumResult {
    /// CSV `index,mu,refinement_estimate`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,mu,refinement_estimate\n");
        for (k, (mu, est)) in self.mus.iter().zip(&self.estimates).enumerate() {
            s.push_str(&format!("{},{:.15e},{:.3e}\n", k + 1, mu, est));
        }
        s
    }

    /// All `mu_j + n^2` with `|n| <= n_max`, increasing.
    pub fn full(&self, n_max: u32) -> Vec<FullEigenvalue> {
        let n_max = n_max as i32;
        let mut out: Vec<FullEigenvalue> = self
            .mus
            .iter()
            .enumerate()
            .flat_map(|(j, &mu)| {
                (-n_max..=n_max).map(move |n| FullEigenvalue {
                    lambda: mu + (n * n) as f64,
                    radial_index: j + 1,
                    n,
                })
            })
            .collect();
        out.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.n.abs().cmp(&b.n.abs())).then(a.n.cmp(&b.n)));
        out
    }
}

/// Default radial grid for spectra that do not name one.
pub const DEFAULT_GRID: usize = 2001;

fn check_grid(n_grid: usize) -> Result<()> {
    if n_grid < 201 || n_grid % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "n_grid = {n_grid} must be odd and >= 201"
        )));
    }
    Ok(())
}

pub fn radial_spectrum(p: i32, t: f64, k_eigs: usize, n_grid: usize) -> Result<SpectrumResult> {
    CatenoidFamily::new(p, t)?;
    check_grid(n_grid)?;
    if k_eigs == 0 {
        return Err(Error::InvalidParameter("k_eigs must be positive".into()));
    }
    let coarse = RadialOperator::new(p, t, n_grid);
    let fine = RadialOperator::new(p, t, 2 * n_grid - 1);
    let mut mus = Vec::with_capacity(k_eigs);
    let mut raw = Vec::with_capacity(k_eigs);
    let mut estimates = Vec::with_capacity(k_eigs);
    let mut eigenvectors = Vec::with_capacity(k_eigs);
    for k in 1..=k_eigs {
        let mc = coarse.eigenvalue(k)?;
        let mf = fine.eigenvalue(k)?;
        let extrapolated = (4.0 * mf - mc) / 3.0;
        mus.push(extrapolated);
        raw.push(mc);
        estimates.push((extrapolated - mf).abs());
        eigenvectors.push(coarse.eigenvector(mc));
    }
    Ok(SpectrumResult {
        t,
        p,
        n_grid,
        refinement_estimate: estimates.iter().cloned().fold(0.0, f64::max),
        mus,
        raw_mus: raw,
        estimates,
        nodes: coarse.nodes,
        eigenvectors,
    })
}

/// Extrapolated `mu_1(t)` on the default grid.
pub fn mu1(p: i32, t: f64) -> Result<f64> {
    mu_k(p, t, 1, DEFAULT_GRID)
}

fn mu_k(p: i32, t: f64, k: usize, n_grid: usize) -> Result<f64> {
    CatenoidFamily::new(p, t)?;
    let mc = RadialOperator::new(p, t, n_grid).eigenvalue(k)?;
    let mf = RadialOperator::new(p, t, 2 * n_grid - 1).eigenvalue(k)?;
    Ok((4.0 * mf - mc) / 3.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullEigenvalue {
    pub lambda: f64,
    pub radial_index: usize,
    pub n: i32,
}

/// Eigenvalues of the Jacobi operator on `[-t, t] x [-pi, pi]`:
/// `mu_j + n^2` for `j <= k_eigs`, `|n| <= n_max`.
pub fn full_spectrum(p: i32, t: f64, n_max: u32, k_eigs: usize) -> Result<Vec<FullEigenvalue>> {
    Ok(radial_spectrum(p, t, k_eigs, DEFAULT_GRID)?.full(n_max))
}

/// Instant `t_k` where `mu_1(t_k) = -k^2`, located by bisection to
/// eigenvalue tolerance `tol`. Exists only for `0 <= k < p`.
pub fn bifurcation_instant(p: i32, k: i32, tol: f64) -> Result<f64> {
    if p < 1 {
        return Err(Error::InvalidParameter(format!("covering number p = {p} < 1")));
    }
    if k < 0 || k >= p {
        return Err(Error::NoInstant { p, k });
    }
    let target = -((k * k) as f64);
    let g = |t: f64| mu1(p, t).map(|m| m - target);
    let x0 = stable_unstable_root() / p as f64;
    let mut lo = if k == 0 { 0.25 * x0 } else { x0 };
    while g(lo)? <= 0.0 {
        lo *= 0.5;
    }
    let mut hi = lo * 1.5;
    while g(hi)? >= 0.0 {
        hi *= 1.5;
        if hi > 1e3 {
            return Err(Error::Bracket {
                n_grid: DEFAULT_GRID,
                reason: format!("mu_1 stays above {target} up to t = {hi}"),
            });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = g(mid)?;
        if v.abs() < tol || hi - lo < 1e-15 * hi {
            return Ok(mid);
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `w(r) = a tanh(pr) + b (1 - pr tanh(pr))`, the Jacobi fields with `mu = 0`.
pub fn jacobi_field_mu0(p: i32, a: f64, b: f64, r: f64) -> f64 {
    let x = p as f64 * r;
    a * x.tanh() + b * (1.0 - x * x.tanh())
}

/// `w'' + 2p^2/cosh^2(pr) w` for [`jacobi_field_mu0`], with `w''` in closed form.
pub fn jacobi_field_mu0_residual(p: i32, a: f64, b: f64, r: f64) -> f64 {
    let pf = p as f64;
    let x = pf * r;
    let th = x.tanh();
    let s = 1.0 / (x.cosh() * x.cosh());
    let w2 = -2.0 * pf * pf * s * th * a - b * (2.0 * pf * pf * s - 2.0 * pf * pf * x * s * th);
    w2 + 2.0 * pf * pf * s * jacobi_field_mu0(p, a, b, r)
}

/// Central difference of `lambda_2(t) = mu_1(t) + 1` at `t1`; negative when
/// the eigenvalue crosses zero transversally.
pub fn transversality(p: i32, t1: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0 && dt < t1) {
        return Err(Error::InvalidParameter(format!("step dt = {dt} out of range")));
    }
    let d = (mu1(p, t1 + dt)? - mu1(p, t1 - dt)?) / (2.0 * dt);
    if d >= 0.0 {
        return Err(Error::Transversality(d));
    }
    Ok(d)
}

/// Whether `mu_2(t1) > 0`, which makes zero a simple eigenvalue in the
/// even symmetry class at `t1`.
pub fn mu2_positive_check(p: i32, t1: f64) -> Result<bool> {
    Ok(mu_k(p, t1, 2, DEFAULT_GRID)? > 0.0)
}

/// Kernel of the Jacobi operator at `t`: every `(j, n)` with
/// `|mu_j + n^2| < tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub t: f64,
    pub modes: Vec<(usize, i32)>,
    /// Dimension over all perturbations (`cos` and `sin` for `n > 0`).
    pub dimension: usize,
    /// Dimension among perturbations even in `r` and in `theta`.
    pub symmetric_dimension: usize,
}

pub fn kernel_report(p: i32, t: f64, tol: f64) -> Result<KernelReport> {
    let spectrum = radial_spectrum(p, t, (p as usize + 2).max(3), DEFAULT_GRID)?;
    let mut modes = Vec::new();
    let (mut dimension, mut symmetric_dimension) = (0, 0);
    for (j, &mu) in spectrum.mus.iter().enumerate() {
        for n in 0..=p {
            if (mu + (n * n) as f64).abs() < tol {
                modes.push((j + 1, n));
                dimension += if n == 0 { 1 } else { 2 };
                // Odd-index radial eigenfunctions are even in r.
                if j % 2 == 0 {
                    symmetric_dimension += 1;
                }
            }
        }
    }
    Ok(KernelReport {
        t,
        modes,
        dimension,
        symmetric_dimension,
    })
}
