//! Newton, bordered Newton, branch switching and pseudo-arclength
//! continuation for `H(t, u) = 0`.

use super::band::{BandLu, BandMatrix};
use super::geometry::{mean_curvature_with, FrameField};
use super::{kernel_mode, nonsymmetry_metric, BranchState, PerturbationGrid};
use crate::error::{Error, Result};
use crate::spectrum::bifurcation_instant;

pub const DEFAULT_MAX_ITER: usize = 30;

/// Consecutive residual increases tolerated before giving up.
const GROWTH_LIMIT: usize = 3;

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn check_bound(u: &[f64]) -> Result<()> {
    let s = sup(u);
    if !(s < 1.0) {
        return Err(Error::ImmersionBound { sup: s });
    }
    Ok(())
}

/// `dH/du` at `u` by central differences, columns grouped by a 3x3
/// colouring of the grid so each group costs two residual evaluations.
fn jacobian(pg: &PerturbationGrid, ff: &FrameField, u: &[f64]) -> Result<BandMatrix> {
    let nt = pg.n_theta();
    let rows = pg.n_r() - 1;
    let n = pg.n_unknowns();
    let eps = f64::EPSILON.cbrt() * (1.0 + sup(u));
    let mut jac = BandMatrix::zeros(n, nt + 1, nt + 1);
    let mut up = u.to_vec();
    let mut um = u.to_vec();
    for ci in 0..3 {
        for cj in 0..3 {
            let cols: Vec<(usize, usize)> = (ci..rows)
                .step_by(3)
                .flat_map(|i| (cj..nt).step_by(3).map(move |j| (i, j)))
                .collect();
            if cols.is_empty() {
                continue;
            }
            for &(i, j) in &cols {
                up[i * nt + j] = u[i * nt + j] + eps;
                um[i * nt + j] = u[i * nt + j] - eps;
            }
            let hp = mean_curvature_with(pg, ff, &up)?;
            let hm = mean_curvature_with(pg, ff, &um)?;
            for &(i, j) in &cols {
                let col = i * nt + j;
                for ri in i.saturating_sub(1)..=(i + 1).min(rows - 1) {
                    for rj in j.saturating_sub(1)..=(j + 1).min(nt - 1) {
                        let row = ri * nt + rj;
                        jac.set(row, col, (hp[row] - hm[row]) / (2.0 * eps));
                    }
                }
                up[col] = u[col];
                um[col] = u[col];
            }
        }
    }
    Ok(jac)
}

/// Newton's method on `H(u) = 0` at fixed `t`, starting from `pg0`.
pub fn newton_solve(pg0: &PerturbationGrid, tol: f64, max_iter: usize) -> Result<PerturbationGrid> {
    check_bound(pg0.values())?;
    let ff = FrameField::new(pg0);
    let n = pg0.n_unknowns();
    let mut u = pg0.values().to_vec();
    let mut last = f64::INFINITY;
    let mut growth = 0;
    for iter in 0..=max_iter {
        let h = mean_curvature_with(pg0, &ff, &u)?;
        let res = sup(&h);
        if res < tol {
            return pg0.with_values(u);
        }
        if res > last {
            growth += 1;
            if growth >= GROWTH_LIMIT {
                return Err(Error::Divergence {
                    iterations: iter,
                    residual: res,
                });
            }
        } else {
            growth = 0;
        }
        last = res;
        if iter == max_iter {
            return Err(Error::MaxIterations {
                iterations: iter,
                residual: res,
            });
        }
        let lu = jacobian(pg0, &ff, &u)?.factor()?;
        let rhs: Vec<f64> = h.iter().map(|x| -x).collect();
        let du = lu.solve(&rhs);
        for (x, d) in u[..n].iter_mut().zip(&du) {
            *x += d;
        }
        check_bound(&u)?;
    }
    unreachable!()
}

/// Linear side condition `<c_u, u> + c_t t = target` (plain dot product;
/// quadrature weights are folded into `c_u`).
struct Constraint {
    c_u: Vec<f64>,
    c_t: f64,
    target: f64,
}

impl Constraint {
    fn value(&self, u: &[f64], t: f64) -> f64 {
        self.c_u.iter().zip(u).map(|(c, x)| c * x).sum::<f64>() + self.c_t * t - self.target
    }
}

struct Bordered {
    u: Vec<f64>,
    t: f64,
    residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `[J h_t; c_u^T c_t] [du; dt] = [f; g]` by block elimination with
/// one step of iterative refinement.
fn bordered_step(jac: &BandMatrix, lu: &BandLu, h_t: &[f64], c_u: &[f64], c_t: f64, f: &[f64], g: f64) -> (Vec<f64>, f64) {
    let b = lu.solve(h_t);
    let cb = dot(c_u, &b);
    let solve = |f: &[f64], g: f64| {
        let a = lu.solve(f);
        let dt = (g - dot(c_u, &a)) / (c_t - cb);
        let du: Vec<f64> = a.iter().zip(&b).map(|(a, b)| a - dt * b).collect();
        (du, dt)
    };
    let (mut du, mut dt) = solve(f, g);
    let jdu = jac.mul_vec(&du);
    let rf: Vec<f64> = (0..f.len()).map(|k| f[k] - jdu[k] - h_t[k] * dt).collect();
    let rg = g - dot(c_u, &du) - c_t * dt;
    let (cu, ct) = solve(&rf, rg);
    du.iter_mut().zip(&cu).for_each(|(x, c)| *x += c);
    dt += ct;
    (du, dt)
}

fn bordered_newton(template: &PerturbationGrid, u0: Vec<f64>, t0: f64, con: &Constraint, tol: f64, max_iter: usize) -> Result<Bordered> {
    let n = template.n_unknowns();
    let mut u = u0;
    let mut t = t0;
    check_bound(&u)?;
    let mut last = f64::INFINITY;
    let mut growth = 0;
    let c_u = &con.c_u[..n];
    for iter in 0..=max_iter {
        let pg = template.with_t(t)?;
        let ff = FrameField::new(&pg);
        let h = mean_curvature_with(&pg, &ff, &u)?;
        let g = con.value(&u, t);
        let res = sup(&h);
        if res < tol && g.abs() <= 1e-12 * (1.0 + con.target.abs()) {
            return Ok(Bordered { u, t, residual: res });
        }
        let merit = res.max(g.abs());
        if merit > last {
            growth += 1;
            if growth >= GROWTH_LIMIT {
                return Err(Error::Divergence {
                    iterations: iter,
                    residual: res,
                });
            }
        } else {
            growth = 0;
        }
        last = merit;
        if iter == max_iter {
            return Err(Error::MaxIterations {
                iterations: iter,
                residual: res,
            });
        }
        let dt_fd = 1e-6 * t.max(1.0);
        let hp = mean_curvature_with(&pg, &FrameField::new(&pg.with_t(t + dt_fd)?), &u)?;
        let hm = mean_curvature_with(&pg, &FrameField::new(&pg.with_t(t - dt_fd)?), &u)?;
        let h_t: Vec<f64> = hp.iter().zip(&hm).map(|(a, b)| (a - b) / (2.0 * dt_fd)).collect();
        let jac = jacobian(&pg, &ff, &u)?;
        let lu = jac.clone().factor()?;
        let f: Vec<f64> = h.iter().map(|x| -x).collect();
        let (du, dt) = bordered_step(&jac, &lu, &h_t, c_u, con.c_t, &f, -g);
        for (x, d) in u[..n].iter_mut().zip(&du) {
            *x += d;
        }
        t += dt;
        check_bound(&u)?;
        if !(t > 0.0) {
            return Err(Error::Divergence {
                iterations: iter,
                residual: res,
            });
        }
    }
    unreachable!()
}

/// Leaves the catenoid family at `t_1`: solves `H(t, u) = 0` together with
/// `<u, u_1> = amp` starting from `(t_1, amp u_1)` on an `n_r x n_theta`
/// quarter grid.
pub fn branch_switch(p: i32, amp: f64, tol: f64, n_r: usize, n_theta: usize) -> Result<BranchState> {
    if p < 2 {
        return Err(Error::NoInstant { p, k: 1 });
    }
    let t1 = bifurcation_instant(p, 1, 1e-12)?;
    let u1 = kernel_mode(p, t1, n_r, n_theta)?;
    let kernel = u1.values().to_vec();
    if amp == 0.0 {
        return Ok(BranchState {
            t: t1,
            u: PerturbationGrid::zeros(p, t1, n_r, n_theta)?,
            amplitude: 0.0,
            residual_norm: 0.0,
            step_index: 0,
            kernel,
        });
    }
    let weights = u1.weights();
    let con = Constraint {
        c_u: weights.iter().zip(&kernel).map(|(w, k)| w * k).collect(),
        c_t: 0.0,
        target: amp,
    };
    let u0: Vec<f64> = kernel.iter().map(|k| amp * k).collect();
    let sol = bordered_newton(&u1, u0, t1, &con, tol, DEFAULT_MAX_ITER)?;
    let u = u1.with_t(sol.t)?.with_values(sol.u)?;
    Ok(BranchState {
        t: sol.t,
        amplitude: u.inner(u.values(), &kernel),
        u,
        residual_norm: sol.residual,
        step_index: 0,
        kernel,
    })
}

/// Pseudo-arclength continuation from a converged state. The arclength uses
/// the `L^2` norm for `u` plus `|dt|`; `ds > 0` moves away from the
/// catenoid (growing `|<u, u_1>|`).
pub fn continue_branch(start: &BranchState, n_steps: usize, ds: f64, tol: f64) -> Result<Vec<BranchState>> {
    let template = start.u.clone();
    let n = template.n_unknowns();
    let w = template.weights();
    let wnorm = |du: &[f64], dt: f64| (dot(&w[..n], &du.iter().map(|x| x * x).collect::<Vec<_>>()) + dt * dt).sqrt();

    // initial tangent: J du + h_t dt = 0
    let ff = FrameField::new(&template);
    let u = template.values().to_vec();
    let dt_fd = 1e-6 * start.t.max(1.0);
    let hp = mean_curvature_with(&template, &FrameField::new(&template.with_t(start.t + dt_fd)?), &u)?;
    let hm = mean_curvature_with(&template, &FrameField::new(&template.with_t(start.t - dt_fd)?), &u)?;
    let h_t: Vec<f64> = hp.iter().zip(&hm).map(|(a, b)| (a - b) / (2.0 * dt_fd)).collect();
    let z = jacobian(&template, &ff, &u)?.factor()?.solve(&h_t);
    let mut tau_u: Vec<f64> = z.iter().map(|x| -x).collect();
    let mut tau_t = 1.0;
    let norm = wnorm(&tau_u, tau_t);
    tau_u.iter_mut().for_each(|x| *x /= norm);
    tau_t /= norm;
    let mut direction = if start.amplitude < 0.0 { -1.0 } else { 1.0 };
    if ds < 0.0 {
        direction = -direction;
    }
    if dot(&tau_u, &start.kernel[..n]) * direction < 0.0 {
        tau_u.iter_mut().for_each(|x| *x = -*x);
        tau_t = -tau_t;
    }

    let mut states = Vec::with_capacity(n_steps);
    let mut cur_u = u;
    let mut cur_t = start.t;
    let ds = ds.abs();
    let mut step = ds;
    for k in 1..=n_steps {
        let mut halvings = 0;
        let accepted = loop {
            let mut pred = cur_u.clone();
            for (x, d) in pred[..n].iter_mut().zip(&tau_u) {
                *x += step * d;
            }
            let t_pred = cur_t + step * tau_t;
            let mut c_u = vec![0.0; template.values().len()];
            for i in 0..n {
                c_u[i] = w[i] * tau_u[i];
            }
            let con = Constraint {
                target: dot(&c_u, &pred) + tau_t * t_pred,
                c_u,
                c_t: tau_t,
            };
            let attempt = if sup(&pred) < 1.0 && t_pred > 0.0 {
                bordered_newton(&template, pred, t_pred, &con, tol, 12)
            } else {
                Err(Error::ImmersionBound { sup: sup(&pred) })
            };
            match attempt {
                Ok(sol) => break sol,
                Err(e @ Error::ImmersionBound { .. }) if halvings >= 5 => return Err(e),
                Err(_) if halvings < 5 => {
                    halvings += 1;
                    step *= 0.5;
                }
                Err(_) => {
                    return Err(Error::StepFailure { halvings, t: cur_t });
                }
            }
        };
        let du: Vec<f64> = (0..n).map(|i| accepted.u[i] - cur_u[i]).collect();
        let dt = accepted.t - cur_t;
        let norm = wnorm(&du, dt);
        tau_u = du.iter().map(|x| x / norm).collect();
        tau_t = dt / norm;
        cur_u = accepted.u;
        cur_t = accepted.t;
        let pg = template.with_t(cur_t)?.with_values(cur_u.clone())?;
        states.push(BranchState {
            t: cur_t,
            amplitude: pg.inner(pg.values(), &start.kernel),
            u: pg,
            residual_norm: accepted.residual,
            step_index: start.step_index + k,
            kernel: start.kernel.clone(),
        });
        if halvings == 0 && step < ds {
            step *= 2.0;
        }
    }
    Ok(states)
}

/// Noise floor of [`super::nonsymmetry_metric`] on the trivial branch:
/// the metric of `newton_solve` from `u = 0` at `t` on the given grid and
/// on the grid refined once in each direction, floored at machine epsilon.
pub fn trivial_noise_floor(p: i32, t: f64, n_r: usize, n_theta: usize) -> Result<f64> {
    let mut floor = f64::EPSILON;
    for (nr, nt) in [(n_r, n_theta), (2 * n_r - 1, 2 * n_theta - 1)] {
        let u = newton_solve(&PerturbationGrid::zeros(p, t, nr, nt)?, 1e-12, DEFAULT_MAX_ITER)?;
        let state = BranchState {
            t,
            u,
            amplitude: 0.0,
            residual_norm: 0.0,
            step_index: 0,
            kernel: Vec::new(),
        };
        floor = floor.max(nonsymmetry_metric(&state).variance);
    }
    Ok(floor)
}
