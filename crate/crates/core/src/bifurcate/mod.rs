//! Normal perturbations `Y = X_t + u N_t` of the `p`-covered catenoid, the
//! discrete mean-curvature operator on them, and the non-rotational branch
//! that leaves the catenoid family at `t_1`.
//!
//! `u` lives on the quarter `[0, 1] x [0, pi]` and is extended evenly in
//! `r` and `theta`, so every iterate stays in the class of perturbations
//! with those two reflection symmetries. The row `r = 1` is held at zero.

mod band;
mod geometry;
mod solve;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use band::{BandLu, BandMatrix};
pub use geometry::Frame;
pub use solve::{
    branch_switch, continue_branch, newton_solve, trivial_noise_floor, DEFAULT_MAX_ITER,
};

use geometry::{mean_curvature_with, u_derivatives, y_jet, FrameField, YJet, V3};

use crate::annulus::{winding_degree, BoundaryTrace};
use crate::error::{Error, Result};
use crate::lift::{MeshMeta, SurfaceKind, SurfaceMesh};
use crate::spectrum::{CatenoidFamily, RadialOperator};

/// Perturbation `u` on the quarter grid `r_i = i / (n_r - 1)`,
/// `theta_j = j pi / (n_theta - 1)`, stored row-major with the `r = 1`
/// row included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationGrid {
    p: i32,
    t: f64,
    n_r: usize,
    n_theta: usize,
    u: Vec<f64>,
}

impl PerturbationGrid {
    pub fn zeros(p: i32, t: f64, n_r: usize, n_theta: usize) -> Result<Self> {
        CatenoidFamily::new(p, t)?;
        if n_r < 3 || n_theta < 4 {
            return Err(Error::InvalidParameter(format!(
                "quarter grid {n_r}x{n_theta} too small"
            )));
        }
        Ok(Self {
            p,
            t,
            n_r,
            n_theta,
            u: vec![0.0; n_r * n_theta],
        })
    }

    /// Samples `f(r, theta)` on the quarter grid; the `r = 1` row is set to 0.
    pub fn from_fn(p: i32, t: f64, n_r: usize, n_theta: usize, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut g = Self::zeros(p, t, n_r, n_theta)?;
        for i in 0..n_r - 1 {
            for j in 0..n_theta {
                g.u[i * n_theta + j] = f(g.r(i), g.theta(j));
            }
        }
        Ok(g)
    }

    pub fn with_values(&self, u: Vec<f64>) -> Result<Self> {
        if u.len() != self.u.len() {
            return Err(Error::SampleMismatch {
                left: u.len(),
                right: self.u.len(),
            });
        }
        Ok(Self { u, ..self.clone() })
    }

    pub fn with_t(&self, t: f64) -> Result<Self> {
        CatenoidFamily::new(self.p, t)?;
        Ok(Self { t, ..self.clone() })
    }

    pub fn p(&self) -> i32 {
        self.p
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    /// Nodes off the Dirichlet row; they come first in storage.
    pub fn n_unknowns(&self) -> usize {
        (self.n_r - 1) * self.n_theta
    }

    pub fn dr(&self) -> f64 {
        1.0 / (self.n_r - 1) as f64
    }

    pub fn dtheta(&self) -> f64 {
        std::f64::consts::PI / (self.n_theta - 1) as f64
    }

    pub fn r(&self, i: usize) -> f64 {
        if i + 1 == self.n_r {
            1.0
        } else {
            i as f64 * self.dr()
        }
    }

    pub fn theta(&self, j: usize) -> f64 {
        if j + 1 == self.n_theta {
            std::f64::consts::PI
        } else {
            j as f64 * self.dtheta()
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.u
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.u[i * self.n_theta + j]
    }

    /// Overwrites one node, boundary row included. Used to build
    /// deliberately broken states.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.u[i * self.n_theta + j] = v;
    }

    /// Value of `u` (a full-length array on this grid) at a possibly
    /// out-of-range index, through the even reflections.
    #[inline]
    pub(crate) fn ghost(&self, u: &[f64], i: isize, j: isize) -> f64 {
        let last = self.n_theta as isize - 1;
        let i = i.unsigned_abs();
        let j = if j < 0 {
            -j
        } else if j > last {
            2 * last - j
        } else {
            j
        };
        u[i * self.n_theta + j as usize]
    }

    pub fn sup_norm(&self) -> f64 {
        self.u.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Trapezoid weights for integrals over the full rectangle
    /// `[-1, 1] x [-pi, pi]` of functions with the stored symmetries.
    pub fn weights(&self) -> Vec<f64> {
        let (dr, dt) = (self.dr(), self.dtheta());
        let mut w = Vec::with_capacity(self.u.len());
        for i in 0..self.n_r {
            let wr = if i == 0 || i + 1 == self.n_r { 0.5 * dr } else { dr };
            for j in 0..self.n_theta {
                let wt = if j == 0 || j + 1 == self.n_theta { 0.5 * dt } else { dt };
                w.push(4.0 * wr * wt);
            }
        }
        w
    }

    /// `L^2` pairing over the full rectangle.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        self.weights().iter().zip(a).zip(b).map(|((w, x), y)| w * x * y).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.inner(&self.u, &self.u).sqrt()
    }

    /// `u(r, theta + pi)`, which for even `u` is `u(r, pi - theta)`.
    pub fn shifted_by_pi(&self) -> Self {
        let mut out = self.clone();
        let nt = self.n_theta;
        for i in 0..self.n_r {
            for j in 0..nt {
                out.u[i * nt + j] = self.u[i * nt + nt - 1 - j];
            }
        }
        out
    }

    /// Point of `Y = X_t + u N_t` at a full-domain index `(i, k)` with
    /// `i in -(n_r-1)..=(n_r-1)` and `k` any integer (angle `k dtheta`).
    pub fn surface_point(&self, i: isize, k: isize) -> V3 {
        let period = 2 * (self.n_theta as isize - 1);
        let km = k.rem_euclid(period);
        let u = self.ghost(&self.u, i, km);
        let r = i as f64 * self.dr();
        let f = Frame::at(self.p, self.t, r, k as f64 * self.dtheta());
        geometry::add(f.x, geometry::scale(u, f.n))
    }
}

/// `H` of `Y = X_t + u N_t` at every unknown node (rows `r < 1`), using
/// analytic derivatives of `X_t` and `N_t` and second-order central
/// differences of `u`.
pub fn mean_curvature(pg: &PerturbationGrid) -> Result<Vec<f64>> {
    mean_curvature_with(pg, &FrameField::new(pg), pg.values())
}

/// `H` with every derivative of `Y` taken by second-order central
/// differences of the sampled surface. `H(0)` is then `O(h^2)` instead of
/// rounding-level.
pub fn mean_curvature_fd(pg: &PerturbationGrid) -> Result<Vec<f64>> {
    let (hr, ht) = (pg.dr(), pg.dtheta());
    let y = |i: isize, j: isize| -> V3 {
        let u = pg.ghost(pg.values(), i, j);
        let f = Frame::at(pg.p, pg.t, i as f64 * hr, j as f64 * ht);
        geometry::add(f.x, geometry::scale(u, f.n))
    };
    let d = |a: V3, b: V3, s: f64| geometry::scale(s, [a[0] - b[0], a[1] - b[1], a[2] - b[2]]);
    let mut out = Vec::with_capacity(pg.n_unknowns());
    for i in 0..pg.n_r as isize - 1 {
        for j in 0..pg.n_theta as isize {
            let c = y(i, j);
            let (n, s, e, w) = (y(i + 1, j), y(i - 1, j), y(i, j + 1), y(i, j - 1));
            let second = |a: V3, b: V3, h: f64| {
                geometry::scale(1.0 / (h * h), [a[0] + b[0] - 2.0 * c[0], a[1] + b[1] - 2.0 * c[1], a[2] + b[2] - 2.0 * c[2]])
            };
            let ne = y(i + 1, j + 1);
            let nw = y(i + 1, j - 1);
            let se = y(i - 1, j + 1);
            let sw = y(i - 1, j - 1);
            let jet = YJet {
                y_r: d(n, s, 0.5 / hr),
                y_t: d(e, w, 0.5 / ht),
                y_rr: second(n, s, hr),
                y_rt: geometry::scale(
                    0.25 / (hr * ht),
                    [
                        ne[0] - nw[0] - se[0] + sw[0],
                        ne[1] - nw[1] - se[1] + sw[1],
                        ne[2] - nw[2] - se[2] + sw[2],
                    ],
                ),
                y_tt: second(e, w, ht),
            };
            out.push(jet.mean_curvature().ok_or(Error::Immersion {
                i: i as usize,
                j: j as usize,
            })?);
        }
    }
    Ok(out)
}

/// `J_t v = (v_rr + t^2 (v_thetatheta + 2 p^2 / cosh^2(tpr) v)) / (t^2 p^2 cosh^2(tpr))`
/// at every unknown node, with the same difference stencils as
/// [`mean_curvature`]. `v` is a full-length array on `pg`'s grid.
///
/// The derivative of [`mean_curvature`] at `u = 0` is `J_t / 2`.
pub fn jacobi_apply(pg: &PerturbationGrid, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != pg.u.len() {
        return Err(Error::SampleMismatch {
            left: v.len(),
            right: pg.u.len(),
        });
    }
    let (p, t) = (pg.p as f64, pg.t);
    let mut out = Vec::with_capacity(pg.n_unknowns());
    for i in 0..pg.n_r - 1 {
        let c = (t * p * pg.r(i)).cosh();
        let c2 = c * c;
        for j in 0..pg.n_theta {
            let [w, _, _, wrr, _, wtt] = u_derivatives(pg, v, i, j);
            out.push((wrr + t * t * (wtt + 2.0 * p * p / c2 * w)) / (t * t * p * p * c2));
        }
    }
    Ok(out)
}

/// Discrete kernel direction `u_1 = v_1(r) cos(theta)` at `t`, with `v_1`
/// the lowest radial eigenvector on the same `r`-grid, normalized to unit
/// `L^2` norm over the full rectangle.
pub fn kernel_mode(p: i32, t: f64, n_r: usize, n_theta: usize) -> Result<PerturbationGrid> {
    let op = RadialOperator::new(p, t, 2 * n_r - 1);
    let v = op.eigenvector(op.eigenvalue(1)?);
    let mut g = PerturbationGrid::zeros(p, t, n_r, n_theta)?;
    for i in 0..n_r - 1 {
        for j in 0..n_theta {
            g.u[i * n_theta + j] = v[n_r - 2 + i] * g.theta(j).cos();
        }
    }
    let norm = g.l2_norm();
    g.u.iter_mut().for_each(|x| *x /= norm);
    Ok(g)
}

/// Smooth random perturbation `sum c_mn cos((m + 1/2) pi r) cos(n theta)`,
/// `m, n < 4`, scaled to sup-norm `amplitude`.
pub fn random_perturbation(
    p: i32,
    t: f64,
    n_r: usize,
    n_theta: usize,
    amplitude: f64,
    rng: &mut impl Rng,
) -> Result<PerturbationGrid> {
    let c: Vec<f64> = (0..16).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut g = PerturbationGrid::from_fn(p, t, n_r, n_theta, |r, th| {
        (0..16)
            .map(|k| {
                let (m, n) = ((k / 4) as f64, (k % 4) as f64);
                c[k] * ((m + 0.5) * std::f64::consts::PI * r).cos() * (n * th).cos()
            })
            .sum()
    })?;
    let s = g.sup_norm();
    if s > 0.0 {
        g.u.iter_mut().for_each(|x| *x *= amplitude / s);
    }
    Ok(g)
}

/// Area of `Y` over the full parameter rectangle.
pub fn surface_area(pg: &PerturbationGrid) -> Result<f64> {
    let ff = FrameField::new(pg);
    let w = pg.weights();
    let mut a = 0.0;
    for i in 0..pg.n_r - 1 {
        for j in 0..pg.n_theta {
            let k = i * pg.n_theta + j;
            let jet = y_jet(&ff.frames[k], u_derivatives(pg, pg.values(), i, j));
            let m = geometry::cross(jet.y_r, jet.y_t);
            a += w[k] * geometry::dot(m, m).sqrt();
        }
    }
    // boundary row: u = 0 there but its normal derivative need not vanish
    let i = pg.n_r - 1;
    for j in 0..pg.n_theta {
        let k = i * pg.n_theta + j;
        let f = Frame::at(pg.p, pg.t, 1.0, pg.theta(j));
        let ur = (pg.u[k] - pg.u[k - pg.n_theta]) / pg.dr();
        let yr = geometry::add(f.x_r, geometry::scale(ur, f.n));
        let m = geometry::cross(yr, f.x_t);
        a += w[k] * geometry::dot(m, m).sqrt();
    }
    Ok(a)
}

/// A point on the solution set of `H(t, u) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchState {
    pub t: f64,
    pub u: PerturbationGrid,
    /// `<u, u_1>` with the kernel direction at `t_1`.
    pub amplitude: f64,
    /// `sup |H|`.
    pub residual_norm: f64,
    pub step_index: usize,
    /// Kernel direction `u_1` the amplitude refers to.
    pub kernel: Vec<f64>,
}

impl BranchState {
    pub fn csv_header() -> &'static str {
        "step,t,amplitude,residual,nonsymmetry"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.15e},{:.15e},{:.3e},{:.6e}",
            self.step_index,
            self.t,
            self.amplitude,
            self.residual_norm,
            nonsymmetry_metric(self).variance
        )
    }
}

pub fn branch_csv(states: &[BranchState]) -> String {
    let mut s = format!("{}\n", BranchState::csv_header());
    for st in states {
        s.push_str(&st.csv_row());
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonsymmetryReport {
    /// Angular variance of the distance of `Y(0, .)` to the axis.
    pub variance: f64,
    /// `min u(0, theta)`.
    pub u_min: f64,
    /// `max u(0, theta)`.
    pub u_max: f64,
}

impl NonsymmetryReport {
    pub fn both_signs(&self) -> bool {
        self.u_min < 0.0 && self.u_max > 0.0
    }
}

/// Angular variance of `x^2 + y^2` distance on the mid parallel `r = 0`.
pub fn nonsymmetry_metric(state: &BranchState) -> NonsymmetryReport {
    let pg = &state.u;
    let nt = pg.n_theta;
    let dist: Vec<f64> = (0..nt)
        .map(|j| {
            let y = pg.surface_point(0, j as isize);
            y[0].hypot(y[1])
        })
        .collect();
    let w: Vec<f64> = (0..nt)
        .map(|j| if j == 0 || j + 1 == nt { 0.5 } else { 1.0 } / (nt - 1) as f64)
        .collect();
    let mean: f64 = dist.iter().zip(&w).map(|(d, w)| d * w).sum();
    let variance = dist.iter().zip(&w).map(|(d, w)| w * (d - mean).powi(2)).sum();
    let row = &pg.u[..nt];
    NonsymmetryReport {
        variance,
        u_min: row.iter().cloned().fold(f64::INFINITY, f64::min),
        u_max: row.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    }
}

/// Angular variance of the axis distance along one parameter row of a mesh.
pub fn mesh_row_nonsymmetry(mesh: &SurfaceMesh, row: usize) -> f64 {
    let d: Vec<f64> = (0..mesh.cols).map(|j| {
        let v = mesh.vertex(row, j);
        v[0].hypot(v[1])
    }).collect();
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / d.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCoverReport {
    /// `sup |u|` on the `r = 1` row.
    pub max_boundary_u: f64,
    /// `sup |Y - X_t|` on both boundary curves.
    pub max_offset: f64,
    pub radius_spread: f64,
    pub height_spread: f64,
    pub winding_upper: i64,
    pub winding_lower: i64,
    pub pass: bool,
}

/// Checks that both boundary curves of `Y` are those of `X_t`: circles of
/// radius `cosh(tp)` at heights `+-tp`, each traced `p` times.
pub fn boundary_cover_check(state: &BranchState) -> BoundaryCoverReport {
    let pg = &state.u;
    let nt = pg.n_theta;
    let last = pg.n_r as isize - 1;
    let period = 2 * (nt as isize - 1);
    let (p, t) = (pg.p as f64, pg.t);
    let radius = (t * p).cosh();
    let mut max_offset = 0.0f64;
    let mut radius_spread = 0.0f64;
    let mut height_spread = 0.0f64;
    let mut winding = [0i64; 2];
    for (slot, (i, sign)) in [(last, 1.0), (-last, -1.0)].into_iter().enumerate() {
        let pts: Vec<V3> = (0..period).map(|k| pg.surface_point(i, k)).collect();
        for (k, y) in pts.iter().enumerate() {
            let x = Frame::at(pg.p, t, sign, k as f64 * pg.dtheta()).x;
            max_offset = max_offset.max(((y[0] - x[0]).powi(2) + (y[1] - x[1]).powi(2) + (y[2] - x[2]).powi(2)).sqrt());
            radius_spread = radius_spread.max((y[0].hypot(y[1]) - radius).abs());
            height_spread = height_spread.max((y[2] - sign * t * p).abs());
        }
        let trace = BoundaryTrace {
            samples: pts.iter().map(|y| num_complex::Complex64::new(y[0], y[1])).collect(),
            radius: 1.0,
        };
        winding[slot] = winding_degree(&trace).unwrap_or(0);
    }
    let max_boundary_u = pg.u[(pg.n_r - 1) * nt..].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-12 * radius.max(1.0);
    BoundaryCoverReport {
        max_boundary_u,
        max_offset,
        radius_spread,
        height_spread,
        winding_upper: winding[0],
        winding_lower: winding[1],
        pass: max_boundary_u == 0.0
            && max_offset < tol
            && radius_spread < tol
            && height_spread < tol
            && winding == [pg.p as i64; 2],
    }
}

/// Full-surface quad mesh of `Y`: `2 n_r - 1` rows over `r in [-1, 1]`,
/// `2 (n_theta - 1)` columns over the full circle.
pub fn state_mesh(state: &BranchState) -> Result<SurfaceMesh> {
    let pg = &state.u;
    let rows = 2 * pg.n_r - 1;
    let cols = 2 * (pg.n_theta - 1);
    let meta = MeshMeta {
        c: None,
        p: pg.p,
        rho: None,
        t: Some(pg.t),
        kind: SurfaceKind::Bifurcated,
    };
    let offset = pg.n_r as isize - 1;
    SurfaceMesh::from_grid(rows, cols, true, meta, |i, k| {
        pg.surface_point(i as isize - offset, k as isize)
    })
}
