//! Frames of `X_t` and `N_t`, and the mean curvature of `Y = X_t + u N_t`.

use super::PerturbationGrid;
use crate::error::{Error, Result};

pub(crate) type V3 = [f64; 3];

#[inline]
pub(crate) fn add(a: V3, b: V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub(crate) fn scale(s: f64, a: V3) -> V3 {
    [s * a[0], s * a[1], s * a[2]]
}

#[inline]
pub(crate) fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `X_t`, `N_t` and their derivatives up to second order at one point.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub x: V3,
    pub x_r: V3,
    pub x_t: V3,
    pub x_rr: V3,
    pub x_rt: V3,
    pub x_tt: V3,
    pub n: V3,
    pub n_r: V3,
    pub n_t: V3,
    pub n_rr: V3,
    pub n_rt: V3,
    pub n_tt: V3,
}

impl Frame {
    pub fn at(p: i32, t: f64, r: f64, theta: f64) -> Self {
        let pf = p as f64;
        let a = t * pf * r;
        let (c, s) = (a.cosh(), a.sinh());
        let th = a.tanh();
        let (sp, cp) = (pf * theta).sin_cos();
        let tp = t * pf;
        let c3 = c * c * c;
        Frame {
            x: [c * cp, c * sp, a],
            x_r: [tp * s * cp, tp * s * sp, tp],
            x_t: [-pf * c * sp, pf * c * cp, 0.0],
            x_rr: [tp * tp * c * cp, tp * tp * c * sp, 0.0],
            x_rt: [-tp * pf * s * sp, tp * pf * s * cp, 0.0],
            x_tt: [-pf * pf * c * cp, -pf * pf * c * sp, 0.0],
            n: [cp / c, sp / c, -th],
            n_r: [-tp * th / c * cp, -tp * th / c * sp, -tp / (c * c)],
            n_t: [-pf * sp / c, pf * cp / c, 0.0],
            n_rr: [
                tp * tp * (2.0 * s * s - c * c) / c3 * cp,
                tp * tp * (2.0 * s * s - c * c) / c3 * sp,
                tp * tp * 2.0 * s / c3,
            ],
            n_rt: [tp * pf * th / c * sp, -tp * pf * th / c * cp, 0.0],
            n_tt: [-pf * pf * cp / c, -pf * pf * sp / c, 0.0],
        }
    }
}

/// Derivatives of `Y` at a node, and `H` from them.
#[derive(Debug, Clone, Copy)]
pub(crate) struct YJet {
    pub y_r: V3,
    pub y_t: V3,
    pub y_rr: V3,
    pub y_rt: V3,
    pub y_tt: V3,
}

impl YJet {
    /// `(eG - 2fF + gE) / (2(EG - F^2))` with the normal oriented along `N_t`
    /// (that is, `-(Y_r x Y_theta)/|Y_r x Y_theta|`). `None` when `EG - F^2 <= 0`.
    pub fn mean_curvature(&self) -> Option<f64> {
        let e_ = dot(self.y_r, self.y_r);
        let f_ = dot(self.y_r, self.y_t);
        let g_ = dot(self.y_t, self.y_t);
        let det = e_ * g_ - f_ * f_;
        if !(det > 0.0) {
            return None;
        }
        let m = cross(self.y_r, self.y_t);
        let norm = dot(m, m).sqrt();
        let nn = scale(-1.0 / norm, m);
        let e = dot(self.y_rr, nn);
        let f = dot(self.y_rt, nn);
        let g = dot(self.y_tt, nn);
        Some((e * g_ - 2.0 * f * f_ + g * e_) / (2.0 * det))
    }
}

/// Frames at every unknown node, for one value of `t`.
#[derive(Debug, Clone)]
pub(crate) struct FrameField {
    pub frames: Vec<Frame>,
}

impl FrameField {
    pub fn new(pg: &PerturbationGrid) -> Self {
        let mut frames = Vec::with_capacity(pg.n_unknowns());
        for i in 0..pg.n_r() - 1 {
            for j in 0..pg.n_theta() {
                frames.push(Frame::at(pg.p(), pg.t(), pg.r(i), pg.theta(j)));
            }
        }
        Self { frames }
    }
}

/// Second-order central differences of `u` at node `(i, j)` using the even
/// reflections: `(u, u_r, u_theta, u_rr, u_rtheta, u_thetatheta)`.
#[inline]
pub(crate) fn u_derivatives(pg: &PerturbationGrid, u: &[f64], i: usize, j: usize) -> [f64; 6] {
    let (hr, ht) = (pg.dr(), pg.dtheta());
    let at = |di: isize, dj: isize| pg.ghost(u, i as isize + di, j as isize + dj);
    let c = at(0, 0);
    let (n, s) = (at(1, 0), at(-1, 0));
    let (e, w) = (at(0, 1), at(0, -1));
    [
        c,
        (n - s) / (2.0 * hr),
        (e - w) / (2.0 * ht),
        (n - 2.0 * c + s) / (hr * hr),
        (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * hr * ht),
        (e - 2.0 * c + w) / (ht * ht),
    ]
}

#[inline]
pub(crate) fn y_jet(f: &Frame, d: [f64; 6]) -> YJet {
    let [u, ur, ut, urr, urt, utt] = d;
    YJet {
        y_r: add(add(f.x_r, scale(ur, f.n)), scale(u, f.n_r)),
        y_t: add(add(f.x_t, scale(ut, f.n)), scale(u, f.n_t)),
        y_rr: add(
            add(f.x_rr, scale(urr, f.n)),
            add(scale(2.0 * ur, f.n_r), scale(u, f.n_rr)),
        ),
        y_rt: add(
            add(f.x_rt, scale(urt, f.n)),
            add(add(scale(ur, f.n_t), scale(ut, f.n_r)), scale(u, f.n_rt)),
        ),
        y_tt: add(
            add(f.x_tt, scale(utt, f.n)),
            add(scale(2.0 * ut, f.n_t), scale(u, f.n_tt)),
        ),
    }
}

pub(crate) fn node_h(pg: &PerturbationGrid, ff: &FrameField, u: &[f64], i: usize, j: usize) -> Result<f64> {
    let k = i * pg.n_theta() + j;
    y_jet(&ff.frames[k], u_derivatives(pg, u, i, j))
        .mean_curvature()
        .ok_or(Error::Immersion { i, j })
}

pub(crate) fn mean_curvature_with(pg: &PerturbationGrid, ff: &FrameField, u: &[f64]) -> Result<Vec<f64>> {
    let nt = pg.n_theta();
    let mut out = Vec::with_capacity(pg.n_unknowns());
    for i in 0..pg.n_r() - 1 {
        for j in 0..nt {
            out.push(node_h(pg, ff, u, i, j)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_derivatives_match_differences() {
        let (p, t, r, th, h) = (2, 0.7, 0.31, 0.9, 1e-5);
        let f = Frame::at(p, t, r, th);
        let fd = |g: &dyn Fn(f64, f64) -> V3, dr: f64, dt: f64| {
            let a = g(r + dr, th + dt);
            let b = g(r - dr, th - dt);
            scale(1.0 / (2.0 * h), [a[0] - b[0], a[1] - b[1], a[2] - b[2]])
        };
        let close = |a: V3, b: V3| (0..3).all(|k| (a[k] - b[k]).abs() < 1e-7 * (1.0 + b[k].abs()));
        let x = |r, th| Frame::at(p, t, r, th).x;
        let n = |r, th| Frame::at(p, t, r, th).n;
        let xr = |r, th| Frame::at(p, t, r, th).x_r;
        let xt = |r, th| Frame::at(p, t, r, th).x_t;
        let nr = |r, th| Frame::at(p, t, r, th).n_r;
        let nt = |r, th| Frame::at(p, t, r, th).n_t;
        assert!(close(fd(&x, h, 0.0), f.x_r));
        assert!(close(fd(&x, 0.0, h), f.x_t));
        assert!(close(fd(&xr, h, 0.0), f.x_rr));
        assert!(close(fd(&xr, 0.0, h), f.x_rt));
        assert!(close(fd(&xt, 0.0, h), f.x_tt));
        assert!(close(fd(&n, h, 0.0), f.n_r));
        assert!(close(fd(&n, 0.0, h), f.n_t));
        assert!(close(fd(&nr, h, 0.0), f.n_rr));
        assert!(close(fd(&nr, 0.0, h), f.n_rt));
        assert!(close(fd(&nt, 0.0, h), f.n_tt));
        assert!(dot(f.n, f.x_r).abs() < 1e-14 && dot(f.n, f.x_t).abs() < 1e-14);
        assert!((dot(f.n, f.n) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn catenoid_is_minimal() {
        let f = Frame::at(3, 1.3, -0.4, 2.2);
        let jet = y_jet(&f, [0.0; 6]);
        assert!(jet.mean_curvature().unwrap().abs() < 1e-15);
    }
}
