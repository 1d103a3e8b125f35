//! Minimal surfaces from solutions: `X = (u, h)` with `H_u + (d_z h)^2 = 0`.
//!
//! For `z^2 H_u = c < 0` the height is `h = 2 sqrt|c| ln r` (a closed
//! surface of catenoid type); for `c > 0` it is `h = -2 sqrt(c) theta`,
//! which is multivalued, so the helicoid-type lift is an open sheet over
//! `[rho, 1] x [0, 2 pi]`.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::annulus::{hopf_constant_check, winding_degree_adaptive, AnnulusGrid, FieldSampler};
use crate::error::{Error, Result};

/// Relative deviation of `z^2 H_u` from a real constant accepted by the lifts.
pub const HOPF_CONSTANCY_TOL: f64 = 1e-6;

/// A real height function on the annulus with its gradient `(h_r, h_theta)`.
pub trait HeightSampler: Sync {
    fn height(&self, r: f64, theta: f64) -> f64;

    fn gradient(&self, r: f64, theta: f64) -> (f64, f64) {
        let h = 1e-4;
        let d = |f: &dyn Fn(f64) -> f64| (-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h);
        (
            d(&|s| self.height(r + s, theta)),
            d(&|s| self.height(r, theta + s)),
        )
    }
}

/// `h = 2 sqrt|c| ln r`.
#[derive(Debug, Clone, Copy)]
pub struct CatenoidHeight(pub f64);

impl HeightSampler for CatenoidHeight {
    fn height(&self, r: f64, _theta: f64) -> f64 {
        2.0 * self.0.abs().sqrt() * r.ln()
    }

    fn gradient(&self, r: f64, _theta: f64) -> (f64, f64) {
        (2.0 * self.0.abs().sqrt() / r, 0.0)
    }
}

/// `h = -2 sqrt(c) theta`, on the branch `theta` as given.
#[derive(Debug, Clone, Copy)]
pub struct HelicoidHeight(pub f64);

impl HeightSampler for HelicoidHeight {
    fn height(&self, _r: f64, theta: f64) -> f64 {
        -2.0 * self.0.abs().sqrt() * theta
    }

    fn gradient(&self, _r: f64, _theta: f64) -> (f64, f64) {
        (0.0, -2.0 * self.0.abs().sqrt())
    }
}

/// Closure adapter; gradient by finite differences.
pub struct HeightFn<F>(pub F);

impl<F: Fn(f64, f64) -> f64 + Sync> HeightSampler for HeightFn<F> {
    fn height(&self, r: f64, theta: f64) -> f64 {
        (self.0)(r, theta)
    }
}

/// `sup |H_u + (d_z h)^2|` over the interior nodes of `grid`.
pub fn conformality_residual<U, H>(u: &U, h: &H, grid: &AnnulusGrid) -> f64
where
    U: FieldSampler + ?Sized,
    H: HeightSampler + ?Sized,
{
    let jets = crate::annulus::node_jets(u, grid);
    let nt = grid.n_theta();
    let mut sup = 0.0f64;
    for i in 1..grid.n_r() - 1 {
        let r = grid.radius(i);
        for j in 0..nt {
            let theta = grid.theta(j);
            let hu = crate::annulus::z2_hopf(r, &jets[i * nt + j]);
            let (hr, ht) = h.gradient(r, theta);
            // z d_z h = (r h_r - i h_theta) / 2
            let zh = C64::new(r * hr, -ht) * 0.5;
            let z = C64::from_polar(r, theta);
            sup = sup.max(((hu + zh * zh) / (z * z)).norm());
        }
    }
    sup
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceKind {
    Catenoid,
    Helicoid,
    Bifurcated,
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurfaceKind::Catenoid => "catenoid",
            SurfaceKind::Helicoid => "helicoid",
            SurfaceKind::Bifurcated => "bifurcated",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshMeta {
    /// Hopf constant of the parametrizing map, when there is one.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub c: Option<f64>,
    pub p: i32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<f64>,
    pub kind: SurfaceKind,
}

/// Quad mesh over a parameter grid. Vertex `(i, j)` has index `i * cols + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh {
    pub vertices: Vec<[f64; 3]>,
    pub quads: Vec<[usize; 4]>,
    pub rows: usize,
    pub cols: usize,
    /// Whether column `cols - 1` connects back to column 0.
    pub wraps: bool,
    /// Parameter-boundary vertices.
    pub boundary: Vec<bool>,
    pub meta: MeshMeta,
}

impl SurfaceMesh {
    /// Builds a mesh from `position(i, j)` on a `rows x cols` grid.
    pub fn from_grid(
        rows: usize,
        cols: usize,
        wraps: bool,
        meta: MeshMeta,
        position: impl Fn(usize, usize) -> [f64; 3],
    ) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(Error::InvalidParameter(format!("mesh grid {rows}x{cols} too small")));
        }
        let mut vertices = Vec::with_capacity(rows * cols);
        let mut boundary = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                vertices.push(position(i, j));
                boundary.push(i == 0 || i + 1 == rows || (!wraps && (j == 0 || j + 1 == cols)));
            }
        }
        let jmax = if wraps { cols } else { cols - 1 };
        let mut quads = Vec::with_capacity((rows - 1) * jmax);
        for i in 0..rows - 1 {
            for j in 0..jmax {
                let jn = (j + 1) % cols;
                quads.push([i * cols + j, (i + 1) * cols + j, (i + 1) * cols + jn, i * cols + jn]);
            }
        }
        Ok(Self {
            vertices,
            quads,
            rows,
            cols,
            wraps,
            boundary,
            meta,
        })
    }

    pub fn vertex(&self, i: usize, j: usize) -> [f64; 3] {
        self.vertices[i * self.cols + j]
    }

    /// Longest edge.
    pub fn resolution(&self) -> f64 {
        self.quads
            .iter()
            .flat_map(|q| (0..4).map(move |k| (q[k], q[(k + 1) % 4])))
            .map(|(a, b)| dist(self.vertices[a], self.vertices[b]))
            .fold(0.0, f64::max)
    }

    pub fn triangles(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        self.quads
            .iter()
            .flat_map(|q| [[q[0], q[1], q[2]], [q[0], q[2], q[3]]])
    }

    /// Every directed edge occurs at most once, i.e. adjacent faces induce
    /// opposite orientations on their common edge.
    pub fn orientation_consistent(&self) -> bool {
        let mut seen = HashMap::new();
        for q in &self.quads {
            for k in 0..4 {
                if seen.insert((q[k], q[(k + 1) % 4]), ()).is_some() {
                    return false;
                }
            }
        }
        true
    }

    pub fn faces_valid(&self) -> bool {
        self.quads.iter().flatten().all(|&v| v < self.vertices.len())
    }

    /// Winding of the `(x, y)` projection of row `i` about the vertical axis.
    /// Only meaningful for wrapping meshes.
    pub fn row_winding(&self, i: usize) -> Result<i64> {
        let row: Vec<C64> = (0..self.cols)
            .map(|j| {
                let v = self.vertex(i, j);
                C64::new(v[0], v[1])
            })
            .collect();
        let trace = crate::annulus::BoundaryTrace {
            samples: row,
            radius: 1.0,
        };
        crate::annulus::winding_degree(&trace)
    }
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn lift_check<U: FieldSampler + ?Sized>(u: &U, grid: &AnnulusGrid, want_negative: bool) -> Result<(f64, i32)> {
    let report = hopf_constant_check(u, grid);
    let c = report.c_estimate;
    let scale = c.abs().max(1e-300);
    let wrong_sign = if want_negative { !(c < 0.0) } else { !(c > 0.0) };
    if wrong_sign || c.abs() < 1e-14 {
        return Err(Error::WrongHopfSign {
            c,
            expected: if want_negative { "c < 0" } else { "c > 0" },
        });
    }
    let dev = report.max_real_deviation.max(report.max_imag_part);
    if dev > HOPF_CONSTANCY_TOL * scale.max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "z^2 H_u deviates from a real constant by {dev:.3e}"
        )));
    }
    let p = winding_degree_adaptive(|th| u.value(1.0, th), 64)? as i32;
    Ok((c, p))
}

/// `X = (u, 2 sqrt|c| ln r)` on the field grid, `theta`-periodic. The outer
/// circle sits at height 0.
pub fn lift_catenoid_type<U: FieldSampler + ?Sized>(u: &U, grid: &AnnulusGrid) -> Result<SurfaceMesh> {
    let (c, p) = lift_check(u, grid, true)?;
    let h = CatenoidHeight(c);
    let meta = MeshMeta {
        c: Some(c),
        p,
        rho: Some(grid.rho()),
        t: None,
        kind: SurfaceKind::Catenoid,
    };
    SurfaceMesh::from_grid(grid.n_r(), grid.n_theta(), true, meta, |i, j| {
        let (r, th) = (grid.radius(i), grid.theta(j));
        let w = u.value(r, th);
        [w.re, w.im, h.height(r, th)]
    })
}

/// `X = (u, -2 sqrt(c) theta)` over `[rho, 1] x [0, 2 pi]`, an open sheet
/// with `n_theta + 1` columns.
pub fn lift_helicoid_type<U: FieldSampler + ?Sized>(u: &U, grid: &AnnulusGrid) -> Result<SurfaceMesh> {
    let (c, p) = lift_check(u, grid, false)?;
    let h = HelicoidHeight(c);
    let nt = grid.n_theta();
    let meta = MeshMeta {
        c: Some(c),
        p,
        rho: Some(grid.rho()),
        t: None,
        kind: SurfaceKind::Helicoid,
    };
    SurfaceMesh::from_grid(grid.n_r(), nt + 1, false, meta, |i, j| {
        let r = grid.radius(i);
        let th = if j == nt { TAU } else { grid.theta(j) };
        let w = u.value(r, th);
        [w.re, w.im, h.height(r, th)]
    })
}

/// Closest point on triangle `abc` to `p`.
fn closest_on_triangle(p: [f64; 3], a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> [f64; 3] {
    let ab = sub(b, a);
    let ac = sub(c, a);
    let ap = sub(p, a);
    let d1 = dot(ab, ap);
    let d2 = dot(ac, ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return a;
    }
    let bp = sub(p, b);
    let d3 = dot(ab, bp);
    let d4 = dot(ac, bp);
    if d3 >= 0.0 && d4 <= d3 {
        return b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return [a[0] + v * ab[0], a[1] + v * ab[1], a[2] + v * ab[2]];
    }
    let cp = sub(p, c);
    let d5 = dot(ab, cp);
    let d6 = dot(ac, cp);
    if d6 >= 0.0 && d5 <= d6 {
        return c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return [a[0] + w * ac[0], a[1] + w * ac[1], a[2] + w * ac[2]];
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        let bc = sub(c, b);
        return [b[0] + w * bc[0], b[1] + w * bc[1], b[2] + w * bc[2]];
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    [
        a[0] + ab[0] * v + ac[0] * w,
        a[1] + ab[1] * v + ac[1] * w,
        a[2] + ab[2] * v + ac[2] * w,
    ]
}

/// Uniform-cell bucketing of triangles for nearest-surface queries.
struct TriangleIndex<'a> {
    mesh: &'a SurfaceMesh,
    tris: Vec<[usize; 3]>,
    cell: f64,
    buckets: HashMap<[i64; 3], Vec<usize>>,
}

impl<'a> TriangleIndex<'a> {
    fn new(mesh: &'a SurfaceMesh) -> Self {
        let tris: Vec<[usize; 3]> = mesh.triangles().collect();
        let cell = mesh.resolution().max(1e-12);
        let mut buckets: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
        let key = |x: f64| (x / cell).floor() as i64;
        for (k, t) in tris.iter().enumerate() {
            let mut lo = [i64::MAX; 3];
            let mut hi = [i64::MIN; 3];
            for &v in t {
                for d in 0..3 {
                    let c = key(mesh.vertices[v][d]);
                    lo[d] = lo[d].min(c);
                    hi[d] = hi[d].max(c);
                }
            }
            for x in lo[0]..=hi[0] {
                for y in lo[1]..=hi[1] {
                    for z in lo[2]..=hi[2] {
                        buckets.entry([x, y, z]).or_default().push(k);
                    }
                }
            }
        }
        Self { mesh, tris, cell, buckets }
    }

    fn distance_to_tri(&self, p: [f64; 3], k: usize) -> f64 {
        let t = self.tris[k];
        let v = &self.mesh.vertices;
        dist(p, closest_on_triangle(p, v[t[0]], v[t[1]], v[t[2]]))
    }

    fn distance(&self, p: [f64; 3]) -> f64 {
        let c = [p[0], p[1], p[2]].map(|x| (x / self.cell).floor() as i64);
        let mut best = f64::INFINITY;
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(list) = self.buckets.get(&[c[0] + dx, c[1] + dy, c[2] + dz]) {
                        for &k in list {
                            best = best.min(self.distance_to_tri(p, k));
                        }
                    }
                }
            }
        }
        if best <= self.cell {
            return best;
        }
        (0..self.tris.len()).map(|k| self.distance_to_tri(p, k)).fold(best, f64::min)
    }
}

/// Largest distance from a reflected vertex (across `{z = z0}`) to the mesh
/// surface. Since reflection is an involution this is the one-sided
/// Hausdorff distance between the mesh and its mirror image, measured
/// vertex-to-surface.
pub fn plane_symmetry_check(mesh: &SurfaceMesh, z0: f64) -> f64 {
    let index = TriangleIndex::new(mesh);
    mesh.vertices
        .iter()
        .map(|v| index.distance([v[0], v[1], 2.0 * z0 - v[2]]))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeshFormat {
    Obj,
    Ply,
}

impl FromStr for MeshFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "obj" => Ok(MeshFormat::Obj),
            "ply" => Ok(MeshFormat::Ply),
            other => Err(Error::Parse(format!("unknown mesh format {other:?}"))),
        }
    }
}

impl MeshFormat {
    pub fn extension(self) -> &'static str {
        match self {
            MeshFormat::Obj => "obj",
            MeshFormat::Ply => "ply",
        }
    }
}

pub fn to_obj(mesh: &SurfaceMesh) -> String {
    let mut s = format!(
        "# {} mesh, {} x {} parameter grid, p = {}\n",
        mesh.meta.kind, mesh.rows, mesh.cols, mesh.meta.p
    );
    for v in &mesh.vertices {
        s.push_str(&format!("v {:.17e} {:.17e} {:.17e}\n", v[0], v[1], v[2]));
    }
    for q in &mesh.quads {
        s.push_str(&format!("f {} {} {} {}\n", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1));
    }
    s
}

pub fn to_ply(mesh: &SurfaceMesh) -> String {
    let mut s = format!(
        "ply\nformat ascii 1.0\ncomment {} mesh {} x {}\nelement vertex {}\nproperty double x\nproperty double y\nproperty double z\nelement face {}\nproperty list uchar int vertex_indices\nend_header\n",
        mesh.meta.kind,
        mesh.rows,
        mesh.cols,
        mesh.vertices.len(),
        mesh.quads.len()
    );
    for v in &mesh.vertices {
        s.push_str(&format!("{:.17e} {:.17e} {:.17e}\n", v[0], v[1], v[2]));
    }
    for q in &mesh.quads {
        s.push_str(&format!("4 {} {} {} {}\n", q[0], q[1], q[2], q[3]));
    }
    s
}

/// Vertices and faces (0-based) read back from an exported file.
#[derive(Debug, Clone, PartialEq)]
pub struct RawMesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<Vec<usize>>,
}

fn parse_f64(s: Option<&str>) -> Result<f64> {
    s.ok_or_else(|| Error::Parse("missing coordinate".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("{e}")))
}

fn parse_idx(s: &str) -> Result<usize> {
    // OBJ allows `v/vt/vn`
    s.split('/')
        .next()
        .unwrap_or(s)
        .parse()
        .map_err(|e| Error::Parse(format!("bad index {s:?}: {e}")))
}

pub fn parse_obj(text: &str) -> Result<RawMesh> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for line in text.lines() {
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => vertices.push([parse_f64(it.next())?, parse_f64(it.next())?, parse_f64(it.next())?]),
            Some("f") => {
                let f = it.map(|s| parse_idx(s).map(|i| i - 1)).collect::<Result<Vec<_>>>()?;
                faces.push(f);
            }
            _ => {}
        }
    }
    Ok(RawMesh { vertices, faces })
}

pub fn parse_ply(text: &str) -> Result<RawMesh> {
    let mut lines = text.lines();
    if lines.next() != Some("ply") {
        return Err(Error::Parse("missing ply magic".into()));
    }
    let (mut nv, mut nf) = (0usize, 0usize);
    for line in lines.by_ref() {
        let w: Vec<&str> = line.split_whitespace().collect();
        match w.as_slice() {
            ["element", "vertex", n] => nv = n.parse().map_err(|e| Error::Parse(format!("{e}")))?,
            ["element", "face", n] => nf = n.parse().map_err(|e| Error::Parse(format!("{e}")))?,
            ["end_header"] => break,
            _ => {}
        }
    }
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let mut it = lines.next().ok_or_else(|| Error::Parse("truncated vertices".into()))?.split_whitespace();
        vertices.push([parse_f64(it.next())?, parse_f64(it.next())?, parse_f64(it.next())?]);
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let w: Vec<usize> = lines
            .next()
            .ok_or_else(|| Error::Parse("truncated faces".into()))?
            .split_whitespace()
            .map(parse_idx)
            .collect::<Result<_>>()?;
        let (n, rest) = w.split_first().ok_or_else(|| Error::Parse("empty face".into()))?;
        if rest.len() != *n {
            return Err(Error::Parse("face length mismatch".into()));
        }
        faces.push(rest.to_vec());
    }
    Ok(RawMesh { vertices, faces })
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

/// Writes the mesh and a `{c, p, rho | t, kind}` JSON sidecar next to it.
pub fn export_mesh(mesh: &SurfaceMesh, format: MeshFormat, path: &Path) -> Result<()> {
    if !mesh.faces_valid() {
        return Err(Error::InvalidParameter("mesh references missing vertices".into()));
    }
    let body = match format {
        MeshFormat::Obj => to_obj(mesh),
        MeshFormat::Ply => to_ply(mesh),
    };
    fs::write(path, body)?;
    fs::write(sidecar_path(path), serde_json::to_string_pretty(&mesh.meta)?)?;
    Ok(())
}

pub fn import_mesh(path: &Path) -> Result<RawMesh> {
    let text = fs::read_to_string(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("ply") => parse_ply(&text),
        _ => parse_obj(&text),
    }
}

pub fn read_sidecar(path: &Path) -> Result<MeshMeta> {
    Ok(serde_json::from_str(&fs::read_to_string(sidecar_path(path))?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{hopf_constant, Kind, RadialSolution};

    fn meta() -> MeshMeta {
        MeshMeta {
            c: None,
            p: 1,
            rho: None,
            t: Some(1.0),
            kind: SurfaceKind::Bifurcated,
        }
    }

    #[test]
    fn grid_counts() {
        let m = SurfaceMesh::from_grid(8, 8, false, meta(), |i, j| [i as f64, j as f64, 0.0]).unwrap();
        assert_eq!((m.vertices.len(), m.quads.len()), (64, 49));
        assert_eq!(m.boundary.iter().filter(|&&b| b).count(), 28);
        let w = SurfaceMesh::from_grid(8, 8, true, meta(), |i, j| [i as f64, j as f64, 0.0]).unwrap();
        assert_eq!(w.quads.len(), 56);
        assert!(m.orientation_consistent() && w.orientation_consistent());
        assert!(m.faces_valid());
    }

    #[test]
    fn u1_lift_is_a_catenoid() {
        let rho = 0.5;
        let grid = AnnulusGrid::new(rho, 41, 64).unwrap();
        let u = RadialSolution::new(1, rho, Kind::Catenoidal).unwrap().field();
        let mesh = lift_catenoid_type(&u, &grid).unwrap();
        let c = hopf_constant(1, rho, Kind::Catenoidal);
        assert!((mesh.meta.c.unwrap() - c).abs() < 1e-10);
        let a = 2.0 * c.abs().sqrt();
        let z0 = c.abs().sqrt() * rho.ln();
        for v in &mesh.vertices {
            let radius = v[0].hypot(v[1]);
            assert!((radius - a * ((v[2] - z0) / a).cosh()).abs() < 1e-12);
        }
        for j in 0..grid.n_theta() {
            assert!(mesh.vertex(grid.n_r() - 1, j)[2].abs() < 1e-15);
            let b = mesh.vertex(0, j);
            assert!((b[0].hypot(b[1]) - 1.0).abs() < 1e-12);
        }
        assert_eq!(mesh.row_winding(0).unwrap(), 1);
    }

    #[test]
    fn u2_meridians_agree() {
        let grid = AnnulusGrid::new(0.4, 21, 32).unwrap();
        let u = RadialSolution::new(2, 0.4, Kind::Catenoidal).unwrap().field();
        let mesh = lift_catenoid_type(&u, &grid).unwrap();
        assert_eq!(mesh.meta.p, 2);
        for i in 0..grid.n_r() {
            let z = mesh.vertex(i, 0)[2];
            let rad = mesh.vertex(i, 0)[0].hypot(mesh.vertex(i, 0)[1]);
            for j in 1..grid.n_theta() {
                let v = mesh.vertex(i, j);
                assert!((v[2] - z).abs() < 1e-15 && (v[0].hypot(v[1]) - rad).abs() < 1e-13);
            }
        }
        assert_eq!(mesh.row_winding(grid.n_r() - 1).unwrap(), 2);
    }

    #[test]
    fn wrong_sign_rejected() {
        let grid = AnnulusGrid::new(0.5, 21, 32).unwrap();
        let u1 = RadialSolution::new(1, 0.5, Kind::Catenoidal).unwrap().field();
        let h1 = RadialSolution::new(1, 0.5, Kind::Helicoidal).unwrap().field();
        let k = crate::annulus::HarmonicField::constant(C64::new(1.0, 0.0), 0.5).unwrap();
        assert!(matches!(lift_helicoid_type(&u1, &grid), Err(Error::WrongHopfSign { .. })));
        assert!(matches!(lift_catenoid_type(&h1, &grid), Err(Error::WrongHopfSign { .. })));
        assert!(matches!(lift_catenoid_type(&k, &grid), Err(Error::WrongHopfSign { .. })));
    }

    #[test]
    fn helicoid_z_range() {
        let grid = AnnulusGrid::new(0.5, 21, 32).unwrap();
        let u = RadialSolution::new(2, 0.5, Kind::Helicoidal).unwrap().field();
        let mesh = lift_helicoid_type(&u, &grid).unwrap();
        let c = mesh.meta.c.unwrap();
        assert!((c - 16.0 / 9.0).abs() < 1e-10);
        let zs: Vec<f64> = mesh.vertices.iter().map(|v| v[2]).collect();
        let range = zs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - zs.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((range - 2.0 * c.sqrt() * TAU).abs() < 1e-12);
        assert_eq!(mesh.cols, 33);
        assert!(!mesh.wraps);
    }

    #[test]
    fn conformality() {
        let grid = AnnulusGrid::new(0.5, 41, 64).unwrap();
        let u = RadialSolution::new(1, 0.5, Kind::Catenoidal).unwrap().field();
        let c = hopf_constant(1, 0.5, Kind::Catenoidal);
        assert!(conformality_residual(&u, &CatenoidHeight(c), &grid) < 1e-12);
        let flat = conformality_residual(&u, &HeightFn(|_, _| 0.0), &grid);
        assert!(flat > c.abs() * 0.99);
        let ut = RadialSolution::new(1, 0.5, Kind::Helicoidal).unwrap().field();
        let ct = hopf_constant(1, 0.5, Kind::Helicoidal);
        assert!(conformality_residual(&ut, &HelicoidHeight(ct), &grid) < 1e-12);
        // finite-difference gradient path
        let h = HeightFn(move |r: f64, _| 2.0 * c.abs().sqrt() * r.ln());
        assert!(conformality_residual(&u, &h, &grid) < 1e-8);
        let holo = crate::annulus::Holomorphic(|z: C64| z * z, |z: C64| 2.0 * z);
        assert!(conformality_residual(&holo, &HeightFn(|_, _| 0.0), &grid) < 1e-13);
    }

    #[test]
    fn mirror_symmetry() {
        let rho = 0.5;
        let grid = AnnulusGrid::new(rho, 41, 64).unwrap();
        let u = RadialSolution::new(2, rho, Kind::Catenoidal).unwrap().field();
        let mesh = lift_catenoid_type(&u, &grid).unwrap();
        let z0 = mesh.meta.c.unwrap().abs().sqrt() * rho.ln();
        let d = plane_symmetry_check(&mesh, z0);
        assert!(d < 0.1 * mesh.resolution(), "{d} vs {}", mesh.resolution());
        assert!(plane_symmetry_check(&mesh, z0 + 0.1) > 0.05);
    }

    #[test]
    fn triangle_projection() {
        let (a, b, c) = ([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let f = closest_on_triangle([0.2, 0.2, 3.0], a, b, c);
        assert!(dist(f, [0.2, 0.2, 0.0]) < 1e-15);
        assert_eq!(closest_on_triangle([-1.0, -1.0, 0.0], a, b, c), a);
        assert_eq!(closest_on_triangle([2.0, -1.0, 0.0], a, b, c), b);
        let e = closest_on_triangle([1.0, 1.0, 0.0], a, b, c);
        assert!((e[0] - 0.5).abs() < 1e-15 && (e[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let grid = AnnulusGrid::new(0.5, 9, 16).unwrap();
        let u = RadialSolution::new(2, 0.5, Kind::Catenoidal).unwrap().field();
        let mesh = lift_catenoid_type(&u, &grid).unwrap();
        for fmt in [MeshFormat::Obj, MeshFormat::Ply] {
            let path = dir.path().join(format!("m.{}", fmt.extension()));
            export_mesh(&mesh, fmt, &path).unwrap();
            let raw = import_mesh(&path).unwrap();
            assert_eq!(raw.vertices, mesh.vertices);
            let faces: Vec<Vec<usize>> = mesh.quads.iter().map(|q| q.to_vec()).collect();
            assert_eq!(raw.faces, faces);
            assert_eq!(read_sidecar(&path).unwrap(), mesh.meta);
        }
        assert!(parse_ply("nope").is_err());
    }
}
