//! Lifting radial critical points to a catenoid and a helicoid.

use semistiff::annulus::{hopf_constant_check, AnnulusGrid};
use semistiff::lift::{
    conformality_residual, export_mesh, import_mesh, lift_catenoid_type, lift_helicoid_type, plane_symmetry_check,
    CatenoidHeight, HelicoidHeight, MeshFormat,
};
use semistiff::radial::{Kind, RadialSolution};

fn main() -> semistiff::Result<()> {
    let (p, rho) = (2, 0.4);
    let dir = std::env::temp_dir().join("semistiff_lift");
    std::fs::create_dir_all(&dir).map_err(|e| semistiff::Error::Io(e.to_string()))?;

    for n in [21, 41, 81] {
        let grid = AnnulusGrid::new(rho, n, 2 * (n - 1))?;
        let u = RadialSolution::new(p, rho, Kind::Catenoidal)?.field();
        let c = hopf_constant_check(&u, &grid).c_estimate;
        let ut = RadialSolution::new(p, rho, Kind::Helicoidal)?.field();
        let ct = hopf_constant_check(&ut, &grid).c_estimate;
        println!(
            "{n:>3} radial nodes: conformality {:.2e} (catenoid), {:.2e} (helicoid)",
            conformality_residual(&u, &CatenoidHeight(c), &grid),
            conformality_residual(&ut, &HelicoidHeight(ct), &grid),
        );
    }

    let grid = AnnulusGrid::new(rho, 81, 160)?;
    let cat = lift_catenoid_type(&RadialSolution::new(p, rho, Kind::Catenoidal)?.field(), &grid)?;
    let c = cat.meta.c.unwrap_or_default();
    println!(
        "catenoid: c = {c:.6}, boundary windings {} and {}, mirror distance {:.2e} (mesh resolution {:.2e})",
        cat.row_winding(0)?,
        cat.row_winding(cat.rows - 1)?,
        plane_symmetry_check(&cat, c.abs().sqrt() * rho.ln()),
        cat.resolution()
    );
    let hel = lift_helicoid_type(&RadialSolution::new(p, rho, Kind::Helicoidal)?.field(), &grid)?;

    for (mesh, name) in [(&cat, "catenoid.obj"), (&hel, "helicoid.ply")] {
        let path = dir.join(name);
        let fmt = if name.ends_with("ply") { MeshFormat::Ply } else { MeshFormat::Obj };
        export_mesh(mesh, fmt, &path)?;
        let back = import_mesh(&path)?;
        println!("{}: {} vertices, {} faces", path.display(), back.vertices.len(), back.faces.len());
    }
    Ok(())
}
