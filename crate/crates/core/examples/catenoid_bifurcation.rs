//! Branch of non-rotational minimal surfaces leaving the doubly covered
//! catenoid, followed for a few steps and written out as meshes.
//!
//! ```text
//! cargo run --release --example catenoid_bifurcation -- out_dir
//! ```

use std::path::PathBuf;

use semistiff::bifurcate::{
    boundary_cover_check, branch_csv, branch_switch, continue_branch, nonsymmetry_metric, state_mesh, surface_area,
};
use semistiff::lift::{export_mesh, MeshFormat};

fn main() -> semistiff::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "bifurcation_out".into()));
    std::fs::create_dir_all(&out).map_err(|e| semistiff::Error::Io(e.to_string()))?;

    let (n_r, n_theta) = (65, 64);
    let start = branch_switch(2, 1e-2, 1e-10, n_r, n_theta)?;
    let ns = nonsymmetry_metric(&start);
    println!(
        "t = {:.8}, |H| = {:.2e}, nonsymmetry {:.3e}, u(0, .) in [{:.4}, {:.4}]",
        start.t, start.residual_norm, ns.variance, ns.u_min, ns.u_max
    );
    println!("{:?}", boundary_cover_check(&start));

    let branch = continue_branch(&start, 8, 2e-2, 1e-10)?;
    for s in &branch {
        println!(
            "step {:>2}: t = {:.6}, amplitude {:+.4}, area {:.8}",
            s.step_index,
            s.t,
            s.amplitude,
            surface_area(&s.u)?
        );
    }
    std::fs::write(out.join("branch.csv"), branch_csv(&branch)).map_err(|e| semistiff::Error::Io(e.to_string()))?;

    let last = branch.last().unwrap_or(&start);
    export_mesh(&state_mesh(last)?, MeshFormat::Obj, &out.join("last.obj"))?;
    println!("wrote {}", out.display());
    Ok(())
}
