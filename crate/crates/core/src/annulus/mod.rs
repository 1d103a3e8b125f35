//! Discretization of the annulus `A_rho = {rho < |z| < 1}` and the
//! quantities shared by every other module: harmonic extension, Dirichlet
//! energy, degrees and the Hopf differential.

mod degree;
mod extension;
mod field;
mod grid;
mod quadrature;

pub use degree::{winding_degree, winding_degree_adaptive, MODULUS_FLOOR};
pub use extension::{harmonic_extension, BoundaryTrace};
pub use field::{jet, FieldSampler, HarmonicField, Holomorphic, Jet, Mode, PolarFn};
pub use grid::AnnulusGrid;
pub(crate) use grid::check_rho;
pub use quadrature::{
    capacity, capacity_by_quadrature, degree_difference_integral, dirichlet_energy,
    hopf_constant_check, hopf_differential, kelvin_reflect, node_jets, wedge, z2_hopf,
    HopfReport, Kelvin,
};
