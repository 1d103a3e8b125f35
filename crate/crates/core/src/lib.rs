//! Critical points of the Dirichlet energy on an annulus under semi-stiff
//! boundary conditions (`|u| = 1` and `u ^ du/dnu = 0` on both circles),
//! and the minimal surfaces they correspond to.
//!
//! * [`annulus`]: grids, harmonic fields, energy, degree, Hopf differential.
//! * [`holo`]: explicit holomorphic minimizers for boundary degrees `p > 0 > q`.
//! * [`radial`]: the catenoidal and helicoidal radial families.
//! * [`lift`]: lifting solutions to minimal surfaces and mesh export.
//! * [`spectrum`]: Jacobi spectrum of the `p`-covered catenoid and its
//!   bifurcation instants.
//! * [`bifurcate`]: Newton solver and continuation for the non-rotational
//!   branch of minimal surfaces.
//! * [`cli`]: the `semistiff` command-line front end.

pub mod annulus;
pub mod bifurcate;
pub mod cli;
pub mod error;
pub mod holo;
pub mod lift;
pub mod radial;
pub mod spectrum;

pub use error::{Error, Result};
