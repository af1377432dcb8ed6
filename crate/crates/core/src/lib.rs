//! Sphere-constrained fractional Sobolev energies on periodic grids.
//!
//! * [`grid`]: periodic grids, sampled fields and dyadic ball hierarchies.
//! * [`frac`]: fractional Laplacian, Riesz potential, Littlewood–Paley
//!   projections and the commutator `H_α`.
//! * [`energy`]: the discrete Besov–Slobodeckij energy, its first variation,
//!   Euler–Lagrange residuals and the potential operator `T_{B,t}`.
//! * [`solver`]: projected gradient descent onto the sphere.
//! * [`lab`]: regularity diagnostics and inequality probes.
//! * [`io`]: configuration, field files and reports.

pub mod energy;
pub mod error;
pub mod frac;
pub mod grid;
pub mod io;
pub mod lab;
pub mod solver;
pub mod special;

pub use error::{Error, Result};
