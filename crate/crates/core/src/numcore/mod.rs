//! Grids, sampled functions, quadrature, finite differences and Bessel
//! functions shared by the rest of the crate.

pub mod bessel;
pub mod diff;
mod field2d;
mod grid;
pub mod quad;
mod sampled;

pub use bessel::{bessel_j, BESSEL_MAX_ARG};
pub use field2d::ComplexSampled2D;
pub use grid::Grid1D;
pub use sampled::{ComplexI, ComplexSampled1D, VANISHING_TOL};

/// Default number of nodes per axis.
pub const DEFAULT_POINTS: usize = 2001;

/// Shorthand for a `C_i` number.
pub fn ci(re: f64, im: f64) -> ComplexI {
    ComplexI::new(re, im)
}
