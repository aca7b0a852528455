//! Transmutation operators, L-bases and complete families of solutions for
//! the stationary Schrodinger equation `-Δu + q(x, y) u = 0` with a separable
//! complex potential `q = q1(x) + q2(y)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`numcore`]: grids, cumulative quadrature, finite differences, Bessel `J0`/`J1`;
//! * [`lbasis`]: recursive integrals and the L-basis `{phi_k}` of a nonvanishing solution;
//! * [`spps`]: spectral parameter power series solutions of `u'' - q u = λ u`;
//! * [`transmute`]: Volterra transmutation kernels, their Goursat solver and operators;
//! * [`bicomplex`]: bicomplex arithmetic, formal powers and the main Vekua equation;
//! * [`schrodinger2d`]: the solution family `u_m`, harmonic polynomials and conjugate solutions;
//! * [`bvpsolve`]: least-squares Dirichlet fitting with the family;
//! * [`catalog`]: closed-form generating functions `f` with their potentials.

pub mod bicomplex;
pub mod bvpsolve;
pub mod catalog;
pub mod error;
pub mod lbasis;
pub mod numcore;
pub mod schrodinger2d;
pub mod spps;
pub mod transmute;

pub use error::{Error, Result};
pub use numcore::{ci, ComplexI, ComplexSampled1D, ComplexSampled2D, Grid1D};
