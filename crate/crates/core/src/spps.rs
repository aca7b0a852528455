//! Spectral parameter power series.
//!
//! For an L-basis `{phi_k}` of `f'' - q f = 0`,
//!
//! ```text
//! u1 = sum_k λ^k phi_{2k}   / (2k)!
//! u2 = sum_k λ^k phi_{2k+1} / (2k+1)!
//! ```
//!
//! are two independent solutions of `u'' - q u = λ u` with
//! `u1(x0) = f(x0)`, `u1'(x0) = f'(x0)`, `u2(x0) = 0`, `u2'(x0) = 1/f(x0)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lbasis::LBasis;
use crate::numcore::{ComplexI, ComplexSampled1D};

/// Safety factor applied to the last term when estimating the tail.
pub const TAIL_SAFETY: f64 = 10.0;

/// Target size of the first neglected term for [`default_truncation`].
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct SppsSolution {
    pub lambda: ComplexI,
    pub n_trunc: usize,
    pub u1: ComplexSampled1D,
    pub u2: ComplexSampled1D,
    /// Max-norm of the last added term (over both series) times [`TAIL_SAFETY`].
    pub tail_bound: f64,
}

impl SppsSolution {
    /// `true` when the estimated truncation error is below `tol`.
    pub fn within(&self, tol: f64) -> bool {
        self.tail_bound <= tol
    }
}

/// Sum the two series up to `k = n_trunc`. Needs `K_max >= 2 n_trunc + 1`.
pub fn spps_solve(basis: &LBasis, lambda: ComplexI, n_trunc: usize) -> Result<SppsSolution> {
    basis.ensure_depth(2 * n_trunc + 1)?;
    let grid = *basis.grid();
    let n = grid.len();
    let mut u1 = vec![ComplexI::new(0.0, 0.0); n];
    let mut u2 = vec![ComplexI::new(0.0, 0.0); n];
    let mut coef = ComplexI::new(1.0, 0.0); // λ^k / (2k)!
    let mut last = 0.0_f64;
    for k in 0..=n_trunc {
        if k > 0 {
            coef *= lambda / ((2 * k - 1) as f64 * (2 * k) as f64);
        }
        let c2 = coef / (2 * k + 1) as f64;
        let even = basis.phi(2 * k).values();
        let odd = basis.phi(2 * k + 1).values();
        let mut term_max = 0.0_f64;
        for i in 0..n {
            let a = even[i] * coef;
            let b = odd[i] * c2;
            u1[i] += a;
            u2[i] += b;
            term_max = term_max.max(a.norm()).max(b.norm());
        }
        last = term_max;
    }
    Ok(SppsSolution {
        lambda,
        n_trunc,
        u1: ComplexSampled1D::new(grid, u1)?,
        u2: ComplexSampled1D::new(grid, u2)?,
        tail_bound: last * TAIL_SAFETY,
    })
}

/// Smallest `N` with `C |λ|^N L^{2N} / (2N)! < tol`, where `L` is the largest
/// distance from the center and `C = max_k max|phi_k| / L^k` is measured from
/// the basis. Capped at what the basis depth allows.
pub fn default_truncation(basis: &LBasis, lambda: ComplexI, tol: f64) -> usize {
    let g = basis.grid();
    let x0 = basis.x0();
    let span = (g.a_right() - x0).max(x0 - g.a_left());
    let mut c = 0.0_f64;
    for (k, phi) in basis.phis().iter().enumerate() {
        c = c.max(phi.max_abs() / span.powi(k as i32));
    }
    let cap = basis.k_max().saturating_sub(1) / 2;
    let lam = lambda.norm();
    let mut term = c; // C |λ|^N L^{2N} / (2N)!
    for big_n in 0..=cap {
        if term < tol {
            return big_n;
        }
        let a = (2 * big_n + 1) as f64;
        let b = (2 * big_n + 2) as f64;
        term *= lam * span * span / (a * b);
    }
    cap
}

/// `spps_solve` at the default truncation.
pub fn spps_solve_auto(basis: &LBasis, lambda: ComplexI) -> Result<SppsSolution> {
    let n = default_truncation(basis, lambda, DEFAULT_TAIL_TOL);
    spps_solve(basis, lambda, n)
}

/// Solve for several spectral parameters in parallel.
pub fn spps_solve_many(basis: &LBasis, lambdas: &[ComplexI]) -> Result<Vec<SppsSolution>> {
    lambdas.par_iter().map(|&l| spps_solve_auto(basis, l)).collect()
}

/// `h = f'(0)` by a fourth-order stencil at the center node.
pub fn slope_at_center(basis: &LBasis) -> Result<ComplexI> {
    basis.f().derivative_at(basis.x0_index())
}

/// `e0(iω, x) = u1 + (iω - h) u2` with `λ = -ω²`: the solution of
/// `u'' - q u = -ω² u` with `u(0) = 1`, `u'(0) = iω`.
///
/// The basis must be centered at the origin with `f(0) = 1`. When `h` is
/// `None` it is taken as `f'(0)` from the samples.
pub fn e0_solution(basis: &LBasis, omega: ComplexI, h: Option<ComplexI>) -> Result<ComplexSampled1D> {
    if !basis.centered_at_origin() {
        return Err(Error::NotCentered(format!("center at x = {}", basis.x0())));
    }
    let f0 = basis.f().value(basis.x0_index());
    if (f0 - 1.0).norm() > 1e-12 {
        return Err(Error::Normalization(format!("f(0) = {f0}, expected 1")));
    }
    let h = match h {
        Some(h) => h,
        None => slope_at_center(basis)?,
    };
    let lambda = -omega * omega;
    let sol = spps_solve_auto(basis, lambda)?;
    let iw = ComplexI::new(0.0, 1.0) * omega;
    sol.u1.add_scaled(&sol.u2, iw - h)
}
