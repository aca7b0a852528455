//! Formal powers of `∂̄W = (∂̄φ/φ) W̄` for separable `φ = f(x) g(y)`.
//!
//! The generating sequence has period two:
//! `(F0, G0) = (fg, j/(fg))`, `(F1, G1) = (g/f, jf/g)`. Writing `Φ0 = fg` and
//! `Φ1 = g/f`, each pair is `(Φ, j/Φ)` with adjoint pair `(-jΦ, 1/Φ)`.
//!
//! The closed form expresses `Z(n)(α, z0; z)` through the recursive
//! integrals of `f` and `g`; the recursive construction
//! `Z(n)_m = n ∫ Z(n-1)_{m+1} d_(F_m, G_m) z` is kept as an independent check.

use serde::Serialize;

use super::{Bicomplex, BicomplexField};
use crate::error::{Error, Result};
use crate::lbasis::LBasis;
use crate::numcore::{quad, ComplexI, ComplexSampled1D, ComplexSampled2D};

#[derive(Debug, Clone, Serialize)]
pub struct FormalPower {
    pub n: usize,
    pub alpha: Bicomplex,
    pub center: (f64, f64),
    pub values: BicomplexField,
}

/// Order of the two axis-parallel legs of the integration path from `z0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum PathOrder {
    /// `z0 -> (x, y0) -> (x, y)`.
    #[default]
    XThenY,
    /// `z0 -> (x0, y) -> (x, y)`.
    YThenX,
}

const NORMALIZATION_TOL: f64 = 1e-12;

fn check_normalized(b: &LBasis, name: &str) -> Result<()> {
    let v = b.f().value(b.x0_index());
    if (v - 1.0).norm() > NORMALIZATION_TOL {
        return Err(Error::Normalization(format!("{name}(center) = {v}, expected 1")));
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `j^k = sign * (1 or j)`; returns `(sign, lands_in_vec)`.
fn j_power(k: usize) -> (f64, bool) {
    match k % 4 {
        0 => (1.0, false),
        1 => (1.0, true),
        2 => (-1.0, false),
        _ => (-1.0, true),
    }
}

/// Closed-form formal power. `alpha = α' + j α''` with `α', α'' ∈ ℂ_i`.
/// Needs `f(x0) = g(y0) = 1` and depth `n` in both bases.
pub fn formal_power_closed(
    n: usize,
    alpha: Bicomplex,
    basis_x: &LBasis,
    basis_y: &LBasis,
) -> Result<FormalPower> {
    basis_x.ensure_depth(n)?;
    basis_y.ensure_depth(n)?;
    check_normalized(basis_x, "f")?;
    check_normalized(basis_y, "g")?;
    let (gx, gy) = (*basis_x.grid(), *basis_y.grid());
    let (nx, ny) = (gx.len(), gy.len());
    let mut sc = vec![ComplexI::new(0.0, 0.0); nx * ny];
    let mut vec = vec![ComplexI::new(0.0, 0.0); nx * ny];

    let odd = n % 2 == 1;
    // which recursive integral (tilde or plain) enters each sum
    let (ax, ay, bx, by) = if odd {
        (false, true, true, false)
    } else {
        (true, true, false, false)
    };
    for k in 0..=n {
        let c = binomial(n, k);
        // α' C X.(n-k) j^k Y.(k)
        let (s, in_vec) = j_power(k);
        accumulate(&mut sc, &mut vec, pick(basis_x, ax, n - k), pick(basis_y, ay, k), alpha.sc * (c * s), in_vec);
        // j α'' C X.(n-k) j^k Y.(k) = α'' C X.(n-k) j^(k+1) Y.(k)
        let (s, in_vec) = j_power(k + 1);
        accumulate(&mut sc, &mut vec, pick(basis_x, bx, n - k), pick(basis_y, by, k), alpha.vec * (c * s), in_vec);
    }

    // Z = fg Sc(*Z) + (j / fg) Vec(*Z)
    let f = basis_x.f().values();
    let g = basis_y.f().values();
    for iy in 0..ny {
        for ix in 0..nx {
            let p = f[ix] * g[iy];
            let idx = iy * nx + ix;
            sc[idx] *= p;
            vec[idx] /= p;
        }
    }
    Ok(FormalPower {
        n,
        alpha,
        center: (basis_x.x0(), basis_y.x0()),
        values: BicomplexField::new(
            ComplexSampled2D::new(gx, gy, sc)?,
            ComplexSampled2D::new(gx, gy, vec)?,
        )?,
    })
}

fn pick(b: &LBasis, tilde: bool, k: usize) -> &ComplexSampled1D {
    if tilde {
        b.x_tilde(k)
    } else {
        b.x_plain(k)
    }
}

fn accumulate(
    sc: &mut [ComplexI],
    vec: &mut [ComplexI],
    fx: &ComplexSampled1D,
    fy: &ComplexSampled1D,
    coef: ComplexI,
    in_vec: bool,
) {
    let nx = fx.len();
    let target = if in_vec { vec } else { sc };
    for (iy, &b) in fy.values().iter().enumerate() {
        let cb = coef * b;
        for (ix, &a) in fx.values().iter().enumerate() {
            target[iy * nx + ix] += a * cb;
        }
    }
}

/// Formal power by nested `(F, G)`-integrals along axis-parallel paths.
pub fn formal_power_recursive(
    n: usize,
    alpha: Bicomplex,
    basis_x: &LBasis,
    basis_y: &LBasis,
    order: PathOrder,
) -> Result<FormalPower> {
    check_normalized(basis_x, "f")?;
    check_normalized(basis_y, "g")?;
    let (gx, gy) = (*basis_x.grid(), *basis_y.grid());
    let f = basis_x.f().values();
    let g = basis_y.f().values();
    let phis = [
        ComplexSampled2D::from_fn_indexed(gx, gy, |ix, iy| f[ix] * g[iy]),
        ComplexSampled2D::from_fn_indexed(gx, gy, |ix, iy| g[iy] / f[ix]),
    ];
    let (ix0, iy0) = (basis_x.x0_index(), basis_y.x0_index());

    // Z(0)_m(a) = Sc(a) Φ_m + Vec(a) j / Φ_m
    let start = &phis[n % 2];
    let mut w1 = start.scale(alpha.sc);
    let mut w2 = start.map(|p| alpha.vec / p);
    for k in 1..=n {
        let phi = &phis[(n - k) % 2];
        let p1 = w1.zip_with(phi, |w, p| w / p)?;
        let q1 = w2.zip_with(phi, |w, p| -w / p)?;
        let p2 = w2.zip_with(phi, |w, p| w * p)?;
        let q2 = w1.zip_with(phi, |w, p| w * p)?;
        let i1 = path_integral(&p1, &q1, ix0, iy0, order);
        let i2 = path_integral(&p2, &q2, ix0, iy0, order);
        let kf = k as f64;
        w1 = i1.zip_with(phi, |v, p| v * p * kf)?;
        w2 = i2.zip_with(phi, |v, p| v / p * kf)?;
    }
    Ok(FormalPower {
        n,
        alpha,
        center: (basis_x.x0(), basis_y.x0()),
        values: BicomplexField::new(w1, w2)?,
    })
}

/// `∫ P dx + Q dy` from `(x0, y0)` to every node along the chosen path.
fn path_integral(
    p: &ComplexSampled2D,
    q: &ComplexSampled2D,
    ix0: usize,
    iy0: usize,
    order: PathOrder,
) -> ComplexSampled2D {
    let hx = p.grid_x().step();
    let hy = p.grid_y().step();
    match order {
        PathOrder::XThenY => {
            let first = quad::cumulative_from(p.row(iy0), hx, ix0);
            let second = q.map_columns(|col| quad::cumulative_from(col, hy, iy0));
            let nx = p.nx();
            ComplexSampled2D::from_fn_indexed(*p.grid_x(), *p.grid_y(), |ix, iy| {
                first[ix] + second.values()[iy * nx + ix]
            })
        }
        PathOrder::YThenX => {
            let first = quad::cumulative_from(&q.column(ix0), hy, iy0);
            let second = p.map_rows(|row| quad::cumulative_from(row, hx, ix0));
            let nx = p.nx();
            ComplexSampled2D::from_fn_indexed(*p.grid_x(), *p.grid_y(), |ix, iy| {
                first[iy] + second.values()[iy * nx + ix]
            })
        }
    }
}
