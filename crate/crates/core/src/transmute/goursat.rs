//! Kernel of a general potential from its Goursat problem.
//!
//! In characteristic coordinates `s = (x + t)/2`, `τ = (x - t)/2` the kernel
//! `H(s, τ) = K(s + τ, s - τ)` solves
//!
//! ```text
//! H(s, τ) = ½ ∫_0^s q + ∫_0^s ∫_0^τ q(σ + ρ) H(σ, ρ) dρ dσ
//! ```
//!
//! on `s, τ >= 0`, which covers `x >= 0`. Picard iteration converges like
//! `(|q| s τ)^n / (n!)²`. The half-plane `x < 0` uses the reflected potential:
//! `K_q(x, t) = -K_{q(-·)}(-x, -t)`.
//!
//! The `(s, τ)` grid has half the spacing of the `x` grid, so `q` is needed at
//! midpoints; these come from cubic interpolation of the samples.

use serde::Serialize;

use super::{check_symmetric, KernelGrid, KernelKind};
use crate::error::{Error, Result};
use crate::numcore::{quad, ComplexI, ComplexSampled1D};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GoursatOptions {
    pub max_iter: usize,
    /// Stop when successive iterates differ by less than this in max norm.
    pub tol: f64,
}

impl Default for GoursatOptions {
    fn default() -> Self {
        Self {
            max_iter: 60,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GoursatReport {
    /// Picard sweeps used (the larger of the two half-planes).
    pub iterations: usize,
    /// Last max-norm increment.
    pub residual: f64,
}

/// Solve for the plain kernel of `q`, tabulated on `q`'s symmetric grid.
pub fn goursat_solve(q: &ComplexSampled1D, opts: GoursatOptions) -> Result<(KernelGrid, GoursatReport)> {
    let grid = *q.grid();
    check_symmetric(&grid)?;
    let n = grid.len();
    let c = grid.middle_index();
    let delta = grid.step() / 2.0;

    // q on the half-step grid; index 2c is x = 0.
    let fine = quad::refine_half_step(q.values());
    let right: Vec<ComplexI> = fine[2 * c..].to_vec();
    let left: Vec<ComplexI> = fine[..=2 * c].iter().rev().copied().collect();

    let (pos, neg) = rayon::join(
        || Triangle::solve(&right, delta, opts),
        || Triangle::solve(&left, delta, opts),
    );
    let (pos, rp) = pos?;
    let (neg, rn) = neg?;

    let rows = (0..n)
        .map(|i| {
            let w = i.abs_diff(c) as isize;
            (-w..=w)
                .map(|l| {
                    if i >= c {
                        pos.get((w + l) as usize, (w - l) as usize)
                    } else {
                        -neg.get((w - l) as usize, (w + l) as usize)
                    }
                })
                .collect()
        })
        .collect();
    let report = GoursatReport {
        iterations: rp.iterations.max(rn.iterations),
        residual: rp.residual.max(rn.residual),
    };
    Ok((KernelGrid::from_rows(grid, rows, KernelKind::Plain), report))
}

/// `(max |K(x, x) - ½∫_0^x q|, max |K(x, -x)|)` over the grid.
pub fn goursat_boundary_defect(k: &KernelGrid, q: &ComplexSampled1D) -> Result<(f64, f64)> {
    k.expect_kind("plain")?;
    k.grid().ensure_same(q.grid(), "potential vs kernel")?;
    let c = k.grid().middle_index();
    let half_int = q.cumulative_integral(c)?;
    let mut diag = 0.0_f64;
    let mut anti = 0.0_f64;
    for i in 0..k.n_points() {
        let j = 2 * c - i;
        let on = k.at(i, i).unwrap_or_default();
        let off = k.at(i, j).unwrap_or_default();
        diag = diag.max((on - half_int.value(i) * 0.5).norm());
        anti = anti.max(off.norm());
    }
    Ok((diag, anti))
}

/// `H(p δ, r δ)` on `p + r <= 2N`, stored by rows of fixed `p`.
struct Triangle {
    rows: Vec<Vec<ComplexI>>,
}

impl Triangle {
    fn get(&self, p: usize, r: usize) -> ComplexI {
        self.rows[p][r]
    }

    /// `qh[j] = q(j δ)` for `0 <= j <= 2N`.
    fn solve(qh: &[ComplexI], delta: f64, opts: GoursatOptions) -> Result<(Self, GoursatReport)> {
        let size = qh.len(); // 2N + 1
        let half_int = quad::cumulative_forward(qh, delta);
        let boundary: Vec<ComplexI> = half_int.iter().map(|v| v * 0.5).collect();

        let mut h = Triangle {
            rows: (0..size).map(|p| vec![boundary[p]; size - p]).collect(),
        };
        let mut residual = f64::INFINITY;
        for it in 1..=opts.max_iter {
            // inner ∫_0^τ along each row, then outer ∫_0^s along each column
            let inner: Vec<Vec<ComplexI>> = h
                .rows
                .iter()
                .enumerate()
                .map(|(p, row)| {
                    let g: Vec<ComplexI> = row.iter().enumerate().map(|(r, v)| qh[p + r] * v).collect();
                    quad::cumulative_forward(&g, delta)
                })
                .collect();
            let mut next: Vec<Vec<ComplexI>> = (0..size).map(|p| vec![boundary[p]; size - p]).collect();
            let mut column = Vec::with_capacity(size);
            for r in 0..size {
                column.clear();
                column.extend((0..size - r).map(|p| inner[p][r]));
                let outer = quad::cumulative_forward(&column, delta);
                for (p, v) in outer.into_iter().enumerate() {
                    next[p][r] += v;
                }
            }
            residual = next
                .iter()
                .zip(&h.rows)
                .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
                .fold(0.0, f64::max);
            h.rows = next;
            if residual < opts.tol {
                return Ok((
                    h,
                    GoursatReport {
                        iterations: it,
                        residual,
                    },
                ));
            }
        }
        Err(Error::NoConvergence {
            iterations: opts.max_iter,
            residual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::{ci, Grid1D};
    use crate::transmute::constant_q_kernel;

    #[test]
    fn zero_potential_gives_zero_kernel() {
        let g = Grid1D::symmetric(1.0, 101).unwrap();
        let q = ComplexSampled1D::constant(g, ci(0.0, 0.0));
        let (k, rep) = goursat_solve(&q, GoursatOptions::default()).unwrap();
        assert_eq!(k.max_abs(), 0.0);
        assert_eq!(rep.iterations, 1);
    }

    #[test]
    fn constant_potential_matches_closed_form() {
        let g = Grid1D::symmetric(1.0, 401).unwrap();
        let c = ci(1.0, 0.5);
        let q = ComplexSampled1D::constant(g, -c);
        let (k, rep) = goursat_solve(&q, GoursatOptions::default()).unwrap();
        let exact = constant_q_kernel(c, 1.0, 401).unwrap();
        let err = k.max_abs_diff(&exact).unwrap();
        assert!(err < 1e-9, "err = {err}");
        assert!(rep.iterations <= 25);
        let (d, a) = goursat_boundary_defect(&k, &q).unwrap();
        assert!(d < 1e-12 && a == 0.0);
    }

    #[test]
    fn asymmetric_potential_satisfies_boundary_conditions() {
        let g = Grid1D::symmetric(1.0, 201).unwrap();
        let q = ComplexSampled1D::from_fn(g, |x| ci(x + 0.3 * x * x, 0.2 * x.sin())).unwrap();
        let (k, _) = goursat_solve(&q, GoursatOptions::default()).unwrap();
        let (d, a) = goursat_boundary_defect(&k, &q).unwrap();
        assert!(d < 1e-10, "diag {d}");
        assert!(a < 1e-12, "anti {a}");
    }

    #[test]
    fn reports_non_convergence() {
        let g = Grid1D::symmetric(1.0, 51).unwrap();
        let q = ComplexSampled1D::constant(g, ci(-4.0, 0.0));
        let opts = GoursatOptions { max_iter: 2, tol: 1e-10 };
        assert!(matches!(
            goursat_solve(&q, opts),
            Err(Error::NoConvergence { iterations: 2, .. })
        ));
    }
}
