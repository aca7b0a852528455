use rayon::prelude::*;

use super::{KernelGrid, KernelKind};
use crate::error::Result;
use crate::numcore::bessel::{j0_of_sqrt, j1_ratio_of_sqrt};
use crate::numcore::{quad, ComplexI, Grid1D};

/// Closed-form plain kernel for the constant potential `q = -c`:
///
/// ```text
/// K(x, t) = -(c (x + t) / 4) · 2 J1(√w) / √w,   w = c (x² - t²)
/// ```
///
/// which equals `-½ √w J1(√w) / (x - t)` away from the diagonal and takes
/// the value `-c x / 2` on it. The series in `w` is entire, so the diagonal,
/// the anti-diagonal and negative radicands need no special casing.
pub fn constant_q_kernel(c: ComplexI, half_width: f64, n_points: usize) -> Result<KernelGrid> {
    let grid = Grid1D::symmetric(half_width, n_points)?;
    KernelGrid::from_fn(grid, KernelKind::Plain, move |x, t| {
        plain_closed_form(c, x, t)
    })
}

/// Closed-form composite kernel for `q = -c`:
/// `𝐊(x, t; h) = K(x, t) + (h / 2) J0(√(c (x² - t²)))`.
pub fn constant_q_composite_kernel(
    c: ComplexI,
    h: ComplexI,
    half_width: f64,
    n_points: usize,
) -> Result<KernelGrid> {
    let grid = Grid1D::symmetric(half_width, n_points)?;
    KernelGrid::from_fn(grid, KernelKind::Composite { h }, move |x, t| {
        plain_closed_form(c, x, t) + h * 0.5 * j0_of_sqrt(c * (x * x - t * t))
    })
}

pub(crate) fn plain_closed_form(c: ComplexI, x: f64, t: f64) -> ComplexI {
    -c * ((x + t) * 0.25) * j1_ratio_of_sqrt(c * (x * x - t * t))
}

/// `K(x, t; ∞) = K(x, t) - K(x, -t)`.
pub fn sine_kernel_from_plain(k: &KernelGrid) -> Result<KernelGrid> {
    k.expect_kind("plain")?;
    let rows = k.rows().par_iter().map(|row| odd_part(row)).collect();
    Ok(KernelGrid::from_rows(*k.grid(), rows, KernelKind::Sine))
}

/// `K(x, t; h) = h + K(x, t) + K(x, -t) + h ∫_t^x (K(x, s) - K(x, -s)) ds`.
pub fn cosine_kernel_from_plain(k: &KernelGrid, h: ComplexI) -> Result<KernelGrid> {
    k.expect_kind("plain")?;
    let step = k.grid().step();
    let rows = (0..k.n_points())
        .into_par_iter()
        .map(|i| {
            let row = k.row(i);
            let tail = integral_to_x(&odd_part(row), step, x_position(k, i));
            (0..row.len())
                .map(|j| h + row[j] + row[row.len() - 1 - j] + h * tail[j])
                .collect()
        })
        .collect();
    Ok(KernelGrid::from_rows(*k.grid(), rows, KernelKind::Cosine { h }))
}

/// `𝐊(x, t; h) = h/2 + K(x, t) + (h/2) ∫_t^x (K(x, s) - K(x, -s)) ds`.
pub fn composite_kernel(k: &KernelGrid, h: ComplexI) -> Result<KernelGrid> {
    k.expect_kind("plain")?;
    Ok(KernelGrid::from_rows(
        *k.grid(),
        half_shift_rows(k, h),
        KernelKind::Composite { h },
    ))
}

/// Re-parametrise a composite kernel from `h1` to `h`:
///
/// ```text
/// 𝐊(x, t; h) = (h - h1)/2 + 𝐊(x, t; h1) + ((h - h1)/2) ∫_t^x (𝐊(x, s; h1) - 𝐊(x, -s; h1)) ds
/// ```
pub fn shift_h(k: &KernelGrid, h: ComplexI) -> Result<KernelGrid> {
    k.expect_kind("composite")?;
    let h1 = k.kind().h().unwrap_or_default();
    Ok(KernelGrid::from_rows(
        *k.grid(),
        half_shift_rows(k, h - h1),
        KernelKind::Composite { h },
    ))
}

/// Rows of `d/2 + k(x, t) + (d/2) ∫_t^x (k(x, s) - k(x, -s)) ds`.
fn half_shift_rows(k: &KernelGrid, d: ComplexI) -> Vec<Vec<ComplexI>> {
    let step = k.grid().step();
    let half = d * 0.5;
    (0..k.n_points())
        .into_par_iter()
        .map(|i| {
            let row = k.row(i);
            let tail = integral_to_x(&odd_part(row), step, x_position(k, i));
            row.iter()
                .zip(&tail)
                .map(|(&v, &s)| half + v + half * s)
                .collect()
        })
        .collect()
}

/// `row[j] - row[mirror(j)]`: the part odd in `t`.
fn odd_part(row: &[ComplexI]) -> Vec<ComplexI> {
    let n = row.len();
    (0..n).map(|j| row[j] - row[n - 1 - j]).collect()
}

/// Position of `t = x` within row `i`.
fn x_position(k: &KernelGrid, i: usize) -> usize {
    i - k.row_start(i)
}

/// `out[j] = ∫_{t_j}^{x} v` for `v` odd in `t`, where `x` sits at position
/// `base`. The exact result is even in `t`; it is symmetrised so that the odd
/// part of every derived kernel stays independent of `h` to rounding.
fn integral_to_x(v: &[ComplexI], step: f64, base: usize) -> Vec<ComplexI> {
    let raw = quad::cumulative_through(v, step, base);
    let n = raw.len();
    (0..n).map(|j| -(raw[j] + raw[n - 1 - j]) * 0.5).collect()
}
