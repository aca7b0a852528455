//! Volterra transmutation operators for `A = -d²/dx² + q(x)` on `[-a, a]`.
//!
//! Sign convention: a constant potential is written `q = -c`, so that the
//! constant-coefficient operator reads `d²/dx² + c`.
//!
//! Kernels are tabulated on the butterfly `{(x, t): |t| <= |x| <= a}` of a
//! symmetric grid. Four kinds are supported: the plain kernel `K(x, t)`, the
//! cosine kernel `K(x, t; h)`, the sine kernel `K(x, t; ∞)` and the composite
//! kernel `𝐊(x, t; h)`.

mod goursat;
mod kernels;
mod operator;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numcore::{ComplexI, Grid1D};

pub use goursat::{goursat_boundary_defect, goursat_solve, GoursatOptions, GoursatReport};
pub use kernels::{
    composite_kernel, constant_q_composite_kernel, constant_q_kernel, cosine_kernel_from_plain,
    shift_h, sine_kernel_from_plain,
};
pub use operator::{verify_transmutation, Flavor, TransmutationOp, TransmutationResidual};

/// Which kernel a [`KernelGrid`] tabulates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum KernelKind {
    Plain,
    Cosine { h: ComplexI },
    Sine,
    Composite { h: ComplexI },
}

impl KernelKind {
    pub fn name(&self) -> &'static str {
        match self {
            KernelKind::Plain => "plain",
            KernelKind::Cosine { .. } => "cosine",
            KernelKind::Sine => "sine",
            KernelKind::Composite { .. } => "composite",
        }
    }

    /// The parameter `h`, if the kind carries one.
    pub fn h(&self) -> Option<ComplexI> {
        match self {
            KernelKind::Cosine { h } | KernelKind::Composite { h } => Some(*h),
            _ => None,
        }
    }
}

/// A kernel tabulated on the butterfly region of a symmetric grid.
///
/// Row `i` holds `x = node(i)`; with `m = i - c` (`c` the middle index) it
/// stores the `2|m| + 1` values at `t = node(c - |m|) ..= node(c + |m|)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelGrid {
    grid: Grid1D,
    rows: Vec<Vec<ComplexI>>,
    kind: KernelKind,
}

impl KernelGrid {
    pub(crate) fn from_rows(grid: Grid1D, rows: Vec<Vec<ComplexI>>, kind: KernelKind) -> Self {
        debug_assert_eq!(rows.len(), grid.len());
        Self { grid, rows, kind }
    }

    /// Tabulate `k(x, t)` on the butterfly of `grid`.
    pub fn from_fn(
        grid: Grid1D,
        kind: KernelKind,
        k: impl Fn(f64, f64) -> ComplexI + Sync,
    ) -> Result<Self> {
        use rayon::prelude::*;
        check_symmetric(&grid)?;
        let c = grid.middle_index();
        let rows = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let w = i.abs_diff(c);
                let x = grid.node(i);
                (c - w..=c + w).map(|j| k(x, grid.node(j))).collect()
            })
            .collect();
        Ok(Self::from_rows(grid, rows, kind))
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn half_width(&self) -> f64 {
        self.grid.a_right()
    }

    pub fn n_points(&self) -> usize {
        self.grid.len()
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    /// Stored `t`-values at `x = node(i)`, ordered by increasing `t`.
    pub fn row(&self, i: usize) -> &[ComplexI] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<ComplexI>] {
        &self.rows
    }

    /// Grid index of the first stored `t` in row `i`.
    pub fn row_start(&self, i: usize) -> usize {
        let c = self.grid.middle_index();
        c - i.abs_diff(c)
    }

    /// `K(node(i), node(j))`, or `None` outside `|t| <= |x|`.
    pub fn at(&self, i: usize, j: usize) -> Option<ComplexI> {
        if i >= self.grid.len() || j >= self.grid.len() {
            return None;
        }
        let start = self.row_start(i);
        let row = &self.rows[i];
        (j >= start && j < start + row.len()).then(|| row[j - start])
    }

    pub fn max_abs(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Max-norm difference between two kernels on the same grid.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.grid.ensure_same(&other.grid, "kernel tables")?;
        Ok(self
            .rows
            .iter()
            .zip(&other.rows)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max))
    }

    /// `(x, t, K)` for every stored node.
    pub fn triples(&self) -> impl Iterator<Item = (f64, f64, ComplexI)> + '_ {
        self.rows.iter().enumerate().flat_map(move |(i, row)| {
            let start = self.row_start(i);
            let x = self.grid.node(i);
            row.iter()
                .enumerate()
                .map(move |(k, &v)| (x, self.grid.node(start + k), v))
        })
    }

    pub(crate) fn expect_kind(&self, expected: &'static str) -> Result<()> {
        if self.kind.name() == expected {
            Ok(())
        } else {
            Err(Error::KernelKind {
                expected,
                got: self.kind.name(),
            })
        }
    }
}

pub(crate) fn check_symmetric(grid: &Grid1D) -> Result<()> {
    if grid.is_symmetric() {
        Ok(())
    } else {
        Err(Error::InvalidGrid(format!(
            "transmutation kernels need a symmetric interval, got [{}, {}]",
            grid.a_left(),
            grid.a_right()
        )))
    }
}
