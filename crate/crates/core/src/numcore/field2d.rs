use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::diff;
use super::grid::Grid1D;
use super::sampled::{max_abs_diff_slices, ComplexI};
use crate::error::{Error, Result};

/// A `C_i`-valued field on the tensor grid `grid_x x grid_y`.
///
/// Storage is row-major in `y`: the sample at `(x_i, y_j)` lives at
/// `j * nx + i`, so a row is a contiguous slice along `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexSampled2D {
    grid_x: Grid1D,
    grid_y: Grid1D,
    values: Vec<ComplexI>,
}

impl ComplexSampled2D {
    pub fn new(grid_x: Grid1D, grid_y: Grid1D, values: Vec<ComplexI>) -> Result<Self> {
        if values.len() != grid_x.len() * grid_y.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a {}x{} grid",
                values.len(),
                grid_x.len(),
                grid_y.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            grid_x,
            grid_y,
            values,
        })
    }

    pub fn zeros(grid_x: Grid1D, grid_y: Grid1D) -> Self {
        Self {
            grid_x,
            grid_y,
            values: vec![ComplexI::new(0.0, 0.0); grid_x.len() * grid_y.len()],
        }
    }

    pub fn from_fn(
        grid_x: Grid1D,
        grid_y: Grid1D,
        f: impl Fn(f64, f64) -> ComplexI + Sync,
    ) -> Result<Self> {
        let xs = grid_x.nodes();
        let ys = grid_y.nodes();
        let values = ys
            .par_iter()
            .flat_map_iter(|&y| xs.iter().map(move |&x| (x, y)).collect::<Vec<_>>())
            .map(|(x, y)| f(x, y))
            .collect();
        Self::new(grid_x, grid_y, values)
    }

    /// Tabulate from node indices `(ix, iy)`.
    pub fn from_fn_indexed(
        grid_x: Grid1D,
        grid_y: Grid1D,
        f: impl Fn(usize, usize) -> ComplexI + Sync,
    ) -> Self {
        let nx = grid_x.len();
        let values = (0..nx * grid_y.len())
            .into_par_iter()
            .map(|idx| f(idx % nx, idx / nx))
            .collect();
        Self::from_parts(grid_x, grid_y, values)
    }

    /// `u(x_i, y_j) = fx[i] * fy[j]`.
    pub fn outer(grid_x: Grid1D, grid_y: Grid1D, fx: &[ComplexI], fy: &[ComplexI]) -> Self {
        assert_eq!(fx.len(), grid_x.len());
        assert_eq!(fy.len(), grid_y.len());
        let mut values = Vec::with_capacity(fx.len() * fy.len());
        for &b in fy {
            values.extend(fx.iter().map(|&a| a * b));
        }
        Self {
            grid_x,
            grid_y,
            values,
        }
    }

    pub(crate) fn from_parts(grid_x: Grid1D, grid_y: Grid1D, values: Vec<ComplexI>) -> Self {
        debug_assert_eq!(values.len(), grid_x.len() * grid_y.len());
        Self {
            grid_x,
            grid_y,
            values,
        }
    }

    pub fn grid_x(&self) -> &Grid1D {
        &self.grid_x
    }

    pub fn grid_y(&self) -> &Grid1D {
        &self.grid_y
    }

    pub fn nx(&self) -> usize {
        self.grid_x.len()
    }

    pub fn ny(&self) -> usize {
        self.grid_y.len()
    }

    pub fn values(&self) -> &[ComplexI] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [ComplexI] {
        &mut self.values
    }

    pub fn get(&self, ix: usize, iy: usize) -> ComplexI {
        self.values[iy * self.nx() + ix]
    }

    pub fn set(&mut self, ix: usize, iy: usize, v: ComplexI) {
        let nx = self.nx();
        self.values[iy * nx + ix] = v;
    }

    /// Samples along `x` at fixed `y_j`.
    pub fn row(&self, iy: usize) -> &[ComplexI] {
        let nx = self.nx();
        &self.values[iy * nx..(iy + 1) * nx]
    }

    /// Samples along `y` at fixed `x_i`.
    pub fn column(&self, ix: usize) -> Vec<ComplexI> {
        (0..self.ny()).map(|iy| self.get(ix, iy)).collect()
    }

    pub fn same_grid(&self, other: &Self) -> Result<()> {
        self.grid_x.ensure_same(&other.grid_x, "x grid")?;
        self.grid_y.ensure_same(&other.grid_y, "y grid")
    }

    pub fn map(&self, f: impl Fn(ComplexI) -> ComplexI + Sync) -> Self {
        Self::from_parts(
            self.grid_x,
            self.grid_y,
            self.values.par_iter().map(|&v| f(v)).collect(),
        )
    }

    pub fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(ComplexI, ComplexI) -> ComplexI + Sync,
    ) -> Result<Self> {
        self.same_grid(other)?;
        Ok(Self::from_parts(
            self.grid_x,
            self.grid_y,
            self.values
                .par_iter()
                .zip(other.values.par_iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn scale(&self, c: ComplexI) -> Self {
        self.map(|v| v * c)
    }

    pub fn add_scaled(&self, other: &Self, c: ComplexI) -> Result<Self> {
        self.zip_with(other, |a, b| a + b * c)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_grid(other)?;
        Ok(max_abs_diff_slices(&self.values, &other.values))
    }

    /// Maximum modulus over nodes at least `margin` away from every edge.
    pub fn max_abs_interior(&self, margin: usize) -> f64 {
        let (nx, ny) = (self.nx(), self.ny());
        let mut m = 0.0_f64;
        for iy in margin..ny.saturating_sub(margin) {
            for ix in margin..nx.saturating_sub(margin) {
                m = m.max(self.get(ix, iy).norm());
            }
        }
        m
    }

    /// Apply a one-dimensional map to every row (samples along `x`).
    pub fn map_rows(&self, f: impl Fn(&[ComplexI]) -> Vec<ComplexI> + Sync) -> Self {
        let nx = self.nx();
        let values: Vec<ComplexI> = self
            .values
            .par_chunks(nx)
            .flat_map_iter(|row| {
                let out = f(row);
                assert_eq!(out.len(), row.len());
                out
            })
            .collect();
        Self::from_parts(self.grid_x, self.grid_y, values)
    }

    /// Apply a one-dimensional map to every column (samples along `y`).
    pub fn map_columns(&self, f: impl Fn(&[ComplexI]) -> Vec<ComplexI> + Sync) -> Self {
        let (nx, ny) = (self.nx(), self.ny());
        let cols: Vec<Vec<ComplexI>> = (0..nx)
            .into_par_iter()
            .map(|ix| {
                let col = self.column(ix);
                let out = f(&col);
                assert_eq!(out.len(), ny);
                out
            })
            .collect();
        let mut values = vec![ComplexI::new(0.0, 0.0); nx * ny];
        for (ix, col) in cols.into_iter().enumerate() {
            for (iy, v) in col.into_iter().enumerate() {
                values[iy * nx + ix] = v;
            }
        }
        Self::from_parts(self.grid_x, self.grid_y, values)
    }

    pub fn partial_x(&self) -> Self {
        let h = self.grid_x.step();
        self.map_rows(|row| diff::first_derivative(row, h))
    }

    pub fn partial_y(&self) -> Self {
        let h = self.grid_y.step();
        self.map_columns(|col| diff::first_derivative(col, h))
    }

    /// Five-point Laplacian at interior nodes; the boundary ring is zero.
    pub fn laplacian_5pt(&self) -> Self {
        let (nx, ny) = (self.nx(), self.ny());
        let hx2 = self.grid_x.step().powi(2);
        let hy2 = self.grid_y.step().powi(2);
        let mut out = Self::zeros(self.grid_x, self.grid_y);
        for iy in 1..ny - 1 {
            for ix in 1..nx - 1 {
                let c = self.get(ix, iy);
                let dxx = (self.get(ix - 1, iy) - c * 2.0 + self.get(ix + 1, iy)) / hx2;
                let dyy = (self.get(ix, iy - 1) - c * 2.0 + self.get(ix, iy + 1)) / hy2;
                out.set(ix, iy, dxx + dyy);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplacian_exact_on_quadratics() {
        let g = Grid1D::symmetric(1.0, 21).unwrap();
        let u = ComplexSampled2D::from_fn(g, g, |x, y| ComplexI::new(x * x - y * y + x * y, 3.0 * x * x)).unwrap();
        let lap = u.laplacian_5pt();
        for iy in 1..20 {
            for ix in 1..20 {
                assert!((lap.get(ix, iy) - ComplexI::new(0.0, 6.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn rows_and_columns_index_consistently() {
        let gx = Grid1D::new(0.0, 1.0, 5).unwrap();
        let gy = Grid1D::new(0.0, 2.0, 7).unwrap();
        let u = ComplexSampled2D::from_fn(gx, gy, |x, y| ComplexI::new(x, y)).unwrap();
        assert_eq!(u.row(3)[2], ComplexI::new(0.5, 1.0));
        assert_eq!(u.column(4)[6], ComplexI::new(1.0, 2.0));
        let swapped = u.map_columns(|c| c.iter().rev().copied().collect());
        assert_eq!(swapped.get(1, 0), u.get(1, 6));
    }
}
