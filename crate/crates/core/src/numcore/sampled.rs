use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::diff;
use super::grid::Grid1D;
use super::quad;
use crate::error::{Error, Result};

pub type ComplexI = Complex64;

/// Modulus below which a sample counts as a zero of the function.
pub const VANISHING_TOL: f64 = 1e-12;

/// A `C_i`-valued function tabulated on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexSampled1D {
    grid: Grid1D,
    values: Vec<ComplexI>,
}

impl ComplexSampled1D {
    pub fn new(grid: Grid1D, values: Vec<ComplexI>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.n_points()
            )));
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> ComplexI) -> Result<Self> {
        let values = grid.nodes().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    pub fn constant(grid: Grid1D, c: ComplexI) -> Self {
        Self {
            grid,
            values: vec![c; grid.n_points()],
        }
    }

    /// Build from values already known to be finite and of the right length.
    pub(crate) fn from_parts(grid: Grid1D, values: Vec<ComplexI>) -> Self {
        debug_assert_eq!(values.len(), grid.n_points());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[ComplexI] {
        &self.values
    }

    pub fn into_values(self) -> Vec<ComplexI> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, i: usize) -> ComplexI {
        self.values[i]
    }

    /// Value at an arbitrary point of the grid's interval (cubic interpolation).
    pub fn eval(&self, x: f64) -> ComplexI {
        let pos = (x - self.grid.a_left()) / self.grid.step();
        quad::interpolate_cubic(&self.values, pos)
    }

    pub fn map(&self, f: impl Fn(ComplexI) -> ComplexI) -> Self {
        Self::from_parts(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(ComplexI, ComplexI) -> ComplexI,
    ) -> Result<Self> {
        self.grid.ensure_same(&other.grid, "zip_with")?;
        Ok(Self::from_parts(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn scale(&self, c: ComplexI) -> Self {
        self.map(|v| v * c)
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &Self, c: ComplexI) -> Result<Self> {
        self.zip_with(other, |a, b| a + b * c)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.grid.ensure_same(&other.grid, "max_abs_diff")?;
        Ok(max_abs_diff_slices(&self.values, &other.values))
    }

    /// Maximum of `|self - other|` over indices in `range`.
    pub fn max_abs_diff_on(&self, other: &Self, range: std::ops::Range<usize>) -> Result<f64> {
        self.grid.ensure_same(&other.grid, "max_abs_diff_on")?;
        Ok(max_abs_diff_slices(&self.values[range.clone()], &other.values[range]))
    }

    /// Reject functions with a sample of modulus below [`VANISHING_TOL`], or
    /// whose chord between neighbouring samples passes that close to zero
    /// (a sign change between nodes).
    pub fn ensure_nonvanishing(&self) -> Result<()> {
        for (i, v) in self.values.iter().enumerate() {
            let m = v.norm();
            if m < VANISHING_TOL {
                return Err(Error::VanishingFunction {
                    x: self.grid.node(i),
                    modulus: m,
                });
            }
        }
        for (i, w) in self.values.windows(2).enumerate() {
            let d = w[1] - w[0];
            let len2 = d.norm_sqr();
            if len2 == 0.0 {
                continue;
            }
            let s = (-(w[0].conj() * d).re / len2).clamp(0.0, 1.0);
            let m = (w[0] + d * s).norm();
            if m < VANISHING_TOL {
                return Err(Error::VanishingFunction {
                    x: self.grid.node(i) + s * self.grid.step(),
                    modulus: m,
                });
            }
        }
        Ok(())
    }

    /// `F(x_i) = \int_{x_{x0}}^{x_i} f(s) ds`, vanishing exactly at `x0_index`.
    pub fn cumulative_integral(&self, x0_index: usize) -> Result<Self> {
        self.grid.check_index(x0_index)?;
        Ok(Self::from_parts(
            self.grid,
            quad::cumulative_from(&self.values, self.grid.step(), x0_index),
        ))
    }

    /// Integral over the whole grid interval.
    pub fn integral(&self) -> ComplexI {
        quad::integrate(&self.values, self.grid.step())
    }

    pub fn fd_second_derivative(&self) -> Result<Self> {
        if self.len() < 5 {
            return Err(Error::GridTooSmall {
                need: 5,
                got: self.len(),
            });
        }
        Ok(Self::from_parts(
            self.grid,
            diff::second_derivative(&self.values, self.grid.step()),
        ))
    }

    pub fn fd_first_derivative(&self) -> Self {
        Self::from_parts(
            self.grid,
            diff::first_derivative(&self.values, self.grid.step()),
        )
    }

    /// Fourth-order derivative estimate at one node.
    pub fn derivative_at(&self, i: usize) -> Result<ComplexI> {
        self.grid.check_index(i)?;
        if self.len() < 5 {
            return Err(Error::GridTooSmall {
                need: 5,
                got: self.len(),
            });
        }
        Ok(diff::first_derivative_at(&self.values, self.grid.step(), i))
    }
}

pub(crate) fn max_abs_diff_slices(a: &[ComplexI], b: &[ComplexI]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> ComplexI {
        ComplexI::new(re, im)
    }

    #[test]
    fn integral_of_one_is_x() {
        let g = Grid1D::new(0.0, 1.0, 101).unwrap();
        let f = ComplexSampled1D::constant(g, c(1.0, 0.0));
        let big_f = f.cumulative_integral(0).unwrap();
        for i in 0..g.len() {
            assert_abs_diff_eq!(big_f.value(i).re, g.node(i), epsilon = 1e-14);
        }
    }

    #[test]
    fn integral_of_s_from_center() {
        let g = Grid1D::symmetric(1.0, 201).unwrap();
        let f = ComplexSampled1D::from_fn(g, |x| c(x, 0.0)).unwrap();
        let big_f = f.cumulative_integral(100).unwrap();
        assert_eq!(big_f.value(100), c(0.0, 0.0));
        for i in 0..g.len() {
            let x = g.node(i);
            assert_abs_diff_eq!(big_f.value(i).re, x * x / 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn integral_of_complex_exponential() {
        // Antiderivative oracle: \int_0^1 e^{is} ds = -i (e^{i} - 1).
        let g = Grid1D::new(0.0, 1.0, 2001).unwrap();
        let f = ComplexSampled1D::from_fn(g, |x| c(0.0, x).exp()).unwrap();
        let big_f = f.cumulative_integral(0).unwrap();
        let exact = c(0.0, -1.0) * (c(0.0, 1.0).exp() - 1.0);
        assert_abs_diff_eq!(exact.re, 0.841_470_984_807_896_5, epsilon = 1e-15);
        assert_abs_diff_eq!(exact.im, 0.459_697_694_131_860_3, epsilon = 1e-15);
        assert!((big_f.value(2000) - exact).norm() < 1e-14);
        // every node, including odd offsets
        for i in 0..g.len() {
            let x = g.node(i);
            let e = c(0.0, -1.0) * (c(0.0, x).exp() - 1.0);
            assert!((big_f.value(i) - e).norm() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_index_and_nonfinite() {
        let g = Grid1D::new(0.0, 1.0, 5).unwrap();
        let f = ComplexSampled1D::constant(g, c(1.0, 0.0));
        assert!(matches!(
            f.cumulative_integral(5),
            Err(Error::IndexOutOfRange { index: 5, len: 5 })
        ));
        assert!(matches!(
            ComplexSampled1D::new(g, vec![c(f64::NAN, 0.0); 5]),
            Err(Error::NonFinite(0))
        ));
        assert!(ComplexSampled1D::new(g, vec![c(1.0, 0.0); 4]).is_err());
    }

    #[test]
    fn second_derivative_examples() {
        let g = Grid1D::symmetric(1.0, 201).unwrap();
        let sq = ComplexSampled1D::from_fn(g, |x| c(x * x, 0.0)).unwrap();
        let d = sq.fd_second_derivative().unwrap();
        for v in d.values() {
            assert_abs_diff_eq!(v.re, 2.0, epsilon = 1e-8);
        }
        let k = ComplexSampled1D::constant(g, c(3.0, -1.0));
        assert!(k.fd_second_derivative().unwrap().max_abs() < 1e-9);

        let sin = ComplexSampled1D::from_fn(g, |x| c(x.sin(), 0.0)).unwrap();
        let d = sin.fd_second_derivative().unwrap();
        let h = g.step();
        for i in 0..g.len() {
            let tol = if i == 0 || i == g.len() - 1 { 2.0 * h } else { h * h };
            assert!((d.value(i).re + g.node(i).sin()).abs() < tol);
        }
    }

    #[test]
    fn second_derivative_needs_five_points() {
        let g = Grid1D::new(0.0, 1.0, 3).unwrap();
        let f = ComplexSampled1D::constant(g, c(1.0, 0.0));
        assert!(matches!(
            f.fd_second_derivative(),
            Err(Error::GridTooSmall { need: 5, got: 3 })
        ));
    }

    #[test]
    fn vanishing_function_detected() {
        let g = Grid1D::symmetric(1.0, 11).unwrap();
        let f = ComplexSampled1D::from_fn(g, |x| c(x, 0.0)).unwrap();
        assert!(matches!(
            f.ensure_nonvanishing(),
            Err(Error::VanishingFunction { .. })
        ));
    }
}
