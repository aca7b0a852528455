use serde::Serialize;

use super::Bicomplex;
use crate::error::Result;
use crate::numcore::{ComplexI, ComplexSampled2D, Grid1D};

/// A bicomplex field `W = W1 + j W2` on a tensor grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BicomplexField {
    pub sc: ComplexSampled2D,
    pub vec: ComplexSampled2D,
}

impl BicomplexField {
    pub fn new(sc: ComplexSampled2D, vec: ComplexSampled2D) -> Result<Self> {
        sc.same_grid(&vec)?;
        Ok(Self { sc, vec })
    }

    pub fn from_fn(
        grid_x: Grid1D,
        grid_y: Grid1D,
        f: impl Fn(f64, f64) -> Bicomplex + Sync,
    ) -> Result<Self> {
        let sc = ComplexSampled2D::from_fn(grid_x, grid_y, |x, y| f(x, y).sc)?;
        let vec = ComplexSampled2D::from_fn(grid_x, grid_y, |x, y| f(x, y).vec)?;
        Ok(Self { sc, vec })
    }

    pub fn grid_x(&self) -> &Grid1D {
        self.sc.grid_x()
    }

    pub fn grid_y(&self) -> &Grid1D {
        self.sc.grid_y()
    }

    pub fn get(&self, ix: usize, iy: usize) -> Bicomplex {
        Bicomplex::new(self.sc.get(ix, iy), self.vec.get(ix, iy))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            sc: self.sc.add_scaled(&other.sc, ComplexI::new(1.0, 0.0))?,
            vec: self.vec.add_scaled(&other.vec, ComplexI::new(1.0, 0.0))?,
        })
    }

    /// Pointwise product with a constant.
    pub fn mul_const(&self, a: Bicomplex) -> Result<Self> {
        Ok(Self {
            sc: self.sc.scale(a.sc).add_scaled(&self.vec, -a.vec)?,
            vec: self.vec.scale(a.sc).add_scaled(&self.sc, a.vec)?,
        })
    }

    /// Max of `|W - V|` (Euclidean in the four real components).
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.sc.same_grid(&other.sc)?;
        Ok(self
            .sc
            .values()
            .iter()
            .zip(self.vec.values())
            .zip(other.sc.values().iter().zip(other.vec.values()))
            .map(|((a, b), (c, d))| ((a - c).norm_sqr() + (b - d).norm_sqr()).sqrt())
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.sc
            .values()
            .iter()
            .zip(self.vec.values())
            .map(|(a, b)| (a.norm_sqr() + b.norm_sqr()).sqrt())
            .fold(0.0, f64::max)
    }
}

/// Max over nodes at least `margin >= 1` away from the edges of
/// `|∂̄W - (∂̄φ/φ) W̄|`, with `∂̄ = ½(∂x + j∂y)` by central differences.
pub fn vekua_residual(w: &BicomplexField, phi: &ComplexSampled2D, margin: usize) -> Result<f64> {
    w.sc.same_grid(phi)?;
    let margin = margin.max(1);
    let (w1x, w1y) = (w.sc.partial_x(), w.sc.partial_y());
    let (w2x, w2y) = (w.vec.partial_x(), w.vec.partial_y());
    let (px, py) = (phi.partial_x(), phi.partial_y());
    let (nx, ny) = (phi.nx(), phi.ny());
    let mut worst = 0.0_f64;
    for iy in margin..ny.saturating_sub(margin) {
        for ix in margin..nx.saturating_sub(margin) {
            let (a, b) = (w.sc.get(ix, iy), w.vec.get(ix, iy));
            let p = phi.get(ix, iy);
            let (fx, fy) = (px.get(ix, iy), py.get(ix, iy));
            let lhs_sc = (w1x.get(ix, iy) - w2y.get(ix, iy)) * 0.5;
            let lhs_vec = (w1y.get(ix, iy) + w2x.get(ix, iy)) * 0.5;
            let k = (p * 2.0).inv();
            let rhs_sc = (fx * a + fy * b) * k;
            let rhs_vec = (fy * a - fx * b) * k;
            let r = ((lhs_sc - rhs_sc).norm_sqr() + (lhs_vec - rhs_vec).norm_sqr()).sqrt();
            worst = worst.max(r);
        }
    }
    Ok(worst)
}
