//! Solutions of `-Δu + q(x, y) u = 0` with `q = q1(x) + q2(y)`, built from
//! two L-bases: `{phi_k}` of `f'' = q1 f` and `{psi_k}` of `g'' = q2 g`.
//!
//! ```text
//! u_0 = f(x) g(y)
//! u_m = sum_{even k <= n} (-1)^{k/2}     C(n, k) phi_{n-k}(x) psi_k(y),  n = (m+1)/2, odd m
//! u_m = sum_{odd k <= n}  (-1)^{(k+1)/2} C(n, k) phi_{n-k}(x) psi_k(y),  n = m/2,     even m
//! ```
//!
//! With `f = g = 1` these are the harmonic polynomials `p_m`.

use rayon::prelude::*;
use serde::Serialize;

use crate::bicomplex::{vekua_residual, BicomplexField};
use crate::error::{Error, Result};
use crate::lbasis::LBasis;
use crate::numcore::{quad, ComplexI, ComplexSampled1D, ComplexSampled2D, Grid1D};
use crate::transmute::TransmutationOp;

/// Terms `(coefficient, x-index, y-index)` of member `m`.
pub fn member_terms(m: usize) -> Vec<(f64, usize, usize)> {
    if m == 0 {
        return vec![(1.0, 0, 0)];
    }
    let (n, first_k) = if m % 2 == 1 { ((m + 1) / 2, 0) } else { (m / 2, 1) };
    (first_k..=n)
        .step_by(2)
        .map(|k| {
            let e = if m % 2 == 1 { k / 2 } else { (k + 1) / 2 };
            let sign = if e % 2 == 0 { 1.0 } else { -1.0 };
            (sign * binomial(n, k), n - k, k)
        })
        .collect()
}

/// Highest basis index used by members `0..=m_max`.
pub fn required_depth(m_max: usize) -> usize {
    m_max.div_ceil(2)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionFamily2D {
    #[serde(skip)]
    basis_x: LBasis,
    #[serde(skip)]
    basis_y: LBasis,
    /// One-dimensional factors: `phi_k` (or `(x - x0)^k`) and `psi_k`.
    #[serde(skip)]
    factors_x: Vec<ComplexSampled1D>,
    #[serde(skip)]
    factors_y: Vec<ComplexSampled1D>,
    #[serde(skip)]
    slopes_x: Vec<ComplexSampled1D>,
    #[serde(skip)]
    slopes_y: Vec<ComplexSampled1D>,
    center: (f64, f64),
    m_max: usize,
    members: Vec<ComplexSampled2D>,
    q_field: ComplexSampled2D,
}

impl SolutionFamily2D {
    pub fn basis_x(&self) -> &LBasis {
        &self.basis_x
    }

    pub fn basis_y(&self) -> &LBasis {
        &self.basis_y
    }

    pub fn center(&self) -> (f64, f64) {
        self.center
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn members(&self) -> &[ComplexSampled2D] {
        &self.members
    }

    pub fn member(&self, m: usize) -> &ComplexSampled2D {
        &self.members[m]
    }

    pub fn q_field(&self) -> &ComplexSampled2D {
        &self.q_field
    }

    pub fn grid_x(&self) -> &Grid1D {
        self.basis_x.grid()
    }

    pub fn grid_y(&self) -> &Grid1D {
        self.basis_y.grid()
    }

    /// Replace the finite-difference potential by exact `q1(x) + q2(y)`.
    pub fn with_potential(
        mut self,
        q1: impl Fn(f64) -> ComplexI + Sync,
        q2: impl Fn(f64) -> ComplexI + Sync,
    ) -> Result<Self> {
        self.q_field = ComplexSampled2D::from_fn(*self.grid_x(), *self.grid_y(), |x, y| q1(x) + q2(y))?;
        Ok(self)
    }

    /// `u_m(x, y)` at an arbitrary point, by cubic interpolation of the
    /// one-dimensional factors.
    pub fn eval_member(&self, m: usize, x: f64, y: f64) -> ComplexI {
        member_terms(m)
            .iter()
            .map(|&(c, a, b)| self.factors_x[a].eval(x) * self.factors_y[b].eval(y) * c)
            .sum()
    }

    /// `(∂u_m/∂x, ∂u_m/∂y)` at an arbitrary point, from interpolated
    /// central differences of the factors.
    pub fn eval_member_gradient(&self, m: usize, x: f64, y: f64) -> (ComplexI, ComplexI) {
        let zero = ComplexI::new(0.0, 0.0);
        member_terms(m).iter().fold((zero, zero), |(gx, gy), &(c, a, b)| {
            let (fx, fy) = (&self.factors_x[a], &self.factors_y[b]);
            let dfx = self.slopes_x[a].eval(x);
            let dfy = self.slopes_y[b].eval(y);
            (gx + dfx * fy.eval(y) * c, gy + fx.eval(x) * dfy * c)
        })
    }

    /// Keep only members `0..=m`.
    pub fn truncated(&self, m: usize) -> Self {
        let mut out = self.clone();
        out.m_max = m.min(self.m_max);
        out.members.truncate(out.m_max + 1);
        out
    }
}

fn slopes(factors: &[ComplexSampled1D]) -> Vec<ComplexSampled1D> {
    factors.iter().map(|f| f.fd_first_derivative()).collect()
}

fn assemble(m_max: usize, fx: &[ComplexSampled1D], fy: &[ComplexSampled1D]) -> Vec<ComplexSampled2D> {
    let (gx, gy) = (*fx[0].grid(), *fy[0].grid());
    let px: Vec<&[ComplexI]> = fx.iter().map(|p| p.values()).collect();
    let py: Vec<&[ComplexI]> = fy.iter().map(|p| p.values()).collect();
    (0..=m_max)
        .into_par_iter()
        .map(|m| {
            let terms = member_terms(m);
            ComplexSampled2D::from_fn_indexed(gx, gy, |ix, iy| {
                terms
                    .iter()
                    .map(|&(c, a, b)| px[a][ix] * py[b][iy] * c)
                    .sum()
            })
        })
        .collect()
}

/// `q = f''/f` by second differences.
fn fd_potential(f: &ComplexSampled1D) -> Result<ComplexSampled1D> {
    f.fd_second_derivative()?.zip_with(f, |d2, v| d2 / v)
}

/// The family `u_0 ... u_{m_max}` of the two bases. The potential is taken
/// from second differences of `f` and `g`; see [`SolutionFamily2D::with_potential`].
pub fn build_family(basis_x: &LBasis, basis_y: &LBasis, m_max: usize) -> Result<SolutionFamily2D> {
    let need = required_depth(m_max);
    basis_x.ensure_depth(need)?;
    basis_y.ensure_depth(need)?;
    for (b, name) in [(basis_x, "f"), (basis_y, "g")] {
        let v = b.f().value(b.x0_index());
        if (v - 1.0).norm() > 1e-12 {
            return Err(Error::Normalization(format!("{name}(center) = {v}, expected 1")));
        }
    }
    let (gx, gy) = (*basis_x.grid(), *basis_y.grid());
    let factors_x = basis_x.phis()[..=need].to_vec();
    let factors_y = basis_y.phis()[..=need].to_vec();
    let members = assemble(m_max, &factors_x, &factors_y);
    let q1 = fd_potential(basis_x.f())?;
    let q2 = fd_potential(basis_y.f())?;
    let q_field = ComplexSampled2D::from_fn_indexed(gx, gy, |ix, iy| q1.value(ix) + q2.value(iy));
    Ok(SolutionFamily2D {
        basis_x: basis_x.clone(),
        basis_y: basis_y.clone(),
        slopes_x: slopes(&factors_x),
        slopes_y: slopes(&factors_y),
        factors_x,
        factors_y,
        center: (basis_x.x0(), basis_y.x0()),
        m_max,
        members,
        q_field,
    })
}

/// Harmonic polynomials `p_0 ... p_{m_max}` about `center`, which must be a
/// node of both grids.
pub fn harmonic_polynomials(
    m_max: usize,
    center: (f64, f64),
    grid_x: Grid1D,
    grid_y: Grid1D,
) -> Result<SolutionFamily2D> {
    let ix0 = node_index(&grid_x, center.0)?;
    let iy0 = node_index(&grid_y, center.1)?;
    let need = required_depth(m_max);
    let depth = need.max(1);
    let one = ComplexI::new(1.0, 0.0);
    let basis_x = LBasis::build(ComplexSampled1D::constant(grid_x, one), ix0, depth)?;
    let basis_y = LBasis::build(ComplexSampled1D::constant(grid_y, one), iy0, depth)?;
    let monomials = |g: Grid1D, c: f64| -> Result<Vec<ComplexSampled1D>> {
        (0..=need)
            .map(|k| ComplexSampled1D::from_fn(g, |x| ComplexI::new((x - c).powi(k as i32), 0.0)))
            .collect()
    };
    let factors_x = monomials(grid_x, center.0)?;
    let factors_y = monomials(grid_y, center.1)?;
    let members = assemble(m_max, &factors_x, &factors_y);
    Ok(SolutionFamily2D {
        basis_x,
        basis_y,
        slopes_x: slopes(&factors_x),
        slopes_y: slopes(&factors_y),
        factors_x,
        factors_y,
        center,
        m_max,
        members,
        q_field: ComplexSampled2D::zeros(grid_x, grid_y),
    })
}

fn node_index(g: &Grid1D, x: f64) -> Result<usize> {
    g.index_of(x)
        .ok_or_else(|| Error::InvalidArgument(format!("center coordinate {x} is not a grid node")))
}

/// Max interior `|-Δu_m + q u_m|` per member, with the five-point Laplacian.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyResidual {
    pub step_x: f64,
    pub step_y: f64,
    pub residuals: Vec<f64>,
}

impl FamilyResidual {
    pub fn max(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Max interior `|-Δu + q u|` by the five-point Laplacian.
pub fn pde_residual(u: &ComplexSampled2D, q: &ComplexSampled2D) -> Result<f64> {
    pde_residual_within(u, q, 1)
}

/// [`pde_residual`] over nodes at least `margin >= 1` away from the edges.
pub fn pde_residual_within(u: &ComplexSampled2D, q: &ComplexSampled2D, margin: usize) -> Result<f64> {
    u.same_grid(q)?;
    let margin = margin.max(1);
    let lap = u.laplacian_5pt();
    let (nx, ny) = (u.nx(), u.ny());
    let mut worst = 0.0_f64;
    for iy in margin..ny.saturating_sub(margin) {
        for ix in margin..nx.saturating_sub(margin) {
            let v = -lap.get(ix, iy) + q.get(ix, iy) * u.get(ix, iy);
            worst = worst.max(v.norm());
        }
    }
    Ok(worst)
}

pub fn family_residual(fam: &SolutionFamily2D) -> Result<FamilyResidual> {
    let residuals = fam
        .members
        .par_iter()
        .map(|u| pde_residual(u, &fam.q_field))
        .collect::<Result<Vec<_>>>()?;
    Ok(FamilyResidual {
        step_x: fam.grid_x().step(),
        step_y: fam.grid_y().step(),
        residuals,
    })
}

/// Which one-dimensional operator is applied first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum AxisOrder {
    /// `T_g` along every column, then `T_f` along every row.
    #[default]
    YThenX,
    XThenY,
}

/// `T_f T_g p`, with `T_f` acting in `x` and `T_g` in `y`.
pub fn tensor_transmute(
    p: &ComplexSampled2D,
    op_x: &TransmutationOp,
    op_y: &TransmutationOp,
) -> Result<ComplexSampled2D> {
    tensor_transmute_ordered(p, op_x, op_y, AxisOrder::YThenX)
}

pub fn tensor_transmute_ordered(
    p: &ComplexSampled2D,
    op_x: &TransmutationOp,
    op_y: &TransmutationOp,
    order: AxisOrder,
) -> Result<ComplexSampled2D> {
    op_x.kernel().grid().ensure_same(p.grid_x(), "x operator vs field")?;
    op_y.kernel().grid().ensure_same(p.grid_y(), "y operator vs field")?;
    let ax = |v: &[ComplexI]| apply_slice(op_x, v);
    let ay = |v: &[ComplexI]| apply_slice(op_y, v);
    Ok(match order {
        AxisOrder::YThenX => p.map_columns(ay).map_rows(ax),
        AxisOrder::XThenY => p.map_rows(ax).map_columns(ay),
    })
}

fn apply_slice(op: &TransmutationOp, v: &[ComplexI]) -> Vec<ComplexI> {
    let tail = op.integral_part(v);
    v.iter().zip(tail).map(|(a, b)| a + b).collect()
}

/// `W2` with `W1 + j W2` solving the main Vekua equation for `phi`, and the
/// compatibility defect of the integrand.
#[derive(Debug, Clone, Serialize)]
pub struct ConjugateSolution {
    pub w2: ComplexSampled2D,
    /// Max interior `|∂w1/∂y - ∂w2/∂x|` of the integrand `w = j phi² ∂̄(W1/phi)`.
    pub compatibility: f64,
}

impl ConjugateSolution {
    pub fn compatible(&self, tol: f64) -> bool {
        self.compatibility <= tol
    }
}

/// `W2 = (1/phi) Ā(j phi² ∂̄(W1/phi)) + c1/phi`, where
/// `Ā w = 2 ∫ (w1 dx + w2 dy)` runs from `center` along `x` first, then `y`.
///
/// With `v = W1/phi` the integrand is `w1 = -phi² v_y / 2`, `w2 = phi² v_x / 2`.
pub fn conjugate_solution(
    w1: &ComplexSampled2D,
    phi: &ComplexSampled2D,
    c1: ComplexI,
    center: (f64, f64),
) -> Result<ConjugateSolution> {
    w1.same_grid(phi)?;
    let (gx, gy) = (*w1.grid_x(), *w1.grid_y());
    let ix0 = node_index(&gx, center.0)?;
    let iy0 = node_index(&gy, center.1)?;
    let v = w1.zip_with(phi, |a, p| a / p)?;
    let phi2 = phi.map(|p| p * p);
    let a = v.partial_y().zip_with(&phi2, |vy, p2| -p2 * vy * 0.5)?;
    let b = v.partial_x().zip_with(&phi2, |vx, p2| p2 * vx * 0.5)?;

    let along_x = quad::cumulative_from(a.row(iy0), gx.step(), ix0);
    let along_y = b.map_columns(|col| quad::cumulative_from(col, gy.step(), iy0));
    let w2 = ComplexSampled2D::from_fn_indexed(gx, gy, |ix, iy| {
        let abar = (along_x[ix] + along_y.get(ix, iy)) * 2.0;
        (abar + c1) / phi.get(ix, iy)
    });

    let defect = a.partial_y().add_scaled(&b.partial_x(), ComplexI::new(-1.0, 0.0))?;
    Ok(ConjugateSolution {
        w2,
        compatibility: defect.max_abs_interior(2),
    })
}

/// Vekua residual of `W1 + j W2` for `phi`.
pub fn conjugate_residual(
    w1: &ComplexSampled2D,
    w2: &ComplexSampled2D,
    phi: &ComplexSampled2D,
    margin: usize,
) -> Result<f64> {
    vekua_residual(&BicomplexField::new(w1.clone(), w2.clone())?, phi, margin)
}

/// Potential of the associated equation `-Δv + q2 v = 0` satisfied by the
/// vector part: `q2 = 8 ∂̄phi ∂phi / phi² - q1 = 2 (phi_x² + phi_y²) / phi² - q1`,
/// with derivatives by central differences.
pub fn associated_potential(phi: &ComplexSampled2D, q1: &ComplexSampled2D) -> Result<ComplexSampled2D> {
    associated_potential_scaled(phi, q1, 8.0)
}

/// `q2 = factor ∂̄phi ∂phi / phi² - q1`, where `∂̄phi ∂phi = (phi_x² + phi_y²) / 4`.
pub fn associated_potential_scaled(
    phi: &ComplexSampled2D,
    q1: &ComplexSampled2D,
    factor: f64,
) -> Result<ComplexSampled2D> {
    phi.same_grid(q1)?;
    let (px, py) = (phi.partial_x(), phi.partial_y());
    let (gx, gy) = (*phi.grid_x(), *phi.grid_y());
    Ok(ComplexSampled2D::from_fn_indexed(gx, gy, |ix, iy| {
        let p = phi.get(ix, iy);
        let (a, b) = (px.get(ix, iy), py.get(ix, iy));
        (a * a + b * b) * (factor * 0.25) / (p * p) - q1.get(ix, iy)
    }))
}
