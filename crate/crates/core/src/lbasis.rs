//! Recursive integrals and L-bases.
//!
//! Given a nonvanishing solution `f` of `f'' - q f = 0` and a center `x0`,
//!
//! ```text
//! X~(0) = X(0) = 1
//! X~(n)(x) = n \int_{x0}^x X~(n-1)(s) (f(s)^2)^{(-1)^{n-1}} ds
//! X(n)(x)  = n \int_{x0}^x X(n-1)(s)  (f(s)^2)^{(-1)^n} ds
//! phi_k = f X(k)  (k odd),   phi_k = f X~(k)  (k even)
//! ```
//!
//! The system satisfies `L phi_k = k (k - 1) phi_{k-2}` with `L = d²/dx² - q`.
//! The same type serves the `y`-direction system `{psi_k}` built from `g`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numcore::{quad, ComplexI, ComplexSampled1D, Grid1D};

/// Default depth of the recursive integrals.
pub const DEFAULT_K_MAX: usize = 20;

#[derive(Debug, Clone)]
pub struct LBasis {
    f: ComplexSampled1D,
    x0_index: usize,
    x_tilde: Vec<ComplexSampled1D>,
    x_plain: Vec<ComplexSampled1D>,
    phi: Vec<ComplexSampled1D>,
}

impl LBasis {
    /// Build `X~(n)`, `X(n)` and `phi_k` for `0 <= n, k <= k_max`.
    pub fn build(f: ComplexSampled1D, x0_index: usize, k_max: usize) -> Result<Self> {
        f.grid().check_index(x0_index)?;
        f.ensure_nonvanishing()?;
        let grid = *f.grid();
        let f_sq = f.map(|v| v * v);
        let f_sq_inv = f_sq.map(|v| v.inv());

        let one = ComplexSampled1D::constant(grid, ComplexI::new(1.0, 0.0));
        let mut x_tilde = Vec::with_capacity(k_max + 1);
        let mut x_plain = Vec::with_capacity(k_max + 1);
        x_tilde.push(one.clone());
        x_plain.push(one);
        for n in 1..=k_max {
            // X~ uses f^2 at odd n, X uses it at even n.
            let (w_tilde, w_plain) = if n % 2 == 1 {
                (&f_sq, &f_sq_inv)
            } else {
                (&f_sq_inv, &f_sq)
            };
            let nf = n as f64;
            let next_tilde = x_tilde[n - 1]
                .zip_with(w_tilde, |a, b| a * b * nf)?
                .cumulative_integral(x0_index)?;
            let next_plain = x_plain[n - 1]
                .zip_with(w_plain, |a, b| a * b * nf)?
                .cumulative_integral(x0_index)?;
            x_tilde.push(next_tilde);
            x_plain.push(next_plain);
        }
        let phi = (0..=k_max)
            .map(|k| {
                let src = if k % 2 == 1 { &x_plain[k] } else { &x_tilde[k] };
                f.zip_with(src, |a, b| a * b)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            f,
            x0_index,
            x_tilde,
            x_plain,
            phi,
        })
    }

    pub fn f(&self) -> &ComplexSampled1D {
        &self.f
    }

    pub fn grid(&self) -> &Grid1D {
        self.f.grid()
    }

    pub fn x0_index(&self) -> usize {
        self.x0_index
    }

    pub fn x0(&self) -> f64 {
        self.grid().node(self.x0_index)
    }

    pub fn k_max(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn phi(&self, k: usize) -> &ComplexSampled1D {
        &self.phi[k]
    }

    pub fn phis(&self) -> &[ComplexSampled1D] {
        &self.phi
    }

    /// `X~(n)`.
    pub fn x_tilde(&self, n: usize) -> &ComplexSampled1D {
        &self.x_tilde[n]
    }

    /// `X(n)`.
    pub fn x_plain(&self, n: usize) -> &ComplexSampled1D {
        &self.x_plain[n]
    }

    pub fn ensure_depth(&self, need: usize) -> Result<()> {
        if self.k_max() >= need {
            Ok(())
        } else {
            Err(Error::InsufficientDepth {
                need,
                have: self.k_max(),
            })
        }
    }

    /// `true` if the center is the origin node.
    pub fn centered_at_origin(&self) -> bool {
        self.x0() == 0.0
    }

    /// Residuals `max |phi_k'' - q phi_k - k (k-1) phi_{k-2}|` over interior
    /// nodes, one per `k`, using second differences.
    pub fn check_ode(&self, q: &ComplexSampled1D) -> Result<OdeResidualReport> {
        self.grid().ensure_same(q.grid(), "potential vs basis")?;
        let n = self.grid().len();
        let residuals = self
            .phi
            .iter()
            .enumerate()
            .map(|(k, phi)| {
                let d2 = phi.fd_second_derivative()?;
                let mut worst = 0.0_f64;
                for i in 1..n - 1 {
                    let mut r = d2.value(i) - q.value(i) * phi.value(i);
                    if k >= 2 {
                        r -= self.phi[k - 2].value(i) * (k * (k - 1)) as f64;
                    }
                    worst = worst.max(r.norm());
                }
                Ok(worst)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OdeResidualReport {
            step: self.grid().step(),
            residuals,
        })
    }
}

/// Per-`k` interior residuals of the L-basis relations.
#[derive(Debug, Clone, Serialize)]
pub struct OdeResidualReport {
    pub step: f64,
    pub residuals: Vec<f64>,
}

impl OdeResidualReport {
    pub fn max_up_to(&self, k: usize) -> f64 {
        self.residuals[..=k.min(self.residuals.len() - 1)]
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }
}

/// Integrate `f'' = q f` with `f(x0) = f0`, `f'(x0) = df0` by classical RK4
/// on the grid step, outward from `x0_index` in both directions.
///
/// Fails with [`Error::VanishingFunction`] if the solution has a zero on the
/// grid, since it could not generate an L-basis.
pub fn solve_particular(
    q: impl Fn(f64) -> ComplexI,
    grid: Grid1D,
    x0_index: usize,
    f0: ComplexI,
    df0: ComplexI,
) -> Result<ComplexSampled1D> {
    grid.check_index(x0_index)?;
    let n = grid.len();
    let h = grid.step();
    let mut values = vec![ComplexI::new(0.0, 0.0); n];
    values[x0_index] = f0;

    let step = |x: f64, y: [ComplexI; 2], dx: f64| -> [ComplexI; 2] {
        let rhs = |x: f64, y: [ComplexI; 2]| [y[1], q(x) * y[0]];
        let k1 = rhs(x, y);
        let k2 = rhs(x + dx / 2.0, [y[0] + k1[0] * (dx / 2.0), y[1] + k1[1] * (dx / 2.0)]);
        let k3 = rhs(x + dx / 2.0, [y[0] + k2[0] * (dx / 2.0), y[1] + k2[1] * (dx / 2.0)]);
        let k4 = rhs(x + dx, [y[0] + k3[0] * dx, y[1] + k3[1] * dx]);
        [
            y[0] + (k1[0] + k2[0] * 2.0 + k3[0] * 2.0 + k4[0]) * (dx / 6.0),
            y[1] + (k1[1] + k2[1] * 2.0 + k3[1] * 2.0 + k4[1]) * (dx / 6.0),
        ]
    };

    let mut y = [f0, df0];
    for i in x0_index..n - 1 {
        y = step(grid.node(i), y, h);
        values[i + 1] = y[0];
    }
    let mut y = [f0, df0];
    for i in (1..=x0_index).rev() {
        y = step(grid.node(i), y, -h);
        values[i - 1] = y[0];
    }
    let f = ComplexSampled1D::new(grid, values)?;
    f.ensure_nonvanishing()?;
    Ok(f)
}

/// [`solve_particular`] for a tabulated potential; values between nodes come
/// from cubic midpoint interpolation.
pub fn solve_particular_sampled(
    q: &ComplexSampled1D,
    x0_index: usize,
    f0: ComplexI,
    df0: ComplexI,
) -> Result<ComplexSampled1D> {
    let grid = *q.grid();
    let fine = quad::refine_half_step(q.values());
    let a = grid.a_left();
    let half = grid.step() / 2.0;
    let lookup = move |x: f64| {
        let pos = ((x - a) / half).round().clamp(0.0, (fine.len() - 1) as f64) as usize;
        fine[pos]
    };
    solve_particular(lookup, grid, x0_index, f0, df0)
}
