use rayon::prelude::*;
use serde::Serialize;

use super::{KernelGrid, KernelKind};
use crate::error::{Error, Result};
use crate::numcore::{quad, ComplexI, ComplexSampled1D};

/// Integration range and kernel kind of a transmutation operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Flavor {
    /// `u(x) + ∫_{-x}^{x} K(x, t) u(t) dt`.
    T,
    /// `u(x) + ∫_0^x K(x, t; h) u(t) dt`.
    Tc,
    /// `u(x) + ∫_0^x K(x, t; ∞) u(t) dt`.
    Ts,
    /// `u(x) + ∫_{-x}^{x} 𝐊(x, t; h) u(t) dt`.
    Bold,
}

impl Flavor {
    fn kernel_kind(self) -> &'static str {
        match self {
            Flavor::T => "plain",
            Flavor::Tc => "cosine",
            Flavor::Ts => "sine",
            Flavor::Bold => "composite",
        }
    }

    fn full_range(self) -> bool {
        matches!(self, Flavor::T | Flavor::Bold)
    }
}

#[derive(Debug, Clone)]
pub struct TransmutationOp {
    kernel: KernelGrid,
    flavor: Flavor,
}

impl TransmutationOp {
    /// Pair a kernel with a flavor; the kernel kind must match.
    pub fn new(kernel: KernelGrid, flavor: Flavor) -> Result<Self> {
        kernel.expect_kind(flavor.kernel_kind())?;
        Ok(Self { kernel, flavor })
    }

    /// Operator with the kind implied by the kernel.
    pub fn from_kernel(kernel: KernelGrid) -> Self {
        let flavor = match kernel.kind() {
            KernelKind::Plain => Flavor::T,
            KernelKind::Cosine { .. } => Flavor::Tc,
            KernelKind::Sine => Flavor::Ts,
            KernelKind::Composite { .. } => Flavor::Bold,
        };
        Self { kernel, flavor }
    }

    pub fn kernel(&self) -> &KernelGrid {
        &self.kernel
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// Integral part alone, on raw samples aligned with the kernel grid.
    pub(crate) fn integral_part(&self, u: &[ComplexI]) -> Vec<ComplexI> {
        let grid = self.kernel.grid();
        let step = grid.step();
        let c = grid.middle_index();
        let full = self.flavor.full_range();
        (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let row = self.kernel.row(i);
                let start = self.kernel.row_start(i);
                let prod: Vec<ComplexI> = row
                    .iter()
                    .zip(&u[start..start + row.len()])
                    .map(|(k, v)| k * v)
                    .collect();
                let w = i.abs_diff(c);
                if full {
                    let s = quad::integrate(&prod, step);
                    if i < c {
                        -s
                    } else {
                        s
                    }
                } else {
                    // ∫_0^x, signed; the row is [-|x|, |x|] with t = 0 at w
                    let cum = quad::cumulative_through(&prod, step, w);
                    if i >= c {
                        cum[2 * w]
                    } else {
                        cum[0]
                    }
                }
            })
            .collect()
    }

    /// Apply to samples on the kernel's grid.
    pub fn apply(&self, u: &ComplexSampled1D) -> Result<ComplexSampled1D> {
        self.kernel.grid().ensure_same(u.grid(), "operand vs kernel")?;
        let tail = self.integral_part(u.values());
        let values = u.values().iter().zip(&tail).map(|(a, b)| a + b).collect();
        ComplexSampled1D::new(*u.grid(), values)
    }

    /// Apply to a function evaluated on the kernel grid.
    pub fn apply_fn(&self, u: impl Fn(f64) -> ComplexI) -> Result<ComplexSampled1D> {
        self.apply(&ComplexSampled1D::from_fn(*self.kernel.grid(), u)?)
    }

    /// Solve `v + 𝒦 v = w` by the Neumann series `w - 𝒦w + 𝒦²w - ...`,
    /// stopping when the increment falls below `tol` (relative to `|w|`).
    pub fn apply_inverse(&self, w: &ComplexSampled1D, tol: f64, max_iter: usize) -> Result<ComplexSampled1D> {
        self.kernel.grid().ensure_same(w.grid(), "operand vs kernel")?;
        let scale = w.max_abs().max(f64::MIN_POSITIVE);
        let mut term = w.values().to_vec();
        let mut sum = term.clone();
        let mut increment = f64::INFINITY;
        for k in 1..=max_iter {
            term = self.integral_part(&term);
            increment = term.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
            for (s, t) in sum.iter_mut().zip(&term) {
                *s += t * sign;
            }
            if increment <= tol * scale {
                return ComplexSampled1D::new(*w.grid(), sum);
            }
        }
        Err(Error::NoConvergence {
            iterations: max_iter,
            residual: increment,
        })
    }
}

/// Difference of both sides of `(-d²/dx² + q) 𝐓[u] = 𝐓[-u'']`.
#[derive(Debug, Clone, Serialize)]
pub struct TransmutationResidual {
    /// Max over the checked interior nodes.
    pub max_residual: f64,
    /// Max modulus of the left-hand side there, for scale.
    pub lhs_max: f64,
    /// Checked node range `[first, last]`.
    pub first: usize,
    pub last: usize,
}

/// Compare `(-d²/dx² + q) op[u]` with `op[-u'']` using second differences,
/// ignoring `margin` nodes at each end.
pub fn verify_transmutation(
    op: &TransmutationOp,
    q: &ComplexSampled1D,
    u: &ComplexSampled1D,
    margin: usize,
) -> Result<TransmutationResidual> {
    let grid = *op.kernel().grid();
    grid.ensure_same(q.grid(), "potential vs kernel")?;
    let n = grid.len();
    if 2 * margin + 1 > n {
        return Err(Error::InvalidArgument(format!(
            "margin {margin} leaves no interior nodes on {n} points"
        )));
    }
    let tu = op.apply(u)?;
    let d2_tu = tu.fd_second_derivative()?;
    let minus_u2 = u.fd_second_derivative()?.scale(ComplexI::new(-1.0, 0.0));
    let rhs = op.apply(&minus_u2)?;
    let first = margin.max(1);
    let last = n - 1 - margin.max(1);
    let mut max_residual = 0.0_f64;
    let mut lhs_max = 0.0_f64;
    for i in first..=last {
        let lhs = -d2_tu.value(i) + q.value(i) * tu.value(i);
        max_residual = max_residual.max((lhs - rhs.value(i)).norm());
        lhs_max = lhs_max.max(lhs.norm());
    }
    Ok(TransmutationResidual {
        max_residual,
        lhs_max,
        first,
        last,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lbasis::LBasis;
    use crate::numcore::{bessel_j, ci, Grid1D};
    use crate::transmute::{
        composite_kernel, constant_q_composite_kernel, constant_q_kernel, cosine_kernel_from_plain,
        sine_kernel_from_plain,
    };

    fn one(_: f64) -> ComplexI {
        ci(1.0, 0.0)
    }

    #[test]
    fn zero_kernel_is_identity_and_zero_maps_to_zero() {
        let g = Grid1D::symmetric(1.0, 101).unwrap();
        let k = KernelGrid::from_fn(g, KernelKind::Plain, |_, _| ci(0.0, 0.0)).unwrap();
        let op = TransmutationOp::new(k, Flavor::T).unwrap();
        let u = ComplexSampled1D::from_fn(g, |x| ci(x.cos(), x)).unwrap();
        assert_eq!(op.apply(&u).unwrap(), u);

        let k = constant_q_kernel(ci(1.0, 0.0), 1.0, 101).unwrap();
        let op = TransmutationOp::new(k, Flavor::T).unwrap();
        let z = ComplexSampled1D::constant(g, ci(0.0, 0.0));
        assert_eq!(op.apply(&z).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn flavor_must_match_kernel() {
        let k = constant_q_kernel(ci(1.0, 0.0), 1.0, 21).unwrap();
        assert!(TransmutationOp::new(k, Flavor::Bold).is_err());
    }

    #[test]
    fn sine_transmutation_of_one_is_j0() {
        let k = constant_q_kernel(ci(1.0, 0.0), 1.0, 801).unwrap();
        let op = TransmutationOp::new(sine_kernel_from_plain(&k).unwrap(), Flavor::Ts).unwrap();
        let out = op.apply_fn(one).unwrap();
        let g = *out.grid();
        for i in 0..g.len() {
            let j0 = bessel_j(0, ci(g.node(i), 0.0)).unwrap();
            assert!((out.value(i) - j0).norm() < 1e-10, "x = {}", g.node(i));
        }
    }

    #[test]
    fn cosine_transmutation_of_one_solves_ivp() {
        // q = -c: T_c[1] solves u'' + c u = 0 with u(0) = 1, u'(0) = h.
        let (c, h) = (ci(2.0, 0.0), ci(0.5, -0.25));
        let k = constant_q_kernel(c, 1.0, 801).unwrap();
        let op = TransmutationOp::new(cosine_kernel_from_plain(&k, h).unwrap(), Flavor::Tc).unwrap();
        let out = op.apply_fn(one).unwrap();
        let s = c.sqrt();
        let g = *out.grid();
        for i in 0..g.len() {
            let x = g.node(i);
            let exact = (s * x).cos() + h * (s * x).sin() / s;
            assert!((out.value(i) - exact).norm() < 1e-10, "x = {x}: {}", (out.value(i) - exact).norm());
        }
    }

    #[test]
    fn bold_splits_into_cosine_and_sine() {
        let (c, h) = (ci(1.0, 0.3), ci(0.2, 0.7));
        let k = constant_q_kernel(c, 1.0, 401).unwrap();
        let bold = TransmutationOp::new(composite_kernel(&k, h).unwrap(), Flavor::Bold).unwrap();
        let tc = TransmutationOp::new(cosine_kernel_from_plain(&k, h).unwrap(), Flavor::Tc).unwrap();
        let ts = TransmutationOp::new(sine_kernel_from_plain(&k).unwrap(), Flavor::Ts).unwrap();
        let even = |x: f64| ci(x * x, 1.0 + x.powi(4));
        let odd = |x: f64| ci(x.sin(), x * x * x);
        let a = bold.apply_fn(even).unwrap();
        let b = tc.apply_fn(even).unwrap();
        let e = a.max_abs_diff(&b).unwrap();
        assert!(e < 1e-11, "{e}");
        let a = bold.apply_fn(odd).unwrap();
        let b = ts.apply_fn(odd).unwrap();
        let e = a.max_abs_diff(&b).unwrap();
        assert!(e < 1e-11, "{e}");
    }

    #[test]
    fn bold_maps_powers_to_lbasis() {
        let n = 801;
        let g = Grid1D::symmetric(1.0, n).unwrap();
        let f = ComplexSampled1D::from_fn(g, |x| ci(0.0, x).exp()).unwrap();
        let basis = LBasis::build(f, g.middle_index(), 6).unwrap();
        let k = constant_q_composite_kernel(ci(1.0, 0.0), ci(0.0, 1.0), 1.0, n).unwrap();
        let op = TransmutationOp::new(k, Flavor::Bold).unwrap();
        for p in 0..=6 {
            let out = op.apply_fn(|x| ci(x.powi(p), 0.0)).unwrap();
            let err = out.max_abs_diff(basis.phi(p as usize)).unwrap();
            assert!(err < 1e-8, "k = {p}: {err}");
        }
    }

    #[test]
    fn inverse_round_trip_on_polynomials() {
        let k = constant_q_composite_kernel(ci(1.5, -0.5), ci(0.3, 1.0), 1.0, 401).unwrap();
        let op = TransmutationOp::new(k, Flavor::Bold).unwrap();
        for p in 0..=6 {
            let u = ComplexSampled1D::from_fn(*op.kernel().grid(), |x| ci(x.powi(p), -x)).unwrap();
            let back = op.apply_inverse(&op.apply(&u).unwrap(), 1e-15, 200).unwrap();
            assert!(back.max_abs_diff(&u).unwrap() < 1e-12);
        }
    }

    #[test]
    fn transmutation_property_for_cubic() {
        let (c, h) = (ci(1.0, 0.0), ci(0.0, 1.0));
        let n = 801;
        let k = constant_q_composite_kernel(c, h, 1.0, n).unwrap();
        let op = TransmutationOp::new(k, Flavor::Bold).unwrap();
        let g = *op.kernel().grid();
        let q = ComplexSampled1D::constant(g, -c);
        let u = ComplexSampled1D::from_fn(g, |x| ci(x * x * x, 0.0)).unwrap();
        let r = verify_transmutation(&op, &q, &u, n / 20).unwrap();
        assert!(r.max_residual < 1e-5, "{r:?}");
    }

    #[test]
    fn sine_operator_breaks_transmutation_on_one() {
        let c = ci(1.0, 0.0);
        let k = constant_q_kernel(c, 1.0, 801).unwrap();
        let op = TransmutationOp::new(sine_kernel_from_plain(&k).unwrap(), Flavor::Ts).unwrap();
        let g = *op.kernel().grid();
        let q = ComplexSampled1D::constant(g, -c);
        let u = ComplexSampled1D::constant(g, ci(1.0, 0.0));
        let r = verify_transmutation(&op, &q, &u, 40).unwrap();
        // (d²/dx² + 1) J0(x) = J1(x)/x, close to 1/2 near the origin.
        assert!(r.max_residual > 0.4);
    }
}
