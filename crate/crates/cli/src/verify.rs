//! `verify --suite constant-q`: identities of the closed-form kernels for
//! `q = -c`, each against an independent construction.

use serde::Serialize;
use serde_json::{json, Value};
use transmute_core::catalog::Generator;
use transmute_core::lbasis::LBasis;
use transmute_core::numcore::bessel_j;
use transmute_core::spps::e0_solution;
use transmute_core::transmute::{
    composite_kernel, constant_q_composite_kernel, constant_q_kernel, goursat_solve, shift_h,
    sine_kernel_from_plain, Flavor, GoursatOptions, TransmutationOp,
};
use transmute_core::{ci, ComplexI, ComplexSampled1D};

use crate::commands::Done;
use crate::config::{parse_complex, symmetric_grid, tolerance_map, Suite, VerifyArgs};
use crate::error::CliResult;
use crate::output::{complex_json, Sink};

pub const DEFAULT_TOLERANCES: [(&str, f64); 6] = [
    ("bessel", 1e-8),
    ("goursat", 1e-8),
    ("powers", 1e-6),
    ("e0", 1e-6),
    ("shift-round-trip", 1e-10),
    ("shift-cross", 1e-8),
];

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    measured: f64,
    tol: f64,
    pass: bool,
}

pub fn verify(a: &VerifyArgs, config: &Value) -> CliResult<Done> {
    let tols = tolerance_map(&a.tolerances, &DEFAULT_TOLERANCES)?;
    let c = parse_complex("c", &a.c)?;
    let grid = symmetric_grid(a.grid, a.half_width)?;
    let Suite::ConstantQ = a.suite;
    let (n, hw) = (a.grid, a.half_width);
    let kappa = c.sqrt();
    let h = ci(0.0, 1.0) * kappa;
    let mut measured: Vec<(&'static str, f64)> = Vec::new();

    // Ts[1](x) = J0(√c x) on [0, a]
    let plain = constant_q_kernel(c, hw, n)?;
    let ts = TransmutationOp::new(sine_kernel_from_plain(&plain)?, Flavor::Ts)?;
    let image = ts.apply_fn(|_| ci(1.0, 0.0))?;
    let mut err = 0.0_f64;
    for i in grid.middle_index()..grid.len() {
        err = err.max((image.value(i) - bessel_j(0, kappa * grid.node(i))?).norm());
    }
    measured.push(("bessel", err));

    let q = ComplexSampled1D::constant(grid, -c);
    let (solved, _) = goursat_solve(&q, GoursatOptions::default())?;
    measured.push(("goursat", solved.max_abs_diff(&plain)?));

    // Bold[x^k] = phi_k for f = e^{i√c x}
    let basis = LBasis::build(Generator::ExpI { kappa }.sample(grid)?, grid.middle_index(), 40)?;
    let bold = TransmutationOp::new(constant_q_composite_kernel(c, h, hw, n)?, Flavor::Bold)?;
    let mut err = 0.0_f64;
    for k in 0..=5 {
        let img = bold.apply_fn(|x| ci(x.powi(k), 0.0))?;
        err = err.max(img.max_abs_diff(basis.phi(k as usize))?);
    }
    measured.push(("powers", err));

    let t = TransmutationOp::new(plain.clone(), Flavor::T)?;
    let mut err = 0.0_f64;
    for w in [ci(1.0, 0.0), ci(2.0, 0.0), ci(1.0, 1.0)] {
        let img = t.apply_fn(|x| (ci(0.0, 1.0) * w * x).exp())?;
        err = err.max(img.max_abs_diff(&e0_solution(&basis, w, Some(h))?)?);
    }
    measured.push(("e0", err));

    let h1 = ci(0.4, -0.9);
    let k0 = composite_kernel(&plain, ComplexI::new(0.0, 0.0))?;
    let there = shift_h(&k0, h1)?;
    let back = shift_h(&there, ComplexI::new(0.0, 0.0))?;
    measured.push(("shift-round-trip", back.max_abs_diff(&k0)?));
    measured.push(("shift-cross", composite_kernel(&plain, h1)?.max_abs_diff(&there)?));

    let checks: Vec<Check> = measured
        .into_iter()
        .map(|(name, m)| {
            let tol = tols[name];
            Check {
                name,
                measured: m,
                tol,
                pass: m < tol,
            }
        })
        .collect();
    let ok = checks.iter().all(|c| c.pass);
    let results = json!({
        "suite": a.suite,
        "c": complex_json(c),
        "h": complex_json(h),
        "checks": checks,
        "all_pass": ok,
    });
    let sink = Sink::new(&a.out)?;
    Ok(Done {
        report: sink.finish(config, results)?,
        ok,
    })
}
