use serde_json::{json, Value};
use transmute_core::catalog::Generator;
use transmute_core::lbasis::LBasis;
use transmute_core::schrodinger2d::{build_family, family_residual, required_depth};
use transmute_core::spps::spps_solve_auto;
use transmute_core::transmute::{
    composite_kernel, constant_q_kernel, goursat_boundary_defect, goursat_solve, GoursatOptions, KernelGrid,
};
use transmute_core::{ComplexI, ComplexSampled1D};

use crate::config::{
    generator, generator_pair, parse_complex, symmetric_grid, BasisArgs, FamilyArgs, KernelArgs, KernelMethod,
    SppsArgs,
};
use crate::error::{invalid, CliResult};
use crate::output::{complex_json, num, Sink};

/// Outcome of one command: the report and whether every check passed.
pub struct Done {
    pub report: Value,
    pub ok: bool,
}

/// L-basis depth used for SPPS sums.
const SPPS_DEPTH: usize = 61;

fn generator_json(g: &Generator) -> Value {
    json!({ "text": g.to_string(), "h": complex_json(g.slope_at_origin()) })
}

pub fn basis(a: &BasisArgs, config: &Value) -> CliResult<Done> {
    let gen = generator(&a.f, &a.params)?;
    let grid = symmetric_grid(a.grid, a.half_width)?;
    let basis = LBasis::build(gen.sample(grid)?, grid.middle_index(), a.kmax)?;
    let check = basis.check_ode(&gen.sample_potential(grid)?)?;
    let mut sink = Sink::new(&a.out)?;
    for k in 0..=a.kmax {
        sink.field_1d(&format!("phi_{k}.csv"), basis.phi(k))?;
    }
    let results = json!({
        "generator": generator_json(&gen),
        "step": grid.step(),
        "ode_residuals": check.residuals,
    });
    Ok(Done {
        report: sink.finish(config, results)?,
        ok: true,
    })
}

/// Max interior `|u'' - (q + λ) u|` by second differences.
fn ode_residual(u: &ComplexSampled1D, q: &ComplexSampled1D, lambda: ComplexI) -> CliResult<f64> {
    let d2 = u.fd_second_derivative()?;
    Ok((1..u.len() - 1)
        .map(|i| (d2.value(i) - (q.value(i) + lambda) * u.value(i)).norm())
        .fold(0.0, f64::max))
}

pub fn spps(a: &SppsArgs, config: &Value) -> CliResult<Done> {
    let gen = generator(&a.f, &a.params)?;
    let lambda = parse_complex("lambda", &a.lambda)?;
    let grid = symmetric_grid(a.grid, a.half_width)?;
    let basis = LBasis::build(gen.sample(grid)?, grid.middle_index(), SPPS_DEPTH)?;
    let sol = spps_solve_auto(&basis, lambda)?;
    let q = gen.sample_potential(grid)?;
    let mut sink = Sink::new(&a.out)?;
    sink.field_1d("u1.csv", &sol.u1)?;
    sink.field_1d("u2.csv", &sol.u2)?;
    let results = json!({
        "generator": generator_json(&gen),
        "lambda": complex_json(lambda),
        "n_trunc": sol.n_trunc,
        "tail_bound": sol.tail_bound,
        "ode_residual": {
            "u1": ode_residual(&sol.u1, &q, lambda)?,
            "u2": ode_residual(&sol.u2, &q, lambda)?,
        },
    });
    Ok(Done {
        report: sink.finish(config, results)?,
        ok: true,
    })
}

fn kernel_csv(sink: &mut Sink, name: &str, k: &KernelGrid) -> CliResult<()> {
    sink.csv(
        name,
        &["x", "t", "re", "im"],
        k.triples().map(|(x, t, v)| vec![num(x), num(t), num(v.re), num(v.im)]),
    )
}

pub fn kernel(a: &KernelArgs, config: &Value) -> CliResult<Done> {
    let grid = symmetric_grid(a.grid, a.half_width)?;
    let constant = a.q.trim() == "const";
    let c = if constant { Some(parse_complex("c", &a.c)?) } else { None };
    let mut results = json!({ "method": a.method });
    let plain = match (a.method, c) {
        (KernelMethod::Closed, Some(c)) => constant_q_kernel(c, a.half_width, a.grid)?,
        (KernelMethod::Closed, None) => {
            return invalid("the closed form needs --q const; use --method goursat for other potentials")
        }
        (KernelMethod::Goursat, _) => {
            let q = match c {
                Some(c) => ComplexSampled1D::constant(grid, -c),
                None => Generator::sample_potential(&generator(&a.q, &Default::default())?, grid)?,
            };
            let (k, rep) = goursat_solve(&q, GoursatOptions::default())?;
            let (diag, anti) = goursat_boundary_defect(&k, &q)?;
            results["goursat"] = json!({
                "iterations": rep.iterations,
                "last_increment": rep.residual,
                "diagonal_defect": diag,
                "antidiagonal_defect": anti,
            });
            if let Some(c) = c {
                let exact = constant_q_kernel(c, a.half_width, a.grid)?;
                results["max_diff_vs_closed"] = json!(k.max_abs_diff(&exact)?);
            }
            k
        }
    };
    results["max_abs"] = json!(plain.max_abs());
    let mut sink = Sink::new(&a.out)?;
    kernel_csv(&mut sink, "kernel.csv", &plain)?;
    if let Some(h) = &a.h {
        let h = parse_complex("h", h)?;
        let composite = composite_kernel(&plain, h)?;
        results["composite_max_abs"] = json!(composite.max_abs());
        kernel_csv(&mut sink, "composite.csv", &composite)?;
    }
    Ok(Done {
        report: sink.finish(config, results)?,
        ok: true,
    })
}

pub fn family(a: &FamilyArgs, config: &Value) -> CliResult<Done> {
    let (f, g) = generator_pair(&a.f, &a.g, &a.params)?;
    let grid = symmetric_grid(a.grid, a.half_width)?;
    let depth = required_depth(a.m);
    let bx = LBasis::build(f.sample(grid)?, grid.middle_index(), depth)?;
    let by = LBasis::build(g.sample(grid)?, grid.middle_index(), depth)?;
    let fam = build_family(&bx, &by, a.m)?.with_potential(|x| f.potential(x), |y| g.potential(y))?;
    let res = family_residual(&fam)?;
    let mut sink = Sink::new(&a.out)?;
    for (m, u) in fam.members().iter().enumerate() {
        sink.field_2d(&format!("u_{m}.csv"), u, |_, _| true)?;
    }
    let results = json!({
        "f": generator_json(&f),
        "g": generator_json(&g),
        "M": a.m,
        "step": grid.step(),
        "pde_residuals": res.residuals,
        "pde_residual_max": res.max(),
    });
    Ok(Done {
        report: sink.finish(config, results)?,
        ok: true,
    })
}
