//! `solve-bvp`: problem file in, fit report, solution field and convergence
//! table out.

use std::fs;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use transmute_core::bvpsolve::{convergence_study, solve_dirichlet, BvpOptions, BvpProblem, Domain, Symmetry};
use transmute_core::catalog::Generator;
use transmute_core::lbasis::LBasis;
use transmute_core::schrodinger2d::{build_family, required_depth};
use transmute_core::ComplexI;

use crate::commands::Done;
use crate::config::{parse_complex, symmetric_grid, BvpArgs};
use crate::error::{invalid, CliError, CliResult};
use crate::output::{complex_json, num, Sink};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub domain: Domain,
    /// Catalog text for `f(x)` and `g(y)`.
    pub f: String,
    pub g: String,
    #[serde(rename = "M", alias = "m", default = "default_m")]
    pub m: usize,
    /// Truncations for the convergence table.
    #[serde(rename = "M_list", alias = "m_list", default)]
    pub m_list: Vec<usize>,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_nodes")]
    pub nodes_per_edge: usize,
    #[serde(default)]
    pub symmetry: Symmetry,
    #[serde(default)]
    pub experimental: bool,
    pub data: DataSpec,
}

fn default_m() -> usize {
    20
}

fn default_grid() -> usize {
    201
}

fn default_nodes() -> usize {
    100
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DataSpec {
    /// `u = exp(kx x + ky y)` with complex `kx`, `ky`.
    Exponential { kx: String, ky: String },
    /// Boundary samples `[x, y, re, im]`, interpolated linearly along the
    /// boundary.
    Tabulated { points: Vec<[f64; 4]> },
}

/// Position along the closed polyline `v` of the nearest boundary point.
fn arc_position(v: &[(f64, f64)], p: (f64, f64)) -> (f64, f64) {
    let mut start = 0.0;
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..v.len() {
        let (a, b) = (v[i], v[(i + 1) % v.len()]);
        let (dx, dy) = (b.0 - a.0, b.1 - a.1);
        let len = dx.hypot(dy);
        let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / (len * len)).clamp(0.0, 1.0);
        let d = (a.0 + t * dx - p.0).hypot(a.1 + t * dy - p.1);
        if d < best.0 {
            best = (d, start + t * len);
        }
        start += len;
    }
    best
}

fn perimeter(v: &[(f64, f64)]) -> f64 {
    (0..v.len())
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            (b.0 - a.0).hypot(b.1 - a.1)
        })
        .sum()
}

/// Periodic piecewise-linear interpolant of tabulated boundary values.
struct BoundaryTable {
    s: Vec<f64>,
    values: Vec<ComplexI>,
    period: f64,
    vertices: Vec<(f64, f64)>,
}

impl BoundaryTable {
    fn new(domain: &Domain, points: &[[f64; 4]]) -> CliResult<Self> {
        if points.len() < 3 {
            return invalid("tabulated data needs at least 3 boundary points");
        }
        let vertices = domain.vertices();
        let period = perimeter(&vertices);
        let mut rows = Vec::with_capacity(points.len());
        for p in points {
            let (dist, s) = arc_position(&vertices, (p[0], p[1]));
            if dist > 1e-6 * period {
                return invalid(format!("tabulated point ({}, {}) is not on the boundary", p[0], p[1]));
            }
            rows.push((s, ComplexI::new(p[2], p[3])));
        }
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self {
            s: rows.iter().map(|r| r.0).collect(),
            values: rows.iter().map(|r| r.1).collect(),
            period,
            vertices,
        })
    }

    fn eval(&self, x: f64, y: f64) -> ComplexI {
        let (_, s) = arc_position(&self.vertices, (x, y));
        let n = self.s.len();
        let hi = self.s.partition_point(|&t| t <= s);
        let (i0, i1) = if hi == 0 || hi == n { (n - 1, 0) } else { (hi - 1, hi) };
        let (s0, mut s1, mut at) = (self.s[i0], self.s[i1], s);
        // wrap across the start of the perimeter
        if s1 <= s0 {
            s1 += self.period;
            if at < s0 {
                at += self.period;
            }
        }
        let w = if s1 > s0 { (at - s0) / (s1 - s0) } else { 0.0 };
        self.values[i0] * (1.0 - w) + self.values[i1] * w
    }
}

pub fn load(path: &std::path::Path) -> CliResult<ProblemFile> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn solve(a: &BvpArgs, config: &Value) -> CliResult<Done> {
    let prob = load(&a.problem)?;
    let f: Generator = prob.f.parse()?;
    let g: Generator = prob.g.parse()?;
    let m_top = prob.m_list.iter().copied().chain([prob.m]).max().unwrap_or(prob.m);
    let ((x0, x1), (y0, y1)) = prob.domain.bounds();
    let half = x0.abs().max(x1.abs()).max(y0.abs()).max(y1.abs());
    let grid = symmetric_grid(prob.grid, half)?;
    let depth = required_depth(m_top);
    let bx = LBasis::build(f.sample(grid)?, grid.middle_index(), depth)?;
    let by = LBasis::build(g.sample(grid)?, grid.middle_index(), depth)?;
    let fam = build_family(&bx, &by, m_top)?.with_potential(|x| f.potential(x), |y| g.potential(y))?;
    let opts = BvpOptions {
        nodes_per_edge: prob.nodes_per_edge,
        symmetry: prob.symmetry,
        experimental: prob.experimental || a.experimental,
    };
    let problem = match &prob.data {
        DataSpec::Exponential { kx, ky } => {
            let (kx, ky) = (parse_complex("kx", kx)?, parse_complex("ky", ky)?);
            let u = move |x: f64, y: f64| (kx * x + ky * y).exp();
            BvpProblem::new(prob.domain.clone(), fam, prob.m, opts, u)?
                .with_normal_data(move |x, y| (kx * u(x, y), ky * u(x, y)))
        }
        DataSpec::Tabulated { points } => {
            let table = BoundaryTable::new(&prob.domain, points)?;
            BvpProblem::new(prob.domain.clone(), fam, prob.m, opts, |x, y| table.eval(x, y))?
        }
    };
    let fit = solve_dirichlet(&problem)?;
    let mut sink = Sink::new(&a.out)?;
    let domain = prob.domain.clone();
    sink.field_2d("field.csv", &fit.solution_field, |x, y| domain.contains((x, y)))?;
    let mut results = json!({
        "m_used": fit.m_used,
        "coefficients": fit.coefficients.iter().map(|&c| complex_json(c)).collect::<Vec<_>>(),
        "boundary_error_max": fit.boundary_error_max,
        "boundary_error_l2": fit.boundary_error_l2,
        "neumann_error_l2": fit.neumann_error_l2,
        "condition": fit.condition,
        "experimental": opts.experimental,
    });
    if !prob.m_list.is_empty() {
        let table = convergence_study(&problem, &prob.m_list)?;
        sink.csv(
            "convergence.csv",
            &["M", "boundary_error_max", "boundary_error_l2", "neumann_error_l2", "condition"],
            table.rows.iter().map(|r| {
                vec![
                    r.m.to_string(),
                    num(r.boundary_error_max),
                    num(r.boundary_error_l2),
                    r.neumann_error_l2.map(num).unwrap_or_default(),
                    num(r.condition),
                ]
            }),
        )?;
        results["convergence"] = json!(table);
    }
    Ok(Done {
        report: sink.finish(config, results)?,
        ok: true,
    })
}
