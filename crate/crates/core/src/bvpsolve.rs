//! Dirichlet fitting with a solution family.
//!
//! Coefficients minimise `sum_i w_i |sum_m α_m u_m(z_i) - d_i|²` over boundary
//! nodes `z_i` with trapezoid weights `w_i` along each edge. The normal
//! equations are damped by `1e-12 * max diag` and solved by Cholesky.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcore::{ComplexI, ComplexSampled2D};
use crate::schrodinger2d::SolutionFamily2D;

/// Relative Tikhonov parameter.
pub const TIKHONOV: f64 = 1e-12;

const GEOM_TOL: f64 = 1e-12;

/// Reflection symmetry a domain must have for the completeness results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetry {
    /// Reflections in both axes (both generators complex).
    #[default]
    BothAxes,
    /// Reflection `y -> -y` only (`f` real, `g` complex).
    YOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Domain {
    Rectangle { x: (f64, f64), y: (f64, f64) },
    /// Simple polygon, vertices in order.
    Polygon { vertices: Vec<(f64, f64)> },
}

impl Domain {
    /// The centered square `[-a, a]²`.
    pub fn square(a: f64) -> Self {
        Self::Rectangle { x: (-a, a), y: (-a, a) }
    }

    pub fn vertices(&self) -> Vec<(f64, f64)> {
        match self {
            Self::Rectangle { x, y } => vec![(x.0, y.0), (x.1, y.0), (x.1, y.1), (x.0, y.1)],
            Self::Polygon { vertices } => vertices.clone(),
        }
    }

    fn validate(&self) -> Result<()> {
        let v = self.vertices();
        if v.len() < 3 {
            return Err(Error::Domain("a polygon needs at least three vertices".into()));
        }
        if v.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
            return Err(Error::Domain("non-finite vertex".into()));
        }
        if signed_area(&v).abs() <= GEOM_TOL {
            return Err(Error::Domain("degenerate domain (zero area)".into()));
        }
        Ok(())
    }

    /// Closed-set membership (points on the boundary count as inside).
    pub fn contains(&self, p: (f64, f64)) -> bool {
        let v = self.vertices();
        let n = v.len();
        let mut inside = false;
        for i in 0..n {
            let (a, b) = (v[i], v[(i + 1) % n]);
            if distance_to_segment(p, a, b) <= 1e-10 {
                return true;
            }
            if (a.1 > p.1) != (b.1 > p.1) {
                let x = a.0 + (p.1 - a.1) / (b.1 - a.1) * (b.0 - a.0);
                if p.0 < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Checks that with every boundary point `(x, y)` the rectangle spanned
    /// by its reflections lies in the domain (sampled along its edges), or
    /// for [`Symmetry::YOnly`] that the segment to `(x, -y)` does.
    pub fn check_symmetry(&self, sym: Symmetry, samples_per_edge: usize) -> Result<()> {
        for p in boundary_points(&self.vertices(), samples_per_edge.max(1)) {
            let (x, y) = (p.x, p.y);
            let corners: Vec<(f64, f64)> = match sym {
                Symmetry::BothAxes => vec![(x, y), (-x, y), (-x, -y), (x, -y)],
                Symmetry::YOnly => vec![(x, y), (x, -y)],
            };
            let k = corners.len();
            for i in 0..k {
                let (a, b) = (corners[i], corners[(i + 1) % k]);
                for s in 0..=8 {
                    let t = s as f64 / 8.0;
                    let q = (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
                    if !self.contains(q) {
                        return Err(Error::Domain(format!(
                            "domain lacks the required symmetry: ({:.6}, {:.6}) reflects outside",
                            x, y
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Bounding box `((x_min, x_max), (y_min, y_max))`.
    pub fn bounds(&self) -> ((f64, f64), (f64, f64)) {
        let v = self.vertices();
        let fold = |f: fn(&(f64, f64)) -> f64| {
            v.iter()
                .map(f)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| (lo.min(c), hi.max(c)))
        };
        (fold(|p| p.0), fold(|p| p.1))
    }
}

fn signed_area(v: &[(f64, f64)]) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum::<f64>()
        / 2.0
}

fn distance_to_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    ((p.0 - a.0 - t * dx).powi(2) + (p.1 - a.1 - t * dy).powi(2)).sqrt()
}

/// A boundary sample with its trapezoid weight and outward unit normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryNode {
    pub x: f64,
    pub y: f64,
    pub weight: f64,
    pub normal: (f64, f64),
}

/// `per_edge` equally spaced nodes on every edge, starting at its first
/// vertex. A vertex carries half of each adjacent edge's end weight and the
/// average of the two edge normals.
fn boundary_points(v: &[(f64, f64)], per_edge: usize) -> Vec<BoundaryNode> {
    let n = v.len();
    let orient = signed_area(v).signum();
    let edge = |i: usize| {
        let (a, b) = (v[i], v[(i + 1) % n]);
        let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
        // outward normal for counter-clockwise order is (dy, -dx)
        let normal = if len > 0.0 {
            (orient * (b.1 - a.1) / len, -orient * (b.0 - a.0) / len)
        } else {
            (0.0, 0.0)
        };
        (a, b, len, normal)
    };
    let mut out = Vec::with_capacity(n * per_edge);
    for i in 0..n {
        let (a, b, len, normal) = edge(i);
        let h = len / per_edge as f64;
        for k in 0..per_edge {
            let t = k as f64 / per_edge as f64;
            let (weight, normal) = if k == 0 {
                let (_, _, plen, pnormal) = edge((i + n - 1) % n);
                let (sx, sy) = (normal.0 + pnormal.0, normal.1 + pnormal.1);
                let s = (sx * sx + sy * sy).sqrt().max(f64::MIN_POSITIVE);
                (0.5 * h + 0.5 * plen / per_edge as f64, (sx / s, sy / s))
            } else {
                (h, normal)
            };
            out.push(BoundaryNode {
                x: a.0 + t * (b.0 - a.0),
                y: a.1 + t * (b.1 - a.1),
                weight,
                normal,
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BvpOptions {
    pub nodes_per_edge: usize,
    pub symmetry: Symmetry,
    /// Accept domains without the required symmetry (no convergence claim).
    pub experimental: bool,
}

impl Default for BvpOptions {
    fn default() -> Self {
        Self {
            nodes_per_edge: 100,
            symmetry: Symmetry::BothAxes,
            experimental: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BvpProblem {
    pub domain: Domain,
    pub nodes: Vec<BoundaryNode>,
    pub data: Vec<ComplexI>,
    /// Outward normal derivative of the data, for the Neumann-type diagnostic.
    pub normal_data: Option<Vec<ComplexI>>,
    pub family: SolutionFamily2D,
    pub m_used: usize,
}

impl BvpProblem {
    /// Sample `data(x, y)` on the boundary of `domain`.
    pub fn new(
        domain: Domain,
        family: SolutionFamily2D,
        m_used: usize,
        opts: BvpOptions,
        data: impl Fn(f64, f64) -> ComplexI,
    ) -> Result<Self> {
        domain.validate()?;
        if opts.nodes_per_edge == 0 {
            return Err(Error::InvalidArgument("nodes_per_edge must be positive".into()));
        }
        if !opts.experimental {
            domain.check_symmetry(opts.symmetry, opts.nodes_per_edge)?;
        }
        let ((x0, x1), (y0, y1)) = domain.bounds();
        let (gx, gy) = (family.grid_x(), family.grid_y());
        if x0 < gx.a_left() - GEOM_TOL
            || x1 > gx.a_right() + GEOM_TOL
            || y0 < gy.a_left() - GEOM_TOL
            || y1 > gy.a_right() + GEOM_TOL
        {
            return Err(Error::Domain("domain extends beyond the family grid".into()));
        }
        let nodes = boundary_points(&domain.vertices(), opts.nodes_per_edge);
        let data = nodes.iter().map(|p| data(p.x, p.y)).collect();
        let p = Self {
            domain,
            nodes,
            data,
            normal_data: None,
            family,
            m_used,
        };
        p.check_sizes()?;
        Ok(p)
    }

    /// Attach `∂u/∂n` of the data for the Neumann-type diagnostic.
    pub fn with_normal_data(mut self, grad: impl Fn(f64, f64) -> (ComplexI, ComplexI)) -> Self {
        self.normal_data = Some(
            self.nodes
                .iter()
                .map(|p| {
                    let (gx, gy) = grad(p.x, p.y);
                    gx * p.normal.0 + gy * p.normal.1
                })
                .collect(),
        );
        self
    }

    /// Same boundary, new truncation.
    pub fn with_m(&self, m_used: usize) -> Result<Self> {
        let mut p = self.clone();
        p.m_used = m_used;
        p.check_sizes()?;
        Ok(p)
    }

    fn check_sizes(&self) -> Result<()> {
        if self.m_used > self.family.m_max() {
            return Err(Error::InvalidArgument(format!(
                "M = {} exceeds the family size {}",
                self.m_used,
                self.family.m_max()
            )));
        }
        if 2 * (self.m_used + 1) > self.nodes.len() {
            return Err(Error::InvalidArgument(format!(
                "{} boundary nodes cannot overdetermine {} coefficients",
                self.nodes.len(),
                self.m_used + 1
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BvpResult {
    pub m_used: usize,
    pub coefficients: Vec<ComplexI>,
    pub boundary_error_max: f64,
    /// `sqrt(<e, e>_1)` with the boundary trapezoid rule.
    pub boundary_error_l2: f64,
    /// `sqrt(<e, e>_2)`, when normal data was supplied.
    pub neumann_error_l2: Option<f64>,
    /// Ratio of extreme singular values of the damped normal matrix.
    pub condition: f64,
    #[serde(skip)]
    pub solution_field: ComplexSampled2D,
}

fn design_matrix(p: &BvpProblem) -> DMatrix<ComplexI> {
    let cols = p.m_used + 1;
    let rows: Vec<Vec<ComplexI>> = p
        .nodes
        .par_iter()
        .map(|z| (0..cols).map(|m| p.family.eval_member(m, z.x, z.y)).collect())
        .collect();
    DMatrix::from_fn(p.nodes.len(), cols, |i, m| rows[i][m])
}

/// Weighted least-squares fit of the boundary data by `u_0 ... u_M`.
pub fn solve_dirichlet(p: &BvpProblem) -> Result<BvpResult> {
    p.check_sizes()?;
    let a = design_matrix(p);
    let w = DVector::from_iterator(p.nodes.len(), p.nodes.iter().map(|z| ComplexI::new(z.weight, 0.0)));
    let d = DVector::from_column_slice(&p.data);

    let aw = DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * w[i]);
    let mut normal = a.adjoint() * &aw;
    let rhs = aw.adjoint() * &d;
    let diag_max = (0..normal.nrows()).map(|i| normal[(i, i)].re).fold(0.0, f64::max);
    let tau = TIKHONOV * diag_max;
    for i in 0..normal.nrows() {
        normal[(i, i)] += tau;
    }
    let sv = normal.clone().singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let chol = normal.cholesky().ok_or(Error::RankDeficient { condition })?;
    let alpha = chol.solve(&rhs);
    if alpha.iter().any(|v| !v.is_finite()) {
        return Err(Error::RankDeficient { condition });
    }

    let fit = &a * &alpha;
    let mut emax = 0.0_f64;
    let mut e2 = 0.0_f64;
    for (i, z) in p.nodes.iter().enumerate() {
        let e = (fit[i] - d[i]).norm();
        emax = emax.max(e);
        e2 += z.weight * e * e;
    }
    let coefficients: Vec<ComplexI> = alpha.iter().copied().collect();

    let neumann_error_l2 = p.normal_data.as_ref().map(|nd| {
        p.nodes
            .par_iter()
            .zip(nd)
            .map(|(z, &target)| {
                let dn: ComplexI = coefficients
                    .iter()
                    .enumerate()
                    .map(|(m, &c)| {
                        let (gx, gy) = p.family.eval_member_gradient(m, z.x, z.y);
                        c * (gx * z.normal.0 + gy * z.normal.1)
                    })
                    .sum();
                z.weight * (dn - target).norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    });

    let fam = &p.family;
    let solution_field = ComplexSampled2D::from_fn_indexed(*fam.grid_x(), *fam.grid_y(), |ix, iy| {
        coefficients
            .iter()
            .enumerate()
            .map(|(m, &c)| c * fam.member(m).get(ix, iy))
            .sum()
    });

    Ok(BvpResult {
        m_used: p.m_used,
        coefficients,
        boundary_error_max: emax,
        boundary_error_l2: e2.sqrt(),
        neumann_error_l2,
        condition,
        solution_field,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub m: usize,
    pub boundary_error_max: f64,
    pub boundary_error_l2: f64,
    pub neumann_error_l2: Option<f64>,
    pub condition: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// No row's max error exceeds its predecessor's by more than 10 %.
    pub monotone: bool,
}

/// Fit at each truncation in `m_list`.
pub fn convergence_study(p: &BvpProblem, m_list: &[usize]) -> Result<ConvergenceTable> {
    let rows = m_list
        .iter()
        .map(|&m| {
            let r = solve_dirichlet(&p.with_m(m)?)?;
            Ok(ConvergenceRow {
                m,
                boundary_error_max: r.boundary_error_max,
                boundary_error_l2: r.boundary_error_l2,
                neumann_error_l2: r.neumann_error_l2,
                condition: r.condition,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let monotone = rows
        .windows(2)
        .all(|w| w[1].boundary_error_max <= 1.1 * w[0].boundary_error_max);
    Ok(ConvergenceTable { rows, monotone })
}
