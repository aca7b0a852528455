//! Browser demo: three plots computed by `transmute-core`.
//!
//! * [`lbasis_curves`]: the L-basis `phi_0 .. phi_K` of a catalog generator;
//! * [`kernel_heatmap`]: `|K(x, t)|` of the constant-potential kernel;
//! * [`family_member`]: one member `u_m` of the 2D solution family.
//!
//! The functions here are plain Rust; `web` wraps them for wasm-bindgen.

use transmute_core::catalog::Generator;
use transmute_core::lbasis::LBasis;
use transmute_core::schrodinger2d::{build_family, required_depth};
use transmute_core::transmute::constant_q_kernel;
use transmute_core::{ComplexI, Grid1D};

/// Largest grid the page may request.
pub const MAX_POINTS: usize = 801;

fn grid(n: usize) -> Result<Grid1D, String> {
    if n < 3 || n % 2 == 0 || n > MAX_POINTS {
        return Err(format!("grid size must be odd, between 3 and {MAX_POINTS}; got {n}"));
    }
    Grid1D::symmetric(1.0, n).map_err(|e| e.to_string())
}

fn generator(text: &str) -> Result<Generator, String> {
    text.parse().map_err(|e: transmute_core::Error| e.to_string())
}

/// Rows of length `n`: `x`, then `Re phi_k`, `Im phi_k` for `k = 0..=k_max`.
pub fn lbasis_curves(f: &str, k_max: usize, n: usize) -> Result<Vec<f64>, String> {
    if k_max > 12 {
        return Err("k_max is limited to 12".into());
    }
    let g = grid(n)?;
    let gen = generator(f)?;
    let sampled = gen.sample(g).map_err(|e| e.to_string())?;
    let basis = LBasis::build(sampled, g.middle_index(), k_max).map_err(|e| e.to_string())?;
    let mut out = g.nodes();
    for phi in basis.phis() {
        out.extend(phi.values().iter().map(|v| v.re));
        out.extend(phi.values().iter().map(|v| v.im));
    }
    Ok(out)
}

/// `|K(x, t)|` for `q = -c` on `[-1, 1]²`, row `i` is `x = node(i)`,
/// column `j` is `t = node(j)`; `NaN` outside `|t| <= |x|`.
pub fn kernel_heatmap(c: ComplexI, n: usize) -> Result<Vec<f64>, String> {
    grid(n)?;
    let k = constant_q_kernel(c, 1.0, n).map_err(|e| e.to_string())?;
    let mut out = vec![f64::NAN; n * n];
    for i in 0..n {
        let start = k.row_start(i);
        for (off, v) in k.row(i).iter().enumerate() {
            out[i * n + start + off] = v.norm();
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Re,
    Im,
    Abs,
}

impl Part {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "re" => Ok(Self::Re),
            "im" => Ok(Self::Im),
            "abs" => Ok(Self::Abs),
            other => Err(format!("part must be re, im or abs; got {other:?}")),
        }
    }

    fn of(self, v: ComplexI) -> f64 {
        match self {
            Self::Re => v.re,
            Self::Im => v.im,
            Self::Abs => v.norm(),
        }
    }
}

/// `u_m` on `[-1, 1]²`, row-major with `y` as the row index.
pub fn family_member(f: &str, g: &str, m: usize, n: usize, part: Part) -> Result<Vec<f64>, String> {
    if m > 24 {
        return Err("m is limited to 24".into());
    }
    let grid = grid(n)?;
    let depth = required_depth(m);
    let build = |text: &str| -> Result<LBasis, String> {
        let s = generator(text)?.sample(grid).map_err(|e| e.to_string())?;
        LBasis::build(s, grid.middle_index(), depth).map_err(|e| e.to_string())
    };
    let fam = build_family(&build(f)?, &build(g)?, m).map_err(|e| e.to_string())?;
    Ok(fam.member(m).values().iter().map(|&v| part.of(v)).collect())
}

#[cfg(target_arch = "wasm32")]
mod web {
    use wasm_bindgen::prelude::*;

    fn js(e: String) -> JsError {
        JsError::new(&e)
    }

    #[wasm_bindgen(js_name = lbasisCurves)]
    pub fn lbasis_curves(f: &str, k_max: usize, n: usize) -> Result<Vec<f64>, JsError> {
        super::lbasis_curves(f, k_max, n).map_err(js)
    }

    #[wasm_bindgen(js_name = kernelHeatmap)]
    pub fn kernel_heatmap(c_re: f64, c_im: f64, n: usize) -> Result<Vec<f64>, JsError> {
        super::kernel_heatmap(transmute_core::ci(c_re, c_im), n).map_err(js)
    }

    #[wasm_bindgen(js_name = familyMember)]
    pub fn family_member(f: &str, g: &str, m: usize, n: usize, part: &str) -> Result<Vec<f64>, JsError> {
        let part = super::Part::parse(part).map_err(js)?;
        super::family_member(f, g, m, n, part).map_err(js)
    }
}
