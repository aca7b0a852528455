//! Flags and their JSON mirror.
//!
//! Every subcommand's arguments deserialize from a JSON object carrying a
//! `"command"` tag, so `transmute run cfg.json` and the equivalent flags
//! produce the same outputs.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use transmute_core::catalog::Generator;
use transmute_core::{ComplexI, Grid1D};

use crate::error::{invalid, CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "transmute", version, about = "L-bases, SPPS, transmutation kernels and 2D solution families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// L-basis phi_0..phi_K of a catalog generator
    Basis(BasisArgs),
    /// SPPS solutions u1, u2 of u'' - q u = λ u
    Spps(SppsArgs),
    /// Transmutation kernel table, closed form or Goursat solve
    Kernel(KernelArgs),
    /// Solution family u_0..u_M of -Δu + (q1(x) + q2(y)) u = 0
    Family(FamilyArgs),
    /// Least-squares Dirichlet fit from a JSON problem file
    SolveBvp(BvpArgs),
    /// Run an invariant suite and report pass/fail per check
    Verify(VerifyArgs),
    /// Run a JSON config mirroring the flags
    #[serde(skip)]
    Run {
        config: PathBuf,
    },
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

fn default_half_width() -> f64 {
    1.0
}

fn default_grid_1d() -> usize {
    2001
}

fn default_grid_kernel() -> usize {
    801
}

fn default_grid_2d() -> usize {
    201
}

fn default_f() -> String {
    "exp-i:1".into()
}

/// Parameters for catalog entries named without an inline value
/// (`--f exp-i --kappa 1` is `--f exp-i:1`).
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct ParamArgs {
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<String>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    /// Comma-separated polynomial coefficients, constant term first
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BasisArgs {
    /// Generator f, e.g. `exp-i:1`, `cosh:0.5`, `poly:1,0,0.25`
    #[arg(long, default_value_t = default_f())]
    #[serde(default = "default_f")]
    pub f: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = default_grid_1d())]
    #[serde(default = "default_grid_1d")]
    pub grid: usize,
    #[arg(long, default_value_t = default_half_width())]
    #[serde(default = "default_half_width")]
    pub half_width: f64,
    /// Highest index K of phi_K
    #[arg(long, default_value_t = 8)]
    #[serde(default = "default_kmax")]
    pub kmax: usize,
    #[arg(long, default_value_os_t = default_out())]
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

fn default_kmax() -> usize {
    8
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SppsArgs {
    #[arg(long, default_value_t = default_f())]
    #[serde(default = "default_f")]
    pub f: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Spectral parameter λ (complex, e.g. `-4` or `0+2i`)
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    #[arg(long, default_value_t = default_grid_1d())]
    #[serde(default = "default_grid_1d")]
    pub grid: usize,
    #[arg(long, default_value_t = default_half_width())]
    #[serde(default = "default_half_width")]
    pub half_width: f64,
    #[arg(long, default_value_os_t = default_out())]
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum KernelMethod {
    #[default]
    Closed,
    Goursat,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct KernelArgs {
    /// `const` (q = -c) or a catalog generator whose f''/f is used as q
    #[arg(long, default_value = "const")]
    #[serde(default = "default_q")]
    pub q: String,
    /// The constant c of q = -c
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    #[serde(default = "default_c")]
    pub c: String,
    /// Also tabulate the composite kernel with this h
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    #[arg(long, value_enum, default_value_t = KernelMethod::Closed)]
    #[serde(default)]
    pub method: KernelMethod,
    #[arg(long, default_value_t = default_grid_kernel())]
    #[serde(default = "default_grid_kernel")]
    pub grid: usize,
    #[arg(long, default_value_t = default_half_width())]
    #[serde(default = "default_half_width")]
    pub half_width: f64,
    #[arg(long, default_value_os_t = default_out())]
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

fn default_q() -> String {
    "const".into()
}

fn default_c() -> String {
    "1".into()
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct FamilyArgs {
    /// Generator f(x)
    #[arg(long)]
    pub f: String,
    /// Generator g(y)
    #[arg(long)]
    pub g: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Highest member index
    #[arg(long = "M", visible_alias = "m")]
    #[serde(rename = "M", alias = "m")]
    pub m: usize,
    #[arg(long, default_value_t = default_grid_2d())]
    #[serde(default = "default_grid_2d")]
    pub grid: usize,
    #[arg(long, default_value_t = default_half_width())]
    #[serde(default = "default_half_width")]
    pub half_width: f64,
    #[arg(long, default_value_os_t = default_out())]
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BvpArgs {
    /// JSON problem file
    pub problem: PathBuf,
    /// Accept domains without the required reflection symmetry
    #[arg(long)]
    #[serde(default)]
    pub experimental: bool,
    #[arg(long, default_value_os_t = default_out())]
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ConstantQ,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    #[serde(default = "default_c")]
    pub c: String,
    #[arg(long, default_value_t = default_grid_1d())]
    #[serde(default = "default_grid_1d")]
    pub grid: usize,
    #[arg(long, default_value_t = default_half_width())]
    #[serde(default = "default_half_width")]
    pub half_width: f64,
    /// Tolerance override `name=value`, repeatable
    #[arg(long = "tol", value_parser = parse_tol)]
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    #[arg(action = clap::ArgAction::Append)]
    pub tolerances: Vec<(String, f64)>,
    #[arg(long, default_value_os_t = default_out())]
    #[serde(default = "default_out")]
    pub out: PathBuf,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("not a number: {v:?}"))?;
    Ok((k.trim().to_string(), v))
}

pub fn parse_complex(label: &str, s: &str) -> CliResult<ComplexI> {
    ComplexI::from_str(s.trim()).or_else(|_| invalid(format!("{label}: not a complex number: {s:?}")))
}

/// Odd node count of at least 3 on `[-half_width, half_width]`.
pub fn symmetric_grid(n: usize, half_width: f64) -> CliResult<Grid1D> {
    if n < 3 || n % 2 == 0 {
        return invalid(format!("grid must be odd and >= 3, got {n}"));
    }
    if !(half_width.is_finite() && half_width > 0.0) {
        return invalid(format!("half-width must be positive, got {half_width}"));
    }
    Ok(Grid1D::symmetric(half_width, n)?)
}

const NEEDS: [(&str, &str); 5] = [
    ("exp-i", "kappa"),
    ("exp", "mu"),
    ("cosh", "mu"),
    ("rational", "beta"),
    ("poly", "coeffs"),
];

fn needed_param(name: &str) -> Option<&'static str> {
    NEEDS.iter().find(|(n, _)| *n == name).map(|(_, p)| *p)
}

/// Resolve one catalog entry, filling a missing parameter from `params`.
pub fn generator(spec: &str, params: &ParamArgs) -> CliResult<Generator> {
    let spec = spec.trim();
    if spec.contains(':') {
        return spec.parse().map_err(CliError::from);
    }
    let full = match needed_param(spec) {
        None => spec.to_string(),
        Some(p) => {
            let value = match p {
                "kappa" => &params.kappa,
                "mu" => &params.mu,
                "beta" => &params.beta,
                _ => &params.coeffs,
            };
            match value {
                Some(v) => format!("{spec}:{v}"),
                None => return invalid(format!("generator {spec} needs --{p} (or write {spec}:<value>)")),
            }
        }
    };
    full.parse().map_err(CliError::from)
}

/// Resolve `f` and `g`; a shared parameter flag may feed only one of them.
pub fn generator_pair(f: &str, g: &str, params: &ParamArgs) -> CliResult<(Generator, Generator)> {
    let bare = |s: &str| needed_param(s.trim()).filter(|_| !s.contains(':'));
    if let (Some(a), Some(b)) = (bare(f), bare(g)) {
        if a == b {
            return invalid(format!(
                "--{a} is ambiguous for both f and g; write the value inline, e.g. --g {}:<value>",
                g.trim()
            ));
        }
    }
    Ok((generator(f, params)?, generator(g, params)?))
}

pub fn tolerance_map(pairs: &[(String, f64)], defaults: &[(&str, f64)]) -> CliResult<BTreeMap<String, f64>> {
    let mut map: BTreeMap<String, f64> = defaults.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    for (k, v) in pairs {
        if !map.contains_key(k) {
            let known: Vec<&str> = defaults.iter().map(|(k, _)| *k).collect();
            return invalid(format!("unknown tolerance {k:?}; known: {}", known.join(", ")));
        }
        if !(v.is_finite() && *v > 0.0) {
            return invalid(format!("tolerance {k} must be positive, got {v}"));
        }
        map.insert(k.clone(), *v);
    }
    Ok(map)
}
