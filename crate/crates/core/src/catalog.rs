//! Closed-form generating functions.
//!
//! Each entry is a nonvanishing-checkable `f` with `f(0) = 1` (for `poly`,
//! when the constant coefficient is 1) together with its exact derivatives,
//! so the potential `q = f''/f` and the slope `h = f'(0)` are analytic.
//!
//! Text form, as accepted by [`Generator::from_str`]:
//!
//! ```text
//! one
//! exp-i:κ          e^{iκx}
//! exp:μ            e^{μx}
//! cosh:μ           cosh(μx)
//! poly:c0,c1,...   c0 + c1 x + ...
//! rational:β       1 / (1 + βx²)
//! ```
//!
//! Parameters are complex numbers such as `1`, `0.5-2i`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcore::{ComplexI, ComplexSampled1D, Grid1D};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Generator {
    One,
    ExpI { kappa: ComplexI },
    Exp { mu: ComplexI },
    Cosh { mu: ComplexI },
    Poly { coeffs: Vec<ComplexI> },
    Rational { beta: ComplexI },
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Self::One => "one",
            Self::ExpI { .. } => "exp-i",
            Self::Exp { .. } => "exp",
            Self::Cosh { .. } => "cosh",
            Self::Poly { .. } => "poly",
            Self::Rational { .. } => "rational",
        }
    }

    /// `(f, f', f'')` at `x`.
    pub fn jet(&self, x: f64) -> [ComplexI; 3] {
        let one = ComplexI::new(1.0, 0.0);
        let zero = ComplexI::new(0.0, 0.0);
        match self {
            Self::One => [one, zero, zero],
            Self::ExpI { kappa } => {
                let a = ComplexI::new(0.0, 1.0) * kappa;
                let e = (a * x).exp();
                [e, a * e, a * a * e]
            }
            Self::Exp { mu } => {
                let e = (mu * x).exp();
                [e, mu * e, mu * mu * e]
            }
            Self::Cosh { mu } => {
                let (c, s) = ((mu * x).cosh(), (mu * x).sinh());
                [c, mu * s, mu * mu * c]
            }
            Self::Poly { coeffs } => {
                // Horner for the value and both derivatives.
                let (mut p, mut d1, mut d2) = (zero, zero, zero);
                for &c in coeffs.iter().rev() {
                    d2 = d2 * x + d1 * 2.0;
                    d1 = d1 * x + p;
                    p = p * x + c;
                }
                [p, d1, d2]
            }
            Self::Rational { beta } => {
                let d = one + beta * x * x;
                let f = d.inv();
                let f1 = -beta * 2.0 * x * f * f;
                let f2 = (beta * beta * 6.0 * x * x - beta * 2.0) * f * f * f;
                [f, f1, f2]
            }
        }
    }

    pub fn value(&self, x: f64) -> ComplexI {
        self.jet(x)[0]
    }

    /// `q(x) = f''(x) / f(x)`.
    pub fn potential(&self, x: f64) -> ComplexI {
        let [f, _, f2] = self.jet(x);
        match self {
            Self::ExpI { kappa } => -kappa * kappa,
            Self::Exp { mu } | Self::Cosh { mu } => mu * mu,
            _ => f2 / f,
        }
    }

    /// `h = f'(0)`.
    pub fn slope_at_origin(&self) -> ComplexI {
        self.jet(0.0)[1]
    }

    /// Samples of `f`, rejected if `f` vanishes on the grid.
    pub fn sample(&self, grid: Grid1D) -> Result<ComplexSampled1D> {
        let s = ComplexSampled1D::from_fn(grid, |x| self.value(x))?;
        s.ensure_nonvanishing()?;
        Ok(s)
    }

    pub fn sample_potential(&self, grid: Grid1D) -> Result<ComplexSampled1D> {
        ComplexSampled1D::from_fn(grid, |x| self.potential(x))
    }

    /// `Some(c)` when the potential is the constant `-c`.
    pub fn constant_potential(&self) -> Option<ComplexI> {
        match self {
            Self::One => Some(ComplexI::new(0.0, 0.0)),
            Self::ExpI { kappa } => Some(kappa * kappa),
            Self::Exp { mu } | Self::Cosh { mu } => Some(-mu * mu),
            _ => None,
        }
    }
}

fn parse_complex(s: &str) -> Result<ComplexI> {
    ComplexI::from_str(s.trim()).map_err(|_| Error::InvalidArgument(format!("not a complex number: {s:?}")))
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a)),
            None => (s.trim(), None),
        };
        let one_arg = |label: &str| -> Result<ComplexI> {
            let a = args.ok_or_else(|| Error::InvalidArgument(format!("{name} needs a parameter {label}")))?;
            parse_complex(a)
        };
        match name {
            "one" => Ok(Self::One),
            "exp-i" => Ok(Self::ExpI { kappa: one_arg("κ")? }),
            "exp" => Ok(Self::Exp { mu: one_arg("μ")? }),
            "cosh" => Ok(Self::Cosh { mu: one_arg("μ")? }),
            "rational" => Ok(Self::Rational { beta: one_arg("β")? }),
            "poly" => {
                let a = args.ok_or_else(|| Error::InvalidArgument("poly needs coefficients".into()))?;
                let coeffs = a.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?;
                Ok(Self::Poly { coeffs })
            }
            other => Err(Error::InvalidArgument(format!("unknown generator {other:?}"))),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::One => write!(f, "one"),
            Self::ExpI { kappa } => write!(f, "exp-i:{kappa}"),
            Self::Exp { mu } => write!(f, "exp:{mu}"),
            Self::Cosh { mu } => write!(f, "cosh:{mu}"),
            Self::Rational { beta } => write!(f, "rational:{beta}"),
            Self::Poly { coeffs } => {
                let parts: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
        }
    }
}
