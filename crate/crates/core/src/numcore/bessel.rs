//! Bessel functions of the first kind, orders 0 and 1, for complex argument.
//!
//! Both are evaluated from their power series
//!
//! ```text
//! J_0(z) = sum_k (-z^2/4)^k / (k!)^2
//! J_1(z) = (z/2) sum_k (-z^2/4)^k / (k! (k+1)!)
//! ```
//!
//! The series are summed until the term drops below `1e-17` relative to the
//! largest partial term. For `|z| <= 12` the largest term is about `4e3`, so
//! cancellation costs at most four digits.
//!
//! The kernels of the constant-potential transmutation only ever need the
//! entire functions of `w = z^2` exposed below, which sidesteps the branch of
//! `sqrt(c (x^2 - t^2))` entirely.

use num_complex::Complex64;

use crate::error::{Error, Result};

type C = Complex64;

/// Largest `|z|` accepted by [`bessel_j`].
pub const BESSEL_MAX_ARG: f64 = 12.0;

const MAX_TERMS: usize = 200;

/// `sum_k (-w/4)^k / (k! (k + shift)!)` for `shift` in {0, 1}.
fn hypergeometric_tail(w: C, shift: u32) -> C {
    let x = -w * 0.25;
    let mut term = C::new(1.0, 0.0);
    let mut sum = term;
    let mut biggest = 1.0_f64;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term = term * x / (kf * (kf + shift as f64));
        sum += term;
        let t = term.norm();
        biggest = biggest.max(t);
        if t <= 1e-17 * biggest {
            break;
        }
    }
    sum
}

/// `J_0(sqrt(w))`, entire in `w`.
pub fn j0_of_sqrt(w: C) -> C {
    hypergeometric_tail(w, 0)
}

/// `2 J_1(sqrt(w)) / sqrt(w)`, entire in `w`, equal to 1 at `w = 0`.
pub fn j1_ratio_of_sqrt(w: C) -> C {
    hypergeometric_tail(w, 1)
}

/// `J_0(z)` or `J_1(z)` for complex `z` with `|z| <= 12`.
pub fn bessel_j(order: u32, z: C) -> Result<C> {
    let r = z.norm();
    if !r.is_finite() || r > BESSEL_MAX_ARG {
        return Err(Error::BesselRange(r));
    }
    let w = z * z;
    match order {
        0 => Ok(j0_of_sqrt(w)),
        1 => Ok(z * 0.5 * j1_ratio_of_sqrt(w)),
        other => Err(Error::BesselOrder(other)),
    }
}
