//! Finite-difference stencils on uniform spacing.

use num_complex::Complex64;

type C = Complex64;

/// Second derivative: central differences inside, second-order one-sided
/// four-point stencils at both ends. Needs at least four samples.
pub fn second_derivative(v: &[C], h: f64) -> Vec<C> {
    let n = v.len();
    assert!(n >= 4, "second derivative needs at least four samples");
    let inv = 1.0 / (h * h);
    let mut out = vec![C::new(0.0, 0.0); n];
    for i in 1..n - 1 {
        out[i] = (v[i - 1] - v[i] * 2.0 + v[i + 1]) * inv;
    }
    out[0] = (v[0] * 2.0 - v[1] * 5.0 + v[2] * 4.0 - v[3]) * inv;
    out[n - 1] = (v[n - 1] * 2.0 - v[n - 2] * 5.0 + v[n - 3] * 4.0 - v[n - 4]) * inv;
    out
}

/// First derivative: central differences inside, second-order one-sided at
/// the ends. Needs at least three samples.
pub fn first_derivative(v: &[C], h: f64) -> Vec<C> {
    let n = v.len();
    assert!(n >= 3, "first derivative needs at least three samples");
    let inv = 0.5 / h;
    let mut out = vec![C::new(0.0, 0.0); n];
    for i in 1..n - 1 {
        out[i] = (v[i + 1] - v[i - 1]) * inv;
    }
    out[0] = (-v[0] * 3.0 + v[1] * 4.0 - v[2]) * inv;
    out[n - 1] = (v[n - 1] * 3.0 - v[n - 2] * 4.0 + v[n - 3]) * inv;
    out
}

/// Fourth-order first derivative at index `i`: the centered five-point
/// stencil when both neighbours exist, otherwise a one-sided five-point one.
pub fn first_derivative_at(v: &[C], h: f64, i: usize) -> C {
    let n = v.len();
    assert!(n >= 5, "fourth-order derivative needs at least five samples");
    if i >= 2 && i + 2 < n {
        (v[i - 2] - v[i - 1] * 8.0 + v[i + 1] * 8.0 - v[i + 2]) / (12.0 * h)
    } else if i + 4 < n {
        (-v[i] * 25.0 + v[i + 1] * 48.0 - v[i + 2] * 36.0 + v[i + 3] * 16.0 - v[i + 4] * 3.0)
            / (12.0 * h)
    } else {
        (v[i] * 25.0 - v[i - 1] * 48.0 + v[i - 2] * 36.0 - v[i - 3] * 16.0 + v[i - 4] * 3.0)
            / (12.0 * h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_derivative_exact_on_quadratics() {
        let h = 0.1;
        let v: Vec<C> = (0..8).map(|i| C::new((i as f64 * h).powi(2), 1.0)).collect();
        for d in second_derivative(&v, h) {
            assert!((d - C::new(2.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn one_sided_first_derivative_fourth_order() {
        let h = 0.01;
        let v: Vec<C> = (0..9).map(|i| C::new((i as f64 * h).exp(), 0.0)).collect();
        let d0 = first_derivative_at(&v, h, 0);
        assert!((d0.re - 1.0).abs() < 1e-8);
        let d4 = first_derivative_at(&v, h, 4);
        assert!((d4.re - (4.0 * h).exp()).abs() < 1e-9);
        let d8 = first_derivative_at(&v, h, 8);
        assert!((d8.re - (8.0 * h).exp()).abs() < 1e-8);
    }
}
