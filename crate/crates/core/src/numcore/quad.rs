//! Slice-level quadrature and interpolation on uniform spacing.
//!
//! Cumulative integrals use composite Simpson at even offsets from the base
//! node. At odd offsets the last single panel is closed with a four-point
//! cubic rule (centered where neighbours exist, one-sided at the ends), so the
//! even/odd alternation carries no O(h^4) sawtooth into second differences.

use num_complex::Complex64;

type C = Complex64;

/// Integral over one panel `[v[j], v[j+1]]` using cubic interpolation.
fn single_panel(v: &[C], h: f64, j: usize) -> C {
    let n = v.len();
    debug_assert!(j + 1 < n);
    if n < 3 {
        return (v[j] + v[j + 1]) * (0.5 * h);
    }
    if n == 3 {
        return if j == 0 {
            (v[0] * 5.0 + v[1] * 8.0 - v[2]) * (h / 12.0)
        } else {
            (-v[0] + v[1] * 8.0 + v[2] * 5.0) * (h / 12.0)
        };
    }
    if j >= 1 && j + 2 < n {
        (-v[j - 1] + v[j] * 13.0 + v[j + 1] * 13.0 - v[j + 2]) * (h / 24.0)
    } else if j == 0 {
        (v[0] * 9.0 + v[1] * 19.0 - v[2] * 5.0 + v[3]) * (h / 24.0)
    } else {
        // j == n - 2
        (v[n - 4] - v[n - 3] * 5.0 + v[n - 2] * 19.0 + v[n - 1] * 9.0) * (h / 24.0)
    }
}

/// `out[i] = \int_{0}^{i h} v`, with `out[0] = 0` exactly.
pub fn cumulative_forward(v: &[C], h: f64) -> Vec<C> {
    let n = v.len();
    let mut out = vec![C::new(0.0, 0.0); n];
    for m in 1..n {
        out[m] = if m % 2 == 0 {
            out[m - 2] + (v[m - 2] + v[m - 1] * 4.0 + v[m]) * (h / 3.0)
        } else {
            out[m - 1] + single_panel(v, h, m - 1)
        };
    }
    out
}

/// `out[i] = \int_{x_base}^{x_i} v` (signed), with `out[base] = 0` exactly.
pub fn cumulative_from(v: &[C], h: f64, base: usize) -> Vec<C> {
    let n = v.len();
    assert!(base < n, "base index {base} out of range for {n} samples");
    let mut out = vec![C::new(0.0, 0.0); n];
    let right = cumulative_forward(&v[base..], h);
    out[base..].copy_from_slice(&right);
    if base > 0 {
        let left: Vec<C> = v[..=base].iter().rev().copied().collect();
        let left = cumulative_forward(&left, h);
        for (k, val) in left.into_iter().enumerate() {
            out[base - k] = -val;
        }
    }
    // a side with fewer than four samples cannot hold a cubic panel
    if n >= 4 && (base < 3 || n - 1 - base < 3) {
        let through = cumulative_through(v, h, base);
        let short = if base < 3 { 0..base } else { base + 1..n };
        out[short.clone()].copy_from_slice(&through[short]);
    }
    out
}

/// `out[i] = \int_{x_base}^{x_i} v` (signed), taken as a difference of the
/// forward cumulative integral over the whole slice. Unlike
/// [`cumulative_from`] every panel sees neighbours on both sides of `base`,
/// which matters when `base` is close to an end.
pub fn cumulative_through(v: &[C], h: f64, base: usize) -> Vec<C> {
    assert!(base < v.len(), "base index {base} out of range for {} samples", v.len());
    let mut out = cumulative_forward(v, h);
    let b = out[base];
    for o in out.iter_mut() {
        *o -= b;
    }
    out
}

/// Definite integral over all samples: composite Simpson, with a trailing
/// three-eighths panel when the number of intervals is odd.
pub fn integrate(v: &[C], h: f64) -> C {
    let n = v.len();
    match n {
        0 | 1 => C::new(0.0, 0.0),
        2 => (v[0] + v[1]) * (0.5 * h),
        _ => {
            let intervals = n - 1;
            let simpson_end = if intervals % 2 == 0 { n - 1 } else { n - 4 };
            let mut acc = C::new(0.0, 0.0);
            let mut i = 0;
            while i + 2 <= simpson_end {
                acc += v[i] + v[i + 1] * 4.0 + v[i + 2];
                i += 2;
            }
            let mut total = acc * (h / 3.0);
            if intervals % 2 == 1 {
                let k = n - 4;
                total += (v[k] + v[k + 1] * 3.0 + v[k + 2] * 3.0 + v[k + 3]) * (3.0 * h / 8.0);
            }
            total
        }
    }
}

/// Values at the midpoints of consecutive samples (length `n - 1`), by
/// four-point cubic interpolation.
pub fn midpoints(v: &[C]) -> Vec<C> {
    let n = v.len();
    assert!(n >= 2);
    if n < 4 {
        return v.windows(2).map(|w| (w[0] + w[1]) * 0.5).collect();
    }
    (0..n - 1)
        .map(|j| {
            if j >= 1 && j + 2 < n {
                (-v[j - 1] + v[j] * 9.0 + v[j + 1] * 9.0 - v[j + 2]) / 16.0
            } else if j == 0 {
                (v[0] * 5.0 + v[1] * 15.0 - v[2] * 5.0 + v[3]) / 16.0
            } else {
                (v[n - 4] - v[n - 3] * 5.0 + v[n - 2] * 15.0 + v[n - 1] * 5.0) / 16.0
            }
        })
        .collect()
}

/// Samples on the half-step grid: `out[2i] = v[i]`, odd entries interpolated.
pub fn refine_half_step(v: &[C]) -> Vec<C> {
    let mids = midpoints(v);
    let mut out = Vec::with_capacity(2 * v.len() - 1);
    for (i, val) in v.iter().enumerate() {
        out.push(*val);
        if i < mids.len() {
            out.push(mids[i]);
        }
    }
    out
}

/// Four-point Lagrange interpolation at fractional position `pos` (in units
/// of the sample spacing, `0 <= pos <= n-1`).
pub fn interpolate_cubic(v: &[C], pos: f64) -> C {
    let n = v.len();
    assert!(n >= 4, "cubic interpolation needs at least four samples");
    let pos = pos.clamp(0.0, (n - 1) as f64);
    let base = (pos.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
    let s = pos - base as f64;
    let nodes = [0.0, 1.0, 2.0, 3.0];
    let mut out = C::new(0.0, 0.0);
    for (a, &xa) in nodes.iter().enumerate() {
        let mut w = 1.0;
        for (b, &xb) in nodes.iter().enumerate() {
            if a != b {
                w *= (s - xb) / (xa - xb);
            }
        }
        out += v[base + a] * w;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(n: usize, h: f64, f: impl Fn(f64) -> C) -> Vec<C> {
        (0..n).map(|i| f(i as f64 * h)).collect()
    }

    #[test]
    fn cumulative_exact_on_cubics() {
        let h = 0.1;
        let v = samples(12, h, |x| C::new(x * x * x - 2.0 * x + 1.0, x * x));
        let out = cumulative_forward(&v, h);
        for (i, val) in out.iter().enumerate() {
            let x = i as f64 * h;
            let exact = C::new(x.powi(4) / 4.0 - x * x + x, x.powi(3) / 3.0);
            assert!((val - exact).norm() < 1e-13, "i={i}: {val} vs {exact}");
        }
    }

    #[test]
    fn cumulative_from_interior_base() {
        let h = 0.05;
        let v = samples(21, h, |x| C::new(x, 0.0));
        let out = cumulative_from(&v, h, 7);
        assert_eq!(out[7], C::new(0.0, 0.0));
        for (i, val) in out.iter().enumerate() {
            let x = i as f64 * h;
            let x0 = 7.0 * h;
            assert!((val.re - (x * x - x0 * x0) / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn integrate_handles_odd_interval_counts() {
        for n in 2..12 {
            let h = 0.3;
            let v = samples(n, h, |x| C::new(x * x, 1.0));
            let b = (n - 1) as f64 * h;
            let exact = C::new(b * b * b / 3.0, b);
            let got = integrate(&v, h);
            let tol = if n == 2 { 0.02 } else { 1e-12 };
            assert!((got - exact).norm() < tol, "n={n}: {got} vs {exact}");
        }
    }

    #[test]
    fn midpoint_refinement_exact_on_cubics() {
        let v = samples(9, 0.25, |x| C::new(x.powi(3), -x));
        let fine = refine_half_step(&v);
        assert_eq!(fine.len(), 17);
        for (i, val) in fine.iter().enumerate() {
            let x = i as f64 * 0.125;
            assert!((val - C::new(x.powi(3), -x)).norm() < 1e-13);
        }
    }

    #[test]
    fn cubic_interpolation_reproduces_cubics() {
        let v = samples(10, 1.0, |x| C::new(x.powi(3) - x, 2.0 * x));
        for &p in &[0.0, 0.3, 4.5, 8.99, 9.0] {
            let got = interpolate_cubic(&v, p);
            assert!((got - C::new(p.powi(3) - p, 2.0 * p)).norm() < 1e-10);
        }
    }
}
