//! Small grid and quadrature-on-samples helpers used throughout the crate.

/// `n` evenly spaced points covering `[a, b]` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least two points");
    let h = (b - a) / (n - 1) as f64;
    let mut xs: Vec<f64> = (0..n).map(|i| a + h * i as f64).collect();
    // pin the last point so downstream interval checks see exactly b
    xs[n - 1] = b;
    xs
}

/// Trapezoidal rule on a (possibly non-uniform) sampled function.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let mut acc = 0.0;
    for i in 1..xs.len() {
        acc += 0.5 * (ys[i] + ys[i - 1]) * (xs[i] - xs[i - 1]);
    }
    acc
}

/// Composite Simpson rule on a uniform grid; falls back to a trapezoid on the
/// final panel when the point count is even.
pub fn simpson_uniform(h: f64, ys: &[f64]) -> f64 {
    let n = ys.len();
    assert!(n >= 3);
    let odd_points = if n % 2 == 1 { n } else { n - 1 };
    let mut acc = ys[0] + ys[odd_points - 1];
    for (i, &y) in ys.iter().enumerate().take(odd_points - 1).skip(1) {
        acc += if i % 2 == 1 { 4.0 * y } else { 2.0 * y };
    }
    let mut total = acc * h / 3.0;
    if n % 2 == 0 {
        total += 0.5 * (ys[n - 2] + ys[n - 1]) * h;
    }
    total
}

/// First derivative on a uniform grid by the 5-point centered stencil,
/// one-sided 5-point stencils at the edges. O(h^4).
pub fn derivative_5pt(h: f64, ys: &[f64]) -> Vec<f64> {
    let n = ys.len();
    assert!(n >= 5);
    let mut d = vec![0.0; n];
    for i in 0..n {
        d[i] = if i < 2 {
            (-25.0 * ys[i] + 48.0 * ys[i + 1] - 36.0 * ys[i + 2] + 16.0 * ys[i + 3]
                - 3.0 * ys[i + 4])
                / (12.0 * h)
        } else if i + 2 >= n {
            (25.0 * ys[i] - 48.0 * ys[i - 1] + 36.0 * ys[i - 2] - 16.0 * ys[i - 3]
                + 3.0 * ys[i - 4])
                / (12.0 * h)
        } else {
            (ys[i - 2] - 8.0 * ys[i - 1] + 8.0 * ys[i + 1] - ys[i + 2]) / (12.0 * h)
        };
    }
    d
}

/// Second derivative on a uniform grid by the 5-point centered stencil. O(h^4).
/// Only interior points `2..n-2` are meaningful; edges are copied from their
/// nearest interior neighbour.
pub fn second_derivative_5pt(h: f64, ys: &[f64]) -> Vec<f64> {
    let n = ys.len();
    assert!(n >= 5);
    let mut d = vec![0.0; n];
    for i in 2..n - 2 {
        d[i] = (-ys[i - 2] + 16.0 * ys[i - 1] - 30.0 * ys[i] + 16.0 * ys[i + 1] - ys[i + 2])
            / (12.0 * h * h);
    }
    d[0] = d[2];
    d[1] = d[2];
    d[n - 2] = d[n - 3];
    d[n - 1] = d[n - 3];
    d
}

/// Indices of strict local maxima of `ys` (interior points only).
pub fn local_maxima(ys: &[f64]) -> Vec<usize> {
    let mut peaks = Vec::new();
    for i in 1..ys.len().saturating_sub(1) {
        if ys[i] > ys[i - 1] && ys[i] > ys[i + 1] {
            peaks.push(i);
        }
    }
    peaks
}

/// Bisection for a root of `f` inside `[lo, hi]`, which must bracket a sign
/// change. Refines until the bracket width drops below `xtol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() < xtol {
            return Some(mid);
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Some(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
