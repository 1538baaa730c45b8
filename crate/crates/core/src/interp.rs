//! Interpolation: quintic Lagrange on uniform grids (used to resample solver
//! output) and natural cubic splines (used for tabulated potentials).

use crate::error::{Error, Result};

/// Quintic (6-point) Lagrange interpolant on a uniform grid.
///
/// Evaluation error is O(h^6) for the value and O(h^5) for the derivative,
/// comfortably below the O(h^4) contract of the callers.
#[derive(Debug, Clone)]
pub struct QuinticUniform {
    x0: f64,
    h: f64,
    ys: Vec<f64>,
}

impl QuinticUniform {
    pub fn new(x0: f64, h: f64, ys: Vec<f64>) -> Self {
        assert!(ys.len() >= 6, "quintic interpolation needs at least 6 samples");
        assert!(h != 0.0);
        Self { x0, h, ys }
    }

    fn span(&self) -> (f64, f64) {
        let end = self.x0 + self.h * (self.ys.len() - 1) as f64;
        if self.h > 0.0 {
            (self.x0, end)
        } else {
            (end, self.x0)
        }
    }

    /// Interpolated value and first derivative at `x`.
    pub fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let (lo, hi) = self.span();
        let tol = 1e-12 * (1.0 + self.h.abs() * self.ys.len() as f64);
        if x < lo - tol || x > hi + tol {
            return Err(Error::Domain { x, lo, hi });
        }
        let n = self.ys.len();
        let pos = (x - self.x0) / self.h;
        // 6-point stencil centered on the containing interval
        let base = (pos.floor() as isize - 2).clamp(0, n as isize - 6) as usize;
        let t = pos - base as f64; // local coordinate, nodes at 0..=5
        let mut value = 0.0;
        let mut deriv = 0.0;
        for k in 0..6 {
            let (l, dl) = lagrange_basis_6(k, t);
            value += self.ys[base + k] * l;
            deriv += self.ys[base + k] * dl;
        }
        Ok((value, deriv / self.h))
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        self.eval(x).map(|(v, _)| v)
    }
}

/// Basis polynomial `L_k(t)` over nodes {0,..,5} and its derivative.
fn lagrange_basis_6(k: usize, t: f64) -> (f64, f64) {
    let mut num = 1.0;
    let mut den = 1.0;
    let mut dnum = 0.0;
    for j in 0..6 {
        if j == k {
            continue;
        }
        let xj = j as f64;
        // product rule accumulated incrementally
        dnum = dnum * (t - xj) + num;
        num *= t - xj;
        den *= k as f64 - xj;
    }
    (num / den, dnum / den)
}

/// Natural cubic spline over strictly increasing abscissae.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// second derivatives at the knots
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::Tabulation("x and V columns differ in length".into()));
        }
        if xs.len() < 4 {
            return Err(Error::Tabulation("need at least 4 tabulated points".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Tabulation("x column must be strictly increasing".into()));
        }
        if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Tabulation("non-finite entry in table".into()));
        }
        let n = xs.len();
        // Thomas algorithm for the natural-spline tridiagonal system
        let mut sub = vec![0.0; n];
        let mut diag = vec![1.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = xs[i] - xs[i - 1];
            let h1 = xs[i + 1] - xs[i];
            sub[i] = h0 / 6.0;
            diag[i] = (h0 + h1) / 3.0;
            sup[i] = h1 / 6.0;
            rhs[i] = (ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0;
        }
        for i in 1..n {
            let w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut m = vec![0.0; n];
        m[n - 1] = rhs[n - 1] / diag[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
        }
        Ok(Self { xs, ys, m })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    fn segment(&self, x: f64) -> usize {
        match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.xs.len() - 2),
        }
    }

    /// Spline value at `x`; the caller is responsible for domain checks.
    pub fn value(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a.powi(3) - a) * self.m[i] + (b.powi(3) - b) * self.m[i + 1]) * h * h / 6.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::linspace;
    use approx::assert_abs_diff_eq;

    #[test]
    fn quintic_reproduces_degree5_polynomial_exactly() {
        let f = |x: f64| 1.0 + x - 0.5 * x.powi(3) + 0.01 * x.powi(5);
        let df = |x: f64| 1.0 - 1.5 * x.powi(2) + 0.05 * x.powi(4);
        let xs = linspace(-2.0, 2.0, 21);
        let q = QuinticUniform::new(-2.0, 0.2, xs.iter().map(|&x| f(x)).collect());
        for &x in &[-1.93, -0.41, 0.0, 0.77, 1.99] {
            let (v, d) = q.eval(x).unwrap();
            assert_abs_diff_eq!(v, f(x), epsilon = 1e-12);
            assert_abs_diff_eq!(d, df(x), epsilon = 1e-10);
        }
    }

    #[test]
    fn quintic_accuracy_on_sine() {
        let h = 1e-2;
        let ys: Vec<f64> = linspace(0.0, 3.0, 301).iter().map(|x| x.sin()).collect();
        let q = QuinticUniform::new(0.0, h, ys);
        let (v, d) = q.eval(1.2345).unwrap();
        assert_abs_diff_eq!(v, 1.2345_f64.sin(), epsilon = 1e-13);
        assert_abs_diff_eq!(d, 1.2345_f64.cos(), epsilon = 1e-11);
    }

    #[test]
    fn quintic_rejects_extrapolation() {
        let q = QuinticUniform::new(0.0, 0.1, vec![0.0; 10]);
        assert!(matches!(q.eval(1.5), Err(Error::Domain { .. })));
    }

    #[test]
    fn quintic_handles_descending_grids() {
        let ys: Vec<f64> = (0..20).map(|i| (3.0 - 0.1 * i as f64).powi(2)).collect();
        let q = QuinticUniform::new(3.0, -0.1, ys);
        let (v, d) = q.eval(2.34).unwrap();
        assert_abs_diff_eq!(v, 2.34 * 2.34, epsilon = 1e-12);
        assert_abs_diff_eq!(d, 2.0 * 2.34, epsilon = 1e-10);
    }

    #[test]
    fn spline_is_exact_on_linear_data() {
        let xs = linspace(-1.0, 4.0, 11);
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 0.5).collect();
        let s = CubicSpline::new(xs, ys).unwrap();
        assert_abs_diff_eq!(s.value(1.234), 3.0 * 1.234 - 0.5, epsilon = 1e-13);
        assert_abs_diff_eq!(s.value(-0.999), 3.0 * -0.999 - 0.5, epsilon = 1e-13);
    }

    #[test]
    fn spline_rejects_bad_tables() {
        assert!(CubicSpline::new(vec![0.0, 1.0, 1.0, 2.0], vec![0.0; 4]).is_err());
        assert!(CubicSpline::new(vec![0.0, 1.0, 2.0], vec![0.0; 3]).is_err());
    }
}
