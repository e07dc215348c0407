//! Natural cubic splines for complex samples.

use num_complex::Complex64;

#[derive(Debug, Clone)]
pub(crate) struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>, // second derivatives
}

impl CubicSpline {
    pub(crate) fn natural(x: Vec<f64>, y: Vec<f64>) -> Self {
        let n = x.len();
        assert!(n >= 2 && y.len() == n);
        let mut m = vec![0.0; n];
        if n > 2 {
            // tridiagonal solve for interior second derivatives
            let mut diag = vec![0.0; n];
            let mut rhs = vec![0.0; n];
            let mut upper = vec![0.0; n];
            for i in 1..n - 1 {
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                diag[i] = 2.0 * (h0 + h1);
                upper[i] = h1;
                rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
                if i > 1 {
                    let w = h0 / diag[i - 1];
                    diag[i] -= w * upper[i - 1];
                    rhs[i] -= w * rhs[i - 1];
                }
            }
            for i in (1..n - 1).rev() {
                m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
            }
        }
        Self { x, y, m }
    }

    pub(crate) fn eval(&self, xv: f64) -> f64 {
        let n = self.x.len();
        let k = match self.x.binary_search_by(|p| p.total_cmp(&xv)) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        };
        let h = self.x[k + 1] - self.x[k];
        let a = (self.x[k + 1] - xv) / h;
        let b = (xv - self.x[k]) / h;
        a * self.y[k]
            + b * self.y[k + 1]
            + ((a * a * a - a) * self.m[k] + (b * b * b - b) * self.m[k + 1]) * h * h / 6.0
    }
}

/// Separate natural splines for the real and imaginary parts.
#[derive(Debug, Clone)]
pub struct ComplexSpline {
    re: CubicSpline,
    im: CubicSpline,
}

impl ComplexSpline {
    pub fn natural(x: &[f64], values: &[Complex64]) -> Self {
        Self {
            re: CubicSpline::natural(x.to_vec(), values.iter().map(|v| v.re).collect()),
            im: CubicSpline::natural(x.to_vec(), values.iter().map(|v| v.im).collect()),
        }
    }

    /// Spline over `u = t²/2` from radial nodes `t`.
    pub fn natural_in_u(t: &[f64], values: &[Complex64]) -> Self {
        let u: Vec<f64> = t.iter().map(|t| 0.5 * t * t).collect();
        Self::natural(&u, values)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        Complex64::new(self.re.eval(x), self.im.eval(x))
    }
}
