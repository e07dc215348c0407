//! Least-squares fits of `log S ≈ log C_g + k log A + α k log k`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest index used in a fit; `k log k` is too flat below it.
pub const MIN_FIT_INDEX: usize = 3;

/// Largest tolerated log-scale residual before a fit is called unstable.
pub const RESIDUAL_LIMIT: f64 = 0.5;

/// `S ≤ C_g · A^k · k^{kα}` fitted in log space; one intercept per group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    /// `(group index, log C_g)`.
    pub log_c: Vec<(usize, f64)>,
    pub log_a: f64,
    pub alpha: f64,
    pub max_residual: f64,
    pub points: usize,
}

impl GrowthFit {
    pub fn a(&self) -> f64 {
        self.log_a.exp()
    }

    pub fn require_stable(&self) -> Result<&Self> {
        if self.max_residual > RESIDUAL_LIMIT {
            return Err(Error::FitUnstable {
                residual: self.max_residual,
                limit: RESIDUAL_LIMIT,
            });
        }
        Ok(self)
    }
}

pub(crate) fn k_log_k(k: usize) -> f64 {
    if k == 0 {
        0.0
    } else {
        let k = k as f64;
        k * k.ln()
    }
}

/// Solve `min ‖X β − y‖` by SVD.
pub(crate) fn least_squares(x: &DMatrix<f64>, y: &DVector<f64>) -> Option<DVector<f64>> {
    x.clone().svd(true, true).solve(y, 1e-12).ok()
}

/// Fit over `(group, index, value)` samples. Samples with index below
/// [`MIN_FIT_INDEX`] or non-positive values are skipped. `α` is constrained to
/// be nonnegative. Returns `None` without enough usable points.
pub fn fit_growth(samples: &[(usize, usize, f64)]) -> Option<GrowthFit> {
    let usable: Vec<(usize, usize, f64)> = samples
        .iter()
        .copied()
        .filter(|&(_, k, v)| k >= MIN_FIT_INDEX && v > 0.0 && v.is_finite())
        .collect();
    let mut groups: Vec<usize> = usable.iter().map(|s| s.0).collect();
    groups.sort_unstable();
    groups.dedup();
    let ng = groups.len();
    if ng == 0 || usable.len() < ng + 2 {
        return None;
    }
    let y = DVector::from_iterator(usable.len(), usable.iter().map(|s| s.2.ln()));
    let design = |with_alpha: bool| {
        let cols = ng + 1 + usize::from(with_alpha);
        let mut x = DMatrix::zeros(usable.len(), cols);
        for (r, &(g, k, _)) in usable.iter().enumerate() {
            x[(r, groups.binary_search(&g).unwrap())] = 1.0;
            x[(r, ng)] = k as f64;
            if with_alpha {
                x[(r, ng + 1)] = k_log_k(k);
            }
        }
        x
    };
    let x = design(true);
    let mut beta = least_squares(&x, &y)?;
    let mut alpha = beta[ng + 1];
    let mut x_used = x;
    if alpha < 0.0 {
        let x0 = design(false);
        beta = least_squares(&x0, &y)?;
        alpha = 0.0;
        x_used = x0;
    }
    let fitted = &x_used * &beta;
    let max_residual = (&y - fitted).amax();
    Some(GrowthFit {
        log_c: groups.iter().enumerate().map(|(i, &g)| (g, beta[i])).collect(),
        log_a: beta[ng],
        alpha,
        max_residual,
        points: usable.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_model() {
        let mut s = Vec::new();
        for g in 0..3 {
            for k in 0..=12 {
                let v = (0.3 * g as f64 + k as f64 * 0.7f64.ln() + 0.5 * k_log_k(k)).exp();
                s.push((g, k, v));
            }
        }
        let f = fit_growth(&s).unwrap();
        assert!((f.alpha - 0.5).abs() < 1e-10);
        assert!((f.a() - 0.7).abs() < 1e-10);
        assert!(f.max_residual < 1e-10);
        assert!((f.log_c[2].1 - 0.6).abs() < 1e-9);
    }

    #[test]
    fn negative_alpha_clamped() {
        let s: Vec<_> = (0..=10).map(|k| (0, k, (-0.2 * k_log_k(k)).exp())).collect();
        assert_eq!(fit_growth(&s).unwrap().alpha, 0.0);
    }

    #[test]
    fn too_few_points() {
        assert!(fit_growth(&[(0, 3, 1.0), (0, 4, 2.0)]).is_none());
        assert!(fit_growth(&[(0, 1, 1.0), (0, 2, 2.0)]).is_none());
    }
}
