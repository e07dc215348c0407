//! Two-variable seminorms of wavelet transforms,
//! `S2(l, k, p, q) = sup |a^l b^k (a⁻¹D_a)^p (b⁻¹D_b)^q e^{±ib²cotθ/2} b^{μ−ν} W(b, a)|`.
//!
//! Derivatives are finite differences in `a²/2` and `b²/2` on the sample grid.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{chirp_factor, TransformParams};
use crate::wavelet::CwtSurface;

use super::fit::{fit_growth, GrowthFit};
use super::seminorm::{ChirpSign, MAX_TABLE_INDEX};

/// Fewest nodes per axis for finite differences.
pub const MIN_SURFACE_NODES: usize = 17;

/// Highest derivative order in either variable.
pub const MAX_SURFACE_DERIVATIVE: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeminormTable2D {
    pub l_max: usize,
    pub k_max: usize,
    pub p_max: usize,
    pub q_max: usize,
    pub chirp_sign: ChirpSign,
    entries: Vec<f64>,
    /// Growth along `l` (powers of the scale), one intercept per `(k, p, q)`.
    pub scale_fit: Option<GrowthFit>,
    /// Growth along `k` (powers of the translation), one intercept per `(l, p, q)`.
    pub shift_fit: Option<GrowthFit>,
}

impl SeminormTable2D {
    fn index(&self, l: usize, k: usize, p: usize, q: usize) -> usize {
        ((l * (self.k_max + 1) + k) * (self.p_max + 1) + p) * (self.q_max + 1) + q
    }

    pub fn get(&self, l: usize, k: usize, p: usize, q: usize) -> f64 {
        self.entries[self.index(l, k, p, q)]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0.0)
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    fn samples(&self, along_scale: bool) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        let groups = (self.p_max + 1) * (self.q_max + 1);
        for l in 0..=self.l_max {
            for k in 0..=self.k_max {
                for p in 0..=self.p_max {
                    for q in 0..=self.q_max {
                        let v = self.get(l, k, p, q);
                        let rest = p * (self.q_max + 1) + q;
                        out.push(if along_scale {
                            (k * groups + rest, l, v)
                        } else {
                            (l * groups + rest, k, v)
                        });
                    }
                }
            }
        }
        out
    }
}

/// Width of the finite-difference stencil.
const STENCIL: usize = 5;

/// Weights of the first derivative at `z` from values at `x` (Fornberg's recursion).
fn derivative_weights(z: f64, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut c = vec![[0.0f64; 2]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    for i in 1..n {
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                c[i][1] = c1 * (c[i - 1][0] - c5 * c[i - 1][1]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            c[j][1] = (c4 * c[j][1] - c[j][0]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|w| w[1]).collect()
}

/// `d/du` on a nonuniform grid from the nearest five nodes.
pub(crate) fn derivative(u: &[f64], v: &[Complex64]) -> Vec<Complex64> {
    let n = u.len();
    let m = STENCIL.min(n);
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(m / 2).min(n - m);
            let w = derivative_weights(u[i], &u[lo..lo + m]);
            w.iter().zip(&v[lo..lo + m]).map(|(wi, vi)| vi * *wi).sum()
        })
        .collect()
}

/// Lagrange basis weights of the nodes `x` at `z`.
fn lagrange_weights(x: &[f64], z: f64) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            x.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &xj)| (z - xj) / (x[i] - xj))
                .product()
        })
        .collect()
}

/// Four consecutive indices around `i`, inside `0..n`.
fn window(i: usize, n: usize) -> std::ops::Range<usize> {
    let w = 4.min(n);
    let lo = i.saturating_sub(1).min(n - w);
    lo..lo + w
}

/// Samples per axis when maximizing the local interpolant.
const REFINE_SAMPLES: usize = 33;

/// Grid maximum of `m[ia][ib]`, refined by maximizing the bicubic Lagrange
/// interpolant on the cells next to it.
fn refined_sup(a: &[f64], b: &[f64], m: &[Vec<f64>]) -> f64 {
    let mut best = (0, 0, 0.0);
    for (ia, row) in m.iter().enumerate() {
        for (ib, &v) in row.iter().enumerate() {
            if v > best.2 {
                best = (ia, ib, v);
            }
        }
    }
    let (ia, ib, v) = best;
    if v == 0.0 {
        return 0.0;
    }
    let (wa, wb) = (window(ia, a.len()), window(ib, b.len()));
    let (a_lo, a_hi) = (a[ia.saturating_sub(1)], a[(ia + 1).min(a.len() - 1)]);
    let (b_lo, b_hi) = (b[ib.saturating_sub(1)], b[(ib + 1).min(b.len() - 1)]);
    let step = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (REFINE_SAMPLES - 1) as f64;
    let mut sup = v;
    for i in 0..REFINE_SAMPLES {
        let la = lagrange_weights(&a[wa.clone()], step(a_lo, a_hi, i));
        for j in 0..REFINE_SAMPLES {
            let lb = lagrange_weights(&b[wb.clone()], step(b_lo, b_hi, j));
            let mut val = 0.0;
            for (x, ra) in la.iter().zip(wa.clone()) {
                for (y, rb) in lb.iter().zip(wb.clone()) {
                    val += x * y * m[ra][rb];
                }
            }
            sup = sup.max(val);
        }
    }
    sup
}

/// Two-variable seminorm table of a sampled wavelet transform.
pub fn seminorm_table_2d(
    w: &CwtSurface,
    params: &TransformParams,
    chirp_sign: ChirpSign,
    l_max: usize,
    k_max: usize,
    p_max: usize,
    q_max: usize,
) -> Result<SeminormTable2D> {
    if w.a_grid.len() < MIN_SURFACE_NODES || w.b_grid.len() < MIN_SURFACE_NODES {
        return Err(Error::GridTooCoarse(format!(
            "need at least {MIN_SURFACE_NODES} x {MIN_SURFACE_NODES} nodes, got {} x {}",
            w.b_grid.len(),
            w.a_grid.len()
        )));
    }
    if p_max > MAX_SURFACE_DERIVATIVE || q_max > MAX_SURFACE_DERIVATIVE {
        return Err(Error::InvalidArgument(format!(
            "derivative orders are limited to {MAX_SURFACE_DERIVATIVE}, got p={p_max}, q={q_max}"
        )));
    }
    if l_max > MAX_TABLE_INDEX || k_max > MAX_TABLE_INDEX {
        return Err(Error::InvalidArgument(format!(
            "power indices are limited to {MAX_TABLE_INDEX}, got l={l_max}, k={k_max}"
        )));
    }
    params.require_pointwise()?;
    let b = w.b_grid.nodes();
    let a = w.a_grid.nodes();
    let ub: Vec<f64> = b.iter().map(|x| 0.5 * x * x).collect();
    let ua: Vec<f64> = a.iter().map(|x| 0.5 * x * x).collect();
    let rate = chirp_sign.value() * params.cot();
    let power = params.mu() - params.nu();
    let base: Vec<Vec<Complex64>> = w
        .values
        .iter()
        .map(|row| {
            row.iter()
                .zip(b)
                .map(|(v, &bb)| v * chirp_factor(rate, bb) * bb.powf(power))
                .collect()
        })
        .collect();

    // derivs[p][q][ia][ib]
    let mut derivs: Vec<Vec<Vec<Vec<Complex64>>>> = Vec::with_capacity(p_max + 1);
    let mut by_q = vec![base];
    for q in 1..=q_max {
        let next = by_q[q - 1].iter().map(|row| derivative(&ub, row)).collect();
        by_q.push(next);
    }
    derivs.push(by_q);
    for p in 1..=p_max {
        let prev = &derivs[p - 1];
        let next: Vec<Vec<Vec<Complex64>>> = prev
            .iter()
            .map(|surf| {
                let mut out = vec![vec![Complex64::default(); b.len()]; a.len()];
                for ib in 0..b.len() {
                    let col: Vec<Complex64> = surf.iter().map(|row| row[ib]).collect();
                    for (ia, v) in derivative(&ua, &col).into_iter().enumerate() {
                        out[ia][ib] = v;
                    }
                }
                out
            })
            .collect();
        derivs.push(next);
    }

    let mut table = SeminormTable2D {
        l_max,
        k_max,
        p_max,
        q_max,
        chirp_sign,
        entries: vec![0.0; (l_max + 1) * (k_max + 1) * (p_max + 1) * (q_max + 1)],
        scale_fit: None,
        shift_fit: None,
    };
    for l in 0..=l_max {
        for k in 0..=k_max {
            for p in 0..=p_max {
                for q in 0..=q_max {
                    let m: Vec<Vec<f64>> = derivs[p][q]
                        .iter()
                        .zip(a)
                        .map(|(row, &aa)| {
                            let al = aa.powi(l as i32);
                            row.iter()
                                .zip(b)
                                .map(|(v, &bb)| {
                                    let n = v.norm();
                                    if n > 0.0 { al * bb.powi(k as i32) * n } else { 0.0 }
                                })
                                .collect()
                        })
                        .collect();
                    let i = table.index(l, k, p, q);
                    table.entries[i] = refined_sup(a, b, &m);
                }
            }
        }
    }
    table.scale_fit = fit_growth(&table.samples(true));
    table.shift_fit = fit_growth(&table.samples(false));
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GaussChirp, GaussChirpSum, RadialGrid};
    use crate::quadrature::QuadratureSpec;
    use crate::wavelet::cwt_surface;
    use std::f64::consts::FRAC_PI_2;

    fn classical() -> TransformParams {
        TransformParams::new(0.0, 0.0, FRAC_PI_2).unwrap()
    }

    fn gauss() -> GaussChirpSum {
        GaussChirp::gaussian(0.5).unwrap().into()
    }

    #[test]
    fn derivative_exact_on_quartics() {
        let u: Vec<f64> = (0..9).map(|i| 0.1 * (i * i) as f64 + 0.3 * i as f64).collect();
        let v: Vec<Complex64> = u.iter().map(|&x| Complex64::new(x.powi(4) - 2.0 * x, 0.5 * x * x)).collect();
        for (d, &x) in derivative(&u, &v).iter().zip(&u) {
            assert!((d - Complex64::new(4.0 * x.powi(3) - 2.0, x)).norm() < 1e-9);
        }
    }

    #[test]
    fn refined_sup_finds_off_grid_peak() {
        let a: Vec<f64> = (0..9).map(|i| 0.25 * i as f64).collect();
        let b: Vec<f64> = (0..9).map(|i| 0.3 * i as f64).collect();
        let f = |x: f64, y: f64| 2.0 - (x - 1.125).powi(2) - 0.5 * (y - 1.35).powi(2);
        let m: Vec<Vec<f64>> = a.iter().map(|&x| b.iter().map(|&y| f(x, y)).collect()).collect();
        assert!((refined_sup(&a, &b, &m) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn coarse_grid_rejected() {
        let g = RadialGrid::linear(0.1, 2.0, 16).unwrap();
        let w = CwtSurface::zeros(g.clone(), g);
        assert!(matches!(
            seminorm_table_2d(&w, &classical(), ChirpSign::Plus, 2, 2, 1, 1),
            Err(Error::GridTooCoarse(_))
        ));
    }

    #[test]
    fn zero_surface_gives_zero_table() {
        let g = RadialGrid::linear(0.1, 2.0, 17).unwrap();
        let w = CwtSurface::zeros(g.clone(), g);
        let t = seminorm_table_2d(&w, &classical(), ChirpSign::Plus, 4, 4, 2, 2).unwrap();
        assert!(t.is_zero() && t.scale_fit.is_none() && t.shift_fit.is_none());
    }

    #[test]
    fn gaussian_surface_scale_exponent_vanishes() {
        let spec = QuadratureSpec::default();
        let b = RadialGrid::linear(0.05, 4.0, 21).unwrap();
        let a = RadialGrid::linear(0.5, 2.0, 17).unwrap();
        let w = cwt_surface(&classical(), &gauss(), &gauss(), &b, &a, &spec).unwrap();
        let t = seminorm_table_2d(&w, &classical(), ChirpSign::Plus, 8, 8, 1, 1).unwrap();
        assert!(t.entries().iter().all(|v| v.is_finite()));
        let fit = t.scale_fit.unwrap();
        assert!(fit.alpha.abs() <= 0.05, "{fit:?}");
    }

    #[test]
    fn first_scale_derivative_converges_under_refinement() {
        let spec = QuadratureSpec::default();
        let b = RadialGrid::linear(0.05, 4.0, 49).unwrap();
        let coarse = RadialGrid::linear(0.5, 2.0, 17).unwrap();
        let fine = RadialGrid::linear(0.5, 2.0, 33).unwrap();
        let p = classical();
        let wc = cwt_surface(&p, &gauss(), &gauss(), &b, &coarse, &spec).unwrap();
        let wf = cwt_surface(&p, &gauss(), &gauss(), &b, &fine, &spec).unwrap();
        let tc = seminorm_table_2d(&wc, &p, ChirpSign::Plus, 2, 2, 1, 0).unwrap();
        let tf = seminorm_table_2d(&wf, &p, ChirpSign::Plus, 2, 2, 1, 0).unwrap();
        for l in 0..=2 {
            for k in 0..=2 {
                let (x, y) = (tc.get(l, k, 1, 0), tf.get(l, k, 1, 0));
                assert!((x - y).abs() <= 1e-3 * y, "l={l} k={k}: {x} vs {y}");
            }
        }
    }
}
