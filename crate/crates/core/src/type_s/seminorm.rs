//! Seminorm tables `S(k, q) = sup_x |x^k (x⁻¹D_x)^q e^{±ix²cotθ/2} x^{μ−ν} f(x)|`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frht::{oracle_transform, Direction};
use crate::model::{GaussChirpSum, RadialGrid, TransformParams};

use super::fit::{fit_growth, GrowthFit};

/// Largest `k` or `q` accepted by [`seminorm_table`].
pub const MAX_TABLE_INDEX: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChirpSign {
    Plus,
    Minus,
}

impl ChirpSign {
    pub fn value(self) -> f64 {
        match self {
            ChirpSign::Plus => 1.0,
            ChirpSign::Minus => -1.0,
        }
    }

    pub fn both() -> [ChirpSign; 2] {
        [ChirpSign::Plus, ChirpSign::Minus]
    }
}

/// Table of sampled seminorms with growth fits along both indices.
///
/// Entries are suprema over a finite grid, so they bound the true seminorms
/// from below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeminormTable {
    pub k_max: usize,
    pub q_max: usize,
    pub chirp_sign: ChirpSign,
    pub grid: RadialGrid,
    /// `entries[k][q]`.
    pub entries: Vec<Vec<f64>>,
    /// `S ≤ C_q A^k k^{kα}`, fitted along `k`.
    pub row_fit: Option<GrowthFit>,
    /// `S ≤ C'_k B^q q^{qβ}`, fitted along `q`.
    pub column_fit: Option<GrowthFit>,
}

impl SeminormTable {
    pub fn get(&self, k: usize, q: usize) -> f64 {
        self.entries[k][q]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|&v| v == 0.0)
    }

    fn samples(&self, by_row: bool) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for (k, row) in self.entries.iter().enumerate() {
            for (q, &v) in row.iter().enumerate() {
                out.push(if by_row { (q, k, v) } else { (k, q, v) });
            }
        }
        out
    }
}

/// `grid` plus the maximizers `√(k/(2p))` of `x^k e^{−px²}` that fall inside it.
pub fn with_row_maximizers(grid: &RadialGrid, decay: f64, k_max: usize) -> Result<RadialGrid> {
    let extra: Vec<f64> = (1..=k_max)
        .map(|k| (k as f64 / (2.0 * decay)).sqrt())
        .filter(|&x| x > grid.first() && x < grid.last())
        .collect();
    grid.with_points(&extra)
}

/// Seminorm table of `f` with derivatives taken exactly on the closed family.
pub fn seminorm_table(
    f: &GaussChirpSum,
    params: &TransformParams,
    chirp_sign: ChirpSign,
    k_max: usize,
    q_max: usize,
    grid: &RadialGrid,
) -> Result<SeminormTable> {
    if k_max > MAX_TABLE_INDEX || q_max > MAX_TABLE_INDEX {
        return Err(Error::InvalidArgument(format!(
            "table indices are limited to {MAX_TABLE_INDEX}, got k_max={k_max}, q_max={q_max}"
        )));
    }
    params.require_pointwise()?;
    let grid = with_row_maximizers(grid, f.decay(), k_max)?;
    let g = f
        .mul_power(params.mu() - params.nu())
        .mul_chirp(chirp_sign.value() * params.cot());
    let columns: Vec<Vec<f64>> = (0..=q_max)
        .into_par_iter()
        .map(|q| {
            let gq = g.radial_derivative(q);
            let vals: Vec<f64> = grid.nodes().iter().map(|&x| gq.eval(x).norm()).collect();
            (0..=k_max)
                .map(|k| {
                    grid.nodes()
                        .iter()
                        .zip(&vals)
                        .map(|(&x, &v)| if v == 0.0 { 0.0 } else { x.powi(k as i32) * v })
                        .fold(0.0, f64::max)
                })
                .collect()
        })
        .collect();
    let entries: Vec<Vec<f64>> = (0..=k_max).map(|k| columns.iter().map(|c| c[k]).collect()).collect();
    let mut table = SeminormTable {
        k_max,
        q_max,
        chirp_sign,
        grid,
        entries,
        row_fit: None,
        column_fit: None,
    };
    table.row_fit = fit_growth(&table.samples(true));
    table.column_fit = fit_growth(&table.samples(false));
    Ok(table)
}

/// Tables for both chirp signs.
pub fn seminorm_tables(
    f: &GaussChirpSum,
    params: &TransformParams,
    k_max: usize,
    q_max: usize,
    grid: &RadialGrid,
) -> Result<[SeminormTable; 2]> {
    Ok([
        seminorm_table(f, params, ChirpSign::Plus, k_max, q_max, grid)?,
        seminorm_table(f, params, ChirpSign::Minus, k_max, q_max, grid)?,
    ])
}

/// Closed-form transform of a single Gaussian chirp in the kernel's family.
pub fn closed_form_transform(params: &TransformParams, dir: Direction, f: &GaussChirpSum) -> Result<GaussChirpSum> {
    let g = f
        .as_single()
        .ok_or_else(|| Error::UnsupportedFamily("closed-form transform needs a single term".into()))?;
    Ok(oracle_transform(params, dir, &g)?.into())
}

/// Input `k`-growth against output `q`-growth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthTrend {
    pub alpha_in: f64,
    pub beta_out: f64,
    pub ratio: f64,
    /// Set when either table is identically zero, so nothing can be fitted.
    pub degenerate: bool,
    pub max_residual: f64,
}

impl GrowthTrend {
    /// `β ≤ 2α + tol`; degenerate trends hold vacuously.
    pub fn bound_holds(&self, tol: f64) -> bool {
        self.degenerate || self.beta_out <= 2.0 * self.alpha_in + tol
    }
}

pub fn growth_trend(input: &SeminormTable, output: &SeminormTable) -> Result<GrowthTrend> {
    if input.is_zero() || output.is_zero() {
        return Ok(GrowthTrend {
            alpha_in: f64::NAN,
            beta_out: f64::NAN,
            ratio: f64::NAN,
            degenerate: true,
            max_residual: 0.0,
        });
    }
    let too_small = || Error::InvalidArgument("tables need indices up to at least 5 to fit".into());
    let rows = input.row_fit.as_ref().ok_or_else(too_small)?.require_stable()?;
    let cols = output.column_fit.as_ref().ok_or_else(too_small)?.require_stable()?;
    Ok(GrowthTrend {
        alpha_in: rows.alpha,
        beta_out: cols.alpha,
        ratio: cols.alpha / rows.alpha,
        degenerate: false,
        max_residual: rows.max_residual.max(cols.max_residual),
    })
}
