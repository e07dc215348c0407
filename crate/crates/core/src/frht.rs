//! Forward and inverse fractional Hankel transform.
//!
//! Every transform value is computed in envelope form
//!
//! ```text
//! F(ω) = ω^{ν−μ} e^{iω²cotθ/2} · C (cscθ)^{ν−μ} ∫ e^{it²cotθ/2} t^{1+μ+ν} S_ν(tω|cscθ|) f(t) dt
//! ```
//!
//! with `S_ν(x) = x^{−ν}J_ν(x)`. The envelope (the part after `e^{iω²cotθ/2}`)
//! is a smooth function of `u = ω²/2`, which [`TransformInterpolant`] exploits.
//! The inverse uses the conjugate kernel, integrating over `ω`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    chirp_factor, ComplexSignal, GaussChirp, GaussChirpSum, RadialFunction, RadialGrid, Term, TransformParams,
};
use crate::quadrature::{integrate_oscillatory, Oscillation, QuadratureResult, QuadratureSpec, Truncation};
use crate::specialfn::scaled;

/// Which kernel to integrate against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// `K^θ(t, ω)`, integrating over `t`.
    Forward,
    /// `K^{−θ}(ω, t) = conj K^θ(ω, t)`, integrating over `ω`.
    Inverse,
}

/// One kernel evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelPoint {
    pub params: TransformParams,
    pub t: f64,
    pub omega: f64,
    pub value: Complex64,
}

impl KernelPoint {
    pub fn new(params: TransformParams, t: f64, omega: f64) -> Result<Self> {
        Ok(Self {
            params,
            t,
            omega,
            value: kernel(&params, t, omega)?,
        })
    }
}

/// `(cscθ)^{ν−μ}` on the principal branch.
pub(crate) fn csc_power(params: &TransformParams, exponent: f64) -> Complex64 {
    Complex64::new(params.csc(), 0.0).powf(exponent)
}

/// `(x cscθ)^{−μ} J_ν(x cscθ)` for `x > 0`, principal branch when `cscθ < 0`.
pub(crate) fn bessel_factor(params: &TransformParams, nu: f64, x: f64) -> Complex64 {
    let mu = params.mu();
    let arg = x * params.csc().abs();
    let real = arg.powf(nu - mu) * scaled(nu, arg);
    if params.csc() < 0.0 {
        Complex64::from_polar(real, PI * (nu - mu))
    } else {
        Complex64::new(real, 0.0)
    }
}

/// `K^θ(t, ω)`.
pub fn kernel(params: &TransformParams, t: f64, omega: f64) -> Result<Complex64> {
    params.require_pointwise()?;
    if !(t > 0.0 && omega > 0.0) {
        return Err(Error::InvalidArgument(format!("kernel needs t, omega > 0 (t={t}, omega={omega})")));
    }
    let c = params.kernel_constant().value;
    let chirp = chirp_factor(params.cot(), t) * chirp_factor(params.cot(), omega);
    Ok(c * chirp * bessel_factor(params, params.nu(), t * omega) * t.powf(1.0 + 2.0 * params.mu()))
}

/// Constants of the chosen direction: `(C, cot, (cscθ)^{ν−μ})`, conjugated for the inverse.
fn direction_constants(params: &TransformParams, dir: Direction) -> (Complex64, f64, Complex64) {
    let c = params.kernel_constant().value;
    let cp = csc_power(params, params.nu() - params.mu());
    match dir {
        Direction::Forward => (c, params.cot(), cp),
        Direction::Inverse => (c.conj(), -params.cot(), cp.conj()),
    }
}

fn hint_for(params: &TransformParams, x: f64, extra_chirp: f64) -> Oscillation {
    Oscillation::new(x * params.csc().abs(), params.cot().abs() + extra_chirp)
}

fn effective_spec<F: RadialFunction + ?Sized>(f: &F, spec: &QuadratureSpec) -> QuadratureSpec {
    match (f.support_radius(), spec.truncation) {
        (Some(r), Truncation::FixedRadius(s)) => spec.with_truncation(Truncation::FixedRadius(r.min(s))),
        (Some(r), Truncation::AutoDecay) => spec.with_truncation(Truncation::FixedRadius(r)),
        (None, _) => *spec,
    }
}

/// Envelope integral `C (cscθ)^{ν−μ} ∫ e^{it²cot/2} t^{1+μ+ν} S_ν(tx|csc|) f(t) dt`, valid at `x = 0`.
fn envelope_at<F: RadialFunction + ?Sized>(
    params: &TransformParams,
    dir: Direction,
    f: &F,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    let (c, cot, cp) = direction_constants(params, dir);
    let nu = params.nu();
    let weight = 1.0 + params.mu() + nu;
    let s = params.csc().abs() * x;
    let integrand = |t: f64| {
        let fv = f.eval(t);
        if fv == Complex64::default() {
            return fv;
        }
        fv * chirp_factor(cot, t) * (t.powf(weight) * scaled(nu, s * t))
    };
    let spec = effective_spec(f, spec);
    let mut r = integrate_oscillatory(integrand, hint_for(params, x, f.chirp_rate()), &spec)
        .map_err(|e| e.at_frequency(x))?;
    let scale = c * cp;
    r.value *= scale;
    r.error_estimate *= scale.norm();
    Ok(r)
}

/// Transform value at one output node `x > 0` (`ω` for forward, `t` for inverse).
pub fn transform_at<F: RadialFunction + ?Sized>(
    params: &TransformParams,
    dir: Direction,
    f: &F,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    if params.is_identity() {
        return Ok(QuadratureResult {
            value: f.eval(x),
            error_estimate: 0.0,
            panels_used: 0,
            truncation_radius: x,
        });
    }
    let mut r = envelope_at(params, dir, f, x, spec)?;
    let cot = match dir {
        Direction::Forward => params.cot(),
        Direction::Inverse => -params.cot(),
    };
    let outer = chirp_factor(cot, x) * x.powf(params.nu() - params.mu());
    r.value *= outer;
    r.error_estimate *= outer.norm();
    Ok(r)
}

/// Output samples with quadrature statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformReport {
    pub signal: ComplexSignal,
    pub max_error_estimate: f64,
    pub total_panels: usize,
}

/// Transform of any [`RadialFunction`] on `out_grid`, nodes evaluated in parallel.
pub fn transform_report<F: RadialFunction + ?Sized>(
    params: &TransformParams,
    dir: Direction,
    f: &F,
    out_grid: &RadialGrid,
    spec: &QuadratureSpec,
) -> Result<TransformReport> {
    spec.validate()?;
    let results: Vec<QuadratureResult> = out_grid
        .nodes()
        .par_iter()
        .map(|&x| transform_at(params, dir, f, x, spec))
        .collect::<Result<_>>()?;
    let max_error_estimate = results.iter().map(|r| r.error_estimate).fold(0.0, f64::max);
    let total_panels = results.iter().map(|r| r.panels_used).sum();
    let signal = ComplexSignal::new(out_grid.clone(), results.iter().map(|r| r.value).collect(), *params)?;
    Ok(TransformReport {
        signal,
        max_error_estimate,
        total_panels,
    })
}

/// `f̃^θ` on `out_grid`. Identity parameters return `f` sampled on the grid.
pub fn forward<F: RadialFunction + ?Sized>(
    params: &TransformParams,
    f: &F,
    out_grid: &RadialGrid,
    spec: &QuadratureSpec,
) -> Result<ComplexSignal> {
    transform_report(params, Direction::Forward, f, out_grid, spec).map(|r| r.signal)
}

/// Inverse transform on `out_grid` (integration over `ω` against `conj K^θ(ω, t)`).
pub fn inverse<F: RadialFunction + ?Sized>(
    params: &TransformParams,
    f: &F,
    out_grid: &RadialGrid,
    spec: &QuadratureSpec,
) -> Result<ComplexSignal> {
    transform_report(params, Direction::Inverse, f, out_grid, spec).map(|r| r.signal)
}

/// Forward transform of sampled data (spline in `u`, truncated at the last sample).
pub fn forward_signal(params: &TransformParams, f: &ComplexSignal, out_grid: &RadialGrid, spec: &QuadratureSpec) -> Result<ComplexSignal> {
    forward(params, &f.interpolant(), out_grid, spec)
}

/// Inverse transform of sampled data.
pub fn inverse_signal(params: &TransformParams, f: &ComplexSignal, out_grid: &RadialGrid, spec: &QuadratureSpec) -> Result<ComplexSignal> {
    inverse(params, &f.interpolant(), out_grid, spec)
}

/// Closed-form transform of `t^{ν−μ+s} e^{−pt²} e^{−it²cotθ/2}`; only `s = 0` is supported.
pub fn oracle_forward(params: &TransformParams, s_extra: f64, p: f64) -> Result<GaussChirpSum> {
    if s_extra != 0.0 {
        return Err(Error::UnsupportedFamily(format!(
            "closed form exists only for s_extra = 0, got {s_extra}"
        )));
    }
    let input = GaussChirp::oracle_family(params, p)?;
    Ok(oracle_transform(params, Direction::Forward, &input)?.into())
}

/// Closed-form transform of a single [`GaussChirp`] in the family the chosen
/// kernel maps to another Gaussian: power `ν−μ`, chirp `−cotθ` (forward) or
/// `+cotθ` (inverse).
pub fn oracle_transform(params: &TransformParams, dir: Direction, g: &GaussChirp) -> Result<GaussChirp> {
    params.require_pointwise()?;
    let power = params.nu() - params.mu();
    let cot = match dir {
        Direction::Forward => params.cot(),
        Direction::Inverse => -params.cot(),
    };
    let tol = 1e-12 * (1.0 + cot.abs());
    if (g.power - power).abs() > 1e-12 || (g.chirp + cot).abs() > tol {
        return Err(Error::UnsupportedFamily(format!(
            "closed form needs power {power} and chirp {}, got power {} and chirp {}",
            -cot, g.power, g.chirp
        )));
    }
    let (c, _, cp) = direction_constants(params, dir);
    let p = g.decay;
    let amplitude = g.amplitude * c * cp * (2.0 * p).powf(-params.nu() - 1.0);
    let csc2 = params.csc() * params.csc();
    GaussChirp::new(amplitude, power, csc2 / (4.0 * p), cot)
}

/// Closed-form inverse of a Gaussian in the output family (power `ν−μ`, chirp `+cotθ`).
pub fn oracle_inverse(params: &TransformParams, g: &GaussChirp) -> Result<GaussChirp> {
    oracle_transform(params, Direction::Inverse, g)
}

const CHEB_NODES: usize = 17;
const PANEL_WIDTH_U: f64 = 0.5;
const MAX_U: f64 = 450.0;

/// Piecewise Chebyshev interpolant of a transform's envelope in `u = x²/2`.
///
/// Evaluates to `x^{ν−μ} e^{±ix²cotθ/2} · envelope(u)` and to zero beyond the
/// last panel, where the transform has decayed below `1e−16` of its peak or
/// below the quadrature's absolute tolerance. Inputs whose transform decays
/// only algebraically (powers not congruent to `ν−μ` mod 2) hit the radius cap.
#[derive(Debug, Clone)]
pub struct TransformInterpolant {
    params: TransformParams,
    dir: Direction,
    panels: Vec<[Complex64; CHEB_NODES]>,
    u_max: f64,
    chirp_rate: f64,
    identity: Option<GaussChirpSum>,
    max_error_estimate: f64,
}

fn cheb_node(k: usize, j: usize) -> f64 {
    let a = k as f64 * PANEL_WIDTH_U;
    let half = 0.5 * PANEL_WIDTH_U;
    a + half * (1.0 - (PI * j as f64 / (CHEB_NODES - 1) as f64).cos())
}

impl TransformInterpolant {
    /// Builds the interpolant by evaluating the envelope at Chebyshev nodes.
    pub fn build<F: RadialFunction + ?Sized>(
        params: &TransformParams,
        dir: Direction,
        f: &F,
        spec: &QuadratureSpec,
    ) -> Result<Self> {
        Self::build_within(params, dir, f, spec, None)
    }

    /// As [`Self::build`], but stops without error at `radius` when given.
    pub fn build_within<F: RadialFunction + ?Sized>(
        params: &TransformParams,
        dir: Direction,
        f: &F,
        spec: &QuadratureSpec,
        radius: Option<f64>,
    ) -> Result<Self> {
        params.require_pointwise()?;
        let u_cap = radius.map(|r| 0.5 * r * r);
        let mut panels: Vec<[Complex64; CHEB_NODES]> = Vec::new();
        let mut peak: f64 = 0.0;
        let mut quiet = 0;
        let mut max_err: f64 = 0.0;
        let batch = 8;
        let mut k = 0;
        'outer: loop {
            let new: Vec<([Complex64; CHEB_NODES], f64)> = (k..k + batch)
                .into_par_iter()
                .map(|kk| {
                    let mut vals = [Complex64::default(); CHEB_NODES];
                    let mut err: f64 = 0.0;
                    for (j, v) in vals.iter_mut().enumerate() {
                        let u = cheb_node(kk, j);
                        let r = envelope_at(params, dir, f, (2.0 * u).sqrt(), spec)?;
                        *v = r.value;
                        err = err.max(r.error_estimate);
                    }
                    Ok((vals, err))
                })
                .collect::<Result<_>>()?;
            for (vals, err) in new {
                let u_end = (k + 1) as f64 * PANEL_WIDTH_U;
                let x_pow = |u: f64| (2.0 * u).sqrt().powf(params.nu() - params.mu());
                let mag = (0..CHEB_NODES)
                    .map(|j| {
                        let u = cheb_node(k, j);
                        if u == 0.0 {
                            if params.nu() - params.mu() > 0.0 { 0.0 } else { vals[j].norm() }
                        } else {
                            vals[j].norm() * x_pow(u)
                        }
                    })
                    .fold(0.0, f64::max);
                peak = peak.max(mag);
                max_err = max_err.max(err);
                panels.push(vals);
                k += 1;
                quiet = if mag <= (1e-16 * peak).max(spec.abs_tol) { quiet + 1 } else { 0 };
                if quiet >= 2 {
                    break 'outer;
                }
                if u_cap.is_some_and(|c| u_end >= c) {
                    break 'outer;
                }
                if u_end >= MAX_U {
                    return Err(Error::TruncationFailure {
                        radius: (2.0 * u_end).sqrt(),
                        tail: mag,
                    });
                }
            }
        }
        Ok(Self {
            params: *params,
            dir,
            u_max: panels.len() as f64 * PANEL_WIDTH_U,
            panels,
            chirp_rate: 2.0 * params.cot().abs() + f.chirp_rate(),
            identity: None,
            max_error_estimate: max_err,
        })
    }

    /// Interpolant of `f` itself, for Identity parameters.
    pub fn identity(params: &TransformParams, f: &GaussChirpSum) -> Self {
        Self {
            params: *params,
            dir: Direction::Forward,
            panels: Vec::new(),
            u_max: f64::INFINITY,
            chirp_rate: f.chirp_rate(),
            identity: Some(f.clone()),
            max_error_estimate: 0.0,
        }
    }

    /// Identity for Identity parameters, otherwise [`Self::build`].
    pub fn of_sum(params: &TransformParams, dir: Direction, f: &GaussChirpSum, spec: &QuadratureSpec) -> Result<Self> {
        if params.is_identity() {
            Ok(Self::identity(params, f))
        } else {
            Self::build(params, dir, f, spec)
        }
    }

    pub fn radius(&self) -> f64 {
        (2.0 * self.u_max).sqrt()
    }

    pub fn max_error_estimate(&self) -> f64 {
        self.max_error_estimate
    }

    /// Envelope at `u` by barycentric interpolation on the containing panel.
    pub fn envelope(&self, u: f64) -> Complex64 {
        if u >= self.u_max {
            return Complex64::default();
        }
        let k = ((u / PANEL_WIDTH_U) as usize).min(self.panels.len() - 1);
        let vals = &self.panels[k];
        let mut num = Complex64::default();
        let mut den = 0.0;
        for (j, v) in vals.iter().enumerate() {
            let d = u - cheb_node(k, j);
            if d == 0.0 {
                return *v;
            }
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == CHEB_NODES - 1 {
                w *= 0.5;
            }
            let w = w / d;
            num += v * w;
            den += w;
        }
        num / den
    }
}

impl RadialFunction for TransformInterpolant {
    fn eval(&self, x: f64) -> Complex64 {
        if let Some(f) = &self.identity {
            return f.eval(x);
        }
        let u = 0.5 * x * x;
        if u >= self.u_max {
            return Complex64::default();
        }
        let cot = match self.dir {
            Direction::Forward => self.params.cot(),
            Direction::Inverse => -self.params.cot(),
        };
        self.envelope(u) * chirp_factor(cot, x) * x.powf(self.params.nu() - self.params.mu())
    }

    fn support_radius(&self) -> Option<f64> {
        if self.identity.is_some() {
            None
        } else {
            Some(self.radius())
        }
    }

    fn chirp_rate(&self) -> f64 {
        self.chirp_rate
    }
}

/// `inverse(forward(f))` on `out_grid`, via the interpolated forward transform.
pub fn round_trip<F: RadialFunction + ?Sized>(
    params: &TransformParams,
    f: &F,
    out_grid: &RadialGrid,
    spec: &QuadratureSpec,
) -> Result<ComplexSignal> {
    if params.is_identity() {
        let values = out_grid.nodes().iter().map(|&t| f.eval(t)).collect();
        return ComplexSignal::new(out_grid.clone(), values, *params);
    }
    let spectrum = TransformInterpolant::build(params, Direction::Forward, f, spec).map_err(|e| e.nested(1))?;
    inverse(params, &spectrum, out_grid, spec).map_err(|e| e.nested(0))
}

/// Weighted inner product `∫ f conj(g) t^{1+2μ} dt`.
pub fn inner_product<F, G>(params: &TransformParams, f: &F, g: &G, spec: &QuadratureSpec) -> Result<Complex64>
where
    F: RadialFunction + ?Sized,
    G: RadialFunction + ?Sized,
{
    let w = 1.0 + 2.0 * params.mu();
    let spec = match (f.support_radius(), g.support_radius()) {
        (Some(a), Some(b)) => spec.with_truncation(Truncation::FixedRadius(a.min(b))),
        (Some(r), None) | (None, Some(r)) => spec.with_truncation(Truncation::FixedRadius(r)),
        (None, None) => *spec,
    };
    let hint = Oscillation::new(0.0, f.chirp_rate() + g.chirp_rate());
    Ok(integrate_oscillatory(|t| f.eval(t) * g.eval(t).conj() * t.powf(w), hint, &spec)?.value)
}

/// True when the forward transform of `f` is a Gaussian times a polynomial:
/// every power is `ν − μ` plus an even integer and the chirp cancels the kernel's.
pub fn has_gaussian_spectrum(params: &TransformParams, f: &GaussChirpSum) -> bool {
    if params.is_identity() || (f.chirp() + params.cot()).abs() > 1e-12 * (1.0 + params.cot().abs()) {
        return false;
    }
    let s = params.nu() - params.mu();
    f.term_list().iter().all(|t| {
        let d = 0.5 * (t.power - s);
        d >= 0.0 && (d - d.round()).abs() < 1e-12
    })
}

/// Relative Parseval defect `|⟨f, g⟩ − ⟨f̃, g̃⟩| / max(|⟨f, g⟩|, abs_tol)`.
pub fn parseval_defect(params: &TransformParams, f: &GaussChirpSum, g: &GaussChirpSum, spec: &QuadratureSpec) -> Result<f64> {
    if f.is_zero() || g.is_zero() || params.is_identity() {
        return Ok(0.0);
    }
    if has_gaussian_spectrum(params, g) && !has_gaussian_spectrum(params, f) {
        return parseval_defect(params, g, f, spec);
    }
    let lhs = inner_product(params, f, g, spec)?;
    // the product only needs the faster-decaying transform to vanish
    let dir = Direction::Forward;
    let (ft, gt) = match TransformInterpolant::build(params, dir, f, spec) {
        Ok(ft) => {
            let gt = TransformInterpolant::build_within(params, dir, g, spec, Some(ft.radius()))?;
            (ft, gt)
        }
        Err(e) if matches!(e.root(), Error::TruncationFailure { .. }) => {
            let gt = TransformInterpolant::build(params, dir, g, spec)?;
            let ft = TransformInterpolant::build_within(params, dir, f, spec, Some(gt.radius()))?;
            (ft, gt)
        }
        Err(e) => return Err(e),
    };
    let rhs = inner_product(params, &ft, &gt, spec)?;
    Ok((lhs - rhs).norm() / lhs.norm().max(spec.abs_tol))
}

/// A single-term [`GaussChirpSum`] from raw pieces; convenience for callers and tests.
pub fn gauss_chirp_sum(amplitude: Complex64, power: f64, decay: f64, chirp: f64) -> Result<GaussChirpSum> {
    GaussChirpSum::from_terms(decay, chirp, vec![Term { coef: amplitude, power }])
}
