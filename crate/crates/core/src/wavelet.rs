//! Dilated and translated wavelets, and the continuous wavelet transform.
//!
//! The daughter wavelet at translation `b` and scale `a` is
//!
//! ```text
//! ψ_{b,a}(t) = a^{−2μ−2} e^{i(1/a²−1)t²cotθ/2} e^{i(1/a²+1)b²cotθ/2} τ_{b/a}ψ(t/a)
//! ```
//!
//! and the transform is `W(b, a) = ∫ f(t) conj(ψ_{b,a}(t)) t^{1+2μ} dt`.
//! [`cwt_direct`] integrates that definition; [`cwt_spectral`] integrates over
//! frequency instead:
//!
//! ```text
//! W(b, a) = (1/C_{−θ}) ∫ K^{−θ}(ω, b) (aω)^{μ−ν} e^{+ia²ω²cotθ/2} f̃(ω) conj(Ψ(aω)) dω
//! ```
//!
//! with `Ψ` the transform of `z^{ν−μ} e^{−iz²cotθ/2} ψ(z)`. All chirps cancel in
//! that integrand, leaving the two transform envelopes and one Bessel factor.

use std::f64::consts::PI;
use std::sync::Mutex;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frht::{bessel_factor, csc_power, Direction, TransformInterpolant};
use crate::model::{chirp_factor, GaussChirpSum, RadialFunction, RadialGrid, TransformParams};
use crate::quadrature::{integrate_oscillatory, Oscillation, QuadratureSpec, Truncation};
use crate::specialfn::scaled;
use crate::translation::Translator;

/// Highest derivative order accepted by [`decay_check`].
pub const MAX_DECAY_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CwtPath {
    Direct,
    Spectral,
}

/// `W(b, a)` at fixed scale over a grid of translations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveletCoefficients {
    pub b_grid: RadialGrid,
    pub a: f64,
    pub values: Vec<Complex64>,
    pub path: CwtPath,
}

fn check_scale(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidArgument(format!("scale must be positive, got {a}")));
    }
    if !(b >= 0.0 && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("translation must be >= 0, got {b}")));
    }
    Ok(())
}

fn daughter_with(tr: &Translator, b: f64, a: f64, t: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    let p = tr.params();
    let cot = p.cot();
    let inv2 = 1.0 / (a * a);
    let pre = a.powf(-2.0 * p.mu() - 2.0) * chirp_factor((inv2 - 1.0) * cot, t) * chirp_factor((inv2 + 1.0) * cot, b);
    Ok(pre * tr.value(b / a, t / a, spec)?)
}

/// `ψ_{b,a}(t)`.
pub fn daughter(
    params: &TransformParams,
    psi: &GaussChirpSum,
    b: f64,
    a: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    check_scale(a, b)?;
    let tr = Translator::new(params, psi, spec)?;
    daughter_with(&tr, b, a, t, spec)
}

fn direct_with(tr: &Translator, f: &GaussChirpSum, b: f64, a: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    let p = tr.params();
    let w = 1.0 + 2.0 * p.mu();
    let failure = Mutex::new(None);
    let integrand = |t: f64| {
        let fv = f.eval(t);
        if fv.norm() < 1e-300 {
            return Complex64::default();
        }
        match daughter_with(tr, b, a, t, spec) {
            Ok(d) => fv * d.conj() * t.powf(w),
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                Complex64::new(f64::NAN, f64::NAN)
            }
        }
    };
    let hint = Oscillation::new(0.0, f.chirp_rate() + p.cot().abs());
    let r = integrate_oscillatory(integrand, hint, spec);
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e.nested(1));
    }
    Ok(r.map_err(|e| e.nested(0))?.value)
}

/// `W(b, a)` from the defining integral over `t`.
pub fn cwt_direct(
    params: &TransformParams,
    f: &GaussChirpSum,
    psi: &GaussChirpSum,
    b: f64,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    check_scale(a, b)?;
    if f.is_zero() || psi.is_zero() {
        return Ok(Complex64::default());
    }
    let tr = Translator::new(params, psi, spec)?;
    direct_with(&tr, f, b, a, spec)
}

/// [`cwt_direct`] over a grid, translations in parallel.
pub fn cwt_direct_grid(
    params: &TransformParams,
    f: &GaussChirpSum,
    psi: &GaussChirpSum,
    b_grid: &RadialGrid,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<WaveletCoefficients> {
    check_scale(a, 0.0)?;
    let values = if f.is_zero() || psi.is_zero() {
        vec![Complex64::default(); b_grid.len()]
    } else {
        let tr = Translator::new(params, psi, spec)?;
        b_grid
            .nodes()
            .par_iter()
            .map(|&b| direct_with(&tr, f, b, a, spec).map_err(|e| e.at_frequency(b)))
            .collect::<Result<_>>()?
    };
    Ok(WaveletCoefficients {
        b_grid: b_grid.clone(),
        a,
        values,
        path: CwtPath::Direct,
    })
}

/// Precomputed transforms of `f` and the reshaped wavelet for one scale.
#[derive(Debug, Clone)]
pub struct SpectralCwt {
    params: TransformParams,
    a: f64,
    f_env: TransformInterpolant,
    psi_env: TransformInterpolant,
    radius: f64,
    zero: bool,
    f_cap: Option<f64>,
    psi_cap: Option<f64>,
}

impl SpectralCwt {
    pub fn new(params: &TransformParams, f: &GaussChirpSum, psi: &GaussChirpSum, a: f64, spec: &QuadratureSpec) -> Result<Self> {
        params.require_pointwise()?;
        check_scale(a, 0.0)?;
        let dir = Direction::Forward;
        let reshaped = psi.mul_power(params.nu() - params.mu()).mul_chirp(-params.cot());
        // only the faster-decaying side needs to run to its natural radius
        let (f_env, psi_env, f_cap, psi_cap) = match TransformInterpolant::build(params, dir, &reshaped, spec) {
            Ok(pe) => {
                let cap = pe.radius() / a;
                let fe = TransformInterpolant::build_within(params, dir, f, spec, Some(cap))?;
                (fe, pe, Some(cap), None)
            }
            Err(e) if matches!(e.root(), Error::TruncationFailure { .. }) => {
                let fe = TransformInterpolant::build(params, dir, f, spec)?;
                let cap = fe.radius() * a;
                let pe = TransformInterpolant::build_within(params, dir, &reshaped, spec, Some(cap))?;
                (fe, pe, None, Some(cap))
            }
            Err(e) => return Err(e),
        };
        let radius = f_env.radius().min(psi_env.radius() / a);
        Ok(Self {
            params: *params,
            a,
            f_env,
            psi_env,
            radius,
            zero: f.is_zero() || psi.is_zero(),
            f_cap,
            psi_cap,
        })
    }

    /// The same transforms at another scale, if their radii still cover the integral.
    pub fn with_scale(&self, a: f64) -> Option<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return None;
        }
        let f_needed = self.psi_env.radius() / a;
        let psi_needed = self.f_env.radius() * a;
        let covers = |cap: Option<f64>, needed: f64| cap.is_none_or(|c| c >= needed * (1.0 - 1e-12));
        if !(covers(self.f_cap, f_needed) && covers(self.psi_cap, psi_needed)) {
            return None;
        }
        let mut out = self.clone();
        out.a = a;
        out.radius = self.f_env.radius().min(f_needed);
        Some(out)
    }

    pub fn scale(&self) -> f64 {
        self.a
    }

    /// `W(b, a)`.
    pub fn value(&self, b: f64, spec: &QuadratureSpec) -> Result<Complex64> {
        check_scale(self.a, b)?;
        if self.zero {
            return Ok(Complex64::default());
        }
        let p = &self.params;
        let nu = p.nu();
        let w = 1.0 + p.mu() + nu;
        let a2 = self.a * self.a;
        let b_eff = b.max(1e-300);
        let integrand = |om: f64| {
            let u = 0.5 * om * om;
            let ef = self.f_env.envelope(u);
            if ef == Complex64::default() {
                return ef;
            }
            ef * self.psi_env.envelope(a2 * u).conj() * bessel_factor(p, nu, b_eff * om).conj() * om.powf(w)
        };
        let spec = spec.with_truncation(Truncation::FixedRadius(self.radius));
        let hint = Oscillation::new(b * p.csc().abs(), 0.0);
        let r = integrate_oscillatory(integrand, hint, &spec).map_err(|e| e.at_frequency(b))?;
        // conj of the Bessel phase inside f̃ when cscθ < 0
        let branch = if p.csc() < 0.0 {
            Complex64::from_polar(1.0, -2.0 * PI * (nu - p.mu()))
        } else {
            Complex64::new(1.0, 0.0)
        };
        Ok(branch * chirp_factor(-p.cot(), b) * r.value)
    }

    pub fn coefficients(&self, b_grid: &RadialGrid, spec: &QuadratureSpec) -> Result<WaveletCoefficients> {
        let values = b_grid
            .nodes()
            .par_iter()
            .map(|&b| self.value(b, spec))
            .collect::<Result<_>>()?;
        Ok(WaveletCoefficients {
            b_grid: b_grid.clone(),
            a: self.a,
            values,
            path: CwtPath::Spectral,
        })
    }
}

/// `W(b, a)` on `b_grid` through the frequency-domain form.
pub fn cwt_spectral(
    params: &TransformParams,
    f: &GaussChirpSum,
    psi: &GaussChirpSum,
    b_grid: &RadialGrid,
    a: f64,
    spec: &QuadratureSpec,
) -> Result<WaveletCoefficients> {
    SpectralCwt::new(params, f, psi, a, spec)?.coefficients(b_grid, spec)
}

/// `W(b, a)` on a product grid, `values[ia][ib]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CwtSurface {
    pub b_grid: RadialGrid,
    pub a_grid: RadialGrid,
    pub values: Vec<Vec<Complex64>>,
}

impl CwtSurface {
    pub fn new(b_grid: RadialGrid, a_grid: RadialGrid, values: Vec<Vec<Complex64>>) -> Result<Self> {
        if values.len() != a_grid.len() || values.iter().any(|row| row.len() != b_grid.len()) {
            return Err(Error::InvalidGrid(format!(
                "surface values must be {} x {}",
                a_grid.len(),
                b_grid.len()
            )));
        }
        Ok(Self { b_grid, a_grid, values })
    }

    pub fn zeros(b_grid: RadialGrid, a_grid: RadialGrid) -> Self {
        let values = vec![vec![Complex64::default(); b_grid.len()]; a_grid.len()];
        Self { b_grid, a_grid, values }
    }
}

/// Spectral `W(b, a)` over `b_grid × a_grid`.
pub fn cwt_surface(
    params: &TransformParams,
    f: &GaussChirpSum,
    psi: &GaussChirpSum,
    b_grid: &RadialGrid,
    a_grid: &RadialGrid,
    spec: &QuadratureSpec,
) -> Result<CwtSurface> {
    let base = SpectralCwt::new(params, f, psi, a_grid.first(), spec)?;
    let mut values = Vec::with_capacity(a_grid.len());
    for &a in a_grid.nodes() {
        let at = match base.with_scale(a) {
            Some(s) => s,
            None => SpectralCwt::new(params, f, psi, a, spec)?,
        };
        values.push(at.coefficients(b_grid, spec)?.values);
    }
    CwtSurface::new(b_grid.clone(), a_grid.clone(), values)
}

/// Result of [`decay_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub passes: bool,
    pub rho: f64,
    /// `sup_t |(t⁻¹D_t)^n Q(t)| / (1+t)^{ρ−n}` for `n = 0..=n_max`.
    pub constants: Vec<f64>,
    /// Grid node attaining each supremum.
    pub argmax: Vec<f64>,
}

/// `(t⁻¹D_t)^n` of the envelope of `Ψ` at `x`, computed under the integral:
/// each step lowers into `−csc²θ z²` times the next Bessel order.
pub fn envelope_derivative(
    params: &TransformParams,
    psi: &GaussChirpSum,
    n: usize,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    params.require_pointwise()?;
    let nu = params.nu();
    let mu = params.mu();
    let cot = params.cot();
    let g = psi.mul_power(nu - mu).mul_chirp(-cot);
    let order = nu + n as f64;
    let weight = 1.0 + mu + nu + 2.0 * n as f64;
    let k = params.csc().abs() * x;
    let integrand = |z: f64| {
        let v = g.eval(z);
        if v == Complex64::default() {
            return v;
        }
        v * chirp_factor(cot, z) * (z.powf(weight) * scaled(order, k * z))
    };
    let hint = Oscillation::new(k, cot.abs() + g.chirp_rate());
    let r = integrate_oscillatory(integrand, hint, spec).map_err(|e| e.at_frequency(x))?;
    let csc2 = params.csc() * params.csc();
    let c = params.kernel_constant().value * csc_power(params, nu - mu);
    Ok(c * (-csc2).powi(n as i32) * r.value)
}

/// Decay of `Q(t) = t^{μ−ν} e^{it²cotθ/2} conj(Ψ(t))` and its first `n_max`
/// radial derivatives, weighted by `(1+t)^{n−ρ}`.
pub fn decay_check(
    params: &TransformParams,
    psi: &GaussChirpSum,
    n_max: usize,
    rho: f64,
    t_grid: &RadialGrid,
    spec: &QuadratureSpec,
) -> Result<DecayReport> {
    if n_max > MAX_DECAY_ORDER {
        return Err(Error::InvalidArgument(format!(
            "derivative order {n_max} exceeds {MAX_DECAY_ORDER}"
        )));
    }
    params.require_pointwise()?;
    if psi.is_zero() {
        return Ok(DecayReport {
            passes: true,
            rho,
            constants: vec![0.0; n_max + 1],
            argmax: vec![t_grid.first(); n_max + 1],
        });
    }
    let rows: Vec<Vec<f64>> = t_grid
        .nodes()
        .par_iter()
        .map(|&t| {
            (0..=n_max)
                .map(|n| {
                    let d = envelope_derivative(params, psi, n, t, spec)?;
                    Ok(d.norm() / (1.0 + t).powf(rho - n as f64))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let mut constants = vec![0.0; n_max + 1];
    let mut argmax = vec![t_grid.first(); n_max + 1];
    for (row, &t) in rows.iter().zip(t_grid.nodes()) {
        for (n, &v) in row.iter().enumerate() {
            if v > constants[n] || v.is_nan() {
                constants[n] = v;
                argmax[n] = t;
            }
        }
    }
    Ok(DecayReport {
        passes: constants.iter().all(|c| c.is_finite()),
        rho,
        constants,
        argmax,
    })
}
