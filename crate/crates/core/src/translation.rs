//! Translation kernel `D(t, ω, z)` and the translation `τ_t ψ`.
//!
//! The kernel's `s`-integral converges only conditionally, so it is damped by
//! `e^{−εs²}` and extrapolated to `ε → 0` from `ε`, `ε/2` and `ε/4`.
//!
//! [`Translator`] evaluates `τ_t ψ` without the kernel: exchanging the order of
//! integration gives
//!
//! ```text
//! τ_t ψ(ω) = conj(C) e^{−i(t²+ω²)cotθ/2} ∫ B(ts) B(ωs) s^{1+2μ} E(s²/2) ds
//! ```
//!
//! with `B(x) = (x cscθ)^{−μ} J_ν(x cscθ)` and `E` the envelope of the forward
//! transform of `z^{ν−μ} e^{−iz²cotθ/2} ψ(z)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frht::{bessel_factor, Direction, TransformInterpolant};
use crate::model::{chirp_factor, ComplexSignal, GaussChirpSum, RadialFunction, RadialGrid, TransformParams};
use crate::quadrature::{integrate_oscillatory, Oscillation, QuadratureSpec, Truncation};

/// Default damping parameter for the kernel integral.
pub const DEFAULT_DAMPING: f64 = 1e-3;

/// Output nodes allowed for kernel-quadrature translation unless raised by the caller.
pub const KERNEL_GRID_CAP: usize = 32;

const KERNEL_MIN_PANELS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranslationKernelPoint {
    pub params: TransformParams,
    pub t: f64,
    pub omega: f64,
    pub z: f64,
    pub value: Complex64,
}

impl TranslationKernelPoint {
    pub fn new(params: TransformParams, t: f64, omega: f64, z: f64, spec: &QuadratureSpec) -> Result<Self> {
        Ok(Self {
            params,
            t,
            omega,
            z,
            value: d_kernel(&params, t, omega, z, spec)?,
        })
    }
}

fn check_kernel_params(params: &TransformParams) -> Result<()> {
    params.require_pointwise()?;
    let exponent = 1.0 + 3.0 * params.mu() - params.nu();
    if exponent <= -1.0 {
        return Err(Error::ParameterUnsupported(format!(
            "kernel weight s^{exponent} is not integrable at the origin"
        )));
    }
    Ok(())
}

/// The kernel integral with damping `e^{−εs²}`, no extrapolation.
pub fn d_kernel_damped(
    params: &TransformParams,
    t: f64,
    omega: f64,
    z: f64,
    eps: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    check_kernel_params(params)?;
    if !(t > 0.0 && omega > 0.0 && z > 0.0) {
        return Err(Error::InvalidArgument(format!("kernel needs t, omega, z > 0 (got {t}, {omega}, {z})")));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("damping must be positive, got {eps}")));
    }
    let nu = params.nu();
    let weight = 1.0 + 3.0 * params.mu() - nu;
    let integrand = |s: f64| {
        bessel_factor(params, nu, z * s) * bessel_factor(params, nu, t * s) * bessel_factor(params, nu, omega * s)
            * (s.powf(weight) * (-eps * s * s).exp())
    };
    let spec = spec
        .with_truncation(Truncation::AutoDecay)
        .with_max_panels(spec.max_panels.max(KERNEL_MIN_PANELS));
    let hint = Oscillation::new((t + omega + z) * params.csc().abs(), 0.0);
    let r = integrate_oscillatory(integrand, hint, &spec)?;
    let cot = params.cot();
    let prefactor = params.inverse_constant() * chirp_factor(-cot, z) * chirp_factor(-cot, t) * chirp_factor(-cot, omega);
    Ok(prefactor * r.value)
}

/// Kernel value extrapolated from damping `eps`, `eps/2` and `eps/4`.
///
/// The damping error is a power series in `ε`; two Richardson steps cancel the
/// linear and quadratic terms.
pub fn d_kernel_extrapolated(
    params: &TransformParams,
    t: f64,
    omega: f64,
    z: f64,
    eps: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let d1 = d_kernel_damped(params, t, omega, z, eps, spec)?;
    let d2 = d_kernel_damped(params, t, omega, z, 0.5 * eps, spec)?;
    let d4 = d_kernel_damped(params, t, omega, z, 0.25 * eps, spec)?;
    let r1 = d2 * 2.0 - d1;
    let r2 = d4 * 2.0 - d2;
    Ok((r2 * 4.0 - r1) / 3.0)
}

/// `D(t, ω, z)` with the default damping.
pub fn d_kernel(params: &TransformParams, t: f64, omega: f64, z: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    d_kernel_extrapolated(params, t, omega, z, DEFAULT_DAMPING, spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum TranslationMethod {
    /// Exchange the order of integration; one quadrature per output node.
    #[default]
    Spectral,
    /// Integrate `ψ(z) D(t, ω, z)` over `z` with the kernel evaluated by quadrature.
    KernelQuadrature,
}

/// Reusable translation of one `ψ` at arbitrary `(t, ω)`.
#[derive(Debug, Clone)]
pub struct Translator {
    params: TransformParams,
    spectrum: TransformInterpolant,
}

impl Translator {
    pub fn new(params: &TransformParams, psi: &GaussChirpSum, spec: &QuadratureSpec) -> Result<Self> {
        check_kernel_params(params)?;
        let reshaped = psi.mul_power(params.nu() - params.mu()).mul_chirp(-params.cot());
        let spectrum = TransformInterpolant::build(params, Direction::Forward, &reshaped, spec)?;
        Ok(Self {
            params: *params,
            spectrum,
        })
    }

    pub fn params(&self) -> &TransformParams {
        &self.params
    }

    /// Interpolated transform of `z^{ν−μ} e^{−iz²cotθ/2} ψ(z)`.
    pub fn spectrum(&self) -> &TransformInterpolant {
        &self.spectrum
    }

    /// `τ_t ψ(ω)`.
    pub fn value(&self, t: f64, omega: f64, spec: &QuadratureSpec) -> Result<Complex64> {
        if !(t >= 0.0 && omega > 0.0) {
            return Err(Error::InvalidArgument(format!("translation needs t >= 0, omega > 0 (got {t}, {omega})")));
        }
        let p = &self.params;
        let nu = p.nu();
        let weight = 1.0 + 2.0 * p.mu();
        let t_eff = t.max(1e-300);
        let integrand = |s: f64| {
            let e = self.spectrum.envelope(0.5 * s * s);
            if e == Complex64::default() {
                return e;
            }
            e * bessel_factor(p, nu, t_eff * s) * bessel_factor(p, nu, omega * s) * s.powf(weight)
        };
        let spec = spec.with_truncation(Truncation::FixedRadius(self.spectrum.radius()));
        let hint = Oscillation::new((t + omega) * p.csc().abs(), 0.0);
        let r = integrate_oscillatory(integrand, hint, &spec).map_err(|e| e.at_frequency(omega))?;
        let outer = p.inverse_constant() * chirp_factor(-p.cot(), t) * chirp_factor(-p.cot(), omega);
        Ok(outer * r.value)
    }
}

/// `τ_t ψ` on `omega_grid` by the spectral method.
pub fn translate(
    params: &TransformParams,
    psi: &GaussChirpSum,
    t: f64,
    omega_grid: &RadialGrid,
    spec: &QuadratureSpec,
) -> Result<ComplexSignal> {
    translate_with(params, psi, t, omega_grid, TranslationMethod::Spectral, spec)
}

/// `τ_t ψ` on `omega_grid` by the chosen method.
pub fn translate_with(
    params: &TransformParams,
    psi: &GaussChirpSum,
    t: f64,
    omega_grid: &RadialGrid,
    method: TranslationMethod,
    spec: &QuadratureSpec,
) -> Result<ComplexSignal> {
    let values: Vec<Complex64> = match method {
        TranslationMethod::Spectral => {
            let tr = Translator::new(params, psi, spec)?;
            omega_grid
                .nodes()
                .par_iter()
                .map(|&w| tr.value(t, w, spec))
                .collect::<Result<_>>()?
        }
        TranslationMethod::KernelQuadrature => {
            if omega_grid.len() > KERNEL_GRID_CAP {
                return Err(Error::InvalidGrid(format!(
                    "kernel-quadrature translation is limited to {KERNEL_GRID_CAP} nodes, got {}",
                    omega_grid.len()
                )));
            }
            omega_grid
                .nodes()
                .par_iter()
                .map(|&w| translate_by_kernel(params, psi, t, w, spec))
                .collect::<Result<_>>()?
        }
    };
    ComplexSignal::new(omega_grid.clone(), values, *params)
}

/// `C ∫ ψ(z) D(t, ω, z) e^{iz²cotθ/2} z^{1+μ+ν} dz` with the kernel computed by quadrature.
pub fn translate_by_kernel(
    params: &TransformParams,
    psi: &GaussChirpSum,
    t: f64,
    omega: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    check_kernel_params(params)?;
    let c = params.kernel_constant().value;
    let weight = 1.0 + params.mu() + params.nu();
    let cot = params.cot();
    let failure = std::sync::Mutex::new(None);
    let integrand = |z: f64| {
        let v = psi.eval(z);
        if v.norm() < 1e-300 {
            return Complex64::default();
        }
        match d_kernel(params, t, omega, z, spec) {
            Ok(d) => v * d * chirp_factor(cot, z) * z.powf(weight),
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                Complex64::new(f64::NAN, f64::NAN)
            }
        }
    };
    // the kernel has kinks where (t, ω, z) stop forming a triangle
    let outer = spec.with_max_panels(spec.max_panels.min(512));
    let r = integrate_oscillatory(integrand, Oscillation::new(0.0, psi.chirp_rate()), &outer);
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e.nested(1));
    }
    Ok(c * r.map_err(|e| e.nested(0))?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GaussChirp;
    use crate::specialfn::j;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn classical() -> TransformParams {
        TransformParams::new(0.0, 0.0, FRAC_PI_2).unwrap()
    }

    fn gaussian() -> GaussChirpSum {
        GaussChirp::gaussian(0.5).unwrap().into()
    }

    #[test]
    fn product_formula_cross_check() {
        let spec = QuadratureSpec::default();
        let tr = Translator::new(&classical(), &gaussian(), &spec).unwrap();
        let got = tr.value(1.0, 1.0, &spec).unwrap();
        let want = integrate_oscillatory(
            |s| Complex64::new((-0.5 * s * s).exp() * s * j(0.0, s) * j(0.0, s), 0.0),
            Oscillation::new(2.0, 0.0),
            &spec,
        )
        .unwrap()
        .value;
        assert!((got - want).norm() < 1e-4 * want.norm(), "{got} vs {want}");
    }

    #[test]
    fn translation_at_origin_is_identity() {
        let spec = QuadratureSpec::default();
        let grid = RadialGrid::linear(0.5, 2.0, 7).unwrap();
        let out = translate(&classical(), &gaussian(), 1e-3, &grid, &spec).unwrap();
        for (w, v) in grid.nodes().iter().zip(&out.values) {
            let e = (-0.5 * w * w).exp();
            assert!((v.re - e).abs() <= 1e-2 * e && v.im.abs() < 1e-2 * e, "w={w}");
        }
    }

    #[test]
    fn linear_in_psi() {
        let spec = QuadratureSpec::default();
        let p = TransformParams::new(0.5, 0.0, FRAC_PI_3).unwrap();
        let a = gaussian();
        let b = a.mul_power(2.0);
        let alpha = Complex64::new(0.7, -0.2);
        let combo = a.scale(alpha).add(&b).unwrap();
        let grid = RadialGrid::from_nodes(vec![0.6, 1.4]).unwrap();
        let ta = translate(&p, &a, 0.8, &grid, &spec).unwrap();
        let tb = translate(&p, &b, 0.8, &grid, &spec).unwrap();
        let tc = translate(&p, &combo, 0.8, &grid, &spec).unwrap();
        for i in 0..2 {
            let want = ta.values[i] * alpha + tb.values[i];
            assert!((tc.values[i] - want).norm() < 1e-8 * want.norm());
        }
    }

    #[test]
    fn kernel_symmetric_in_t_and_omega() {
        let spec = QuadratureSpec::default();
        let p = TransformParams::new(0.5, 0.25, FRAC_PI_3).unwrap();
        let a = d_kernel(&p, 1.0, 1.3, 0.7, &spec).unwrap();
        let b = d_kernel(&p, 1.3, 1.0, 0.7, &spec).unwrap();
        assert!((a - b).norm() <= 1e-8 * a.norm());
    }

    #[test]
    fn damping_extrapolation_is_stable() {
        let spec = QuadratureSpec::default();
        let p = classical();
        let a = d_kernel_extrapolated(&p, 1.0, 1.0, 0.5, 1e-3, &spec).unwrap();
        let b = d_kernel_extrapolated(&p, 1.0, 1.0, 0.5, 5e-4, &spec).unwrap();
        assert!((a - b).norm() <= 1e-6, "{a} vs {b}");
    }

    #[test]
    fn order_zero_kernel_matches_triangle_area() {
        let p = TransformParams::new(0.0, 0.0, FRAC_PI_2).unwrap();
        let spec = QuadratureSpec::default().with_rel_tol(1e-13);
        for &(t, w, z) in &[(1.0, 1.0, 0.5), (1.0, 1.3, 0.7), (2.0, 1.5, 1.0)] {
            let s: f64 = 0.5 * (t + w + z);
            let area = (s * (s - t) * (s - w) * (s - z)).sqrt();
            let exact = 1.0 / (2.0 * PI * area);
            let got = d_kernel(&p, t, w, z, &spec).unwrap();
            assert!((got.re - exact).abs() <= 1e-5 * exact && got.im.abs() <= 1e-8, "{got} vs {exact}");
        }
    }

    #[test]
    fn damping_sequence_is_cauchy() {
        let spec = QuadratureSpec::default();
        let p = classical();
        let d: Vec<Complex64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&e| d_kernel_damped(&p, 1.0, 1.0, 0.5, e, &spec).unwrap())
            .collect();
        let first = (d[1] - d[0]).norm();
        let second = (d[2] - d[1]).norm();
        assert!(second < 0.5 * first, "{first} {second}");
    }

    #[test]
    fn kernel_vanishes_outside_triangle() {
        let spec = QuadratureSpec::default();
        let p = classical();
        let outside = d_kernel(&p, 1.0, 1.0, 3.0, &spec).unwrap().norm();
        let peak = [0.5, 1.0, 1.5]
            .iter()
            .map(|&z| d_kernel(&p, 1.0, 1.0, z, &spec).unwrap().norm())
            .fold(0.0, f64::max);
        assert!(outside <= 1e-4 * peak, "{outside} vs {peak}");
    }

    #[test]
    fn small_s_contribution_is_negligible() {
        // integrand behaves like s for ν = μ = 0
        let p = classical();
        let spec = QuadratureSpec::default().with_truncation(Truncation::FixedRadius(1e-6));
        let r = integrate_oscillatory(
            |s: f64| bessel_factor(&p, 0.0, s) * bessel_factor(&p, 0.0, s) * bessel_factor(&p, 0.0, 0.5 * s) * s,
            Oscillation::NONE,
            &spec,
        )
        .unwrap();
        assert!(r.value.norm() <= 1e-12);
    }

    #[test]
    fn unsupported_weight_rejected() {
        let p = TransformParams::new(3.0, 0.0, FRAC_PI_2).unwrap();
        assert!(matches!(
            d_kernel(&p, 1.0, 1.0, 1.0, &QuadratureSpec::default()),
            Err(Error::ParameterUnsupported(_))
        ));
    }

    #[test]
    fn kernel_and_spectral_methods_agree() {
        let spec = QuadratureSpec::default().with_rel_tol(1e-8);
        let p = classical();
        let grid = RadialGrid::from_nodes(vec![0.8, 1.5]).unwrap();
        let fast = translate_with(&p, &gaussian(), 1.0, &grid, TranslationMethod::Spectral, &spec).unwrap();
        let slow = translate_with(&p, &gaussian(), 1.0, &grid, TranslationMethod::KernelQuadrature, &spec).unwrap();
        for (a, b) in fast.values.iter().zip(&slow.values) {
            assert!((a - b).norm() <= 2e-3 * a.norm(), "{a} vs {b}");
        }
    }
}
