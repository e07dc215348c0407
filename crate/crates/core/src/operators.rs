//! The Bessel-type operator `M_ν = −e^{−ix²cotθ/2} x^{ν−μ} D_x e^{ix²cotθ/2} x^{μ−ν}`,
//! its iterates, and pointwise checks of the identities that connect the
//! iterates with the inverse transform.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frht::{oracle_inverse, transform_at, Direction};
use crate::model::{GaussChirpSum, TransformParams};
use crate::quadrature::QuadratureSpec;

/// `M_{ν+k−1} ··· M_{ν+1} M_ν`, applied innermost first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MOperatorChain {
    pub params: TransformParams,
    pub length: usize,
}

impl MOperatorChain {
    pub fn new(params: TransformParams, length: usize) -> Self {
        Self { params, length }
    }

    /// Orders `ν, ν+1, …, ν+k−1` in application order.
    pub fn order_offsets(&self) -> Vec<f64> {
        (0..self.length).map(|j| self.params.nu() + j as f64).collect()
    }

    pub fn apply(&self, f: &GaussChirpSum) -> GaussChirpSum {
        apply_m_chain(self, f)
    }
}

/// One application of `M` at order `nu` with chirp coefficient `cot`.
pub fn apply_m(nu: f64, mu: f64, cot: f64, f: &GaussChirpSum) -> GaussChirpSum {
    // D_x = x (x⁻¹D_x), and (x⁻¹D_x) is exact on the family
    let inner = f.mul_chirp(cot).mul_power(mu - nu);
    inner
        .radial_derivative(1)
        .mul_power(1.0 + nu - mu)
        .mul_chirp(-cot)
        .scale(Complex64::new(-1.0, 0.0))
}

/// Exact symbolic image of `f` under the chain.
pub fn apply_m_chain(chain: &MOperatorChain, f: &GaussChirpSum) -> GaussChirpSum {
    let p = &chain.params;
    let cot = if p.is_identity() { 0.0 } else { p.cot() };
    chain
        .order_offsets()
        .into_iter()
        .fold(f.clone(), |acc, nu| apply_m(nu, p.mu(), cot, &acc))
}

/// The three identities relating the chain to radial derivatives and to the inverse transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainIdentity {
    /// Chain of length `k` equals `(−1)^k x^{ν−μ+k} e^{−ix²cot/2} (x⁻¹D)^k [e^{ix²cot/2} x^{μ−ν} ψ]`.
    Expansion,
    /// Chain of length `q` applied to `H^{−θ}_ν ψ` equals `(cscθ e^{i(θ−π/2)})^q H^{−θ}_{ν+q}(x^q ψ)`.
    ThroughInverse,
    /// `H^{−θ}_{ν+q+k}(x^q · chain_{−θ} ψ)` equals `(y cscθ e^{−i(θ−π/2)})^k H^{−θ}_{ν+q}(x^q ψ)`.
    UnderInverse,
}

fn relative_defect(lhs: Complex64, rhs: Complex64, floor: f64) -> f64 {
    (lhs - rhs).norm() / lhs.norm().max(floor)
}

/// Maximum relative defect of a [`ChainIdentity`] over `probe_points`.
pub fn verify_chain_identity(
    part: ChainIdentity,
    params: &TransformParams,
    psi: &GaussChirpSum,
    q: usize,
    k: usize,
    probe_points: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64> {
    if probe_points.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::InvalidArgument("probe points must be positive".into()));
    }
    match part {
        ChainIdentity::Expansion => {
            if k < 1 {
                return Err(Error::InvalidArgument("expansion identity needs k >= 1".into()));
            }
            Ok(expansion_defect(params, psi, k, probe_points))
        }
        ChainIdentity::ThroughInverse => {
            params.require_pointwise()?;
            if q < 1 {
                return Err(Error::InvalidArgument("identity through the inverse needs q >= 1".into()));
            }
            through_inverse_defect(params, psi, q, probe_points, spec)
        }
        ChainIdentity::UnderInverse => {
            params.require_pointwise()?;
            if q < 1 || k < 1 {
                return Err(Error::InvalidArgument("identity under the inverse needs q, k >= 1".into()));
            }
            under_inverse_defect(params, psi, q, k, probe_points, spec)
        }
    }
}

fn expansion_defect(params: &TransformParams, psi: &GaussChirpSum, k: usize, probes: &[f64]) -> f64 {
    let (nu, mu) = (params.nu(), params.mu());
    let cot = if params.is_identity() { 0.0 } else { params.cot() };
    let lhs = apply_m_chain(&MOperatorChain::new(*params, k), psi);
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let rhs = psi
        .mul_chirp(cot)
        .mul_power(mu - nu)
        .radial_derivative(k)
        .mul_chirp(-cot)
        .mul_power(nu - mu + k as f64)
        .scale(Complex64::new(sign, 0.0));
    probes
        .iter()
        .map(|&x| relative_defect(lhs.eval(x), rhs.eval(x), 1e-300))
        .fold(0.0, f64::max)
}

/// `(cscθ e^{iφ(θ−π/2)})^n` for `φ = ±1`.
fn rotated_csc_power(params: &TransformParams, phase_sign: f64, n: usize) -> Complex64 {
    Complex64::from_polar(params.csc(), phase_sign * (params.theta() - std::f64::consts::FRAC_PI_2)).powu(n as u32)
}

fn through_inverse_defect(
    params: &TransformParams,
    psi: &GaussChirpSum,
    q: usize,
    probes: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64> {
    let chain = MOperatorChain::new(*params, q);
    let shifted = params.with_order(params.nu() + q as f64)?;
    let x_q_psi = psi.mul_power(q as f64);
    let factor = rotated_csc_power(params, 1.0, q);

    // closed-form inverse followed by the symbolic chain, when ψ is a single Gaussian of the right shape
    let closed = psi
        .as_single()
        .and_then(|g| oracle_inverse(params, &g).ok())
        .map(|g| chain.apply(&g.into()));

    let defects: Vec<f64> = probes
        .par_iter()
        .map(|&y| {
            let lhs = match &closed {
                Some(h) => h.eval(y),
                None => chain_of_inverse_by_quadrature(params, psi, q, y, spec)?,
            };
            let rhs = factor * transform_at(&shifted, Direction::Inverse, &x_q_psi, y, spec)?.value;
            Ok(relative_defect(lhs, rhs, spec.abs_tol))
        })
        .collect::<Result<_>>()?;
    Ok(defects.into_iter().fold(0.0, f64::max))
}

/// Chain of length `q` applied to `H^{−θ}_ν ψ` at `y`, differentiating under the integral:
/// `conj(C) (cscθ)^{ν−μ+2q} y^{ν−μ+q} e^{−iy²cot/2} ∫ x^{1+μ+ν+2q} S_{ν+q}(xy|cscθ|) e^{−ix²cot/2} ψ dx`.
fn chain_of_inverse_by_quadrature(
    params: &TransformParams,
    psi: &GaussChirpSum,
    q: usize,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let qf = q as f64;
    let shifted = params.with_order(params.nu() + qf)?;
    // H^{−θ}_{ν+q} of x^qψ carries conj(C_{ν+q}) (cscθ)^{ν+q−μ} y^{ν+q−μ}; rescale to the order-ν constants
    let h = transform_at(&shifted, Direction::Inverse, &psi.mul_power(qf), y, spec)?.value;
    let c_ratio = params.inverse_constant() / shifted.inverse_constant();
    let csc_extra = Complex64::new(params.csc(), 0.0).powf(qf);
    Ok(h * c_ratio * csc_extra)
}

fn under_inverse_defect(
    params: &TransformParams,
    psi: &GaussChirpSum,
    q: usize,
    k: usize,
    probes: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64> {
    let negated = TransformParams::new(params.nu(), params.mu(), -params.theta())?;
    let chained = apply_m_chain(&MOperatorChain::new(negated, k), psi).mul_power(q as f64);
    let high = params.with_order(params.nu() + (q + k) as f64)?;
    let low = params.with_order(params.nu() + q as f64)?;
    let x_q_psi = psi.mul_power(q as f64);
    let factor = rotated_csc_power(params, -1.0, k);
    let defects: Vec<f64> = probes
        .par_iter()
        .map(|&y| {
            let lhs = transform_at(&high, Direction::Inverse, &chained, y, spec)?.value;
            let rhs = factor * y.powi(k as i32) * transform_at(&low, Direction::Inverse, &x_q_psi, y, spec)?.value;
            Ok(relative_defect(lhs, rhs, spec.abs_tol))
        })
        .collect::<Result<_>>()?;
    Ok(defects.into_iter().fold(0.0, f64::max))
}

fn binomial(n: usize, r: usize) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Maximum relative difference between `(t⁻¹D)^n[e^{−it²cot/2} t^{μ−ν} f g]` and
/// `Σ_r C(n,r) (t⁻¹D)^r[e^{−it²cot/2} t^{μ−ν} f] · (t⁻¹D)^{n−r} g`.
pub fn leibniz_defect(params: &TransformParams, f: &GaussChirpSum, g: &GaussChirpSum, n: usize, probe_points: &[f64]) -> f64 {
    let cot = if params.is_identity() { 0.0 } else { params.cot() };
    let weighted = f.mul_chirp(-cot).mul_power(params.mu() - params.nu());
    let product = weighted.mul(g).radial_derivative(n);
    let left: Vec<GaussChirpSum> = (0..=n).map(|r| weighted.radial_derivative(r)).collect();
    let right: Vec<GaussChirpSum> = (0..=n).map(|r| g.radial_derivative(r)).collect();
    probe_points
        .iter()
        .map(|&t| {
            let rhs: Complex64 = (0..=n)
                .map(|r| left[r].eval(t) * right[n - r].eval(t) * binomial(n, r))
                .sum();
            let lhs = if n == 0 { rhs } else { product.eval(t) };
            relative_defect(lhs, rhs, 1e-300)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GaussChirp;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn single_step_by_hand() {
        // choose f so that e^{ix²cot/2} x^{μ−ν} f = e^{−x²/2}
        let p = TransformParams::new(0.5, 0.25, FRAC_PI_3).unwrap();
        let cot = p.cot();
        let f: GaussChirpSum = GaussChirp::new(one(), 0.25, 0.5, -cot).unwrap().into();
        let out = apply_m_chain(&MOperatorChain::new(p, 1), &f);
        for &x in &[0.3f64, 1.0, 2.2] {
            let want = Complex64::from_polar(x.powf(1.25) * (-0.5 * x * x).exp(), -0.5 * cot * x * x);
            assert!((out.eval(x) - want).norm() < 1e-14 * want.norm().max(1e-300));
        }
    }

    #[test]
    fn empty_chain_is_identity() {
        let p = TransformParams::new(0.0, 0.0, FRAC_PI_4).unwrap();
        let f: GaussChirpSum = GaussChirp::new(one(), 1.0, 0.7, 0.2).unwrap().into();
        assert_eq!(apply_m_chain(&MOperatorChain::new(p, 0), &f), f);
    }

    #[test]
    fn expansion_identity_symbolic() {
        let p = TransformParams::new(0.5, 0.25, FRAC_PI_3).unwrap();
        let psi: GaussChirpSum = GaussChirp::new(Complex64::new(0.3, -1.1), 0.25, 0.6, 0.4).unwrap().into();
        let probes = [0.2, 0.5, 0.9, 1.3, 1.7, 2.0, 2.4, 2.9, 3.3, 3.8];
        for k in 1..=4 {
            let d = verify_chain_identity(ChainIdentity::Expansion, &p, &psi, 0, k, &probes, &QuadratureSpec::default()).unwrap();
            assert!(d <= 1e-9, "k={k}: {d}");
        }
    }

    #[test]
    fn through_inverse_example() {
        let p = TransformParams::new(0.0, 0.0, FRAC_PI_3).unwrap();
        let psi: GaussChirpSum = GaussChirp::new(one(), 0.0, 0.5, p.cot()).unwrap().into();
        let d = verify_chain_identity(ChainIdentity::ThroughInverse, &p, &psi, 1, 0, &[0.5, 1.0, 2.0], &QuadratureSpec::default()).unwrap();
        assert!(d <= 1e-6, "{d}");
    }

    #[test]
    fn through_inverse_general_input() {
        // not a single Gaussian: exercises the differentiation-under-the-integral path
        let p = TransformParams::new(0.5, 0.0, FRAC_PI_4).unwrap();
        let a: GaussChirpSum = GaussChirp::new(one(), 0.5, 0.6, 0.2).unwrap().into();
        let psi = a.add(&a.mul_power(2.0).scale(Complex64::new(0.0, 0.5))).unwrap();
        let d = verify_chain_identity(ChainIdentity::ThroughInverse, &p, &psi, 2, 0, &[0.5, 1.0, 2.0], &QuadratureSpec::default()).unwrap();
        assert!(d <= 1e-6, "{d}");
    }

    #[test]
    fn under_inverse_example() {
        let p = TransformParams::new(0.0, 0.0, FRAC_PI_3).unwrap();
        let psi: GaussChirpSum = GaussChirp::new(one(), 0.0, 0.5, p.cot()).unwrap().into();
        let d = verify_chain_identity(ChainIdentity::UnderInverse, &p, &psi, 1, 1, &[0.5, 1.0, 2.0], &QuadratureSpec::default()).unwrap();
        assert!(d <= 1e-6, "{d}");
    }

    #[test]
    fn preconditions() {
        let p = TransformParams::new(0.0, 0.0, FRAC_PI_2).unwrap();
        let psi: GaussChirpSum = GaussChirp::gaussian(0.5).unwrap().into();
        let s = QuadratureSpec::default();
        assert!(verify_chain_identity(ChainIdentity::Expansion, &p, &psi, 0, 0, &[1.0], &s).is_err());
        assert!(verify_chain_identity(ChainIdentity::UnderInverse, &p, &psi, 1, 0, &[1.0], &s).is_err());
        let id = TransformParams::new(0.0, 0.0, 0.0).unwrap();
        assert!(matches!(
            verify_chain_identity(ChainIdentity::ThroughInverse, &id, &psi, 1, 0, &[1.0], &s),
            Err(Error::IdentityAngle)
        ));
    }

    #[test]
    fn leibniz_examples() {
        let g: GaussChirpSum = GaussChirp::gaussian(0.5).unwrap().into();
        let p = TransformParams::new(0.0, 0.0, FRAC_PI_2).unwrap();
        let probes = [0.3, 1.0, 1.9, 3.1];
        assert_eq!(leibniz_defect(&p, &g, &g, 0, &probes), 0.0);
        assert!(leibniz_defect(&p, &g, &g, 1, &probes) <= 1e-10);
        let p3 = TransformParams::new(0.0, 0.0, FRAC_PI_3).unwrap();
        let h: GaussChirpSum = GaussChirp::new(one(), 2.0, 1.0, 0.0).unwrap().into();
        assert!(leibniz_defect(&p3, &g, &h, 3, &probes) <= 1e-8);
    }
}
