//! Domain types shared by every other module: transform parameters, radial
//! grids, sampled signals and the Gaussian-chirp test family.
//!
//! The radial operator `(t⁻¹D_t)` is realized throughout via `u = t²/2`, under
//! which it becomes the plain derivative `d/du`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spline::ComplexSpline;

/// Distance from `nπ` below which an angle is neither Identity nor Generic.
pub const ANGLE_EPS: f64 = 1e-8;

/// Distance from `nπ` (or `π/2`) accepted as an exact hit.
pub const EXACT_ANGLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AngleClass {
    /// `θ = nπ`: the transform is the identity map.
    Identity,
    /// `θ = π/2`: the classical Hankel-type transform.
    Classical,
    Generic,
}

/// The triple `(ν, μ, θ)` with its angle classification and cached trigonometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformParams {
    nu: f64,
    mu: f64,
    theta: f64,
    class: AngleClass,
    cot: f64,
    csc: f64,
}

impl TransformParams {
    pub fn new(nu: f64, mu: f64, theta: f64) -> Result<Self> {
        make_params(nu, mu, theta)
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn class(&self) -> AngleClass {
        self.class
    }

    pub fn is_identity(&self) -> bool {
        self.class == AngleClass::Identity
    }

    /// `cot θ`; zero for Classical, NaN for Identity.
    pub fn cot(&self) -> f64 {
        self.cot
    }

    /// `csc θ`; one for Classical, NaN for Identity.
    pub fn csc(&self) -> f64 {
        self.csc
    }

    /// Same angle and weight, different order. Orders such as `ν+q+k` used by
    /// the operator identities stay above `-1/2` whenever `ν` does.
    pub fn with_order(&self, nu: f64) -> Result<Self> {
        if !(nu >= -0.5) {
            return Err(Error::OrderOutOfRange(nu));
        }
        Ok(Self { nu, ..*self })
    }

    pub(crate) fn require_pointwise(&self) -> Result<()> {
        if self.is_identity() {
            Err(Error::IdentityAngle)
        } else {
            Ok(())
        }
    }

    /// `C_{ν,μ,θ} = e^{i(1+ν)(θ−π/2)} / (sin θ)^{1+μ}`, principal branch.
    pub fn kernel_constant(&self) -> KernelConstant {
        KernelConstant::new(self)
    }

    /// Constant of the `−θ` transform, the conjugate of [`Self::kernel_constant`],
    /// so that `K^{−θ}(ω, t) = conj K^θ(ω, t)`.
    pub fn inverse_constant(&self) -> Complex64 {
        self.kernel_constant().value.conj()
    }
}

/// Build and classify a [`TransformParams`].
pub fn make_params(nu: f64, mu: f64, theta: f64) -> Result<TransformParams> {
    if !nu.is_finite() || !mu.is_finite() || !theta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "parameters must be finite (nu={nu}, mu={mu}, theta={theta})"
        )));
    }
    if nu < -0.5 {
        return Err(Error::OrderOutOfRange(nu));
    }
    let n = (theta / PI).round();
    let dist_npi = (theta - n * PI).abs();
    let m = ((theta - FRAC_PI_2) / (2.0 * PI)).round();
    let dist_half = (theta - FRAC_PI_2 - 2.0 * PI * m).abs();

    let (class, cot, csc) = if dist_npi <= EXACT_ANGLE_TOL * n.abs().max(1.0) {
        (AngleClass::Identity, f64::NAN, f64::NAN)
    } else if dist_half <= EXACT_ANGLE_TOL * m.abs().max(1.0) {
        (AngleClass::Classical, 0.0, 1.0)
    } else if dist_npi < ANGLE_EPS {
        return Err(Error::DegenerateAngle(theta));
    } else {
        let (s, c) = theta.sin_cos();
        (AngleClass::Generic, c / s, 1.0 / s)
    };
    Ok(TransformParams {
        nu,
        mu,
        theta,
        class,
        cot,
        csc,
    })
}

/// The complex prefactor `C_{ν,μ,θ}` of the transform kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConstant {
    pub value: Complex64,
}

impl KernelConstant {
    fn new(p: &TransformParams) -> Self {
        let value = match p.class {
            AngleClass::Classical => Complex64::new(1.0, 0.0),
            AngleClass::Identity => Complex64::new(f64::NAN, f64::NAN),
            AngleClass::Generic => {
                let phase = Complex64::from_polar(1.0, (1.0 + p.nu) * (p.theta - FRAC_PI_2));
                let s = Complex64::new(p.theta.sin(), 0.0);
                phase / s.powf(1.0 + p.mu)
            }
        };
        Self { value }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Spacing {
    Linear,
    Logarithmic,
    /// Caller-supplied nodes.
    Explicit,
}

/// Strictly increasing positive abscissae on `(0, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    spacing: Spacing,
}

impl RadialGrid {
    pub fn linear(min: f64, max: f64, n: usize) -> Result<Self> {
        check_range(min, max, n)?;
        let h = (max - min) / (n - 1) as f64;
        let nodes = (0..n)
            .map(|i| if i == n - 1 { max } else { min + h * i as f64 })
            .collect();
        Self::build(nodes, Spacing::Linear)
    }

    pub fn logarithmic(min: f64, max: f64, n: usize) -> Result<Self> {
        check_range(min, max, n)?;
        let (lo, hi) = (min.ln(), max.ln());
        let h = (hi - lo) / (n - 1) as f64;
        let nodes = (0..n)
            .map(|i| match i {
                0 => min,
                i if i == n - 1 => max,
                i => (lo + h * i as f64).exp(),
            })
            .collect();
        Self::build(nodes, Spacing::Logarithmic)
    }

    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        Self::build(nodes, Spacing::Explicit)
    }

    /// Merge extra points into the grid (duplicates dropped).
    pub fn with_points(&self, extra: &[f64]) -> Result<Self> {
        let mut nodes = self.nodes.clone();
        nodes.extend_from_slice(extra);
        nodes.sort_by(|a, b| a.total_cmp(b));
        nodes.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs());
        Self::build(nodes, Spacing::Explicit)
    }

    fn build(nodes: Vec<f64>, spacing: Spacing) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidGrid("at least 2 nodes required".into()));
        }
        if nodes.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::InvalidGrid("nodes must be finite and > 0".into()));
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("nodes must be strictly increasing".into()));
        }
        Ok(Self { nodes, spacing })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.nodes[0]
    }

    pub fn last(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }
}

fn check_range(min: f64, max: f64, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 nodes, got {n}")));
    }
    if !(min > 0.0 && max > min && max.is_finite()) {
        return Err(Error::InvalidGrid(format!("need 0 < min < max, got [{min}, {max}]")));
    }
    Ok(())
}

/// Complex samples on a radial grid together with the parameters that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexSignal {
    pub grid: RadialGrid,
    pub values: Vec<Complex64>,
    pub params: TransformParams,
}

impl ComplexSignal {
    pub fn new(grid: RadialGrid, values: Vec<Complex64>, params: TransformParams) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidSignal(format!(
                "{} values for {} grid nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            params,
        })
    }

    /// Natural cubic spline in `u = t²/2`, valid on `(0, last node]`.
    pub fn interpolant(&self) -> SampledFunction {
        SampledFunction {
            spline: ComplexSpline::natural_in_u(self.grid.nodes(), &self.values),
            radius: self.grid.last(),
        }
    }
}

/// Anything that can be integrated against a transform kernel.
pub trait RadialFunction: Sync {
    fn eval(&self, t: f64) -> Complex64;

    /// `Some(R)` when the function is supported on `(0, R]`; `None` when it
    /// decays (Gaussian or faster) and the integral is truncated adaptively.
    fn support_radius(&self) -> Option<f64> {
        None
    }

    /// Coefficient `c` bounding the local phase rate `|c|·t` of the function.
    fn chirp_rate(&self) -> f64 {
        0.0
    }
}

/// Spline interpolant of a [`ComplexSignal`].
#[derive(Debug, Clone)]
pub struct SampledFunction {
    spline: ComplexSpline,
    radius: f64,
}

impl RadialFunction for SampledFunction {
    fn eval(&self, t: f64) -> Complex64 {
        if t > self.radius {
            return Complex64::new(0.0, 0.0);
        }
        self.spline.eval(0.5 * t * t)
    }

    fn support_radius(&self) -> Option<f64> {
        Some(self.radius)
    }
}

/// Wraps a closure as a [`RadialFunction`] with Gaussian-type decay.
pub struct FnRadial<F> {
    f: F,
    chirp_rate: f64,
}

impl<F: Fn(f64) -> Complex64 + Sync> FnRadial<F> {
    pub fn new(f: F) -> Self {
        Self { f, chirp_rate: 0.0 }
    }

    pub fn with_chirp_rate(mut self, c: f64) -> Self {
        self.chirp_rate = c.abs();
        self
    }
}

impl<F: Fn(f64) -> Complex64 + Sync> RadialFunction for FnRadial<F> {
    fn eval(&self, t: f64) -> Complex64 {
        (self.f)(t)
    }

    fn chirp_rate(&self) -> f64 {
        self.chirp_rate
    }
}

/// `amplitude · t^power · e^{−decay·t²} · e^{i·chirp·t²/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussChirp {
    pub amplitude: Complex64,
    pub power: f64,
    pub decay: f64,
    pub chirp: f64,
}

impl GaussChirp {
    pub fn new(amplitude: Complex64, power: f64, decay: f64, chirp: f64) -> Result<Self> {
        if !(decay > 0.0 && decay.is_finite()) {
            return Err(Error::InvalidSignal(format!("decay must be > 0, got {decay}")));
        }
        if !(power.is_finite() && chirp.is_finite()) {
            return Err(Error::InvalidSignal("power and chirp must be finite".into()));
        }
        Ok(Self {
            amplitude,
            power,
            decay,
            chirp,
        })
    }

    /// `e^{−decay·t²}`.
    pub fn gaussian(decay: f64) -> Result<Self> {
        Self::new(Complex64::new(1.0, 0.0), 0.0, decay, 0.0)
    }

    /// `t^{ν−μ} e^{−p t²} e^{−i t² cot θ / 2}`, the family with a closed-form transform.
    pub fn oracle_family(params: &TransformParams, decay: f64) -> Result<Self> {
        params.require_pointwise()?;
        Self::new(
            Complex64::new(1.0, 0.0),
            params.nu() - params.mu(),
            decay,
            -params.cot(),
        )
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        gausschirp_eval(self, t)
    }
}

/// Direct evaluation of a [`GaussChirp`] at `t > 0`.
pub fn gausschirp_eval(g: &GaussChirp, t: f64) -> Complex64 {
    let t2 = t * t;
    let env = t.powf(g.power) * (-g.decay * t2).exp();
    g.amplitude * Complex64::from_polar(env, 0.5 * g.chirp * t2)
}

/// One `coef · t^power` term of a [`GaussChirpSum`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coef: Complex64,
    pub power: f64,
}

/// Sum of [`GaussChirp`] terms sharing one `(decay, chirp)` pair:
/// `Σ coef_j t^{power_j} · e^{−decay·t²} e^{i·chirp·t²/2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussChirpSum {
    decay: f64,
    chirp: f64,
    terms: Vec<Term>,
}

impl From<GaussChirp> for GaussChirpSum {
    fn from(g: GaussChirp) -> Self {
        Self::new(
            g.decay,
            g.chirp,
            vec![Term {
                coef: g.amplitude,
                power: g.power,
            }],
        )
    }
}

impl GaussChirpSum {
    fn new(decay: f64, chirp: f64, terms: Vec<Term>) -> Self {
        let mut s = Self { decay, chirp, terms };
        s.normalize();
        s
    }

    pub fn zero(decay: f64, chirp: f64) -> Self {
        Self::new(decay, chirp, Vec::new())
    }

    pub fn from_terms(decay: f64, chirp: f64, terms: Vec<Term>) -> Result<Self> {
        GaussChirp::new(Complex64::new(1.0, 0.0), 0.0, decay, chirp)?;
        Ok(Self::new(decay, chirp, terms))
    }

    pub fn decay(&self) -> f64 {
        self.decay
    }

    pub fn chirp(&self) -> f64 {
        self.chirp
    }

    pub fn term_list(&self) -> &[Term] {
        &self.terms
    }

    pub fn terms(&self) -> impl Iterator<Item = GaussChirp> + '_ {
        self.terms.iter().map(move |t| GaussChirp {
            amplitude: t.coef,
            power: t.power,
            decay: self.decay,
            chirp: self.chirp,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest power of `t` present, if any.
    pub fn min_power(&self) -> Option<f64> {
        self.terms.iter().map(|t| t.power).reduce(f64::min)
    }

    /// A single term, when the sum has exactly one.
    pub fn as_single(&self) -> Option<GaussChirp> {
        match self.terms.as_slice() {
            [_] => self.terms().next(),
            _ => None,
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        if self.terms.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let t2 = t * t;
        let poly: Complex64 = self.terms.iter().map(|term| term.coef * t.powf(term.power)).sum();
        poly * Complex64::from_polar((-self.decay * t2).exp(), 0.5 * self.chirp * t2)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coef: t.coef * factor,
                power: t.power,
            })
            .collect();
        Self::new(self.decay, self.chirp, terms)
    }

    /// Multiply by `t^k`.
    pub fn mul_power(&self, k: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coef: t.coef,
                power: t.power + k,
            })
            .collect();
        Self::new(self.decay, self.chirp, terms)
    }

    /// Multiply by `e^{i·a·t²/2}`.
    pub fn mul_chirp(&self, a: f64) -> Self {
        Self::new(self.decay, self.chirp + a, self.terms.clone())
    }

    /// Sum of two members sharing `(decay, chirp)`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.decay != other.decay || self.chirp != other.chirp {
            return Err(Error::UnsupportedFamily(
                "summands must share decay and chirp".into(),
            ));
        }
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Ok(Self::new(self.decay, self.chirp, terms))
    }

    /// Pointwise product; decays and chirps add.
    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Term {
                    coef: a.coef * b.coef,
                    power: a.power + b.power,
                });
            }
        }
        Self::new(self.decay + other.decay, self.chirp + other.chirp, terms)
    }

    fn normalize(&mut self) {
        self.terms.sort_by(|a, b| a.power.total_cmp(&b.power));
        let mut merged: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.power == t.power => last.coef += t.coef,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coef != Complex64::new(0.0, 0.0));
        self.terms = merged;
    }
}

/// Exact `(t⁻¹D_t)^q` on the closed family, via
/// `(t⁻¹D_t)[t^s E] = (s·t^{s−2} + (−2p + ic)·t^s)·E`, `E = e^{−pt² + ict²/2}`.
pub fn radial_derivative(g: &GaussChirpSum, q: usize) -> GaussChirpSum {
    let rate = Complex64::new(-2.0 * g.decay, g.chirp);
    let mut cur = g.clone();
    for _ in 0..q {
        let mut terms = Vec::with_capacity(2 * cur.terms.len());
        for t in &cur.terms {
            if t.power != 0.0 {
                terms.push(Term {
                    coef: t.coef * t.power,
                    power: t.power - 2.0,
                });
            }
            terms.push(Term {
                coef: t.coef * rate,
                power: t.power,
            });
        }
        cur = GaussChirpSum::new(cur.decay, cur.chirp, terms);
    }
    cur
}

impl GaussChirpSum {
    pub fn radial_derivative(&self, q: usize) -> Self {
        radial_derivative(self, q)
    }
}

impl RadialFunction for GaussChirp {
    fn eval(&self, t: f64) -> Complex64 {
        gausschirp_eval(self, t)
    }

    fn chirp_rate(&self) -> f64 {
        self.chirp.abs()
    }
}

impl RadialFunction for GaussChirpSum {
    fn eval(&self, t: f64) -> Complex64 {
        GaussChirpSum::eval(self, t)
    }

    fn chirp_rate(&self) -> f64 {
        self.chirp.abs()
    }
}

/// `e^{i·a·t²/2}`.
pub(crate) fn chirp_factor(a: f64, t: f64) -> Complex64 {
    Complex64::from_polar(1.0, 0.5 * a * t * t)
}
