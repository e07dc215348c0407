//! Adaptive Gauss–Kronrod quadrature on `(0, R]` and `(0, ∞)`.
//!
//! Panels use the 7-point Gauss / 15-point Kronrod pair. Refinement is global:
//! the panel with the largest error estimate is bisected until the summed
//! estimate meets the tolerance. Initial panels are no wider than a quarter of
//! the local oscillation wavelength given by an [`Oscillation`] hint.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest radius tried by [`Truncation::AutoDecay`].
pub const MAX_RADIUS: f64 = 1e4;
/// First radius tried by [`Truncation::AutoDecay`].
pub const INITIAL_RADIUS: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Truncation {
    /// Grow the radius geometrically until the integrand's tail is negligible.
    AutoDecay,
    /// Integrate over `(0, R]` only.
    FixedRadius(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
    pub truncation: Truncation,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_panels: 4096,
            truncation: Truncation::AutoDecay,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Result<Self> {
        let spec = Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_truncation(mut self, truncation: Truncation) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn with_max_panels(mut self, max_panels: usize) -> Self {
        self.max_panels = max_panels;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerances must be positive (rel_tol={}, abs_tol={})",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.max_panels == 0 {
            return Err(Error::InvalidArgument("max_panels must be positive".into()));
        }
        if let Truncation::FixedRadius(r) = self.truncation {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidArgument(format!("truncation radius must be > 0, got {r}")));
            }
        }
        Ok(())
    }

    fn target(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels_used: usize,
    pub truncation_radius: f64,
}

/// Local phase rate bound `base + slope·t` of an integrand.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Oscillation {
    pub base: f64,
    pub slope: f64,
}

impl Oscillation {
    pub const NONE: Oscillation = Oscillation { base: 0.0, slope: 0.0 };

    pub fn new(base: f64, slope: f64) -> Self {
        Self {
            base: base.abs(),
            slope: slope.abs(),
        }
    }

    fn rate(&self, t: f64) -> f64 {
        self.base + self.slope * t
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_47,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_67,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    roundoff: f64,
    mass: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Self {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let fc = f(c);
        let mut kronrod = fc * WGK[7];
        let mut gauss = fc * WG[3];
        let mut resabs = fc.norm() * WGK[7];
        let mut pairs = [(Complex64::default(), Complex64::default()); 7];
        for (j, pair) in pairs.iter_mut().enumerate() {
            let dx = h * XGK[j];
            let f1 = f(c - dx);
            let f2 = f(c + dx);
            kronrod += (f1 + f2) * WGK[j];
            resabs += (f1.norm() + f2.norm()) * WGK[j];
            if j % 2 == 1 {
                gauss += (f1 + f2) * WG[j / 2];
            }
            *pair = (f1, f2);
        }
        let mean = kronrod * 0.5;
        let mut resasc = WGK[7] * (fc - mean).norm();
        for (j, (f1, f2)) in pairs.iter().enumerate() {
            resasc += WGK[j] * ((f1 - mean).norm() + (f2 - mean).norm());
        }
        let value = kronrod * h;
        let resabs = resabs * h.abs();
        let resasc = resasc * h.abs();
        let mut error = ((kronrod - gauss) * h).norm();
        if resasc != 0.0 && error != 0.0 {
            error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
        }
        let roundoff = 50.0 * f64::EPSILON * resabs;
        if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            error = error.max(roundoff);
        }
        if !value.re.is_finite() || !value.im.is_finite() {
            error = f64::INFINITY;
        }
        Self {
            a,
            b,
            value,
            error,
            roundoff,
            mass: resabs,
        }
    }

    fn splittable(&self) -> bool {
        let mid = 0.5 * (self.a + self.b);
        mid > self.a && mid < self.b && (self.b - self.a) > 1e-13 * self.b.abs().max(1e-300)
    }
}

struct Keyed(Panel, usize);

impl PartialEq for Keyed {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Keyed {}
impl PartialOrd for Keyed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Keyed {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .error
            .total_cmp(&other.0.error)
            .then_with(|| other.1.cmp(&self.1))
    }
}

/// Global adaptive state over a growing union of intervals.
struct Adaptive<'f, F> {
    f: &'f F,
    heap: BinaryHeap<Keyed>,
    frozen: Vec<Panel>,
    serial: usize,
    evaluated: usize,
    budget: usize,
}

impl<'f, F: Fn(f64) -> Complex64> Adaptive<'f, F> {
    fn new(f: &'f F, budget: usize) -> Self {
        Self {
            f,
            heap: BinaryHeap::new(),
            frozen: Vec::new(),
            serial: 0,
            evaluated: 0,
            budget,
        }
    }

    fn live(&self) -> usize {
        self.heap.len() + self.frozen.len()
    }

    fn push(&mut self, p: Panel) {
        self.serial += 1;
        self.evaluated += 1;
        self.heap.push(Keyed(p, self.serial));
    }

    /// Covers `[a, b]` with wavelength-limited panels; returns `(value, mass)` of the new piece.
    fn add_interval(&mut self, a: f64, b: f64, hint: Oscillation) -> (Complex64, f64) {
        let room = self.budget.saturating_sub(self.live()).max(1);
        let mut cuts = vec![a];
        let mut x = a;
        while x < b {
            let rate = hint.rate(x);
            let mut w = if rate > 0.0 { 0.5 * PI / rate } else { b - a };
            // reserve half the remaining budget for refinement
            if cuts.len() * 2 >= room {
                w = b - x;
            }
            w = w.min(b - x);
            // look ahead so the cap holds at the panel's right end too
            let rate_end = hint.rate(x + w);
            if rate_end > 0.0 && cuts.len() * 2 < room {
                w = w.min(0.5 * PI / rate_end);
            }
            x = if b - (x + w) < 1e-12 * b { b } else { x + w };
            cuts.push(x);
        }
        let mut value = Complex64::default();
        let mut mass = 0.0;
        for win in cuts.windows(2) {
            let p = Panel::new(self.f, win[0], win[1]);
            value += p.value;
            mass += p.mass;
            self.push(p);
        }
        (value, mass)
    }

    fn totals(&self) -> (Complex64, f64, f64) {
        // sum in position order so the result does not depend on heap layout
        let mut all: Vec<&Panel> = self.heap.iter().map(|k| &k.0).chain(self.frozen.iter()).collect();
        all.sort_by(|x, y| x.a.total_cmp(&y.a));
        let mut v = Complex64::default();
        let mut e = 0.0;
        let mut r = 0.0;
        for p in all {
            v += p.value;
            e += p.error;
            r += p.roundoff;
        }
        (v, e, r)
    }

    /// Bisects the worst panel until converged; `Ok` carries `(value, error)`.
    fn refine(&mut self, spec: &QuadratureSpec) -> std::result::Result<(Complex64, f64), (Complex64, f64)> {
        let (mut value, mut error, mut roundoff) = self.totals();
        loop {
            let target = spec.target(value).max(2.0 * roundoff);
            if error <= target {
                return Ok((value, error));
            }
            if self.live() + 1 > self.budget {
                return Err(self.totals_pair());
            }
            let Some(Keyed(worst, _)) = self.heap.pop() else {
                return Err(self.totals_pair());
            };
            if !worst.splittable() || worst.error <= worst.roundoff {
                self.frozen.push(worst);
                continue;
            }
            let mid = 0.5 * (worst.a + worst.b);
            let left = Panel::new(self.f, worst.a, mid);
            let right = Panel::new(self.f, mid, worst.b);
            value += left.value + right.value - worst.value;
            error += left.error + right.error - worst.error;
            roundoff += left.roundoff + right.roundoff - worst.roundoff;
            self.push(left);
            self.push(right);
            if self.evaluated % 64 == 0 {
                // refresh running sums to keep cancellation drift out of the test
                let t = self.totals();
                value = t.0;
                error = t.1;
                roundoff = t.2;
            }
        }
    }

    fn totals_pair(&self) -> (Complex64, f64) {
        let (v, e, _) = self.totals();
        (v, e)
    }
}

/// `∫₀^∞ f(t) dt` (or `∫₀^R` under [`Truncation::FixedRadius`]) for a non-oscillatory integrand.
pub fn integrate<F>(f: F, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    integrate_oscillatory(f, Oscillation::NONE, spec)
}

/// As [`integrate`], with panel widths limited by the oscillation hint.
pub fn integrate_oscillatory<F>(f: F, hint: Oscillation, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    match spec.truncation {
        Truncation::FixedRadius(r) => integrate_interval(f, 0.0, r, hint, spec),
        Truncation::AutoDecay => integrate_decaying(f, hint, spec),
    }
}

/// `∫_a^b f(t) dt`.
pub fn integrate_interval<F>(f: F, a: f64, b: f64, hint: Oscillation, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    if !(a.is_finite() && b.is_finite() && b >= a) {
        return Err(Error::InvalidArgument(format!("bad interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadratureResult {
            value: Complex64::default(),
            error_estimate: 0.0,
            panels_used: 0,
            truncation_radius: b,
        });
    }
    let mut state = Adaptive::new(&f, spec.max_panels);
    state.add_interval(a, b, hint);
    finish(state.refine(spec), state.live(), b)
}

fn finish(
    outcome: std::result::Result<(Complex64, f64), (Complex64, f64)>,
    panels: usize,
    radius: f64,
) -> Result<QuadratureResult> {
    match outcome {
        Ok((value, error_estimate)) => Ok(QuadratureResult {
            value,
            error_estimate,
            panels_used: panels,
            truncation_radius: radius,
        }),
        Err((value, error_estimate)) => Err(Error::NoConvergence {
            value,
            error_estimate,
            panels,
        }),
    }
}

fn integrate_decaying<F>(f: F, hint: Oscillation, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    let mut state = Adaptive::new(&f, spec.max_panels);
    let mut radius = INITIAL_RADIUS;
    state.add_interval(0.0, radius, hint);
    let mut outcome = state.refine(spec);
    loop {
        let total = match outcome {
            Ok((v, _)) | Err((v, _)) => v,
        };
        let next = 2.0 * radius;
        let (_, mass) = state.add_interval(radius, next, hint);
        radius = next;
        outcome = state.refine(spec);
        if mass <= spec.abs_tol.max(1e-2 * spec.rel_tol * total.norm()) {
            break;
        }
        if radius >= MAX_RADIUS {
            return Err(Error::TruncationFailure { radius, tail: mass });
        }
    }
    finish(outcome, state.live(), radius)
}
