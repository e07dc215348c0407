//! Positive weight sequences `ξ_k` and their structural properties.
//!
//! Values are held as logarithms so factorial-type growth stays representable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specialfn::ln_gamma;

/// Smallest range [`check_sequence`] accepts.
pub const MIN_CHECK_RANGE: usize = 4;

/// Largest argument of [`superadditive_log_bound`].
pub const MAX_BOUND_ARG: u32 = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceFamily {
    pub name: String,
    log_values: Vec<f64>,
}

impl SequenceFamily {
    /// From explicit values, all of which must be positive.
    pub fn from_values(name: impl Into<String>, values: &[f64]) -> Result<Self> {
        for (index, &value) in values.iter().enumerate() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositiveSequence { index, value });
            }
        }
        Ok(Self {
            name: name.into(),
            log_values: values.iter().map(|v| v.ln()).collect(),
        })
    }

    /// From `ln ξ_k` for `k = 0..=k_max`.
    pub fn from_log_fn(name: impl Into<String>, k_max: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        let log_values: Vec<f64> = (0..=k_max).map(f).collect();
        if let Some(index) = log_values.iter().position(|v| v.is_nan() || *v == f64::INFINITY) {
            return Err(Error::NonPositiveSequence {
                index,
                value: log_values[index].exp(),
            });
        }
        if let Some(index) = log_values.iter().position(|v| *v == f64::NEG_INFINITY) {
            return Err(Error::NonPositiveSequence { index, value: 0.0 });
        }
        Ok(Self {
            name: name.into(),
            log_values,
        })
    }

    /// `ξ_k = (k!)^s`.
    pub fn factorial_pow(s: f64, k_max: usize) -> Result<Self> {
        Self::from_log_fn(format!("factorial_pow:{s}"), k_max, |k| s * ln_gamma(k as f64 + 1.0))
    }

    /// `ξ_k = c`.
    pub fn constant(c: f64, k_max: usize) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::NonPositiveSequence { index: 0, value: c });
        }
        Self::from_log_fn(format!("constant:{c}"), k_max, |_| c.ln())
    }

    /// `ξ_k = r^k`.
    pub fn geometric(r: f64, k_max: usize) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::NonPositiveSequence { index: 1, value: r });
        }
        Self::from_log_fn(format!("geometric:{r}"), k_max, |k| k as f64 * r.ln())
    }

    /// `ξ_k = e^{a k²}`.
    pub fn exp_quadratic(a: f64, k_max: usize) -> Result<Self> {
        Self::from_log_fn(format!("exp_quadratic:{a}"), k_max, |k| a * (k * k) as f64)
    }

    /// Parses `factorial_pow:s`, `constant:c`, `geometric:r`, `exp_quadratic:a`
    /// or `values:v0,v1,...`.
    pub fn parse(spec: &str, k_max: usize) -> Result<Self> {
        let (kind, arg) = spec
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("sequence spec '{spec}' needs kind:argument")))?;
        let number = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad number '{s}' in sequence spec")))
        };
        match kind.trim() {
            "factorial_pow" => Self::factorial_pow(number(arg)?, k_max),
            "constant" => Self::constant(number(arg)?, k_max),
            "geometric" => Self::geometric(number(arg)?, k_max),
            "exp_quadratic" => Self::exp_quadratic(number(arg)?, k_max),
            "values" => {
                let v = arg.split(',').map(number).collect::<Result<Vec<_>>>()?;
                Self::from_values(spec, &v)
            }
            other => Err(Error::InvalidArgument(format!("unknown sequence kind '{other}'"))),
        }
    }

    pub fn len(&self) -> usize {
        self.log_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_values.is_empty()
    }

    pub fn log_value(&self, k: usize) -> f64 {
        self.log_values[k]
    }

    pub fn value(&self, k: usize) -> f64 {
        self.log_values[k].exp()
    }
}

/// Outcome of one inequality checked over the whole range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub holds: bool,
    /// Largest `ln(lhs) − ln(rhs)`; nonpositive when the inequality holds.
    pub worst_log_excess: f64,
}

impl AxiomCheck {
    fn from_excess(excess: impl Iterator<Item = (f64, f64)>) -> Self {
        let mut worst = f64::NEG_INFINITY;
        let mut holds = true;
        for (e, scale) in excess {
            worst = worst.max(e);
            if e > 1e-12 * (1.0 + scale) {
                holds = false;
            }
        }
        Self {
            holds,
            worst_log_excess: worst,
        }
    }
}

/// Smallest `(R, H)` with `d_k ≤ ln R + k ln H` on the range, and whether the
/// slope stays bounded when the range doubles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricBound {
    pub holds: bool,
    pub r: f64,
    pub h: f64,
}

fn geometric_bound(d: &[f64]) -> GeometricBound {
    let log_r = d[0].max(0.0);
    let slope = |upto: usize| {
        (1..=upto)
            .map(|k| (d[k] - log_r) / k as f64)
            .fold(0.0, f64::max)
    };
    let last = d.len() - 1;
    let full = slope(last);
    let half = slope((last / 2).max(1));
    GeometricBound {
        holds: full <= 1.25 * half + 0.05,
        r: log_r.exp(),
        h: full.exp(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SumTrend {
    Converging,
    Diverging,
}

/// `Σ ξ_j/ξ_{j+1}` from partial sums and a power-law tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioSum {
    pub partial_sum: f64,
    /// Decay exponent `s` of `ξ_j/ξ_{j+1} ~ C (j+1)^{−s}` over the upper half of the range.
    pub exponent: f64,
    pub trend: SumTrend,
    /// Partial sum plus the tail of the fitted power law; infinite when diverging.
    pub estimate: f64,
}

/// Exponents at most this far above 1 are treated as divergent.
const EXPONENT_MARGIN: f64 = 0.05;

fn ratio_sum(log_ratio: &[f64]) -> RatioSum {
    let n = log_ratio.len();
    let partial_sum: f64 = log_ratio.iter().map(|l| l.exp()).sum();
    let lo = n / 2;
    let pts: Vec<(f64, f64)> = (lo..n).map(|j| (((j + 1) as f64).ln(), log_ratio[j])).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let exponent = if sxx > 0.0 { -sxy / sxx } else { 0.0 };
    if exponent > 1.0 + EXPONENT_MARGIN {
        let c = log_ratio[n - 1].exp() * (n as f64).powf(exponent);
        let tail = c * (n as f64 + 0.5).powf(1.0 - exponent) / (exponent - 1.0);
        RatioSum {
            partial_sum,
            exponent,
            trend: SumTrend::Converging,
            estimate: partial_sum + tail,
        }
    } else {
        RatioSum {
            partial_sum,
            exponent,
            trend: SumTrend::Diverging,
            estimate: f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceReport {
    pub name: String,
    pub k_max: usize,
    /// `ξ_k² ≤ ξ_{k−1} ξ_{k+1}`.
    pub log_convex: AxiomCheck,
    /// `ξ_k ξ_l ≤ ξ_0 ξ_{k+l}`.
    pub supermultiplicative: AxiomCheck,
    /// `ξ_k ≤ R H^k min_l ξ_l ξ_{k−l}`.
    pub split_bound: GeometricBound,
    /// `ξ_{k+1} ≤ R H^k ξ_k`.
    pub step_bound: GeometricBound,
    /// `Σ ξ_j/ξ_{j+1} < ∞`.
    pub ratio_sum: RatioSum,
    /// `ξ_{k−r} ≤ (ξ_0/ξ_1)^r ξ_k`.
    pub ratio_shift: AxiomCheck,
    /// Constants valid for both geometric bounds.
    pub r: f64,
    pub h: f64,
}

impl SequenceReport {
    pub fn all_hold(&self) -> bool {
        self.log_convex.holds
            && self.supermultiplicative.holds
            && self.split_bound.holds
            && self.step_bound.holds
            && self.ratio_sum.trend == SumTrend::Converging
            && self.ratio_shift.holds
    }
}

/// Checks the structural properties on `0..=k_max`.
pub fn check_sequence(seq: &SequenceFamily, k_max: usize) -> Result<SequenceReport> {
    if k_max < MIN_CHECK_RANGE {
        return Err(Error::InvalidArgument(format!("range must be at least {MIN_CHECK_RANGE}, got {k_max}")));
    }
    if seq.len() <= k_max {
        return Err(Error::InvalidArgument(format!(
            "sequence has {} values, range needs {}",
            seq.len(),
            k_max + 1
        )));
    }
    let l = &seq.log_values[..=k_max];

    let log_convex = AxiomCheck::from_excess((1..k_max).map(|k| (2.0 * l[k] - l[k - 1] - l[k + 1], l[k].abs())));
    let supermultiplicative = AxiomCheck::from_excess(
        (0..=k_max).flat_map(|k| (0..=k_max - k).map(move |j| (l[k] + l[j] - l[0] - l[k + j], l[k + j].abs()))),
    );
    let split: Vec<f64> = (0..=k_max)
        .map(|k| l[k] - (0..=k).map(|j| l[j] + l[k - j]).fold(f64::INFINITY, f64::min))
        .collect();
    let step: Vec<f64> = (0..k_max).map(|k| l[k + 1] - l[k]).collect();
    let split_bound = geometric_bound(&split);
    let step_bound = geometric_bound(&step);
    let log_ratio: Vec<f64> = step.iter().map(|d| -d).collect();
    let shift = l[0] - l[1];
    let ratio_shift = AxiomCheck::from_excess(
        (0..=k_max).flat_map(|k| (0..=k).map(move |r| (l[k - r] - r as f64 * shift - l[k], l[k].abs()))),
    );
    Ok(SequenceReport {
        name: seq.name.clone(),
        k_max,
        log_convex,
        supermultiplicative,
        split_bound,
        step_bound,
        ratio_sum: ratio_sum(&log_ratio),
        ratio_shift,
        r: split_bound.r.max(step_bound.r),
        h: split_bound.h.max(step_bound.h),
    })
}

/// `q(m+n) ln(m+n) ≤ qm ln m + qn ln n + q(m+n)`, compared in log space.
pub fn superadditive_log_bound(m: u32, n: u32, q: u32) -> Result<bool> {
    for (name, v) in [("m", m), ("n", n), ("q", q)] {
        if v == 0 || v > MAX_BOUND_ARG {
            return Err(Error::InvalidArgument(format!("{name} must be in 1..={MAX_BOUND_ARG}, got {v}")));
        }
    }
    let (m, n, q) = (m as f64, n as f64, q as f64);
    let s = m + n;
    let lhs = q * s * s.ln();
    let rhs = q * m * m.ln() + q * n * n.ln() + q * s;
    Ok(lhs <= rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn squared_factorial_converges_to_basel() {
        let s = SequenceFamily::factorial_pow(2.0, 31).unwrap();
        let r = check_sequence(&s, 30).unwrap();
        assert!(r.log_convex.holds && r.supermultiplicative.holds);
        assert_eq!(r.ratio_sum.trend, SumTrend::Converging);
        assert!((r.ratio_sum.exponent - 2.0).abs() < 1e-9);
        assert!((r.ratio_sum.estimate - PI * PI / 6.0).abs() < 1e-4, "{}", r.ratio_sum.estimate);
        assert!(r.ratio_shift.holds && r.split_bound.holds && r.step_bound.holds);
    }

    #[test]
    fn factorial_ratio_sum_diverges() {
        let s = SequenceFamily::factorial_pow(1.0, 30).unwrap();
        assert_eq!(check_sequence(&s, 30).unwrap().ratio_sum.trend, SumTrend::Diverging);
        let s = SequenceFamily::factorial_pow(0.5, 30).unwrap();
        assert_eq!(check_sequence(&s, 30).unwrap().ratio_sum.trend, SumTrend::Diverging);
    }

    #[test]
    fn constant_sequence_is_tight() {
        let s = SequenceFamily::constant(1.0, 10).unwrap();
        let r = check_sequence(&s, 10).unwrap();
        assert!(r.log_convex.holds && r.supermultiplicative.holds && r.ratio_shift.holds);
        assert_eq!(r.log_convex.worst_log_excess, 0.0);
        assert_eq!(r.supermultiplicative.worst_log_excess, 0.0);
        assert_eq!(r.ratio_shift.worst_log_excess, 0.0);
    }

    #[test]
    fn cubic_exponent_breaks_step_bound() {
        let s = SequenceFamily::from_log_fn("cubic", 20, |k| (k * k * k) as f64).unwrap();
        assert!(!check_sequence(&s, 20).unwrap().step_bound.holds);
    }

    #[test]
    fn non_positive_rejected() {
        match SequenceFamily::from_values("x", &[1.0, 2.0, -1.0]) {
            Err(Error::NonPositiveSequence { index: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_specs() {
        assert!((SequenceFamily::parse("factorial_pow:2", 5).unwrap().value(3) - 36.0).abs() < 1e-10);
        assert!((SequenceFamily::parse("geometric:2", 5).unwrap().value(3) - 8.0).abs() < 1e-12);
        assert!(SequenceFamily::parse("nope:1", 5).is_err());
        assert!(SequenceFamily::parse("values:1,0,2", 5).is_err());
    }

    #[test]
    fn log_bound_examples() {
        assert!(superadditive_log_bound(1, 1, 1).unwrap());
        for q in 1..=64 {
            assert!(superadditive_log_bound(1, 1, q).unwrap());
        }
        for m in 1..=12 {
            for n in 1..=12 {
                for q in 1..=12 {
                    assert!(superadditive_log_bound(m, n, q).unwrap());
                }
            }
        }
        assert!(superadditive_log_bound(0, 1, 1).is_err());
    }
}
