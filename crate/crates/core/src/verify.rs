//! Bundled verification suites: parameter sweeps with per-case defects.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frht::{parseval_defect, round_trip, Direction};
use crate::model::{GaussChirp, GaussChirpSum, RadialGrid, TransformParams};
use crate::operators::{leibniz_defect, verify_chain_identity, ChainIdentity};
use crate::quadrature::QuadratureSpec;
use crate::type_s::{
    check_sequence, closed_form_transform, growth_trend, seminorm_table, superadditive_log_bound, ChirpSign,
    SequenceFamily, SumTrend,
};
use crate::wavelet::{cwt_direct, decay_check, envelope_derivative, SpectralCwt};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Lemma17,
    Parseval,
    Roundtrip,
    Leibniz,
    Ineq119,
    Sequences,
    CwtCrosspath,
    Decay,
    Growth,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Lemma17,
        Suite::Parseval,
        Suite::Roundtrip,
        Suite::Leibniz,
        Suite::Ineq119,
        Suite::Sequences,
        Suite::CwtCrosspath,
        Suite::Decay,
        Suite::Growth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma17 => "lemma17",
            Suite::Parseval => "parseval",
            Suite::Roundtrip => "roundtrip",
            Suite::Leibniz => "leibniz",
            Suite::Ineq119 => "ineq119",
            Suite::Sequences => "sequences",
            Suite::CwtCrosspath => "cwt-crosspath",
            Suite::Decay => "decay",
            Suite::Growth => "growth",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub name: String,
    pub defect: f64,
    pub threshold: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CaseReport {
    fn check(name: impl Into<String>, defect: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            defect,
            threshold,
            passed: defect <= threshold,
            detail: None,
        }
    }

    fn flag(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            defect: if ok { 0.0 } else { 1.0 },
            threshold: 0.0,
            passed: ok,
            detail: Some(detail.into()),
        }
    }

    fn from_result(name: impl Into<String>, r: Result<f64>, threshold: f64) -> Self {
        let name = name.into();
        match r {
            Ok(d) => Self::check(name, d, threshold),
            Err(e) => Self {
                name,
                defect: f64::NAN,
                threshold,
                passed: false,
                detail: Some(e.to_string()),
            },
        }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub max_defect: f64,
    pub elapsed_seconds: f64,
    pub cases: Vec<CaseReport>,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub spec: QuadratureSpec,
    /// Sequence spec for the `sequences` suite, e.g. `factorial_pow:2`.
    pub sequence: Option<String>,
}

/// `(ν, μ, θ)` grid shared by the transform suites: 18 tuples.
pub fn parameter_sweep() -> Vec<TransformParams> {
    let mut out = Vec::new();
    for nu in [0.0, 0.5, 1.0] {
        for mu in [0.0, 0.25] {
            for theta in [FRAC_PI_4, FRAC_PI_3, FRAC_PI_2] {
                out.push(TransformParams::new(nu, mu, theta).expect("sweep parameters are valid"));
            }
        }
    }
    out
}

/// [`parameter_sweep`] crossed with decay rates `p ∈ {1/2, 1}`: 36 tuples.
pub fn decay_sweep() -> Vec<(TransformParams, f64)> {
    parameter_sweep()
        .into_iter()
        .flat_map(|p| [0.5, 1.0].map(move |d| (p, d)))
        .collect()
}

pub fn label(p: &TransformParams) -> String {
    format!("nu={} mu={} theta={:.6}", p.nu(), p.mu(), p.theta())
}

/// Six input pairs per parameter tuple for the Parseval suite.
pub fn parseval_pairs(p: &TransformParams) -> Result<Vec<(GaussChirpSum, GaussChirpSum)>> {
    let s = p.nu() - p.mu();
    let cot = p.cot();
    let one = Complex64::new(1.0, 0.0);
    let g = |amp: Complex64, power: f64, decay: f64, chirp: f64| -> Result<GaussChirpSum> {
        Ok(GaussChirp::new(amp, power, decay, chirp)?.into())
    };
    let a = g(one, s, 0.5, -cot)?;
    let b = g(one, s, 1.0, -cot)?;
    let c = g(Complex64::new(0.6, -0.8), s + 2.0, 0.7, -cot)?;
    let d = g(one, 0.0, 0.5, 0.0)?;
    let e = g(one, s, 0.8, 0.3)?;
    let f = a.add(&g(Complex64::new(0.0, 0.5), s + 2.0, 0.5, -cot)?)?;
    Ok(vec![(a.clone(), b.clone()), (a, c.clone()), (b, d.clone()), (c, e.clone()), (e, f.clone()), (d, f)])
}

fn run_cases<T: Sync>(items: &[T], f: impl Fn(&T) -> CaseReport + Sync + Send) -> Vec<CaseReport> {
    items.par_iter().map(f).collect()
}

fn lemma17(spec: &QuadratureSpec) -> Vec<CaseReport> {
    let probes_sym = [0.2, 0.5, 0.9, 1.3, 1.7, 2.0, 2.4, 2.9, 3.3, 3.8];
    let probes = [0.5, 1.0, 2.0];
    let mut items = Vec::new();
    for nu in [0.0, 0.5] {
        for theta in [FRAC_PI_4, FRAC_PI_3] {
            let p = TransformParams::new(nu, 0.0, theta).expect("valid");
            for k in 1..=4 {
                items.push((p, ChainIdentity::Expansion, 0, k));
            }
            for q in 1..=2 {
                items.push((p, ChainIdentity::ThroughInverse, q, 0));
                for k in 1..=2 {
                    items.push((p, ChainIdentity::UnderInverse, q, k));
                }
            }
        }
    }
    run_cases(&items, |&(p, part, q, k)| {
        let psi: GaussChirpSum = GaussChirp::new(Complex64::new(1.0, 0.0), 0.0, 0.5, p.cot())
            .expect("valid")
            .into();
        let (pr, thr): (&[f64], f64) = match part {
            ChainIdentity::Expansion => (&probes_sym, 1e-9),
            _ => (&probes, 1e-5),
        };
        CaseReport::from_result(
            format!("{part:?} q={q} k={k} {}", label(&p)),
            verify_chain_identity(part, &p, &psi, q, k, pr, spec),
            thr,
        )
    })
}

fn parseval(spec: &QuadratureSpec) -> Vec<CaseReport> {
    let mut items = Vec::new();
    for p in parameter_sweep() {
        match parseval_pairs(&p) {
            Ok(pairs) => items.extend(pairs.into_iter().enumerate().map(|(i, fg)| (p, i, fg))),
            Err(e) => return vec![CaseReport::from_result(label(&p), Err(e), 1e-6)],
        }
    }
    run_cases(&items, |(p, i, (f, g))| {
        CaseReport::from_result(format!("pair {i} {}", label(p)), parseval_defect(p, f, g, spec), 1e-6)
    })
}

/// Largest pointwise relative error of `inverse(forward(f))` on `[0.2, 4]`.
pub fn round_trip_error(p: &TransformParams, f: &GaussChirpSum, nodes: usize, spec: &QuadratureSpec) -> Result<f64> {
    let grid = RadialGrid::linear(0.2, 4.0, nodes)?;
    let rt = round_trip(p, f, &grid, spec)?;
    Ok(grid
        .nodes()
        .iter()
        .zip(&rt.values)
        .map(|(&t, v)| {
            let want = f.eval(t);
            (v - want).norm() / want.norm()
        })
        .fold(0.0, f64::max))
}

fn roundtrip(spec: &QuadratureSpec) -> Vec<CaseReport> {
    run_cases(&decay_sweep(), |&(p, d)| {
        let f = GaussChirp::oracle_family(&p, d).map(GaussChirpSum::from);
        let r = f.and_then(|f| round_trip_error(&p, &f, 10, spec));
        CaseReport::from_result(format!("p={d} {}", label(&p)), r, 1e-6)
    })
}

fn leibniz() -> Vec<CaseReport> {
    let probes = [0.3, 0.8, 1.4, 2.1, 3.0];
    let one = Complex64::new(1.0, 0.0);
    let f: GaussChirpSum = GaussChirp::new(one, 1.0, 0.6, 0.3).expect("valid").into();
    let g: GaussChirpSum = GaussChirp::new(Complex64::new(0.5, 1.0), 2.0, 0.4, -0.2).expect("valid").into();
    let mut out = Vec::new();
    for p in parameter_sweep() {
        for n in 0..=4 {
            out.push(CaseReport::check(format!("n={n} {}", label(&p)), leibniz_defect(&p, &f, &g, n, &probes), 1e-8));
        }
    }
    out
}

fn ineq119() -> Vec<CaseReport> {
    let mut out = Vec::new();
    for m in 1..=12 {
        for n in 1..=12 {
            for q in 1..=12 {
                let name = format!("m={m} n={n} q={q}");
                out.push(match superadditive_log_bound(m, n, q) {
                    Ok(ok) => CaseReport::flag(name, ok, "q(m+n)ln(m+n) <= qm ln m + qn ln n + q(m+n)"),
                    Err(e) => CaseReport::from_result(name, Err(e), 0.0),
                });
            }
        }
    }
    out
}

fn sequence_cases(seq: &SequenceFamily, k_max: usize) -> Vec<CaseReport> {
    let r = match check_sequence(seq, k_max) {
        Ok(r) => r,
        Err(e) => return vec![CaseReport::from_result(seq.name.clone(), Err(e), 0.0)],
    };
    let n = &seq.name;
    vec![
        CaseReport::flag(format!("{n} log-convex"), r.log_convex.holds, format!("worst log excess {:e}", r.log_convex.worst_log_excess)),
        CaseReport::flag(
            format!("{n} supermultiplicative"),
            r.supermultiplicative.holds,
            format!("worst log excess {:e}", r.supermultiplicative.worst_log_excess),
        ),
        CaseReport::flag(format!("{n} split bound"), r.split_bound.holds, format!("R={} H={}", r.split_bound.r, r.split_bound.h)),
        CaseReport::flag(format!("{n} step bound"), r.step_bound.holds, format!("R={} H={}", r.step_bound.r, r.step_bound.h)),
        CaseReport::flag(
            format!("{n} ratio sum"),
            r.ratio_sum.trend == SumTrend::Converging,
            format!(
                "partial {} estimate {} exponent {}",
                r.ratio_sum.partial_sum, r.ratio_sum.estimate, r.ratio_sum.exponent
            ),
        ),
        CaseReport::flag(format!("{n} ratio shift"), r.ratio_shift.holds, format!("worst log excess {:e}", r.ratio_shift.worst_log_excess)),
    ]
}

/// Range used by the `sequences` suite.
pub const SEQUENCE_RANGE: usize = 30;

fn sequences(custom: Option<&str>) -> Vec<CaseReport> {
    if let Some(spec) = custom {
        return match SequenceFamily::parse(spec, SEQUENCE_RANGE) {
            Ok(seq) => sequence_cases(&seq, SEQUENCE_RANGE),
            Err(e) => vec![CaseReport::from_result(spec, Err(e), 0.0)],
        };
    }
    let mut out = Vec::new();
    match (SequenceFamily::factorial_pow(2.0, SEQUENCE_RANGE), SequenceFamily::factorial_pow(1.0, SEQUENCE_RANGE)) {
        (Ok(sq), Ok(lin)) => {
            out.extend(sequence_cases(&sq, SEQUENCE_RANGE));
            if let Ok(r) = check_sequence(&sq, SEQUENCE_RANGE) {
                out.push(
                    CaseReport::check("factorial_pow:2 ratio sum value", (r.ratio_sum.estimate - PI * PI / 6.0).abs(), 1e-4)
                        .with_detail(format!("estimate {}", r.ratio_sum.estimate)),
                );
            }
            match check_sequence(&lin, SEQUENCE_RANGE) {
                Ok(r) => out.push(CaseReport::flag(
                    "factorial_pow:1 ratio sum diverges",
                    r.ratio_sum.trend == SumTrend::Diverging,
                    format!("exponent {}", r.ratio_sum.exponent),
                )),
                Err(e) => out.push(CaseReport::from_result("factorial_pow:1", Err(e), 0.0)),
            }
        }
        (Err(e), _) | (_, Err(e)) => out.push(CaseReport::from_result("factorial_pow", Err(e), 0.0)),
    }
    out
}

/// Direct against spectral wavelet coefficients for Gaussian `f` and `ψ`.
pub fn cwt_crosspath_cases(theta: f64, threshold: f64, spec: &QuadratureSpec) -> Vec<CaseReport> {
    let p = match TransformParams::new(0.0, 0.0, theta) {
        Ok(p) => p,
        Err(e) => return vec![CaseReport::from_result("params", Err(e), threshold)],
    };
    let g: GaussChirpSum = GaussChirp::gaussian(0.5).expect("valid").into();
    let mut items = Vec::new();
    for a in [0.5, 1.0, 2.0] {
        for b in [0.25, 0.5, 1.0, 2.0] {
            items.push((a, b));
        }
    }
    run_cases(&items, |&(a, b)| {
        let r = SpectralCwt::new(&p, &g, &g, a, spec).and_then(|s| {
            let sv = s.value(b, spec)?;
            let dv = cwt_direct(&p, &g, &g, b, a, spec)?;
            Ok((sv - dv).norm() / dv.norm().max(sv.norm()).max(1e-10))
        });
        CaseReport::from_result(format!("theta={theta:.6} a={a} b={b}"), r, threshold)
    })
}

fn decay(spec: &QuadratureSpec) -> Vec<CaseReport> {
    let p = TransformParams::new(0.0, 0.0, FRAC_PI_3).expect("valid");
    let psi: GaussChirpSum = GaussChirp::gaussian(0.5).expect("valid").into();
    let grid = match RadialGrid::logarithmic(0.05, 6.0, 24) {
        Ok(g) => g,
        Err(e) => return vec![CaseReport::from_result("grid", Err(e), 0.0)],
    };
    let mut out = vec![match decay_check(&p, &psi, 2, 0.0, &grid, spec) {
        Ok(r) => CaseReport::flag("decay check passes", r.passes, format!("constants {:?}", r.constants)),
        Err(e) => CaseReport::from_result("decay check", Err(e), 0.0),
    }];
    // checked quantity for e^{−z²/2}: (−csc²)^n conj(C) e^{−csc² t²/2}
    let c = p.kernel_constant().value;
    let csc2 = p.csc() * p.csc();
    for n in 0..=2 {
        let r = grid
            .nodes()
            .iter()
            .map(|&t| {
                let got = envelope_derivative(&p, &psi, n, t, spec)?.conj();
                let want = c.conj() * (-csc2).powi(n as i32) * (-0.5 * csc2 * t * t).exp();
                Ok((got - want).norm() / want.norm())
            })
            .collect::<Result<Vec<f64>>>()
            .map(|v| v.into_iter().fold(0.0, f64::max));
        out.push(CaseReport::from_result(format!("closed form n={n}"), r, 1e-6));
    }
    out
}

/// The three inputs of the growth suite: closed-form family members.
pub fn growth_inputs() -> Vec<(TransformParams, f64)> {
    vec![
        (TransformParams::new(0.0, 0.0, FRAC_PI_2).expect("valid"), 0.5),
        (TransformParams::new(0.5, 0.0, FRAC_PI_4).expect("valid"), 1.0),
        (TransformParams::new(1.0, 0.25, FRAC_PI_3).expect("valid"), 0.75),
    ]
}

/// `β_out − 2α_in` for one input, with the fit residual in the detail.
pub fn growth_case(p: &TransformParams, decay: f64, tol: f64) -> CaseReport {
    let name = format!("p={decay} {}", label(p));
    let run = || -> Result<(f64, String)> {
        let f: GaussChirpSum = GaussChirp::oracle_family(p, decay)?.into();
        let out = closed_form_transform(p, Direction::Forward, &f)?;
        let grid = RadialGrid::linear(0.01, 8.0, 200)?;
        let a = seminorm_table(&f, p, ChirpSign::Plus, 12, 12, &grid)?;
        let b = seminorm_table(&out, p, ChirpSign::Minus, 12, 12, &grid)?;
        let g = growth_trend(&a, &b)?;
        Ok((
            g.beta_out - 2.0 * g.alpha_in,
            format!("alpha_in {} beta_out {} residual {}", g.alpha_in, g.beta_out, g.max_residual),
        ))
    };
    match run() {
        Ok((d, detail)) => CaseReport::check(name, d, tol).with_detail(detail),
        Err(e) => CaseReport::from_result(name, Err(e), tol),
    }
}

fn growth() -> Vec<CaseReport> {
    growth_inputs().iter().map(|(p, d)| growth_case(p, *d, 0.3)).collect()
}

pub fn run_suite(suite: Suite, options: &VerifyOptions) -> SuiteReport {
    let start = Instant::now();
    let spec = &options.spec;
    let cases = match suite {
        Suite::Lemma17 => lemma17(spec),
        Suite::Parseval => parseval(spec),
        Suite::Roundtrip => roundtrip(spec),
        Suite::Leibniz => leibniz(),
        Suite::Ineq119 => ineq119(),
        Suite::Sequences => sequences(options.sequence.as_deref()),
        Suite::CwtCrosspath => {
            let mut c = cwt_crosspath_cases(FRAC_PI_2, 1e-3, spec);
            c.extend(cwt_crosspath_cases(FRAC_PI_3, 5e-3, spec));
            c
        }
        Suite::Decay => decay(spec),
        Suite::Growth => growth(),
    };
    let passed = cases.iter().all(|c| c.passed);
    let max_defect = cases.iter().map(|c| c.defect).fold(0.0, |m: f64, d| if d.is_nan() { f64::NAN } else { m.max(d) });
    SuiteReport {
        suite,
        passed,
        max_defect,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        cases,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn sweeps_have_expected_sizes() {
        assert_eq!(parameter_sweep().len(), 18);
        assert_eq!(decay_sweep().len(), 36);
    }

    #[test]
    fn inequality_suite_passes() {
        let r = run_suite(Suite::Ineq119, &VerifyOptions::default());
        assert!(r.passed);
        assert_eq!(r.cases.len(), 12 * 12 * 12);
    }

    #[test]
    fn sequence_suite_default_and_custom() {
        assert!(run_suite(Suite::Sequences, &VerifyOptions::default()).passed);
        let opts = VerifyOptions {
            sequence: Some("factorial_pow:1".into()),
            ..Default::default()
        };
        assert!(!run_suite(Suite::Sequences, &opts).passed);
    }

    #[test]
    fn growth_and_leibniz_suites_pass() {
        let o = VerifyOptions::default();
        let g = run_suite(Suite::Growth, &o);
        assert!(g.passed, "{:?}", g.cases);
        assert!(run_suite(Suite::Leibniz, &o).passed);
    }
}
