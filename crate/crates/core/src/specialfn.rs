//! Bessel functions of the first kind for real order `ν ≥ −1/2` and real
//! argument `x ≥ 0`.
//!
//! Three branches:
//! - power series when `x ≤ 4` or `x² ≤ 4(ν+1)` (no cancellation to speak of),
//! - Hankel asymptotic expansion when `x ≥ max(25, ν²)`,
//! - Miller backward recurrence normalized by the Neumann sum
//!   `(x/2)^{ν₀} = Σ_k (ν₀+2k) Γ(ν₀+k)/k! · J_{ν₀+2k}(x)` otherwise.

use std::f64::consts::{FRAC_2_PI, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Internal error estimates above this raise [`Error::AccuracyLoss`].
pub const ACCURACY_LIMIT: f64 = 1e-9;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Γ(x)` for real `x` (Lanczos, with reflection below 1/2).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let t = x + LANCZOS_G + 0.5;
        let a = LANCZOS
            .iter()
            .enumerate()
            .skip(1)
            .fold(LANCZOS[0], |acc, (i, c)| acc + c / (x + i as f64));
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let a = LANCZOS
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS[0], |acc, (i, c)| acc + c / (x + i as f64));
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// A Bessel evaluation together with its scaled companion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselEval {
    pub order: f64,
    pub argument: f64,
    pub value: f64,
    /// `x^{−ν} J_ν(x)`, continued to `1/(2^ν Γ(ν+1))` at `x = 0`.
    pub scaled_value: f64,
}

impl BesselEval {
    pub fn new(order: f64, x: f64) -> Result<Self> {
        Ok(Self {
            order,
            argument: x,
            value: bessel_j(order, x)?,
            scaled_value: scaled_bessel(order, x)?,
        })
    }
}

fn check_domain(order: f64, x: f64) -> Result<()> {
    if !(order >= -0.5) || !order.is_finite() {
        return Err(Error::OrderOutOfRange(order));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("Bessel argument must be finite and >= 0, got {x}")));
    }
    Ok(())
}

fn accuracy_checked(order: f64, x: f64, (value, estimate): (f64, f64)) -> Result<f64> {
    if estimate > ACCURACY_LIMIT || !value.is_finite() {
        Err(Error::AccuracyLoss { order, x, estimate })
    } else {
        Ok(value)
    }
}

/// `J_ν(x)`.
pub fn bessel_j(order: f64, x: f64) -> Result<f64> {
    check_domain(order, x)?;
    if x == 0.0 && order < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "J_{order}(0) is unbounded; use scaled_bessel"
        )));
    }
    accuracy_checked(order, x, j_with_estimate(order, x))
}

/// `x^{−ν} J_ν(x)` without forming the `0/0` limit at the origin.
pub fn scaled_bessel(order: f64, x: f64) -> Result<f64> {
    check_domain(order, x)?;
    accuracy_checked(order, x, scaled_with_estimate(order, x))
}

/// Unchecked `J_ν(x)`; the caller guarantees the domain.
#[cfg(test)]
pub(crate) fn j(order: f64, x: f64) -> f64 {
    j_with_estimate(order, x).0
}

/// Unchecked `x^{−ν} J_ν(x)`.
#[inline]
pub(crate) fn scaled(order: f64, x: f64) -> f64 {
    scaled_with_estimate(order, x).0
}

fn use_series(order: f64, x: f64) -> bool {
    x <= 4.0 || x * x <= 4.0 * (order + 1.0)
}

fn j_with_estimate(order: f64, x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (if order == 0.0 { 1.0 } else { 0.0 }, 0.0);
    }
    if use_series(order, x) {
        let (s, est) = scaled_series(order, x);
        let p = x.powf(order);
        return (s * p, est * p);
    }
    if x >= 25.0f64.max(order * order) {
        if let Some(r) = asymptotic(order, x) {
            return r;
        }
    }
    miller(order, x)
}

fn scaled_with_estimate(order: f64, x: f64) -> (f64, f64) {
    if use_series(order, x) {
        return scaled_series(order, x);
    }
    let (v, e) = j_with_estimate(order, x);
    let p = x.powf(-order);
    (v * p, e * p)
}

/// `x^{−ν}J_ν(x) = 2^{−ν} Σ_k (−x²/4)^k / (k! Γ(k+ν+1))`.
fn scaled_series(order: f64, x: f64) -> (f64, f64) {
    let q = -0.25 * x * x;
    let mut term = 1.0 / gamma(order + 1.0);
    let mut sum = term;
    let mut abs_sum = term.abs();
    let mut k = 0.0;
    while k < 500.0 {
        term *= q / ((k + 1.0) * (k + order + 1.0));
        sum += term;
        abs_sum += term.abs();
        k += 1.0;
        if term.abs() <= 1e-17 * sum.abs() && term.abs() <= 1e-300f64.max(1e-17 * abs_sum) {
            break;
        }
        if term == 0.0 {
            break;
        }
    }
    let scale = 2f64.powf(-order);
    (sum * scale, 4.0 * f64::EPSILON * abs_sum * scale)
}

/// Hankel expansion; `None` when the terms stop shrinking before convergence.
fn asymptotic(order: f64, x: f64) -> Option<(f64, f64)> {
    let mu4 = 4.0 * order * order;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    let mut converged = false;
    for k in 1..80 {
        let kf = k as f64;
        term *= (mu4 - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * x);
        let mag = term.abs();
        if mag > last {
            break;
        }
        last = mag;
        // a_k/x^k enters P with sign (−1)^{k/2} for even k, Q with (−1)^{(k−1)/2} for odd k
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if mag < 1e-17 {
            converged = true;
            break;
        }
    }
    if !converged && last > 1e-14 {
        return None;
    }
    let chi = x - (0.5 * order + 0.25) * PI;
    let (s, c) = chi.sin_cos();
    let amp = (FRAC_2_PI / x).sqrt();
    let value = amp * (p * c - q * s);
    Some((value, amp * (last + 4.0 * f64::EPSILON * x)))
}

/// Miller backward recurrence from order `≈ x + 20 + √(40x)`.
fn miller(order: f64, x: f64) -> (f64, f64) {
    let base = order.floor();
    let frac = order - base; // in [0, 1)
    let target = base as i64; // may be −1 for ν ∈ [−1/2, 0)
    let m = (target.max(0) as f64).max(x);
    let top = (m + 20.0 + (40.0 * m).sqrt()).ceil() as usize;

    // g_j = Γ(ν₀+j)/j!, j ≥ 1
    let half = top / 2 + 1;
    let mut g = vec![0.0; half + 1];
    if half >= 1 {
        g[1] = gamma(frac + 1.0);
        for jj in 1..half {
            g[jj + 1] = g[jj] * (frac + jj as f64) / (jj as f64 + 1.0);
        }
    }
    let weight = |k: usize| -> f64 {
        if k == 0 {
            gamma(frac + 1.0)
        } else {
            let jj = k / 2;
            (frac + k as f64) * g[jj]
        }
    };

    let mut f_next = 0.0; // f_{k+1}
    let mut f_cur = 1e-30; // f_k
    let mut norm = 0.0;
    let mut at_target = 0.0;
    let f0;
    let mut f1 = 0.0;
    let mut k = top;
    loop {
        if k % 2 == 0 {
            norm += weight(k) * f_cur;
        }
        if k as i64 == target {
            at_target = f_cur;
        }
        if k == 1 {
            f1 = f_cur;
        }
        if k == 0 {
            f0 = f_cur;
            break;
        }
        let f_prev = 2.0 * (frac + k as f64) / x * f_cur - f_next;
        f_next = f_cur;
        f_cur = f_prev;
        k -= 1;
        if f_cur.abs() > 1e250 {
            let s = 1e-250;
            f_cur *= s;
            f_next *= s;
            norm *= s;
            at_target *= s;
            f1 *= s;
        }
    }
    if target == -1 {
        // one extra downward step: J_{ν₀−1} = (2ν₀/x) J_{ν₀} − J_{ν₀+1}
        at_target = 2.0 * frac / x * f0 - f1;
    }
    let scale = (0.5 * x).powf(frac) / norm;
    let value = at_target * scale;
    (value, 64.0 * f64::EPSILON * (value.abs() + (f0 * scale).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain power series with no branch selection: the independent oracle.
    fn series_oracle(order: f64, x: f64) -> f64 {
        series_oracle_with_mass(order, x).0
    }

    /// Sum and sum of absolute terms (bounds the oracle's own rounding).
    fn series_oracle_with_mass(order: f64, x: f64) -> (f64, f64) {
        let mut term = (0.5 * x).powf(order) / gamma(order + 1.0);
        let mut sum = term;
        let mut mass = term.abs();
        for k in 0..200 {
            let k = k as f64;
            term *= -0.25 * x * x / ((k + 1.0) * (k + order + 1.0));
            sum += term;
            mass += term.abs();
        }
        (sum, mass)
    }

    #[test]
    fn gamma_values() {
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(5.0) - 24.0).abs() < 1e-12);
        assert!((ln_gamma(31.0) - (1..=30).map(|k| (k as f64).ln()).sum::<f64>()).abs() < 1e-11);
    }

    #[test]
    fn origin_values() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1.5, 0.0).unwrap(), 0.0);
        assert!((scaled_bessel(0.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((scaled_bessel(1.0, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((scaled_bessel(-0.5, 0.0).unwrap() - (2.0 / PI).sqrt()).abs() < 1e-14);
        assert!(bessel_j(-0.5, 0.0).is_err());
    }

    #[test]
    fn half_order_closed_form() {
        let v = bessel_j(0.5, PI / 2.0).unwrap();
        assert!((v - 2.0 / PI).abs() < 1e-15);
        let s = scaled_bessel(0.5, 1.0).unwrap();
        assert!((s - 1f64.sin() * (2.0 / PI).sqrt()).abs() < 1e-15);
        for &x in &[0.3, 3.0, 7.5, 13.0, 22.0, 40.0, 120.0] {
            let js = (2.0 / (PI * x)).sqrt() * x.sin();
            let jc = (2.0 / (PI * x)).sqrt() * x.cos();
            assert!((bessel_j(0.5, x).unwrap() - js).abs() < 1e-13, "x={x}");
            assert!((bessel_j(-0.5, x).unwrap() - jc).abs() < 1e-13, "x={x}");
            let j15 = js / x - jc;
            assert!((bessel_j(1.5, x).unwrap() - j15).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn first_zero_of_j0() {
        // root-find on the series oracle
        let (mut lo, mut hi) = (2.0, 3.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if series_oracle(0.0, lo) * series_oracle(0.0, mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!((lo - 2.404825557695773).abs() < 1e-14);
        assert!(bessel_j(0.0, 2.404825557695773).unwrap().abs() < 1e-10);
    }

    #[test]
    fn branches_agree_with_series_oracle() {
        for &nu in &[0.0, 0.25, 0.5, 1.0, 2.0, 3.7, 10.0, 30.0] {
            for &x in &[0.1, 1.0, 4.5, 6.0, 9.0, 12.0] {
                let (want, mass) = series_oracle_with_mass(nu, x);
                let got = bessel_j(nu, x).unwrap();
                let tol = 1e-12 * want.abs() + 1e-15 * mass;
                assert!((got - want).abs() <= tol, "nu={nu} x={x}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn asymptotic_matches_miller() {
        for &nu in &[0.0, 0.5, 1.0, 2.5, 4.0] {
            for &x in &[26.0, 33.3, 50.0, 80.0] {
                let a = asymptotic(nu, x).unwrap().0;
                let m = miller(nu, x).0;
                assert!((a - m).abs() < 1e-13, "nu={nu} x={x}: {a} vs {m}");
            }
        }
    }

    #[test]
    fn known_values() {
        // reference values computed with 50-digit arithmetic
        let cases = [
            (0.0, 10.0, -0.245_935_764_451_348_3),
            (1.0, 10.0, 0.043_472_746_168_861_6),
            (5.0, 20.0, 0.151_169_767_982_394_93),
            (30.0, 50.0, 0.048_434_257_245_509_44),
        ];
        for (nu, x, want) in cases {
            let got = bessel_j(nu, x).unwrap();
            assert!((got - want).abs() < 1e-13, "J_{nu}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn recurrence_holds() {
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let nu = 0.5 + 9.5 * next();
            let x = 0.1 + 29.9 * next();
            let jm = bessel_j(nu - 1.0, x).unwrap();
            let j0 = bessel_j(nu, x).unwrap();
            let jp = bessel_j(nu + 1.0, x).unwrap();
            let defect = (jm + jp - 2.0 * nu / x * j0).abs();
            assert!(defect <= 1e-9 * (1.0 + j0.abs()), "nu={nu} x={x} defect={defect}");
        }
    }

    #[test]
    fn radial_derivative_of_scaled_form() {
        // (x⁻¹ d/dx)[x^{−n}J_n] = −x^{−n−1}J_{n+1}
        for &n in &[0.0, 0.5, 1.0, 2.3] {
            for &x in &[0.7, 2.0, 5.5, 11.0] {
                let h = 1e-5;
                let d = (scaled(n, x + h) - scaled(n, x - h)) / (2.0 * h) / x;
                assert!((d + scaled(n + 1.0, x)).abs() < 1e-6, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn raising_derivative_identity() {
        // D_x(x^n J_n(x)) = x^n J_{n−1}(x)
        for &n in &[0.5, 1.0, 2.0, 3.5] {
            for &x in &[0.7, 2.0, 5.5, 11.0, 30.0] {
                let f = |x: f64| x.powf(n) * j(n, x);
                let h = 1e-5;
                let d = (f(x + h) - f(x - h)) / (2.0 * h);
                let want = x.powf(n) * j(n - 1.0, x);
                assert!((d - want).abs() < 1e-6 * (1.0 + want.abs()), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bessel_j(-0.75, 1.0), Err(Error::OrderOutOfRange(_))));
        assert!(bessel_j(0.0, -1.0).is_err());
        let e = BesselEval::new(1.0, 0.0).unwrap();
        assert_eq!(e.value, 0.0);
        assert!((e.scaled_value - 0.5).abs() < 1e-15);
    }
}
