//! Builtin test functions named on the command line, e.g. `gauss:p=0.5`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{GaussChirp, GaussChirpSum, TransformParams};

/// Names accepted by [`parse_function`].
pub const FUNCTION_NAMES: [&str; 3] = ["gauss", "gausschirp", "oracle"];

fn invalid(spec: &str, why: impl std::fmt::Display) -> Error {
    Error::InvalidArgument(format!("function '{spec}': {why}"))
}

fn keyed_values(spec: &str, body: &str, allowed: &[&str]) -> Result<Vec<(String, f64)>> {
    let mut out: Vec<(String, f64)> = Vec::new();
    for part in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| invalid(spec, format!("expected key=value, got '{part}'")))?;
        let k = k.trim();
        if !allowed.contains(&k) {
            return Err(invalid(spec, format!("unknown key '{k}' (allowed: {})", allowed.join(", "))));
        }
        if out.iter().any(|(seen, _)| seen == k) {
            return Err(invalid(spec, format!("key '{k}' given twice")));
        }
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| invalid(spec, format!("'{v}' is not a number")))?;
        out.push((k.to_string(), v));
    }
    Ok(out)
}

fn lookup(values: &[(String, f64)], key: &str) -> Option<f64> {
    values.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
}

/// Parse a builtin function.
///
/// * `gauss:p=P` is `e^{−P t²}`.
/// * `gausschirp:s=S,p=P,c=C,re=A,im=B` is `(A + iB) t^S e^{−P t²} e^{iC t²/2}`;
///   missing keys default to `s=0, c=0, re=1, im=0`, `p` is required.
/// * `oracle:p=P` is `t^{ν−μ} e^{−P t²} e^{−i t² cot θ/2}` for the given parameters.
pub fn parse_function(spec: &str, params: &TransformParams) -> Result<GaussChirpSum> {
    let (name, body) = spec.split_once(':').unwrap_or((spec, ""));
    let g = match name.trim() {
        "gauss" => {
            let v = keyed_values(spec, body, &["p"])?;
            GaussChirp::gaussian(lookup(&v, "p").unwrap_or(0.5))?
        }
        "gausschirp" => {
            let v = keyed_values(spec, body, &["s", "p", "c", "re", "im"])?;
            let p = lookup(&v, "p").ok_or_else(|| invalid(spec, "missing decay p"))?;
            let amp = Complex64::new(lookup(&v, "re").unwrap_or(1.0), lookup(&v, "im").unwrap_or(0.0));
            GaussChirp::new(amp, lookup(&v, "s").unwrap_or(0.0), p, lookup(&v, "c").unwrap_or(0.0))?
        }
        "oracle" => {
            let v = keyed_values(spec, body, &["p"])?;
            GaussChirp::oracle_family(params, lookup(&v, "p").unwrap_or(0.5))?
        }
        other => {
            return Err(invalid(spec, format!("unknown name '{other}' (known: {})", FUNCTION_NAMES.join(", "))));
        }
    };
    Ok(g.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn classical() -> TransformParams {
        TransformParams::new(0.0, 0.0, FRAC_PI_2).unwrap()
    }

    #[test]
    fn gauss_and_defaults() {
        let f = parse_function("gauss:p=0.5", &classical()).unwrap();
        assert!((f.eval(1.0).re - (-0.5f64).exp()).abs() < 1e-15);
        assert_eq!(parse_function("gauss", &classical()).unwrap(), f);
    }

    #[test]
    fn gausschirp_keys() {
        let f = parse_function("gausschirp:s=1,p=1,c=2,re=0,im=2", &classical()).unwrap();
        let want = Complex64::new(0.0, 2.0) * 1.5 * (-2.25f64).exp() * Complex64::from_polar(1.0, 2.25);
        assert!((f.eval(1.5) - want).norm() < 1e-14);
    }

    #[test]
    fn rejects_bad_specs() {
        for s in ["bump:p=1", "gauss:q=1", "gauss:p=x", "gauss:p=1,p=2", "gausschirp:s=1", "gauss:p=-1", "gauss:p"] {
            assert!(parse_function(s, &classical()).is_err(), "{s}");
        }
    }
}
