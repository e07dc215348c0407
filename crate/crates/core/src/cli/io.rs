//! CSV and JSON files, number formatting, grid and angle parsing.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ComplexSignal, RadialGrid, TransformParams};

/// `printf("%.17g", x)`.
pub fn format_g17(x: f64) -> String {
    const P: i32 = 17;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..P).contains(&exp) {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        strip_zeros(&format!("{:.*}", (P - 1 - exp) as usize, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `min:max:n` or `min:max:n:log`.
pub fn parse_grid(spec: &str) -> Result<RadialGrid> {
    let bad = |why: &str| Error::InvalidGrid(format!("'{spec}': {why}; expected min:max:n[:log]"));
    let parts: Vec<&str> = spec.split(':').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(bad("wrong number of fields"));
    }
    let min: f64 = parts[0].trim().parse().map_err(|_| bad("min is not a number"))?;
    let max: f64 = parts[1].trim().parse().map_err(|_| bad("max is not a number"))?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad("n is not a count"))?;
    match parts.get(3).map(|s| s.trim()) {
        None | Some("lin") | Some("linear") => RadialGrid::linear(min, max, n),
        Some("log") => RadialGrid::logarithmic(min, max, n),
        Some(_) => Err(bad("spacing must be 'log' or 'lin'")),
    }
}

/// Radians, or `pi`, `pi/N`, `-pi/N` mapped to the nearest exact double.
pub fn parse_angle(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let v = if body == "pi" {
        std::f64::consts::PI
    } else if let Some(d) = body.strip_prefix("pi/") {
        match d.parse::<u32>() {
            Ok(2) => std::f64::consts::FRAC_PI_2,
            Ok(3) => std::f64::consts::FRAC_PI_3,
            Ok(4) => std::f64::consts::FRAC_PI_4,
            Ok(6) => std::f64::consts::FRAC_PI_6,
            Ok(n) if n > 0 => std::f64::consts::PI / n as f64,
            _ => return Err(format!("invalid angle '{s}'")),
        }
    } else {
        return t.parse::<f64>().map_err(|_| format!("invalid angle '{s}' (radians or pi/N)"));
    };
    Ok(if neg { -v } else { v })
}

/// Comma-separated positive numbers, e.g. a list of scales.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("'{p}' is not a number")))
        })
        .collect()
}

/// Header plus rows of numbers, formatted with [`format_g17`].
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|&v| format_g17(v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::InvalidSignal("empty CSV".into()))?
            .split(',')
            .map(|s| s.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let row = line
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidSignal(format!("row {}: '{}' is not a number", i + 1, c.trim())))
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != header.len() {
                return Err(Error::InvalidSignal(format!(
                    "row {} has {} fields, header has {}",
                    i + 1,
                    row.len(),
                    header.len()
                )));
            }
            rows.push(row);
        }
        Ok(Self { header, rows })
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// Signal table with columns `x_name,re,im`.
pub fn signal_table(x_name: &str, s: &ComplexSignal) -> Table {
    let mut t = Table::new(&[x_name, "re", "im"]);
    for (&x, v) in s.grid.nodes().iter().zip(&s.values) {
        t.push(vec![x, v.re, v.im]);
    }
    t
}

/// Read a three-column `x,re,im` CSV (any first-column name) as a signal.
pub fn read_signal(path: &Path, params: &TransformParams) -> Result<ComplexSignal> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidSignal(format!("cannot read {}: {e}", path.display())))?;
    let t = Table::parse_csv(&text)?;
    if t.header.len() != 3 || t.header[1] != "re" || t.header[2] != "im" {
        return Err(Error::InvalidSignal(format!(
            "{}: expected header x,re,im, got {}",
            path.display(),
            t.header.join(",")
        )));
    }
    let grid = RadialGrid::from_nodes(t.rows.iter().map(|r| r[0]).collect())?;
    let values = t.rows.iter().map(|r| Complex64::new(r[1], r[2])).collect();
    ComplexSignal::new(grid, values, *params)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}

/// Write `table` to `path`, or to stdout when `path` is `None`.
pub fn emit_table(table: &Table, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => write_text(p, &table.to_csv()),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(table.to_csv().as_bytes())
                .map_err(|e| Error::InvalidArgument(format!("cannot write to stdout: {e}")))
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_matches_printf() {
        let cases = [
            (0.1, "0.10000000000000001"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (1e-5, "1.0000000000000001e-05"),
            (1e17, "1e+17"),
            (123456.0, "123456"),
            (0.60653065971263342, "0.60653065971263342"),
            (1e-4, "0.0001"),
            (1.5e300, "1.5000000000000001e+300"),
            (0.0, "0"),
        ];
        for (x, want) in cases {
            assert_eq!(format_g17(x), want, "{x}");
        }
    }

    #[test]
    fn g17_round_trips() {
        for x in [std::f64::consts::PI, 1.0 / 3.0, -7.123456789012345e-200, 6.02214076e23, f64::MIN_POSITIVE] {
            assert_eq!(format_g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn grids_and_angles() {
        assert_eq!(parse_grid("0.1:4:64").unwrap().len(), 64);
        assert_eq!(parse_grid("0.1:4:8:log").unwrap().spacing(), crate::model::Spacing::Logarithmic);
        for bad in ["0.1:4", "a:4:5", "0.1:4:5:cubic", "4:0.1:5", "0:1:5:log"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
        assert_eq!(parse_angle("pi/2").unwrap(), std::f64::consts::FRAC_PI_2);
        assert_eq!(parse_angle("-pi/3").unwrap(), -std::f64::consts::FRAC_PI_3);
        assert_eq!(parse_angle("1.25").unwrap(), 1.25);
        assert!(parse_angle("tau").is_err());
    }

    #[test]
    fn csv_round_trip() {
        let mut t = Table::new(&["x", "re", "im"]);
        t.push(vec![0.1, 1.0 / 3.0, -2e-300]);
        t.push(vec![0.2, std::f64::consts::E, 0.0]);
        assert_eq!(Table::parse_csv(&t.to_csv()).unwrap(), t);
        assert!(Table::parse_csv("x,re,im\n1,2\n").is_err());
    }
}
