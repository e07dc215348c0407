//! The `frh` command-line front end.

mod functions;
mod io;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::frht::{parseval_defect, round_trip, transform_report, Direction};
use crate::model::TransformParams;
use crate::quadrature::QuadratureSpec;
use crate::type_s::{check_sequence, seminorm_table, ChirpSign, SequenceFamily};
use crate::verify::{run_suite, Suite, SuiteReport, VerifyOptions};
use crate::wavelet::{cwt_direct_grid, SpectralCwt};

pub use functions::{parse_function, FUNCTION_NAMES};
pub use io::{format_g17, parse_angle, parse_grid, parse_list, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "frh", version, about = "Fractional Hankel transform, translation and wavelet toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Bessel order, at least -1/2.
    #[arg(long, global = true, default_value_t = 0.0, allow_negative_numbers = true)]
    pub nu: f64,
    /// Weight exponent.
    #[arg(long, global = true, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu: f64,
    /// Angle in radians; `pi`, `pi/2`, `pi/3`, `pi/4` are exact.
    #[arg(long, global = true, default_value = "pi/2", value_parser = parse_angle, allow_negative_numbers = true)]
    pub theta: f64,
    /// Relative quadrature tolerance.
    #[arg(long, global = true, env = "FRH_DEFAULT_TOL", default_value_t = 1e-10)]
    pub tol: f64,
    /// Worker thread cap.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Where to write the JSON report.
    #[arg(long, global = true)]
    pub json_report: Option<PathBuf>,
    /// Output CSV; stdout when omitted.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Source {
    /// Builtin function, e.g. `gauss:p=0.5`, `gausschirp:s=1,p=0.7,c=0.3`, `oracle:p=1`.
    #[arg(long = "fn", value_name = "SPEC", conflicts_with = "input")]
    pub function: Option<String>,
    /// CSV with columns `x,re,im`.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathChoice {
    Direct,
    Spectral,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignChoice {
    Plus,
    Minus,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Forward transform on a frequency grid: `omega,re,im`.
    Transform {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        grid: String,
    },
    /// Inverse transform on a radial grid: `t,re,im`.
    Inverse {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        grid: String,
    },
    /// Forward then inverse: `t,re,im,rel_error`.
    Roundtrip {
        #[arg(long = "fn", value_name = "SPEC")]
        function: String,
        #[arg(long)]
        grid: String,
        /// Exit 1 when the largest relative error exceeds this.
        #[arg(long)]
        max_error: Option<f64>,
    },
    /// Relative defect between inner products before and after transforming.
    Parseval {
        #[arg(long = "fn", value_name = "SPEC")]
        function: String,
        #[arg(long = "gn", value_name = "SPEC")]
        other: String,
        /// Exit 1 when the defect exceeds this.
        #[arg(long)]
        max_defect: Option<f64>,
    },
    /// Wavelet coefficients: `b,a,re,im[,re_direct,im_direct,defect]`.
    Cwt {
        #[arg(long = "fn", value_name = "SPEC")]
        function: String,
        #[arg(long, value_name = "SPEC")]
        psi: String,
        /// Translation grid.
        #[arg(long)]
        grid: String,
        /// Comma-separated scales.
        #[arg(long, allow_hyphen_values = true)]
        scales: String,
        #[arg(long, value_enum, default_value_t = PathChoice::Spectral)]
        path: PathChoice,
    },
    /// Sampled seminorm table: `sign,k,q,value`.
    Seminorms {
        #[arg(long = "fn", value_name = "SPEC")]
        function: String,
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 12)]
        k_max: usize,
        #[arg(long, default_value_t = 12)]
        q_max: usize,
        #[arg(long, value_enum, default_value_t = SignChoice::Both)]
        sign: SignChoice,
    },
    /// Run a bundled verification suite.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        /// Sequence for the `sequences` suite, e.g. `factorial_pow:2`.
        #[arg(long)]
        seq: Option<String>,
    },
    /// Check the sequence axioms for e.g. `factorial_pow:2` or `values:1,2,6,24,...`.
    CheckSequence {
        #[arg(long)]
        seq: String,
        #[arg(long, default_value_t = 30)]
        k_max: usize,
    },
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse::<Suite>().map_err(|e| e.to_string())
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() || matches!(e.root(), Error::FitUnstable { .. }) {
        EXIT_NUMERICAL
    } else {
        EXIT_VALIDATION
    }
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let c = &cli.common;
    if let Some(n) = c.threads {
        if n == 0 {
            return Err(Error::InvalidArgument("--threads must be at least 1".into()));
        }
        // fails only if a pool already exists, which leaves the earlier cap in place
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let params = TransformParams::new(c.nu, c.mu, c.theta)?;
    let spec = QuadratureSpec::default().with_rel_tol(c.tol);
    spec.validate()?;
    match &cli.command {
        Command::Transform { source, grid } => cmd_transform(c, &params, &spec, source, grid, Direction::Forward),
        Command::Inverse { source, grid } => cmd_transform(c, &params, &spec, source, grid, Direction::Inverse),
        Command::Roundtrip { function, grid, max_error } => cmd_roundtrip(c, &params, &spec, function, grid, *max_error),
        Command::Parseval {
            function,
            other,
            max_defect,
        } => cmd_parseval(c, &params, &spec, function, other, *max_defect),
        Command::Cwt {
            function,
            psi,
            grid,
            scales,
            path,
        } => cmd_cwt(c, &params, &spec, function, psi, grid, scales, *path),
        Command::Seminorms {
            function,
            grid,
            k_max,
            q_max,
            sign,
        } => cmd_seminorms(c, &params, function, grid, *k_max, *q_max, *sign),
        Command::Verify { suite, seq } => cmd_verify(c, &spec, *suite, seq.clone()),
        Command::CheckSequence { seq, k_max } => cmd_check_sequence(c, seq, *k_max),
    }
}

fn sidecar_path(c: &Common) -> Option<PathBuf> {
    c.json_report.clone().or_else(|| {
        c.output.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".json");
            PathBuf::from(s)
        })
    })
}

fn write_report<T: Serialize>(c: &Common, report: &T) -> Result<()> {
    if let Some(p) = sidecar_path(c) {
        io::write_text(&p, &io::to_json(report))?;
    }
    Ok(())
}

fn params_json(p: &TransformParams) -> serde_json::Value {
    json!({ "nu": p.nu(), "mu": p.mu(), "theta": p.theta(), "class": format!("{:?}", p.class()) })
}

fn output_path(c: &Common) -> Option<&Path> {
    c.output.as_deref()
}

fn cmd_transform(
    c: &Common,
    params: &TransformParams,
    spec: &QuadratureSpec,
    source: &Source,
    grid: &str,
    dir: Direction,
) -> Result<i32> {
    let grid = parse_grid(grid)?;
    let (report, input) = match (&source.function, &source.input) {
        (Some(f), None) => {
            let f = parse_function(f, params)?;
            (transform_report(params, dir, &f, &grid, spec)?, json!({ "function": source.function }))
        }
        (None, Some(path)) => {
            let s = io::read_signal(path, params)?;
            let f = s.interpolant();
            (transform_report(params, dir, &f, &grid, spec)?, json!({ "input": path, "samples": s.grid.len() }))
        }
        _ => return Err(Error::InvalidArgument("exactly one of --fn or --input is required".into())),
    };
    let x_name = match dir {
        Direction::Forward => "omega",
        Direction::Inverse => "t",
    };
    io::emit_table(&io::signal_table(x_name, &report.signal), output_path(c))?;
    write_report(
        c,
        &json!({
            "command": if dir == Direction::Forward { "transform" } else { "inverse" },
            "params": params_json(params),
            "source": input,
            "grid": { "min": grid.first(), "max": grid.last(), "n": grid.len(), "spacing": format!("{:?}", grid.spacing()) },
            "quadrature": spec,
            "total_panels": report.total_panels,
            "max_error_estimate": report.max_error_estimate,
        }),
    )?;
    Ok(EXIT_OK)
}

fn cmd_roundtrip(
    c: &Common,
    params: &TransformParams,
    spec: &QuadratureSpec,
    function: &str,
    grid: &str,
    max_error: Option<f64>,
) -> Result<i32> {
    let grid = parse_grid(grid)?;
    let f = parse_function(function, params)?;
    let rt = round_trip(params, &f, &grid, spec)?;
    let mut table = Table::new(&["t", "re", "im", "rel_error"]);
    let mut worst: f64 = 0.0;
    for (&t, v) in grid.nodes().iter().zip(&rt.values) {
        let want = f.eval(t);
        let err = (v - want).norm() / want.norm().max(spec.abs_tol);
        worst = worst.max(err);
        table.push(vec![t, v.re, v.im, err]);
    }
    io::emit_table(&table, output_path(c))?;
    let passed = max_error.is_none_or(|m| worst <= m);
    write_report(
        c,
        &json!({
            "command": "roundtrip",
            "params": params_json(params),
            "function": function,
            "quadrature": spec,
            "max_relative_error": worst,
            "threshold": max_error,
            "passed": passed,
        }),
    )?;
    Ok(if passed { EXIT_OK } else { EXIT_VERIFICATION })
}

fn cmd_parseval(
    c: &Common,
    params: &TransformParams,
    spec: &QuadratureSpec,
    function: &str,
    other: &str,
    max_defect: Option<f64>,
) -> Result<i32> {
    let f = parse_function(function, params)?;
    let g = parse_function(other, params)?;
    let defect = parseval_defect(params, &f, &g, spec)?;
    let passed = max_defect.is_none_or(|m| defect <= m);
    let report = json!({
        "command": "parseval",
        "params": params_json(params),
        "f": function,
        "g": other,
        "quadrature": spec,
        "defect": defect,
        "threshold": max_defect,
        "passed": passed,
    });
    match &c.json_report {
        Some(p) => io::write_text(p, &io::to_json(&report))?,
        None => print!("{}", io::to_json(&report)),
    }
    Ok(if passed { EXIT_OK } else { EXIT_VERIFICATION })
}

#[allow(clippy::too_many_arguments)]
fn cmd_cwt(
    c: &Common,
    params: &TransformParams,
    spec: &QuadratureSpec,
    function: &str,
    psi: &str,
    grid: &str,
    scales: &str,
    path: PathChoice,
) -> Result<i32> {
    let b_grid = parse_grid(grid)?;
    let scales = parse_list(scales)?;
    if scales.is_empty() {
        return Err(Error::InvalidArgument("the scale list is empty".into()));
    }
    if let Some(a) = scales.iter().find(|&&a| !(a > 0.0 && a.is_finite())) {
        return Err(Error::InvalidArgument(format!("scales must be positive, got {a}")));
    }
    params.require_pointwise()?;
    let f = parse_function(function, params)?;
    let w = parse_function(psi, params)?;
    let header: &[&str] = match path {
        PathChoice::Both => &["b", "a", "re", "im", "re_direct", "im_direct", "defect"],
        _ => &["b", "a", "re", "im"],
    };
    let mut table = Table::new(header);
    let mut max_defect: f64 = 0.0;
    for &a in &scales {
        let spectral = match path {
            PathChoice::Direct => None,
            _ => Some(SpectralCwt::new(params, &f, &w, a, spec)?.coefficients(&b_grid, spec)?.values),
        };
        let direct = match path {
            PathChoice::Spectral => None,
            _ => Some(cwt_direct_grid(params, &f, &w, &b_grid, a, spec)?.values),
        };
        for (i, &b) in b_grid.nodes().iter().enumerate() {
            match (&spectral, &direct) {
                (Some(s), Some(d)) => {
                    let defect = (s[i] - d[i]).norm() / d[i].norm().max(s[i].norm()).max(spec.abs_tol);
                    max_defect = max_defect.max(defect);
                    table.push(vec![b, a, s[i].re, s[i].im, d[i].re, d[i].im, defect]);
                }
                (Some(v), None) | (None, Some(v)) => table.push(vec![b, a, v[i].re, v[i].im]),
                (None, None) => unreachable!("at least one path runs"),
            }
        }
    }
    io::emit_table(&table, output_path(c))?;
    write_report(
        c,
        &json!({
            "command": "cwt",
            "params": params_json(params),
            "f": function,
            "psi": psi,
            "scales": scales,
            "path": format!("{path:?}").to_lowercase(),
            "quadrature": spec,
            "max_defect": if path == PathChoice::Both { Some(max_defect) } else { None },
        }),
    )?;
    Ok(EXIT_OK)
}

fn cmd_seminorms(
    c: &Common,
    params: &TransformParams,
    function: &str,
    grid: &str,
    k_max: usize,
    q_max: usize,
    sign: SignChoice,
) -> Result<i32> {
    let grid = parse_grid(grid)?;
    let f = parse_function(function, params)?;
    let signs: Vec<ChirpSign> = match sign {
        SignChoice::Plus => vec![ChirpSign::Plus],
        SignChoice::Minus => vec![ChirpSign::Minus],
        SignChoice::Both => ChirpSign::both().to_vec(),
    };
    let tables = signs
        .iter()
        .map(|&s| seminorm_table(&f, params, s, k_max, q_max, &grid))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Table::new(&["sign", "k", "q", "value"]);
    for t in &tables {
        for k in 0..=k_max {
            for q in 0..=q_max {
                out.push(vec![t.chirp_sign.value(), k as f64, q as f64, t.get(k, q)]);
            }
        }
    }
    io::emit_table(&out, output_path(c))?;
    let fits: Vec<_> = tables
        .iter()
        .map(|t| json!({ "sign": t.chirp_sign, "row_fit": t.row_fit, "column_fit": t.column_fit }))
        .collect();
    write_report(
        c,
        &json!({
            "command": "seminorms",
            "params": params_json(params),
            "function": function,
            "k_max": k_max,
            "q_max": q_max,
            "grid_points": tables.first().map(|t| t.grid.len()),
            "fits": fits,
        }),
    )?;
    Ok(EXIT_OK)
}

fn cmd_verify(c: &Common, spec: &QuadratureSpec, suite: Suite, seq: Option<String>) -> Result<i32> {
    if seq.is_some() && suite != Suite::Sequences {
        return Err(Error::InvalidArgument("--seq applies only to the sequences suite".into()));
    }
    let options = VerifyOptions { spec: *spec, sequence: seq };
    let report = run_suite(suite, &options);
    print_summary(&report);
    if let Some(p) = &c.json_report {
        io::write_text(p, &io::to_json(&report))?;
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_VERIFICATION })
}

fn print_summary(r: &SuiteReport) {
    let failed: Vec<_> = r.cases.iter().filter(|c| !c.passed).collect();
    println!(
        "{}: {} ({} cases, {} failed, max defect {}, {:.1} s)",
        r.suite,
        if r.passed { "PASS" } else { "FAIL" },
        r.cases.len(),
        failed.len(),
        format_g17(r.max_defect),
        r.elapsed_seconds
    );
    for c in failed {
        println!(
            "  FAIL {}: defect {} > {}{}",
            c.name,
            format_g17(c.defect),
            format_g17(c.threshold),
            c.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default()
        );
    }
}

fn cmd_check_sequence(c: &Common, seq: &str, k_max: usize) -> Result<i32> {
    let family = SequenceFamily::parse(seq, k_max)?;
    let report = check_sequence(&family, k_max)?;
    let text = io::to_json(&report);
    match &c.json_report {
        Some(p) => io::write_text(p, &text)?,
        None => print!("{text}"),
    }
    Ok(if report.all_hold() { EXIT_OK } else { EXIT_VERIFICATION })
}
