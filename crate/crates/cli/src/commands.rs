//! Command-line surface and dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use univalence_core::chain::{chain_eval, transfer_functions};
use univalence_core::extension::{becker_extend, beltrami_estimate, extension_constants};
use univalence_core::oracle::{covering_counts_on_circle, injectivity_scan, Collision, SampleCloud};
use univalence_core::{criterion_check, operator_eval, Error as CoreError, Variant, C64};

use crate::config::{parse_config, ProblemSpec};
use crate::numfmt::{format_complex, parse_complex};
use crate::svg::render_svg;
use crate::table::{GridTable, CHAIN_HEADER, EXTENSION_HEADER};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_NUMERICAL: i32 = 70;
pub const EXIT_IO: i32 = 74;

/// Environment variable capping the worker threads (`0` = automatic).
pub const THREADS_ENV: &str = "UNIVALENCE_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "univalence-lab",
    version,
    about = "Numerical univalence criteria, Loewner chains and quasiconformal extensions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan the disk for the configured criterion; prints the report as JSON.
    Check {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the variant of the config.
        #[arg(long, value_parser = parse_variant)]
        variant: Option<Variant>,
    },
    /// Evaluate the integral operator at one point.
    Eval {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: C64,
    },
    /// Chain values and |w| on a polar grid of z and a uniform grid of t, as CSV.
    Chain {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0.9)]
        radius: f64,
        #[arg(long, default_value_t = 8)]
        rings: usize,
        #[arg(long, default_value_t = 32)]
        angles: usize,
        #[arg(long, default_value_t = 2.0)]
        t_max: f64,
        #[arg(long, default_value_t = 5)]
        t_steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The extended map and |mu| on rings r_min <= |z| <= r_max, as CSV.
    Extend {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        r_min: f64,
        #[arg(long, default_value_t = 2.0)]
        r_max: f64,
        #[arg(long, default_value_t = 16)]
        rings: usize,
        #[arg(long, default_value_t = 64)]
        angles: usize,
        /// Difference step of the Beltrami estimate.
        #[arg(long, default_value_t = 1e-5)]
        h: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extension constants for given k and a, as JSON.
    Constants {
        #[arg(long)]
        k: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
    /// Collision scan and covering counts of the operator image.
    Oracle {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 200)]
        radial: usize,
        #[arg(long, default_value_t = 200)]
        angular: usize,
        #[arg(long, default_value_t = 0.99)]
        radius: f64,
        #[arg(long, default_value_t = 50)]
        targets: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Collision tolerance; defaults to 1e-6 times the value diameter.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// SVG mesh from a grid CSV.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Time slice to draw from a chain CSV.
        #[arg(long)]
        t: Option<f64>,
    },
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    Variant::from_name(s).ok_or_else(|| format!("unknown variant `{s}` (expected thm31, thm32, cor31, cor32 or thm41)"))
}

/// A failed command: exit code and message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = if matches!(e, CoreError::Hypothesis(_)) { EXIT_HYPOTHESIS } else { EXIT_NUMERICAL };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = Result<i32, Failure>;

fn load(path: &Path) -> Result<ProblemSpec, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    parse_config(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::io(p, e)),
        None => out.write_all(text.as_bytes()).map_err(|e| Failure::io(Path::new("<stdout>"), e)),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn polar(r: f64, k: usize, n: usize) -> C64 {
    C64::from_polar(r, std::f64::consts::TAU * k as f64 / n as f64)
}

fn check(spec: &ProblemSpec, variant: Option<Variant>, out: &mut dyn Write) -> Outcome {
    let variant = variant.unwrap_or(spec.variant);
    let report = criterion_check(variant, &spec.parameters(), &spec.functions(), &spec.grid.0)?;
    emit(out, None, &json(&report))?;
    Ok(if report.passed { EXIT_PASS } else { EXIT_FAIL })
}

#[derive(Serialize)]
struct EvalOutput {
    z: String,
    value: String,
    branch_crossing: bool,
}

fn eval(spec: &ProblemSpec, z: C64, out: &mut dyn Write) -> Outcome {
    let r = operator_eval(z, &spec.parameters(), &spec.functions(), &spec.quad.0)?;
    let report =
        EvalOutput { z: format_complex(z), value: format_complex(r.value), branch_crossing: r.branch_crossing };
    emit(out, None, &json(&report))?;
    Ok(EXIT_PASS)
}

#[allow(clippy::too_many_arguments)]
fn chain(
    spec: &ProblemSpec,
    radius: f64,
    rings: usize,
    angles: usize,
    t_max: f64,
    t_steps: usize,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    if !(radius > 0.0 && radius < 1.0) || rings == 0 || angles == 0 || t_steps == 0 || !(t_max >= 0.0) {
        return Err(Failure::usage("chain grid needs 0 < radius < 1, t_max >= 0 and positive counts"));
    }
    let (p, fs, q) = (spec.parameters(), spec.functions(), &spec.quad.0);
    let mut cells = Vec::with_capacity(rings * angles * t_steps);
    for i in 1..=rings {
        for k in 0..angles {
            for j in 0..t_steps {
                let t = if t_steps == 1 { 0.0 } else { t_max * j as f64 / (t_steps - 1) as f64 };
                cells.push((polar(radius * i as f64 / rings as f64, k, angles), t));
            }
        }
    }
    let rows = cells
        .par_iter()
        .map(|&(z, t)| {
            let l = chain_eval(z, t, &p, &fs, q)?.value;
            let w = transfer_functions(z, t, &p, &fs)?.w;
            Ok(vec![z.re, z.im, t, l.re, l.im, w.norm()])
        })
        .collect::<Result<Vec<_>, CoreError>>()?;
    let table = GridTable { header: CHAIN_HEADER.iter().map(|s| s.to_string()).collect(), rows };
    emit(out, path, &table.to_csv_string())?;
    Ok(EXIT_PASS)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    spec: &ProblemSpec,
    r_min: f64,
    r_max: f64,
    rings: usize,
    angles: usize,
    h: f64,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    if !(r_min > 0.0 && r_max >= r_min && r_max.is_finite()) || rings == 0 || angles == 0 || !(h > 0.0) {
        return Err(Failure::usage("extension grid needs 0 < r_min <= r_max, h > 0 and positive counts"));
    }
    let (p, fs, q) = (spec.parameters(), spec.functions(), &spec.quad.0);
    let mut zs = Vec::with_capacity(rings * angles);
    for i in 0..rings {
        let r = if rings == 1 { r_min } else { r_min + (r_max - r_min) * i as f64 / (rings - 1) as f64 };
        zs.extend((0..angles).map(|k| polar(r, k, angles)));
    }
    let rows = zs
        .par_iter()
        .map(|&z| {
            let w = becker_extend(z, &p, &fs, q)?;
            // analytic inside; the seam band has no two-sided stencil
            let mu = if z.norm() < 1.0 {
                0.0
            } else if z.norm() <= 1.0 + 2.0 * h {
                f64::NAN
            } else {
                beltrami_estimate(z, h, &p, &fs, q)?.modulus
            };
            Ok(vec![z.re, z.im, w.re, w.im, mu])
        })
        .collect::<Result<Vec<_>, CoreError>>()?;
    let table = GridTable { header: EXTENSION_HEADER.iter().map(|s| s.to_string()).collect(), rows };
    emit(out, path, &table.to_csv_string())?;
    Ok(EXIT_PASS)
}

#[derive(Serialize)]
struct OracleOutput {
    samples: usize,
    dropped: usize,
    tolerance: f64,
    collision: Option<Collision<f64>>,
    curve_radius: f64,
    targets: usize,
    windings: Vec<i64>,
    covered_once: bool,
    injective: bool,
}

#[allow(clippy::too_many_arguments)]
fn oracle(
    spec: &ProblemSpec,
    radial: usize,
    angular: usize,
    radius: f64,
    targets: usize,
    seed: u64,
    tol: Option<f64>,
    out: &mut dyn Write,
) -> Outcome {
    if !(radius > 0.0 && radius < 1.0) || radial == 0 || angular == 0 {
        return Err(Failure::usage("oracle needs 0 < radius < 1 and positive sample counts"));
    }
    let (p, fs, q) = (spec.parameters(), spec.functions(), &spec.quad.0);
    let cloud = SampleCloud::polar(radial, angular, radius, |z| {
        let r = operator_eval(z, &p, &fs, q)?;
        Ok((!r.branch_crossing).then_some(r.value))
    })?;
    let tolerance = tol.unwrap_or_else(|| cloud.default_tolerance());
    let collision = injectivity_scan(&cloud, tolerance)?;
    let points = crate::random_disk_points(seed, targets, 0.9 * radius);
    let images =
        points.iter().map(|&z| operator_eval(z, &p, &fs, q).map(|r| r.value)).collect::<Result<Vec<_>, _>>()?;
    let windings = covering_counts_on_circle(|z| operator_eval(z, &p, &fs, q).map(|r| r.value), radius, &images)?;
    let covered_once = windings.iter().all(|&w| w == 1);
    let report = OracleOutput {
        samples: cloud.len(),
        dropped: cloud.dropped(),
        tolerance,
        injective: collision.is_none() && covered_once,
        collision,
        curve_radius: radius,
        targets: images.len(),
        windings,
        covered_once,
    };
    emit(out, None, &json(&report))?;
    Ok(if report.injective { EXIT_PASS } else { EXIT_FAIL })
}

fn plot(input: &Path, t: Option<f64>, path: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let file = std::fs::File::open(input).map_err(|e| Failure::io(input, e))?;
    let table = GridTable::read_csv(file).map_err(|e| Failure::usage(format!("{}: {e}", input.display())))?;
    let svg = render_svg(&table, t).map_err(|e| Failure::usage(format!("{}: {e}", input.display())))?;
    emit(out, path, &svg)?;
    Ok(EXIT_PASS)
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Check { config, variant } => check(&load(&config)?, variant, out),
        Command::Eval { config, z } => eval(&load(&config)?, z, out),
        Command::Chain { config, radius, rings, angles, t_max, t_steps, out: path } => {
            chain(&load(&config)?, radius, rings, angles, t_max, t_steps, path.as_deref(), out)
        }
        Command::Extend { config, r_min, r_max, rings, angles, h, out: path } => {
            extend(&load(&config)?, r_min, r_max, rings, angles, h, path.as_deref(), out)
        }
        Command::Constants { k, a } => {
            let c = extension_constants(k, a).map_err(|e| Failure::usage(e.to_string()))?;
            emit(out, None, &json(&c))?;
            Ok(EXIT_PASS)
        }
        Command::Oracle { config, radial, angular, radius, targets, seed, tol } => {
            oracle(&load(&config)?, radial, angular, radius, targets, seed, tol, out)
        }
        Command::Plot { input, out: path, t } => plot(&input, t, path.as_deref(), out),
    }
}

fn thread_count() -> Result<usize, Failure> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Failure::usage(format!("{THREADS_ENV} must be a non-negative integer, got `{v}`"))),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(Failure::usage(format!("{THREADS_ENV}: {e}"))),
    }
}

/// Runs one command line and returns the process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let outcome = thread_count().and_then(|threads| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Failure { code: EXIT_NUMERICAL, message: e.to_string() })?;
        // reports are buffered so the workers never touch the caller's handles
        let mut buffer = Vec::new();
        let code = pool.install(|| dispatch(cli.command, &mut buffer));
        out.write_all(&buffer).map_err(|e| Failure::io(Path::new("<stdout>"), e))?;
        code
    });
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
