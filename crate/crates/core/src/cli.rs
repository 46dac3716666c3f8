//! Command-line surface.
//!
//! Exit codes: 0 success, 1 a mathematical expectation failed (CIUPM check,
//! threshold pattern), 2 invalid input or I/O, 3 precision exhausted.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::circle::{is_ciupm, wrap, CiupmCheck};
use crate::construct::{disconnected_ciupm, fat_family, minimal_ciupm, split_integer_ciupm, tent_ciupm, threshold_c};
use crate::density::{AffineMap, PiecewiseDensity};
use crate::diagnostics::{sample, ud_report, Driver, SamplePlan};
use crate::error::{Error, Result};
use crate::io;
use crate::oracle::threshold_scan;
use crate::scalar::{default_tolerance, with_precision_retry, Scalar, DEFAULT_PRECISION_BITS, MAX_PRECISION_BITS};

#[derive(Parser, Debug)]
#[command(name = "ciupm", version, about = "Circularly invariant uniformizable measures of affine maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Starting precision for irrational values; doubled on ambiguity.
    #[arg(long, global = true, env = "CIUPM_PRECISION_BITS", default_value_t = DEFAULT_PRECISION_BITS)]
    pub precision_bits: u32,
    /// Uniformity tolerance; defaults to 0 for exact inputs.
    #[arg(long, global = true, env = "CIUPM_TOL")]
    pub tol: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Decimal digits in CSV and sample output.
    #[arg(long, global = true, default_value_t = io::DEFAULT_DIGITS)]
    pub digits: usize,
    /// Print errors as JSON on stderr.
    #[arg(long, global = true)]
    pub json_errors: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Minimal,
    Tent,
    Disconnected,
    Fat,
    Split,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DriverKind {
    VanDerCorput,
    Pseudorandom,
    Kronecker,
}

#[derive(Args, Debug, Clone)]
pub struct Family {
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, value_enum, default_value_t = Kind::Minimal)]
    pub kind: Kind,
    /// Staircase block shift (disconnected family).
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub m: i64,
    /// Plateau shift (disconnected family).
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub n: i64,
    /// Target diameter (fat family).
    #[arg(long)]
    pub c: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub weights: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub offsets: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Density JSON for one of the construction families.
    Construct(Family),
    /// CIUPM check of a density file for `x ↦ βx + α`.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        density: PathBuf,
    },
    /// The minimal diameter `c_β`.
    Threshold {
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Grid feasibility scan over diameters (CSV).
    Scan(ScanArgs),
    /// Full scan certificates (JSON).
    Certify(ScanArgs),
    /// Sample a density and report mod-1 discrepancy of samples and images.
    Sample {
        #[command(flatten)]
        family: Family,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        alpha: String,
        /// Density file; defaults to the construction selected by --kind.
        #[arg(long)]
        density: Option<PathBuf>,
        #[arg(long = "count", default_value_t = 10_000)]
        count: usize,
        #[arg(long, value_enum, default_value_t = DriverKind::VanDerCorput)]
        driver: DriverKind,
        #[arg(long, default_value_t = 2)]
        base: u32,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "sqrt:2")]
        step: String,
        #[arg(long, default_value_t = crate::diagnostics::DEFAULT_WEYL_H)]
        weyl_h: usize,
        /// Also write the samples, one decimal per line.
        #[arg(long)]
        dump_samples: Option<PathBuf>,
    },
    /// `(t, ρ(t))` CSV of a density, or of its wrap with --circle.
    ExportProfile {
        #[command(flatten)]
        family: Family,
        #[arg(long)]
        density: Option<PathBuf>,
        #[arg(long)]
        circle: bool,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ScanArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long = "grid-K", default_value_t = 2)]
    pub grid_k: u32,
    #[arg(long, value_delimiter = ',', required = true)]
    pub c: Vec<String>,
}

/// Outcome of a command before it is turned into an exit code.
enum Done {
    Ok,
    Failed,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::AmbiguousComparison(_) | Error::PrecisionExhausted(_) => 3,
        Error::NotACiupm { .. } => 1,
        _ => 2,
    }
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{text}");
                0
            } else {
                let _ = write!(err, "{text}");
                2
            };
        }
    };
    let json_errors = cli.global.json_errors;
    match execute(&cli, out) {
        Ok(Done::Ok) => 0,
        Ok(Done::Failed) => 1,
        Err(e) => {
            if json_errors {
                let v = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
                let _ = writeln!(err, "{v}");
            } else {
                let _ = writeln!(err, "error: {e}");
            }
            exit_code(&e)
        }
    }
}

fn parse(s: &str, bits: u32) -> Result<Scalar> {
    Scalar::parse_with_precision(s, bits)
}

fn parse_list(xs: &[String], bits: u32) -> Result<Vec<Scalar>> {
    xs.iter().map(|x| parse(x, bits)).collect()
}

fn tolerance(g: &Global, exact: bool, bits: u32) -> Result<Scalar> {
    match &g.tol {
        Some(t) => parse(t, bits),
        None if exact => Ok(Scalar::zero()),
        None => Ok(default_tolerance(bits)),
    }
}

fn build_family(f: &Family, bits: u32) -> Result<PiecewiseDensity> {
    if f.kind == Kind::Split {
        return Ok(split_integer_ciupm());
    }
    let beta = parse(f.beta.as_deref().ok_or_else(|| Error::InvalidArgument("--beta is required".into()))?, bits)?;
    match f.kind {
        Kind::Minimal => minimal_ciupm(&beta),
        Kind::Tent => tent_ciupm(&beta),
        Kind::Disconnected => disconnected_ciupm(&beta, f.m, f.n),
        Kind::Fat => {
            let c = parse(f.c.as_deref().ok_or_else(|| Error::InvalidArgument("--c is required".into()))?, bits)?;
            let weights = if f.weights.is_empty() { vec![Scalar::one()] } else { parse_list(&f.weights, bits)? };
            let offsets = if f.offsets.is_empty() { vec![Scalar::zero()] } else { parse_list(&f.offsets, bits)? };
            fat_family(&beta, &c, &weights, &offsets)
        }
        Kind::Split => unreachable!(),
    }
}

fn load_density(path: &Path, bits: u32) -> Result<PiecewiseDensity> {
    let text = std::fs::read_to_string(path)?;
    io::density_from_json(&text, bits)
}

fn source_density(family: &Family, density: Option<&Path>, bits: u32) -> Result<PiecewiseDensity> {
    match density {
        Some(p) => load_density(p, bits),
        None => build_family(family, bits),
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<Done> {
    let g = &cli.global;
    let start = g.precision_bits;
    let emit = |text: &str, out: &mut dyn Write| io::emit(g.output.as_deref(), text, out);
    match &cli.command {
        Command::Construct(f) => {
            let mu = with_precision_retry(start, MAX_PRECISION_BITS, |bits| build_family(f, bits))?;
            let text = match g.format {
                Some(Format::Csv) => io::profile_csv(&mu, g.digits)?,
                _ => io::density_to_json(&mu),
            };
            emit(&text, out)?;
            Ok(Done::Ok)
        }
        Command::Verify { beta, alpha, density } => {
            let check: CiupmCheck = with_precision_retry(start, MAX_PRECISION_BITS, |bits| {
                let b = parse(beta, bits)?;
                let a = parse(alpha, bits)?;
                let mu = load_density(density, bits)?;
                let tol = tolerance(g, mu.is_exact() && a.is_exact() && b.is_exact(), bits)?;
                is_ciupm(&mu, &AffineMap::new(a, b)?, &tol)
            })?;
            let text = match g.format {
                Some(Format::Csv) => format!(
                    "ok,dev_mu,dev_push\n{},{},{}",
                    check.ok,
                    check.dev_mu.to_decimal(g.digits),
                    check.dev_push.to_decimal(g.digits)
                ),
                _ => serde_json::to_string(&check).expect("serializable"),
            };
            emit(&text, out)?;
            Ok(if check.ok { Done::Ok } else { Done::Failed })
        }
        Command::Threshold { beta } => {
            let c = with_precision_retry(start, MAX_PRECISION_BITS, |bits| threshold_c(&parse(beta, bits)?))?;
            emit(&c.to_string(), out)?;
            Ok(Done::Ok)
        }
        Command::Scan(a) | Command::Certify(a) => {
            let beta = parse(&a.beta, start)?;
            if !beta.is_exact() {
                return Err(Error::SlopeNotRational);
            }
            let cs = parse_list(&a.c, start)?;
            let report = threshold_scan(&beta, a.grid_k, &cs)?;
            let certify = matches!(cli.command, Command::Certify(_));
            let text = match (certify, g.format) {
                (false, Some(Format::Json)) | (true, None) | (true, Some(Format::Json)) => {
                    io::certificates_json(&report)
                }
                _ => io::scan_csv(&report)?,
            };
            emit(&text, out)?;
            // an entry error (e.g. misaligned c) is bad input, not a refutation
            if let Some(e) = report.entries.iter().find_map(|e| e.error.as_ref()) {
                return Err(Error::InvalidArgument(format!("scan entry failed: {e}")));
            }
            Ok(if report.pattern_ok() { Done::Ok } else { Done::Failed })
        }
        Command::Sample { family, alpha, density, count, driver, base, seed, step, weyl_h, dump_samples } => {
            let (report, points) = with_precision_retry(start, MAX_PRECISION_BITS, |bits| {
                let mu = source_density(family, density.as_deref(), bits)?;
                let beta_text =
                    family.beta.as_deref().ok_or_else(|| Error::InvalidArgument("--beta is required".into()))?;
                let b = parse(beta_text, bits)?;
                let a = parse(alpha, bits)?;
                let drv = match driver {
                    DriverKind::VanDerCorput => Driver::VanDerCorput { base: *base },
                    DriverKind::Pseudorandom => Driver::Pseudorandom { seed: *seed },
                    DriverKind::Kronecker => Driver::Kronecker { step: parse(step, bits)? },
                };
                let mut plan = SamplePlan::new(mu, *count, drv);
                plan.bits = bits;
                let report = ud_report(&b, &a, &plan, *weyl_h)?;
                let points = if dump_samples.is_some() { sample(&plan)? } else { Vec::new() };
                Ok((report, points))
            })?;
            if let Some(p) = dump_samples {
                std::fs::write(p, io::samples_text(&points, g.digits))?;
            }
            let text = match g.format {
                Some(Format::Csv) => io::report_csv(&report, g.digits)?,
                _ => io::report_json(&report),
            };
            emit(&text, out)?;
            Ok(Done::Ok)
        }
        Command::ExportProfile { family, density, circle } => {
            let mu = with_precision_retry(start, MAX_PRECISION_BITS, |bits| {
                source_density(family, density.as_deref(), bits)
            })?;
            let text =
                if *circle { io::circle_profile_csv(&wrap(&mu)?, g.digits)? } else { io::profile_csv(&mu, g.digits)? };
            emit(&text, out)?;
            Ok(Done::Ok)
        }
    }
}
