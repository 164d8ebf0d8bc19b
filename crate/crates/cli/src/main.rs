use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use a1lab::experiments::{
    degree_for_bits, parse_list, parse_range, run_census, run_interpolate, run_selftest, run_verify,
    CensusConfig, CheckClass, Format, MSelect, Report, RunConfig, SelftestOptions, SigmaChoice,
};
use a1lab::Error;
use clap::{Args, Parser, Subcommand};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "a1lab", version, about = "Strange A1-curve experiments over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every identity suite at p = 2, 3 in small fields.
    Selftest {
        /// Only this characteristic.
        #[arg(long)]
        p: Option<u64>,
        /// Replace the boundary by explicit sigma_1..sigma_(p-1) encodings.
        #[arg(long, value_name = "LIST")]
        inject_sigma: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample curves and fibers and run their certificates.
    Verify(VerifyArgs),
    /// Count cusps on general fibers of the m = d - p family.
    CuspCensus(CensusArgs),
    /// Build an m = 0 curve through the points of a CSV file.
    Interpolate {
        #[arg(long, value_name = "FILE")]
        points: PathBuf,
        #[arg(long)]
        p: u64,
        /// Extension degree k of GF(p^k).
        #[arg(long)]
        ext: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "special")]
        sigma: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `random` or `special`.
    #[arg(long, default_value = "random")]
    sigma: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// `json` or `csv`; defaults to the extension of --out, else json.
    #[arg(long)]
    format: Option<String>,
    /// Worker threads; A1LAB_THREADS is used when absent.
    #[arg(long)]
    threads: Option<usize>,
    /// Add a generation time to the report.
    #[arg(long)]
    timestamps: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated characteristics.
    #[arg(long, default_value = "3")]
    p: String,
    /// Extension degree k of GF(p^k).
    #[arg(long, default_value_t = 4)]
    ext: usize,
    /// Degree or inclusive range, e.g. `7` or `3..8`.
    #[arg(long, default_value = "4")]
    d: String,
    /// Multiplicity at str, or `all`.
    #[arg(long, default_value = "all")]
    m: String,
    #[arg(long, default_value_t = 25)]
    trials: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long, default_value = "2,3,5")]
    p: String,
    #[arg(long, default_value_t = 10)]
    d_max: usize,
    #[arg(long, default_value_t = 40)]
    trials: usize,
    /// Field size target in bits: each p uses the least k with p^k >= 2^ext.
    #[arg(long, default_value_t = 12)]
    ext: u32,
    #[command(flatten)]
    common: Common,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(match e {
                Error::PointOnBoundary { .. } => EXIT_FAIL,
                _ => EXIT_USAGE,
            })
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Selftest { p, inject_sigma, seed } => {
            let sigma = inject_sigma.as_deref().map(parse_list).transpose()?;
            if sigma.is_some() && p.is_none() {
                return Err(Error::InvalidInput("--inject-sigma needs --p".into()));
            }
            let report = run_selftest(&SelftestOptions { p, sigma, seed })?;
            for r in report.results.iter().filter(|r| !r.pass) {
                eprintln!("FAIL {} p={} d={} m={}: {}", r.check_name, r.p, r.d, r.m, r.detail);
            }
            println!(
                "selftest: {} checks, {} passed, {} failed",
                report.summary.total, report.summary.passed, report.summary.failed
            );
            Ok(if report.identity_ok() { 0 } else { EXIT_FAIL })
        }
        Command::Verify(args) => {
            let format = resolve_format(&args.common)?;
            let config = RunConfig {
                p_list: parse_list(&args.p)?,
                k: args.ext,
                d_range: parse_range(&args.d)?,
                m: args.m.parse::<MSelect>()?,
                trials: args.trials,
                seed: args.common.seed,
                sigma: args.common.sigma.parse::<SigmaChoice>()?,
                format,
                output_path: args.common.out.as_ref().map(|p| p.display().to_string()),
                threads: args.common.threads,
            };
            let report = run_verify(&config)?;
            for r in report.results.iter().filter(|r| !r.pass && r.class == CheckClass::Identity) {
                eprintln!("FAIL {} p={} d={} m={} trial={}: {}", r.check_name, r.p, r.d, r.m, r.trial, r.detail);
            }
            emit(&report, format, &args.common)?;
            let mut lines = vec![format!(
                "verify: {} checks, {} passed, {} identity failures, {} genericity misses",
                report.summary.total,
                report.summary.passed,
                report.summary.identity_failures,
                report.summary.genericity_failures
            )];
            for rate in &report.summary.rates {
                lines.push(format!(
                    "  {} p={} d={} m={}: {}/{} ({:.3})",
                    rate.check_name, rate.p, rate.d, rate.m, rate.agree, rate.total, rate.rate
                ));
            }
            summarize(&lines, &args.common);
            Ok(if report.identity_ok() { 0 } else { EXIT_FAIL })
        }
        Command::CuspCensus(args) => {
            let format = resolve_format(&args.common)?;
            let config = CensusConfig {
                p_list: parse_list(&args.p)?,
                ext_bits: args.ext,
                d_max: args.d_max,
                trials: args.trials,
                seed: args.common.seed,
                sigma: args.common.sigma.parse::<SigmaChoice>()?,
                threads: args.common.threads,
            };
            let report = run_census(&config)?;
            for r in report.results.iter().filter(|r| !r.pass && r.class == CheckClass::Identity) {
                eprintln!("FAIL {} p={} d={} trial={}: {}", r.check_name, r.p, r.d, r.trial, r.detail);
            }
            emit(&report, format, &args.common)?;
            let mut lines: Vec<String> = config
                .p_list
                .iter()
                .map(|&p| format!("p={} k={}", p, degree_for_bits(p, config.ext_bits)))
                .collect();
            for rate in report.summary.rates.iter().filter(|r| r.check_name == "cusp_count") {
                let expected = report
                    .census
                    .iter()
                    .find(|row| row.p == rate.p && row.d == rate.d)
                    .map_or(0, |row| row.expected);
                lines.push(format!(
                    "  p={} d={} m={} expected={} agreement {}/{} ({:.3})",
                    rate.p, rate.d, rate.m, expected, rate.agree, rate.total, rate.rate
                ));
            }
            for b in &report.summary.boundary {
                lines.push(format!(
                    "  boundary p={}: distinct roots of P = {} in {}/{} samples ({:.3})",
                    b.p, b.expected, b.agree, b.total, b.rate
                ));
            }
            summarize(&lines, &args.common);
            Ok(if report.identity_ok() { 0 } else { EXIT_FAIL })
        }
        Command::Interpolate { points, p, ext, seed, sigma, out } => {
            let text = fs::read_to_string(&points)
                .map_err(|e| Error::InvalidInput(format!("{}: {}", points.display(), e)))?;
            let report = run_interpolate(&text, p, ext, sigma.parse()?, seed)?;
            let json = report.to_json();
            match &out {
                Some(path) => write(path, &json)?,
                None => print!("{}", json),
            }
            for c in report.points.iter().filter(|c| !c.on_curve) {
                eprintln!("FAIL line {}: point {:?} is off the curve", c.line, c.point);
            }
            Ok(if report.all_pass() { 0 } else { EXIT_FAIL })
        }
    }
}

fn resolve_format(common: &Common) -> Result<Format, Error> {
    match &common.format {
        Some(f) => f.parse(),
        None => Ok(match common.out.as_ref().and_then(|p| p.extension()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }),
    }
}

fn emit(report: &Report, format: Format, common: &Common) -> Result<(), Error> {
    let mut report = report.clone();
    if common.timestamps {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        report = report.with_timestamp(format!("unix:{}", secs));
    }
    let body = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
    };
    match &common.out {
        Some(path) => write(path, &body),
        None => {
            print!("{}", body);
            Ok(())
        }
    }
}

/// Summary goes to stdout only when the report itself went to a file.
fn summarize(lines: &[String], common: &Common) {
    for line in lines {
        if common.out.is_some() {
            println!("{}", line);
        } else {
            eprintln!("{}", line);
        }
    }
}

fn write(path: &Path, body: &str) -> Result<(), Error> {
    fs::write(path, body).map_err(|e| Error::InvalidInput(format!("{}: {}", path.display(), e)))
}
