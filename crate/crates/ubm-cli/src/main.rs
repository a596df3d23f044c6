//! Command-line front end: compute moments, densities and atoms of the two
//! unitary Brownian motion families, convolve moment-sequence files, and run
//! the self-verification suites.
//!
//! Exit codes: 0 on success, 2 on a usage/configuration error, 3 on a
//! numerical failure (including failed verification checks).

// negated float comparisons like `!(x > 0.0)` are NaN-rejecting input guards
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod report;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use ubm::boolean::{solve_atoms, TruncationPolicy};
use ubm::convolution::{boolean_convolve, monotone_convolve, MomentSequence};
use ubm::monotone::{monotone_density, monotone_support, DensityValue};

use report::{csv_f64, to_json_string};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "ubm",
    version,
    about = "Spectral measures of the monotone and boolean unitary Brownian motions",
    after_help = "Outputs are deterministic: identical configuration gives byte-identical \
                  output. The environment variable UBM_SEED is accepted and ignored."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form moments of one family
    Moments(MomentsArgs),
    /// Density samples of the monotone family on a uniform angle grid
    Density(DensityArgs),
    /// Atom locations and weights of the boolean family
    Atoms(AtomsArgs),
    /// Convolve two moment-sequence files
    Convolve(ConvolveArgs),
    /// Run the self-verification suites and report pass/fail per check
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Family {
    Monotone,
    Boolean,
}

#[derive(Clone, Copy, PartialEq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct MomentsArgs {
    /// Which family to evaluate
    #[arg(long, value_enum)]
    family: Family,
    /// Time parameter of the semigroup (>= 0)
    #[arg(long)]
    t: f64,
    /// Highest moment index to emit (>= 1)
    #[arg(long)]
    order: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DensityArgs {
    /// Time parameter (> 0; the measure at t = 0 is a point mass)
    #[arg(long)]
    t: f64,
    /// Number of sample angles on (-pi, pi) (>= 2)
    #[arg(long)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AtomsArgs {
    /// Time parameter (> 0)
    #[arg(long)]
    t: f64,
    /// Stop once this much mass is captured (in (0, 1]; index cap 100000)
    #[arg(long, default_value_t = 1.0 - 1e-6)]
    truncation_mass: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ConvolveArgs {
    /// First moment-sequence file (JSON object or CSV rows `n,re,im`)
    file1: PathBuf,
    /// Second moment-sequence file
    file2: PathBuf,
    /// Which convolution to apply
    #[arg(long, value_enum)]
    mode: Family,
    /// Truncate both inputs to this order before convolving
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Suite {
    Ode,
    Semigroup,
    Quadrature,
    Fock,
    Lem,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which suite to run
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Override the absolute tolerances of the checks; structural windows
    /// (convergence orders, halving ratios) are not affected
    #[arg(long)]
    tolerance: Option<f64>,
    /// Finest Fock grid used by the fock/lem suites (>= 32)
    #[arg(long, default_value_t = 512)]
    grid: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn numerical(msg: impl Into<String>) -> Self {
        CliError::Numerical(msg.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Moments(args) => cmd_moments(args),
        Command::Density(args) => cmd_density(args),
        Command::Atoms(args) => cmd_atoms(args),
        Command::Convolve(args) => cmd_convolve(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| CliError::numerical(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct MomentsConfig {
    family: Family,
    t: f64,
    order: usize,
    format: Format,
}

#[derive(Serialize)]
struct MomentRecord {
    n: usize,
    moment: f64,
}

#[derive(Serialize)]
struct MomentsOutput {
    schema_version: u32,
    command: &'static str,
    config: MomentsConfig,
    records: Vec<MomentRecord>,
}

fn cmd_moments(args: MomentsArgs) -> Result<(), CliError> {
    if !(args.t >= 0.0) {
        return Err(CliError::usage(format!(
            "--t must be nonnegative, got {}",
            args.t
        )));
    }
    if args.order < 1 {
        return Err(CliError::usage("--order must be at least 1"));
    }
    let records: Vec<MomentRecord> = (1..=args.order)
        .map(|n| MomentRecord {
            n,
            moment: match args.family {
                Family::Monotone => ubm::monotone::monotone_moment(args.t, n),
                Family::Boolean => ubm::boolean::boolean_moment(args.t, n),
            },
        })
        .collect();
    let content = match args.format {
        Format::Json => to_json_string(&MomentsOutput {
            schema_version: SCHEMA_VERSION,
            command: "moments",
            config: MomentsConfig {
                family: args.family,
                t: args.t,
                order: args.order,
                format: args.format,
            },
            records,
        }),
        Format::Csv => {
            let mut out = String::from("n,moment\n");
            for r in &records {
                out.push_str(&format!("{},{}\n", r.n, csv_f64(r.moment)));
            }
            out
        }
    };
    write_output(args.output.as_deref(), &content)
}

#[derive(Serialize)]
struct DensityConfig {
    t: f64,
    samples: usize,
    format: Format,
}

#[derive(Serialize)]
struct DensityRecord {
    theta: f64,
    density: Option<f64>,
    unbounded: bool,
}

#[derive(Serialize)]
struct SupportHeader {
    theta_min: f64,
    theta_max: f64,
}

#[derive(Serialize)]
struct DensityOutput {
    schema_version: u32,
    command: &'static str,
    config: DensityConfig,
    support: SupportHeader,
    records: Vec<DensityRecord>,
}

fn cmd_density(args: DensityArgs) -> Result<(), CliError> {
    if !(args.t > 0.0) {
        return Err(CliError::usage(format!(
            "--t must be positive (the measure at t = 0 is a point mass), got {}",
            args.t
        )));
    }
    if args.samples < 2 {
        return Err(CliError::usage("--samples must be at least 2"));
    }
    let (theta_min, theta_max) = monotone_support(args.t);
    let mut records = Vec::with_capacity(args.samples);
    for k in 0..args.samples {
        // open grid on (-pi, pi), mirror-symmetric by construction so the
        // emitted density is exactly even
        let n = args.samples;
        let j = if 2 * k < n { k } else { n - 1 - k };
        let magnitude =
            std::f64::consts::PI - std::f64::consts::TAU * (j as f64 + 0.5) / n as f64;
        let theta = if 2 * k < n { -magnitude } else { magnitude };
        let record = match monotone_density(args.t, theta)
            .map_err(|e| CliError::numerical(e.to_string()))?
        {
            DensityValue::Finite(v) => DensityRecord {
                theta,
                density: Some(v),
                unbounded: false,
            },
            DensityValue::Unbounded => DensityRecord {
                theta,
                density: None,
                unbounded: true,
            },
        };
        records.push(record);
    }
    let content = match args.format {
        Format::Json => to_json_string(&DensityOutput {
            schema_version: SCHEMA_VERSION,
            command: "density",
            config: DensityConfig {
                t: args.t,
                samples: args.samples,
                format: args.format,
            },
            support: SupportHeader {
                theta_min,
                theta_max,
            },
            records,
        }),
        Format::Csv => {
            let mut out = format!(
                "support,{},{}\ntheta,density,unbounded\n",
                csv_f64(theta_min),
                csv_f64(theta_max)
            );
            for r in &records {
                let dens = r.density.map(csv_f64).unwrap_or_default();
                out.push_str(&format!("{},{},{}\n", csv_f64(r.theta), dens, r.unbounded));
            }
            out
        }
    };
    write_output(args.output.as_deref(), &content)
}

#[derive(Serialize)]
struct AtomsConfig {
    t: f64,
    truncation_mass: f64,
    format: Format,
}

#[derive(Serialize)]
struct AtomRecord {
    n: usize,
    alpha: f64,
    x: f64,
    weight: f64,
}

#[derive(Serialize)]
struct AtomsSummary {
    captured_mass: f64,
    truncation_index: usize,
}

#[derive(Serialize)]
struct AtomsOutput {
    schema_version: u32,
    command: &'static str,
    config: AtomsConfig,
    summary: AtomsSummary,
    records: Vec<AtomRecord>,
}

fn cmd_atoms(args: AtomsArgs) -> Result<(), CliError> {
    if !(args.t > 0.0) {
        return Err(CliError::usage(format!(
            "--t must be positive (the measure is atomic only for t > 0), got {}",
            args.t
        )));
    }
    if !(args.truncation_mass > 0.0 && args.truncation_mass <= 1.0) {
        return Err(CliError::usage(format!(
            "--truncation-mass must lie in (0, 1], got {}",
            args.truncation_mass
        )));
    }
    let atoms = solve_atoms(
        args.t,
        &TruncationPolicy::MassTarget {
            target: args.truncation_mass,
            max_index: 100_000,
        },
    )
    .map_err(|e| CliError::numerical(e.to_string()))?;
    let records: Vec<AtomRecord> = atoms
        .iter()
        .map(|a| AtomRecord {
            n: a.index,
            alpha: a.angle,
            x: a.x,
            weight: a.weight,
        })
        .collect();
    let summary = AtomsSummary {
        captured_mass: atoms.captured_mass(),
        truncation_index: atoms.truncation_index(),
    };
    let content = match args.format {
        Format::Json => to_json_string(&AtomsOutput {
            schema_version: SCHEMA_VERSION,
            command: "atoms",
            config: AtomsConfig {
                t: args.t,
                truncation_mass: args.truncation_mass,
                format: args.format,
            },
            summary,
            records,
        }),
        Format::Csv => {
            let mut out = format!(
                "summary,{},{}\nn,alpha,x,weight\n",
                csv_f64(summary.captured_mass),
                summary.truncation_index
            );
            for r in &records {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    r.n,
                    csv_f64(r.alpha),
                    csv_f64(r.x),
                    csv_f64(r.weight)
                ));
            }
            out
        }
    };
    write_output(args.output.as_deref(), &content)
}

#[derive(Serialize)]
struct ConvolveConfig {
    file1: String,
    file2: String,
    mode: Family,
    order: usize,
    format: Format,
}

#[derive(Serialize)]
struct MomentFileOutput {
    schema_version: u32,
    order: usize,
    moments: Vec<[f64; 2]>,
    config: ConvolveConfig,
}

fn read_moment_file(path: &Path) -> Result<Vec<Complex64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        #[derive(serde::Deserialize)]
        struct MomentFile {
            order: usize,
            moments: Vec<[f64; 2]>,
        }
        let parsed: MomentFile = serde_json::from_str(&text)
            .map_err(|e| CliError::usage(format!("{}: invalid JSON: {e}", path.display())))?;
        if parsed.moments.len() != parsed.order {
            return Err(CliError::usage(format!(
                "{}: order field is {} but {} moments are listed",
                path.display(),
                parsed.order,
                parsed.moments.len()
            )));
        }
        Ok(parsed
            .moments
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect())
    } else {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with('n')) {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(CliError::usage(format!(
                    "{}:{}: expected `n,re,im`, got {line:?}",
                    path.display(),
                    lineno + 1
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| {
                    CliError::usage(format!("{}:{}: {e}", path.display(), lineno + 1))
                })
            };
            let n = fields[0].parse::<usize>().map_err(|e| {
                CliError::usage(format!("{}:{}: {e}", path.display(), lineno + 1))
            })?;
            rows.push((n, Complex64::new(parse(fields[1])?, parse(fields[2])?)));
        }
        for (expect, &(n, _)) in rows.iter().enumerate() {
            if n != expect + 1 {
                return Err(CliError::usage(format!(
                    "{}: moment indices must run 1..N contiguously, found {n} at position {}",
                    path.display(),
                    expect + 1
                )));
            }
        }
        Ok(rows.into_iter().map(|(_, m)| m).collect())
    }
}

fn cmd_convolve(args: ConvolveArgs) -> Result<(), CliError> {
    let mut m1 = read_moment_file(&args.file1)?;
    let mut m2 = read_moment_file(&args.file2)?;
    let order = args.order.unwrap_or_else(|| m1.len().min(m2.len()));
    if order < 1 {
        return Err(CliError::usage("--order must be at least 1"));
    }
    if order > ubm::convolution::MAX_CONVOLUTION_ORDER {
        return Err(CliError::usage(format!(
            "--order {} exceeds the supported maximum {}",
            order,
            ubm::convolution::MAX_CONVOLUTION_ORDER
        )));
    }
    if order > m1.len() || order > m2.len() {
        return Err(CliError::usage(format!(
            "--order {} exceeds the inputs (orders {} and {})",
            order,
            m1.len(),
            m2.len()
        )));
    }
    m1.truncate(order);
    m2.truncate(order);
    let s1 = MomentSequence::new(m1).map_err(|e| CliError::usage(e.to_string()))?;
    let s2 = MomentSequence::new(m2).map_err(|e| CliError::usage(e.to_string()))?;
    let result = match args.mode {
        Family::Monotone => monotone_convolve(&s1, &s2),
        Family::Boolean => boolean_convolve(&s1, &s2),
    }
    .map_err(|e| CliError::numerical(e.to_string()))?;

    let config = ConvolveConfig {
        file1: args.file1.display().to_string(),
        file2: args.file2.display().to_string(),
        mode: args.mode,
        order,
        format: args.format,
    };
    let content = match args.format {
        Format::Json => to_json_string(&MomentFileOutput {
            schema_version: SCHEMA_VERSION,
            order,
            moments: result.moments().iter().map(|m| [m.re, m.im]).collect(),
            config,
        }),
        Format::Csv => {
            let mut out = String::from("n,re,im\n");
            for (k, m) in result.moments().iter().enumerate() {
                out.push_str(&format!("{},{},{}\n", k + 1, csv_f64(m.re), csv_f64(m.im)));
            }
            out
        }
    };
    write_output(args.output.as_deref(), &content)
}

#[derive(Serialize)]
struct VerifyConfig {
    suite: Suite,
    tolerance: Option<f64>,
    grid: usize,
}

#[derive(Serialize)]
struct VerifyOutput {
    schema_version: u32,
    command: &'static str,
    config: VerifyConfig,
    checks: Vec<verify::Check>,
    passed: bool,
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    if args.grid < 32 {
        return Err(CliError::usage(format!(
            "--grid must be at least 32, got {}",
            args.grid
        )));
    }
    if let Some(t) = args.tolerance {
        if !(t > 0.0) {
            return Err(CliError::usage(format!(
                "--tolerance must be positive, got {t}"
            )));
        }
    }
    let over = args.tolerance;
    let mut checks = Vec::new();
    let run_ode = matches!(args.suite, Suite::Ode | Suite::All);
    let run_semi = matches!(args.suite, Suite::Semigroup | Suite::All);
    let run_quad = matches!(args.suite, Suite::Quadrature | Suite::All);
    let run_fock = matches!(args.suite, Suite::Fock | Suite::All);
    let run_lem = matches!(args.suite, Suite::Lem | Suite::All);
    if run_ode {
        checks.extend(verify::ode_suite(over));
    }
    if run_semi {
        checks.extend(verify::semigroup_suite(over));
    }
    if run_quad {
        checks.extend(verify::quadrature_suite(over));
    }
    if run_fock {
        checks.extend(verify::fock_suite(over, args.grid));
    }
    if run_lem {
        checks.extend(verify::lem_suite(over, args.grid));
    }
    let passed = checks.iter().all(|c| c.passed);
    let failed = checks.iter().filter(|c| !c.passed).count();
    let content = to_json_string(&VerifyOutput {
        schema_version: SCHEMA_VERSION,
        command: "verify",
        config: VerifyConfig {
            suite: args.suite,
            tolerance: args.tolerance,
            grid: args.grid,
        },
        checks,
        passed,
    });
    write_output(args.output.as_deref(), &content)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::numerical(format!(
            "{failed} verification check(s) failed"
        )))
    }
}
