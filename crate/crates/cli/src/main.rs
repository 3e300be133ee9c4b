//! Command-line front-end: parses a JSON run configuration, dispatches to
//! the region and simulator engines, and writes reports.
//!
//! Exit codes: 0 success/feasible, 1 infeasible or property failed,
//! 2 usage/parse error, 3 resource guard exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use omnirelay::config::RunConfig;
use omnirelay::region::{
    boundary_sample, check_feasible, max_symmetric_rate, optimize_hd_schedule, HdScheduleSearch,
    DEFAULT_MARGIN,
};
use omnirelay::report::{
    trace_to_csv, BoundaryReport, BoundaryRow, CertificateReport, HdOptReport, HdPhaseReport,
    SimulationReport, SymRateReport,
};
use omnirelay::simulator::{measure_delays, run as run_simulation, DecodeOracle, SimOptions};
use omnirelay::Error as CoreError;

const DEFAULT_TOL: f64 = 1e-6;
const DEFAULT_MAX_BLOCKS: u64 = 1000;

#[derive(Parser)]
#[command(
    name = "omnirelay",
    version,
    about = "Achievable-rate-region engine and coverage simulator for omnidirectional relaying"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for reports.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Feasibility margin in bits (overrides the config).
    #[arg(long, global = true)]
    margin: Option<f64>,

    /// Bisection tolerance in bits (overrides the config).
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Simulation horizon in blocks (overrides the config).
    #[arg(long, global = true)]
    max_blocks: Option<u64>,

    /// Decode oracle: greedy, adversarial_heuristic, exhaustive_adversarial,
    /// random (overrides the config).
    #[arg(long, global = true)]
    oracle: Option<String>,

    /// Seed for every random choice (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Report format for tabular artifacts (overrides the config).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Check every model/schedule/rates invariant and report violations.
    Validate,
    /// Decide feasibility of the configured rate vector and write the cut
    /// certificate.
    Check,
    /// Largest symmetric rate, by bisection.
    Symrate,
    /// Scale each configured direction to the region boundary.
    Boundary,
    /// Exhaustive half-duplex schedule search over the configured
    /// candidate transmitter sets and weight grid.
    Hdopt,
    /// Simulate coverage and decode-delay dynamics.
    Simulate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum CliError {
    Usage(String),
    Io(String),
    Core(CoreError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                CoreError::Guard { .. } => 3,
                CoreError::Infeasible { .. } | CoreError::CoverageBound { .. } => 1,
                _ => 2,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Io(msg) => write!(f, "{msg}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Effective parameters after overlaying flags on the config file.
struct Effective {
    margin: f64,
    tol: f64,
    max_blocks: u64,
    oracle: String,
    seed: u64,
    format: Format,
}

fn effective(cli: &Cli, config: &RunConfig) -> Result<Effective, CliError> {
    let p = &config.params;
    let format = match &cli.format {
        Some(f) => *f,
        None => match p.format.as_deref() {
            None | Some("json") => Format::Json,
            Some("csv") => Format::Csv,
            Some(other) => {
                return Err(CliError::Usage(format!(
                    "unknown format '{other}' (json, csv)"
                )))
            }
        },
    };
    Ok(Effective {
        margin: cli.margin.or(p.margin).unwrap_or(DEFAULT_MARGIN),
        tol: cli.tol.or(p.tol).unwrap_or(DEFAULT_TOL),
        max_blocks: cli
            .max_blocks
            .or(p.max_blocks)
            .unwrap_or(DEFAULT_MAX_BLOCKS),
        oracle: cli
            .oracle
            .clone()
            .or_else(|| p.oracle.clone())
            .unwrap_or_else(|| "greedy".to_string()),
        seed: cli.seed.or(p.seed).unwrap_or(0),
        format,
    })
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Usage("--config PATH is required".to_string()))?;
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    RunConfig::from_json(&text).map_err(CliError::Core)
}

fn write_out(out_dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", out_dir.display())))?;
    let path = out_dir.join(name);
    fs::write(&path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

fn dispatch(cli: &Cli) -> Result<u8, CliError> {
    let config = load_config(cli)?;
    let eff = effective(cli, &config)?;
    match cli.command {
        Command::Validate => cmd_validate(cli, &config),
        Command::Check => cmd_check(cli, &config, &eff),
        Command::Symrate => cmd_symrate(cli, &config, &eff),
        Command::Boundary => cmd_boundary(cli, &config, &eff),
        Command::Hdopt => cmd_hdopt(cli, &config, &eff),
        Command::Simulate => cmd_simulate(cli, &config, &eff),
    }
}

fn cmd_validate(cli: &Cli, config: &RunConfig) -> Result<u8, CliError> {
    let report = config.validate();
    let path = write_out(&cli.out, "validation.json", &to_json(&report))?;
    if report.is_valid() {
        println!("valid ({})", path.display());
        Ok(0)
    } else {
        for v in &report.violations {
            println!("violation: {v}");
        }
        println!(
            "invalid: {} violation(s) ({})",
            report.violations.len(),
            path.display()
        );
        Ok(1)
    }
}

fn cmd_check(cli: &Cli, config: &RunConfig, eff: &Effective) -> Result<u8, CliError> {
    let scenario = config.build_scenario()?;
    let rates = config.build_rates()?;
    let certificate = check_feasible(&scenario, &rates, eff.margin)?;
    let report = CertificateReport::from_certificate(&certificate);
    let json_path = write_out(&cli.out, "certificate.json", &to_json(&report))?;
    if eff.format == Format::Csv {
        write_out(&cli.out, "certificate.csv", &report.to_csv())?;
    }
    if certificate.feasible {
        println!("feasible ({})", json_path.display());
        Ok(0)
    } else {
        let first = certificate
            .first_violation()
            .expect("infeasible certificate");
        println!(
            "infeasible: subset {} (mask {}) needs more than {} bits ({})",
            first.subset,
            first.subset.bits(),
            first.rate_sum_bits,
            json_path.display()
        );
        Ok(1)
    }
}

fn cmd_symrate(cli: &Cli, config: &RunConfig, eff: &Effective) -> Result<u8, CliError> {
    let scenario = config.build_scenario()?;
    let rate = max_symmetric_rate(&scenario, eff.tol)?;
    let report = SymRateReport {
        n: scenario.node_count(),
        tol_bits: eff.tol,
        symmetric_rate_bits: rate,
    };
    let path = write_out(&cli.out, "symrate.json", &to_json(&report))?;
    println!("symmetric rate {rate} bits/use ({})", path.display());
    Ok(0)
}

fn cmd_boundary(cli: &Cli, config: &RunConfig, eff: &Effective) -> Result<u8, CliError> {
    let scenario = config.build_scenario()?;
    let directions = config
        .directions
        .as_ref()
        .ok_or_else(|| CliError::Usage("config has no directions".to_string()))?;
    let mut rows = Vec::with_capacity(directions.len());
    for direction in directions {
        let rates = boundary_sample(&scenario, direction, eff.tol)?;
        rows.push(BoundaryRow {
            direction: direction.clone(),
            rates_bits: rates.as_slice().to_vec(),
        });
    }
    let report = BoundaryReport {
        n: scenario.node_count(),
        tol_bits: eff.tol,
        rows,
    };
    let json_path = write_out(&cli.out, "boundary.json", &to_json(&report))?;
    if eff.format == Format::Csv {
        write_out(&cli.out, "boundary.csv", &report.to_csv())?;
    }
    println!(
        "{} boundary points ({})",
        report.rows.len(),
        json_path.display()
    );
    Ok(0)
}

fn cmd_hdopt(cli: &Cli, config: &RunConfig, eff: &Effective) -> Result<u8, CliError> {
    let net = match config.build_scenario()? {
        omnirelay::rates::Scenario::AwgnHalfDuplex { network, .. } => network,
        _ => {
            return Err(CliError::Usage(
                "hdopt needs an awgn_hd model (the schedule section seeds nothing; candidates come from hdopt)"
                    .to_string(),
            ))
        }
    };
    let hdopt = config
        .hdopt
        .as_ref()
        .ok_or_else(|| CliError::Usage("config has no hdopt section".to_string()))?;
    let candidates = config.hd_candidates(net.node_count())?;
    let search = HdScheduleSearch {
        phases: hdopt.phases,
        grid: hdopt.grid,
        tol: eff.tol,
        max_evaluations: hdopt.max_evaluations.unwrap_or(100_000),
    };
    let (schedule, rate) = optimize_hd_schedule(&net, &candidates, &search)?;
    let report = HdOptReport {
        n: net.node_count(),
        phases: schedule
            .phases()
            .iter()
            .map(|p| HdPhaseReport {
                weight: p.weight,
                transmitters: p.payload.external_nodes(),
            })
            .collect(),
        symmetric_rate_bits: rate,
        tol_bits: eff.tol,
        grid: hdopt.grid,
    };
    let path = write_out(&cli.out, "hdopt.json", &to_json(&report))?;
    println!("best symmetric rate {rate} bits/use ({})", path.display());
    Ok(0)
}

fn cmd_simulate(cli: &Cli, config: &RunConfig, eff: &Effective) -> Result<u8, CliError> {
    let scenario = config.build_scenario()?;
    let rates = config.build_rates()?;
    let mode = eff.oracle.parse().map_err(CliError::Core)?;
    let mut oracle = DecodeOracle::new(mode, eff.seed);
    let options = SimOptions {
        margin: eff.margin,
        max_blocks: eff.max_blocks,
        stop_on_completion: false,
    };
    let trace = run_simulation(&scenario, &rates, &mut oracle, &options)?;
    let summary = measure_delays(&trace, eff.max_blocks).map_err(CliError::Core)?;
    let report = SimulationReport::from_trace(&trace, &summary);
    let json_path = write_out(&cli.out, "simulate.json", &to_json(&report))?;
    if eff.format == Format::Csv {
        write_out(&cli.out, "trace.csv", &trace_to_csv(&trace))?;
    }
    println!(
        "coverage complete at block {:?} (bound {}), sup delay {:?} ({})",
        trace.completion_block,
        trace.coverage_bound,
        summary.sup_delay,
        json_path.display()
    );
    if report.bound_ok && report.delays_stabilized {
        Ok(0)
    } else {
        Ok(1)
    }
}
