//! Command-line front end.
//!
//! The default invocation runs an experiment sweep: build the exact
//! Voronoi partition of the unit torus for each requested order `n`,
//! certify the cell areas by precision escalation, and report the
//! distinct-area count `S(n)` together with the polygon census
//! `M_k(n)`. The `verify` subcommand runs the independent oracles
//! (one-dimensional gap sweeps and the rasterized area estimate)
//! against the same configuration.
//!
//! Exit codes: 0 success, 1 any order failed or an oracle disagreed,
//! 2 usage error.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use torusgap::cli::{self, OutputKind, RunConfig};
use torusgap::verify::{cross_validate, raster_areas, three_gap_sweep, ValidationReport};
use torusgap::{build_partition, generate_sites, Error, PrecisionConfig, VectorSpec};

#[derive(Parser)]
#[command(
    name = "torusgap",
    version,
    about = "Exact Voronoi partitions of the unit torus for Kronecker point sets",
    args_conflicts_with_subcommands = true
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Check a configuration against the independent oracles.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Generating vector, e.g. "sqrt(2),sqrt(3)" (also: cbrt(K), e, pi).
    #[arg(
        long,
        value_name = "EXPR",
        required_unless_present = "paper_table",
        conflicts_with = "paper_table"
    )]
    vector: Option<String>,

    /// Orders to run: comma-separated integers or end-inclusive ranges
    /// a..b[:step]. Default: 20..150:10,200,500,1000.
    #[arg(long, value_name = "LIST|RANGE", conflicts_with = "paper_table")]
    n: Option<String>,

    /// Decimal digits every reported area is certified to.
    #[arg(long, value_name = "INT", default_value_t = 80)]
    digits: u32,

    /// Directory for emitted artifacts (required for json/svg formats).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Outputs to emit: table, csv, json, svg.
    #[arg(long, value_name = "LIST", value_delimiter = ',', default_value = "table")]
    format: Vec<String>,

    /// Built-in reference experiment 1..=8; sets the vector and orders.
    #[arg(long = "paper-table", value_name = "K")]
    paper_table: Option<u8>,

    /// Worker threads (default: one per core).
    #[arg(long, value_name = "INT")]
    threads: Option<usize>,

    /// Areas within 10^-EXP of each other share a class.
    #[arg(long = "tolerance-exponent", value_name = "EXP", default_value_t = 80)]
    tolerance_exponent: u32,
}

#[derive(Args)]
struct VerifyArgs {
    /// Generating vector to validate.
    #[arg(
        long,
        value_name = "EXPR",
        required_unless_present = "paper_table",
        conflicts_with = "paper_table"
    )]
    vector: Option<String>,

    /// Orders to cross-validate against the raster oracle.
    #[arg(long, value_name = "LIST|RANGE", default_value = "20,100")]
    n: String,

    /// Decimal digits of the certification target.
    #[arg(long, value_name = "INT", default_value_t = 80)]
    digits: u32,

    /// Raster resolution (pixels per axis).
    #[arg(long = "grid-m", value_name = "INT", default_value_t = 2000)]
    grid_m: usize,

    /// Check the one-dimensional gap structure of every prefix up to
    /// this order, for both vector components.
    #[arg(long = "sweep-max", value_name = "INT", default_value_t = 1000)]
    sweep_max: usize,

    /// Validate the vector of built-in reference experiment K.
    #[arg(long = "paper-table", value_name = "K")]
    paper_table: Option<u8>,
}

/// Usage-shaped errors exit 2, runtime failures exit 1.
fn classify(error: &Error) -> ExitCode {
    match error {
        Error::InvalidConfig(_)
        | Error::InvalidInput(_)
        | Error::Parse { .. }
        | Error::PerfectPower { .. }
        | Error::IdenticalConstants(_)
        | Error::GridTooCoarse { .. } => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn default_grid() -> Vec<usize> {
    (2..=15).map(|i| i * 10).chain([200, 500, 1000]).collect()
}

fn build_config(args: &RunArgs) -> Result<RunConfig, Error> {
    let (vector, preset_grid) = match args.paper_table {
        Some(k) => {
            let (vector, grid) = cli::table_preset(k)?;
            (vector, Some(grid))
        }
        None => {
            let expr = args.vector.as_deref().expect("clap requires --vector");
            (cli::parse_vector(expr)?, None)
        }
    };
    let n_values = match (&args.n, preset_grid) {
        (Some(text), _) => cli::parse_n_values(text)?,
        (None, Some(grid)) => grid,
        (None, None) => default_grid(),
    };
    let outputs = args
        .format
        .iter()
        .map(|f| f.parse::<OutputKind>())
        .collect::<Result<BTreeSet<_>, _>>()?;
    if args.out.is_none()
        && (outputs.contains(&OutputKind::Json) || outputs.contains(&OutputKind::Svg))
    {
        return Err(Error::InvalidInput(
            "formats json and svg need --out DIR".into(),
        ));
    }
    Ok(RunConfig {
        vector,
        n_values,
        precision: PrecisionConfig::new(args.digits, 40, 2)?,
        outputs,
        out_dir: args.out.clone(),
        threads: args.threads,
        tolerance_exponent: args.tolerance_exponent,
    })
}

fn run_main(args: &RunArgs) -> ExitCode {
    let config = match build_config(args) {
        Ok(config) => config,
        Err(error) => {
            eprintln!("error: {error}");
            return classify(&error);
        }
    };
    match cli::run(&config) {
        Ok(outcome) => {
            if config.outputs.contains(&OutputKind::Table) {
                print!("{}", cli::render_table(&outcome.reports));
            }
            if config.outputs.contains(&OutputKind::Csv) && config.out_dir.is_none() {
                print!("{}", cli::render_csv(&outcome.reports));
            }
            for failure in &outcome.failures {
                eprintln!("n={}: {}", failure.n, failure.error);
            }
            if outcome.all_ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(error) => {
            eprintln!("error: {error}");
            classify(&error)
        }
    }
}

/// What `verify` prints: both sweep verdicts plus one raster
/// cross-validation report per order.
#[derive(Serialize)]
struct VerifyDocument {
    vector: String,
    sweep_max: usize,
    alpha_sweep_ok: bool,
    beta_sweep_ok: bool,
    checks: Vec<ValidationReport>,
}

fn verify_main(args: &VerifyArgs) -> ExitCode {
    match try_verify(args) {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error}");
            classify(&error)
        }
    }
}

fn try_verify(args: &VerifyArgs) -> Result<ExitCode, Error> {
    let vector = match args.paper_table {
        Some(k) => cli::table_preset(k)?.0,
        None => cli::parse_vector(args.vector.as_deref().expect("clap requires --vector"))?,
    };
    let n_values = cli::parse_n_values(&args.n)?;
    let cfg = PrecisionConfig::new(args.digits, 40, 2)?;

    let mut failed = false;
    let mut sweep_ok = |component: &torusgap::ConstantSpec| {
        three_gap_sweep(component, args.sweep_max, &cfg)
            .map(|()| true)
            .unwrap_or_else(|error| {
                eprintln!("{component}: {error}");
                failed = true;
                false
            })
    };
    let alpha_sweep_ok = sweep_ok(&vector.alpha);
    let beta_sweep_ok = sweep_ok(&vector.beta);

    let mut checks = Vec::new();
    for &n in &n_values {
        match raster_check(&vector, n, args.grid_m, &cfg) {
            Ok(report) => checks.push(report),
            Err(error) => {
                // Configuration mistakes abort; disagreements accumulate.
                if matches!(error, Error::GridTooCoarse { .. }) {
                    return Err(error);
                }
                eprintln!("n={n}: {error}");
                failed = true;
            }
        }
    }

    let document = VerifyDocument {
        vector: vector.to_string(),
        sweep_max: args.sweep_max,
        alpha_sweep_ok,
        beta_sweep_ok,
        checks,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&document)
            .map_err(|e| Error::InvalidInput(format!("serialization: {e}")))?
    );
    Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn raster_check(
    vector: &VectorSpec,
    n: usize,
    grid_m: usize,
    cfg: &PrecisionConfig,
) -> Result<ValidationReport, Error> {
    let sites = generate_sites(vector, n, cfg)?;
    let partition = build_partition(&sites)?;
    let raster = raster_areas(&sites, grid_m)?;
    cross_validate(&partition, &raster)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Some(Command::Verify(args)) => verify_main(args),
        None => run_main(&cli.run),
    }
}
