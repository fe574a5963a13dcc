//! `zdeep`: depth-limited Miller-Rabin tests, Carmichael depth tables, and
//! the 2-adic local model, from the command line.
//!
//! Data goes to standard output, diagnostics to standard error. Exit codes:
//! 0 success (or probable prime), 1 composite verdict or failed audit,
//! 2 usage errors, 3 library errors. Every randomized command takes
//! `--seed`; without one a seed is drawn from entropy and echoed on
//! standard error so the run can be reproduced.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng as _;

use zdeep_cli::drivers::{enumerate_parallel, simulate_parallel};
use zdeep_cli::formats::{
    records_to_csv, render_depth_table, simulation_to_csv, values_to_bfile,
};
use zdeep_core::arith::rational_to_f64;
use zdeep_core::carmichael::{
    build_depth_table, divisor_bound_audit, enumerate_products, ingest_oeis_bfile, ratio_report,
    SieveConfig,
};
use zdeep_core::local_model::exact_korselt_prob;
use zdeep_core::primality::run_test;
use zdeep_core::stats::{erdos_kac_lambda, truncated_moments, PoissonModel};
use zdeep_core::{DepthRecord, Error, TestKind, TestOutcome};

#[derive(Parser)]
#[command(name = "zdeep", version, about = "z-deep primality tests and Carmichael depth analysis")]
struct Cli {
    /// Worker threads for enumeration and simulation (default: all cores).
    /// Results never depend on this.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    /// Fermat test
    Fermat,
    /// Solovay-Strassen
    Solovay,
    /// Full Miller-Rabin
    Mr,
    /// Depth-limited Miller-Rabin (needs --z)
    Zmr,
    /// a^((n-1)/2) = +-1 variant
    Z1,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Segmented smallest-prime-factor sieve
    Sieve,
    /// Prime-products search (reaches far beyond sieve scale)
    Products,
}

#[derive(Args)]
struct Source {
    /// Read Carmichael numbers from an OEIS b-file.
    #[arg(long, conflicts_with = "limit")]
    bfile: Option<PathBuf>,
    /// Enumerate Carmichael numbers up to this limit.
    #[arg(long)]
    limit: Option<u64>,
    /// Enumeration method used with --limit.
    #[arg(long, value_enum, default_value_t = Method::Sieve)]
    method: Method,
}

#[derive(Subcommand)]
enum Command {
    /// Run a probabilistic primality test on one number.
    Test {
        n: u64,
        #[arg(long, value_enum, default_value_t = Algo::Mr)]
        algo: Algo,
        /// Window depth for --algo zmr.
        #[arg(long)]
        z: Option<u32>,
        #[arg(long, default_value_t = 40)]
        rounds: u32,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Enumerate Carmichael numbers and emit their depth records.
    Enumerate {
        #[arg(long)]
        limit: u64,
        #[arg(long, value_enum, default_value_t = Method::Sieve)]
        method: Method,
        /// Write the records CSV here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also write the plain values as an OEIS-style b-file.
        #[arg(long)]
        bfile: Option<PathBuf>,
        /// Odd numbers per sieve segment.
        #[arg(long)]
        segment_len: Option<usize>,
        /// Override the configured sieve cap.
        #[arg(long)]
        max_limit: Option<u64>,
    },
    /// Show the depth record of a single Carmichael number.
    Depth { n: u64 },
    /// Cumulative depth-by-prime-factor-count table.
    DepthTable {
        #[command(flatten)]
        source: Source,
        /// Rows to render (default: deepest observed).
        #[arg(long)]
        max_z: Option<u32>,
        /// Also write the records CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Append observed C_z/C ratios against 2^-z.
        #[arg(long)]
        ratios: bool,
    },
    /// Audit the divisor bound 1 + x/(2^z k f(k)) over small k.
    CheckBound {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1000)]
        k_max: u64,
        #[arg(long, default_value_t = 4)]
        z_max: u32,
        /// Bound parameter x (default: the source's coverage).
        #[arg(long)]
        x: Option<u64>,
    },
    /// Exact or simulated 2-Korselt probability for r-tuples.
    KorseltProb {
        #[arg(long)]
        r: u32,
        /// Print the exact rational probability.
        #[arg(long)]
        exact: bool,
        /// Monte Carlo with this many samples.
        #[arg(long, value_name = "SAMPLES")]
        simulate: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 8)]
        max_z: u32,
    },
    /// Monte Carlo over random odd 2-adic r-tuples (CSV report).
    Simulate {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 8)]
        max_z: u32,
    },
    /// Truncated-Poisson prime-factor-count prediction.
    Poisson {
        /// Size of the numbers being modeled.
        #[arg(long, conflicts_with = "lambda")]
        n: Option<f64>,
        /// Poisson mean, given directly.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 3)]
        threshold: u32,
    },
    /// Validate an OEIS b-file and emit its depth records.
    Ingest {
        #[arg(long)]
        bfile: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

enum CliError {
    Usage(String),
    Io(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io(msg) => write!(f, "{msg}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Use the given seed, or draw one from entropy and echo it for
/// reproduction.
fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let seed: u64 = rand::rng().random();
        eprintln!("seed: {seed}");
        seed
    })
}

fn sieve_config(segment_len: Option<usize>, max_limit: Option<u64>) -> SieveConfig {
    let mut config = SieveConfig::default();
    if let Some(len) = segment_len {
        config.segment_len = len;
    }
    if let Some(cap) = max_limit {
        config.max_limit = cap;
    }
    config
}

fn records_by_method(limit: u64, method: Method) -> Result<Vec<DepthRecord>, CliError> {
    match method {
        Method::Sieve => Ok(enumerate_parallel(limit, &SieveConfig::default())?),
        Method::Products => enumerate_products(limit)?
            .into_iter()
            .map(|n| DepthRecord::of(n).map_err(CliError::from))
            .collect(),
    }
}

impl Source {
    fn load(&self) -> Result<Vec<DepthRecord>, CliError> {
        match (&self.bfile, self.limit) {
            (Some(path), None) => ingest_oeis_bfile(&read_file(path)?)?
                .into_iter()
                .map(|n: u64| DepthRecord::of(n).map_err(CliError::from))
                .collect(),
            (None, Some(limit)) => records_by_method(limit, self.method),
            _ => Err(usage("exactly one of --bfile and --limit is required")),
        }
    }

    /// The range the loaded records are known to cover.
    fn coverage(&self, records: &[DepthRecord]) -> u64 {
        self.limit
            .unwrap_or_else(|| records.last().map_or(0, |rec| rec.n))
    }
}

fn emit_records(
    records: &[DepthRecord],
    csv: Option<&Path>,
    bfile: Option<&Path>,
) -> Result<(), CliError> {
    let rendered = records_to_csv(records);
    match csv {
        Some(path) => write_file(path, &rendered)?,
        None => print!("{rendered}"),
    }
    if let Some(path) = bfile {
        let values: Vec<u64> = records.iter().map(|rec| rec.n).collect();
        write_file(path, &values_to_bfile(&values))?;
    }
    Ok(())
}

fn cmd_test(
    n: u64,
    algo: Algo,
    z: Option<u32>,
    rounds: u32,
    seed: Option<u64>,
) -> Result<u8, CliError> {
    let kind = match (algo, z) {
        (Algo::Zmr, Some(z)) => TestKind::ZDeepMillerRabin(z),
        (Algo::Zmr, None) => return Err(usage("--algo zmr requires --z")),
        (_, Some(_)) => return Err(usage("--z only applies to --algo zmr")),
        (Algo::Fermat, None) => TestKind::Fermat,
        (Algo::Solovay, None) => TestKind::SolovayStrassen,
        (Algo::Mr, None) => TestKind::MillerRabin,
        (Algo::Z1, None) => TestKind::ZOneSolovayVariant,
    };
    let seed = resolve_seed(seed);
    match run_test(n, kind, rounds, seed)? {
        TestOutcome::ProbablyPrime => {
            println!("probably-prime");
            Ok(0)
        }
        TestOutcome::Composite => {
            println!("composite");
            Ok(1)
        }
    }
}

fn cmd_depth_table(
    source: &Source,
    max_z: Option<u32>,
    csv: Option<&Path>,
    ratios: bool,
) -> Result<u8, CliError> {
    let records = source.load()?;
    let max_z = max_z.unwrap_or_else(|| {
        records
            .iter()
            .map(|rec| rec.exact_depth)
            .max()
            .unwrap_or(0)
    });
    let table = build_depth_table(&records, max_z);
    print!("{}", render_depth_table(&table));
    if ratios {
        for line in ratio_report(&table) {
            println!(
                "z={} count={} ratio={:.6} conjectured={:.6}",
                line.z, line.count, line.observed, line.conjectured
            );
        }
    }
    if let Some(path) = csv {
        write_file(path, &records_to_csv(&records))?;
    }
    Ok(0)
}

fn cmd_check_bound(
    source: &Source,
    k_max: u64,
    z_max: u32,
    x: Option<u64>,
) -> Result<u8, CliError> {
    let records = source.load()?;
    let x = x.unwrap_or_else(|| source.coverage(&records));
    let mut violations = 0u64;
    for k in 2..=k_max {
        for z in 0..=z_max {
            let audit = divisor_bound_audit(&records, x, k, z)?;
            if audit.violated() {
                violations += 1;
                println!(
                    "VIOLATION k={k} z={z} observed={} bound={}",
                    audit.observed, audit.bound
                );
            }
        }
    }
    println!("checked k in [2, {k_max}], z in [0, {z_max}], x = {x}: {violations} violations");
    Ok(if violations == 0 { 0 } else { 1 })
}

fn cmd_korselt_prob(
    r: u32,
    exact: bool,
    simulate: Option<u64>,
    seed: Option<u64>,
    max_z: u32,
) -> Result<u8, CliError> {
    if r == 0 {
        return Err(usage("--r must be at least 1"));
    }
    match (exact, simulate) {
        (true, None) => {
            let p = exact_korselt_prob(r);
            println!("{} = {:.6}", p, rational_to_f64(&p));
            Ok(0)
        }
        (false, Some(samples)) => cmd_simulate(r, samples, seed, max_z),
        _ => Err(usage("exactly one of --exact and --simulate is required")),
    }
}

fn cmd_simulate(r: u32, samples: u64, seed: Option<u64>, max_z: u32) -> Result<u8, CliError> {
    if r == 0 {
        return Err(usage("--r must be at least 1"));
    }
    let seed = resolve_seed(seed);
    let stats = simulate_parallel(r, samples, seed, max_z)?;
    print!("{}", simulation_to_csv(&stats));
    Ok(0)
}

fn cmd_poisson(n: Option<f64>, lambda: Option<f64>, threshold: u32) -> Result<u8, CliError> {
    let lambda = match (n, lambda) {
        (Some(n), None) => erdos_kac_lambda(n)?,
        (None, Some(lambda)) => lambda,
        _ => return Err(usage("exactly one of --n and --lambda is required")),
    };
    let model = PoissonModel::new(lambda, threshold)?;
    let moments = truncated_moments(&model);
    println!("lambda: {lambda:.6}");
    println!("partial_mean: {:.6}", moments.partial_mean);
    println!("tail_prob: {:.6}", moments.tail_prob);
    println!("conditional_mean: {:.6}", moments.conditional_mean);
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Test {
            n,
            algo,
            z,
            rounds,
            seed,
        } => cmd_test(n, algo, z, rounds, seed),
        Command::Enumerate {
            limit,
            method,
            csv,
            bfile,
            segment_len,
            max_limit,
        } => {
            let records = match method {
                Method::Sieve => {
                    enumerate_parallel(limit, &sieve_config(segment_len, max_limit))?
                }
                Method::Products => records_by_method(limit, Method::Products)?,
            };
            emit_records(&records, csv.as_deref(), bfile.as_deref())?;
            eprintln!("{} carmichael numbers <= {limit}", records.len());
            Ok(0)
        }
        Command::Depth { n } => {
            let rec = DepthRecord::of(n)?;
            println!("n: {}", rec.n);
            println!("factors: {}", rec.factors);
            println!("num_prime_factors: {}", rec.num_prime_factors);
            println!("nu2_n_minus_1: {}", rec.nu2_n_minus_1);
            println!("max_nu2_p_minus_1: {}", rec.max_nu2_p_minus_1);
            println!("exact_depth: {}", rec.exact_depth);
            Ok(0)
        }
        Command::DepthTable {
            source,
            max_z,
            csv,
            ratios,
        } => cmd_depth_table(&source, max_z, csv.as_deref(), ratios),
        Command::CheckBound {
            source,
            k_max,
            z_max,
            x,
        } => cmd_check_bound(&source, k_max, z_max, x),
        Command::KorseltProb {
            r,
            exact,
            simulate,
            seed,
            max_z,
        } => cmd_korselt_prob(r, exact, simulate, seed, max_z),
        Command::Simulate {
            r,
            samples,
            seed,
            max_z,
        } => cmd_simulate(r, samples, seed, max_z),
        Command::Poisson {
            n,
            lambda,
            threshold,
        } => cmd_poisson(n, lambda, threshold),
        Command::Ingest { bfile, csv } => {
            let values = ingest_oeis_bfile(&read_file(&bfile)?)?;
            let records = values
                .into_iter()
                .map(|n| DepthRecord::of(n).map_err(CliError::from))
                .collect::<Result<Vec<_>, _>>()?;
            emit_records(&records, csv.as_deref(), None)?;
            eprintln!("{} values validated", records.len());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: cannot size worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(3)
        }
    }
}
