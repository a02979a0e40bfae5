use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quasi_feynman::experiment::{random_hermitian, run_sweep, ConvergenceReport, SweepConfig};
use quasi_feynman::families::{check_tangency, default_tangency_tol, make_family, DEFAULT_TANGENCY_GRID};
use quasi_feynman::{Error, FamilyKind};

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "quasi-feynman", version, about = "Quasi-Feynman propagator sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a convergence sweep and write the CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output.csv_path`; without either the CSV goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a sweep and print the fitted convergence order per method.
    Compare {
        #[arg(long)]
        config: PathBuf,
    },
    /// Check a built-in family over a random Hermitian generator.
    CheckTangency {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn exit_for(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::Config(_) | Error::InvalidArgument(_) => ExitCode::from(EXIT_CONFIG),
        _ => ExitCode::from(EXIT_NUMERICAL),
    }
}

fn report_failures(report: &ConvergenceReport) -> ExitCode {
    for f in &report.failures {
        eprintln!("failed cell: method={} n={}: {}", f.method, f.n, f.reason);
    }
    if report.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NUMERICAL)
    }
}

fn sweep(config: PathBuf, out: Option<PathBuf>) -> Result<ExitCode, Error> {
    let cfg = SweepConfig::load(&config)?;
    let report = run_sweep(&cfg)?;
    match out.or_else(|| cfg.output.csv_path.clone()) {
        Some(path) => {
            report.write_csv(&path)?;
            eprintln!("wrote {} rows to {}", report.rows.len(), path.display());
        }
        None => report.write_csv_to(std::io::stdout().lock())?,
    }
    Ok(report_failures(&report))
}

fn compare(config: PathBuf) -> Result<ExitCode, Error> {
    let cfg = SweepConfig::load(&config)?;
    let report = run_sweep(&cfg)?;
    println!("{:<12} {:>8} {:>14}", "method", "order", "final_error");
    for (method, order) in &report.fitted_orders {
        let order = order.map_or_else(|| "n/a".to_string(), |o| o.to_string());
        let last = report
            .rows_for(*method)
            .last()
            .map_or_else(|| "n/a".to_string(), |r| format!("{:.3e}", r.oracle_error));
        println!("{:<12} {:>8} {:>14}", method.name(), order, last);
    }
    Ok(report_failures(&report))
}

fn tangency(kind: &str, dim: usize, seed: u64) -> Result<ExitCode, Error> {
    let kind: FamilyKind = kind.parse()?;
    if dim == 0 {
        return Err(Error::InvalidArgument("dim must be at least 1".into()));
    }
    let l = random_hermitian(dim, &mut ChaCha8Rng::seed_from_u64(seed))?;
    let fam = make_family(kind, &l, DEFAULT_TANGENCY_GRID[0])?;
    let report = check_tangency(&fam, default_tangency_tol(&l), &DEFAULT_TANGENCY_GRID)?;
    println!("{report}");
    Ok(if report.tangent {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NUMERICAL)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Sweep { config, out } => sweep(config, out),
        Command::Compare { config } => compare(config),
        Command::CheckTangency { kind, dim, seed } => tangency(&kind, dim, seed),
    };
    outcome.unwrap_or_else(|e| exit_for(&e))
}
