use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fracwalk_cli::commands::{self, parse_inv_h, parse_list};
use fracwalk_cli::config::{resolve_threads, THREADS_ENV};
use fracwalk_cli::output::{to_csv, write_rows};
use fracwalk_cli::reproduce::{render, reproduce, Settings, TABLES};
use fracwalk_cli::{checks, CliError, CliResult, RunConfig};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "fracwalk", version, about = "Walk-on-spheres and quadrature solvers for the fractional Poisson problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo estimates at the configured points.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        /// CSV, or JSON when the name ends in .json; overrides the config's `output`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quadrature value at a single step size.
    Quadrature {
        #[arg(long)]
        config: PathBuf,
        /// Step size as 1/N.
        #[arg(long)]
        h: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quadrature values, errors and rates over successively halved steps.
    Convergence {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 5)]
        levels: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mean walk length against the step bound on an (s, |x0|) grid.
    Steps {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "0.25,0.5,0.75")]
        s_grid: String,
        #[arg(long, default_value = "0,0.3,0.6")]
        radius_grid: String,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the built-in invariant checks.
    Checks,
    /// Reruns a reference table and compares column by column.
    Reproduce {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=12))]
        table: u8,
        /// 10⁵ walks per case instead of 10⁴.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn env_threads() -> Option<String> {
    std::env::var(THREADS_ENV).ok()
}

fn emit<T: Serialize>(rows: &[T], out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) => write_rows(p, rows),
        None => {
            print!("{}", to_csv(rows)?);
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Solve { config, samples, seed, threads, out } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(n) = samples {
                cfg.samples = n;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let prep = cfg.prepare()?;
            let threads = resolve_threads(threads, cfg.parallelism, env_threads().as_deref())?;
            let results = commands::solve(&prep, threads)?;
            for (row, sm) in &results {
                let err = sm.abs_error.map_or(String::new(), |e| format!("  |err| {e:.3e}"));
                eprintln!(
                    "{} x=({}) u≈{:.8} ± {:.2e}  steps {:.3}  capped {}{err}",
                    row.case_id, row.point, row.estimate, row.std_error, row.avg_steps, row.n_capped
                );
            }
            let rows: Vec<_> = results.into_iter().map(|(r, _)| r).collect();
            emit(&rows, out.or(cfg.output).as_deref())
        }
        Command::Quadrature { config, h, out } => {
            let prep = RunConfig::load(&config)?.prepare()?;
            emit(&commands::quadrature(&prep, parse_inv_h(&h)?)?, out.as_deref())
        }
        Command::Convergence { config, levels, out } => {
            let prep = RunConfig::load(&config)?.prepare()?;
            emit(&commands::convergence(&prep, levels)?, out.as_deref())
        }
        Command::Steps { config, s_grid, radius_grid, threads, out } => {
            let cfg = RunConfig::load(&config)?;
            let prep = cfg.prepare()?;
            let threads = resolve_threads(threads, cfg.parallelism, env_threads().as_deref())?;
            let rows =
                commands::steps(&prep, &parse_list(&s_grid, "--s-grid")?, &parse_list(&radius_grid, "--radius-grid")?, threads)?;
            emit(&rows, out.as_deref())
        }
        Command::Checks => {
            let results = checks::run_checks();
            for c in &results {
                println!("[{}] {} ({})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            let failed = results.iter().filter(|c| !c.pass).count();
            if failed > 0 {
                return Err(CliError::ChecksFailed(failed));
            }
            Ok(())
        }
        Command::Reproduce { table, full, threads, out } => {
            debug_assert!(TABLES.contains(&table));
            let threads = resolve_threads(threads, None, env_threads().as_deref())?;
            let rows = reproduce(table, Settings::new(full, threads))?;
            print!("{}", render(&rows));
            if let Some(p) = out {
                write_rows(&p, &rows)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
