use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use jackfac::{jack, Error, Partition, Result};
use jackfac_cli::cache::{Cache, CACHE_DIR_ENV};
use jackfac_cli::suites::{run_suite, Limits, Suite};
use jackfac_cli::{commands, Format};

/// Exact computations with Jack characters and checks of their factorization
/// properties.
#[derive(Parser)]
#[command(name = "jackfac", version)]
struct Cli {
    /// Output format; `pretty` for computations and `json` (JSON lines) for
    /// `verify` when omitted.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Directory of the on-disk result cache.
    #[arg(long, global = true, env = CACHE_DIR_ENV)]
    cache_dir: Option<PathBuf>,
    /// Worker threads for scans (defaults to the number of CPUs).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Largest diagram size for which Jack polynomials may be computed.
    #[arg(long, global = true, default_value_t = jack::DEFAULT_SIZE_BUDGET)]
    budget_size: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// J_lambda in the power-sum basis, with `a` standing for alpha.
    Jack { lambda: Partition },
    /// Ch_pi(lambda) as a Laurent polynomial in A.
    Char { pi: Partition, lambda: Partition },
    /// Ch_pi Ch_sigma expanded in the basis Ch_mu with coefficients in delta.
    Structure { pi: Partition, sigma: Partition },
    /// The disjoint cumulant of Ch_{pi_1}, .., Ch_{pi_l}.
    Cumulant {
        #[arg(required = true)]
        pis: Vec<Partition>,
    },
    /// Kerov-Lassalle polynomial of Ch_pi, or of the cumulant of several characters.
    Kl {
        #[arg(required = true)]
        pis: Vec<Partition>,
    },
    /// Runs a verification suite; exits with 1 when it finds violations.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long)]
        max_parts: Option<usize>,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        max: Option<usize>,
    },
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Error::InvalidInput(format!("--jobs: {e}")))?;
    }
    jack::set_size_budget(cli.budget_size);
    let cache = cli.cache_dir.map(Cache::open).transpose()?;
    if let Some(c) = &cache {
        jack::set_table_store(Some(Arc::new(c.clone())));
    }
    let cache = cache.as_ref();
    let pretty = cli.format.unwrap_or(Format::Pretty);

    let (text, code) = match cli.command {
        Command::Jack { lambda } => (commands::jack(&lambda, pretty)?, 0),
        Command::Char { pi, lambda } => (commands::character(&pi, &lambda, pretty)?, 0),
        Command::Structure { pi, sigma } => (commands::structure(&pi, &sigma, pretty, cache)?, 0),
        Command::Cumulant { pis } => (commands::cumulant(&pis, pretty, cache)?, 0),
        Command::Kl { pis } => (commands::kl(&pis, pretty, cache)?, 0),
        Command::Verify {
            suite,
            max_size,
            max_parts,
            rank,
            max,
        } => {
            let limits = Limits {
                max_size,
                max_parts,
                rank,
                max,
            };
            let run = run_suite(suite, limits, cache)?;
            let code = if run.violations() == 0 { 0 } else { 1 };
            (run.render(cli.format.unwrap_or(Format::Json))?, code)
        }
    };
    let mut stdout = std::io::stdout().lock();
    let newline = if text.ends_with('\n') { "" } else { "\n" };
    write!(stdout, "{text}{newline}").map_err(|e| Error::Io(format!("stdout: {e}")))?;
    Ok(ExitCode::from(code))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
