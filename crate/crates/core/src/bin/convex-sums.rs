use std::io::{self, BufWriter, IsTerminal, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use convex_sums::cli::{
    cmd_alzer, cmd_bounds, cmd_sums, cmd_verify, exit_code, parse_n_grid, parse_r_grid,
    RecordFilter, RunConfig,
};
use convex_sums::report::OutputFormat;
use convex_sums::verify::{Suite, SuiteConfig};
use convex_sums::{Error, Result};

/// Endpoint Riemann sums of convex and concave functions, their recursive
/// bounds, and refined Alzer inequalities for power sums.
#[derive(Parser, Debug)]
#[command(name = "convex-sums", version)]
struct Cli {
    /// Numeric mode: exact rationals or binary64 floats.
    #[arg(long, global = true, env = "CONVEX_SUMS_MODE", default_value = "float")]
    mode: String,

    /// Comparison tolerance; must be positive in float mode and 0 in exact mode.
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Float precision in bits (only 53 is available).
    #[arg(long, global = true)]
    precision: Option<u32>,

    /// Largest denominator, in decimal digits, allowed in exact mode.
    #[arg(long, global = true)]
    max_denominator_digits: Option<u64>,

    /// Output format: human, jsonl or csv. Defaults to human on a terminal, jsonl otherwise.
    #[arg(long, global = true)]
    format: Option<String>,

    /// Seed reserved for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Right and left endpoint sums with the difference-identity residual.
    Sums {
        spec: String,
        #[arg(long, default_value = "1..100")]
        n: String,
    },
    /// Recursive bounds on A_n, B_n and caps on A_{n+1}, B_{n+1}.
    Bounds {
        spec: String,
        #[arg(long, default_value = "1..100")]
        n: String,
    },
    /// Alzer ratio with its classical and refined bounds.
    Alzer {
        #[arg(long, default_value = "1..100")]
        n: String,
        #[arg(long, default_value = "1,2,3,0.5")]
        r: String,
    },
    /// Runs a verification suite: theorem21, corollary22, corollary23, identities or all.
    Verify {
        suite: String,
        /// Records to print besides the summary: none, violations or all.
        #[arg(long, default_value = "violations")]
        records: String,
    },
}

fn run(cli: Cli) -> Result<i32> {
    let format = match &cli.format {
        Some(f) => f.parse()?,
        None if io::stdout().is_terminal() => OutputFormat::HumanTable,
        None => OutputFormat::JsonLines,
    };
    let config = RunConfig::new(
        &cli.mode,
        cli.tolerance,
        cli.precision,
        cli.max_denominator_digits,
        format,
        cli.seed,
    )?;
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::InvalidArgument(format!("cannot set thread count: {e}")))?;
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match &cli.command {
        Command::Sums { spec, n } => cmd_sums(spec, &parse_n_grid(n)?, &config, &mut out)?,
        Command::Bounds { spec, n } => cmd_bounds(spec, &parse_n_grid(n)?, &config, &mut out)?,
        Command::Alzer { n, r } => {
            cmd_alzer(&parse_n_grid(n)?, &parse_r_grid(r)?, &config, &mut out)?
        }
        Command::Verify { suite, records } => {
            let suite: Suite = suite.parse()?;
            let filter: RecordFilter = records.parse()?;
            cmd_verify(suite, &SuiteConfig::default(), filter, &config, &mut out)?
        }
    };
    out.flush()
        .map_err(|e| Error::InvalidArgument(format!("cannot write output: {e}")))?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
