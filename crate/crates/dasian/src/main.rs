use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dasian::{execute, parse_config, AppError, Verb};

#[derive(Parser)]
#[command(name = "dasian", version, about = "Price and check discretely sampled Asian options")]
struct Cli {
    #[command(subcommand)]
    verb: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Run configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to `[report] out`, then `out`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `[mc] seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Price at (0, x0) with every enabled engine and cross-check them.
    Price(Common),
    /// Run the regularity suites.
    Verify(Common),
    /// PDE convergence on aligned and misaligned time grids.
    Converge(Common),
}

fn run(verb: Verb, args: Common) -> Result<bool, AppError> {
    let text = std::fs::read_to_string(&args.config)?;
    let mut cfg = parse_config(&text)?;
    if let Some(seed) = args.seed {
        cfg.mc.seed = seed;
    }
    let out = args.out.or_else(|| cfg.out.as_ref().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("out"));
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| AppError::Refused(e.to_string()))?;
    let outcome = pool.install(|| execute(verb, &cfg, &out))?;
    print!("{}", outcome.summary);
    println!("reports written to {}", outcome.out_dir.display());
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (verb, args) = match cli.verb {
        Command::Price(a) => (Verb::Price, a),
        Command::Verify(a) => (Verb::Verify, a),
        Command::Converge(a) => (Verb::Converge, a),
    };
    match run(verb, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("dasian {verb}: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
