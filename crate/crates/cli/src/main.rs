use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;

use config::RunConfig;

/// Verify that bounded Euler classes pulled back to ℤ recover rotation numbers.
#[derive(Debug, Parser)]
#[command(name = "rotlab", version)]
struct Cli {
    /// TOML run configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base seed; case i of a random suite uses seed + i.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Pass threshold for the distance between class and rotation number.
    #[arg(long, global = true)]
    tol_diff: Option<f64>,
    /// Directory for reports and tables.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Circle homeomorphisms: class of the pulled-back Euler cocycle vs ρ.
    Ghys(GhysArgs),
    /// Symplectic matrices: class of the pulled-back bounded Euler cocycle vs ρ.
    Sp(SpArgs),
    /// Translation-number estimates at k = 1, 2, 4, …, k_max as CSV.
    Converge(ConvergeArgs),
}

#[derive(Debug, Args)]
struct GhysArgs {
    /// Lift specifications: rigid:α, arnold:ω:K or pl:FILE.
    #[arg(long = "spec", required = true, num_args = 1..)]
    specs: Vec<String>,
    #[arg(long)]
    window: Option<u64>,
    #[arg(long = "N")]
    n: Option<u64>,
    /// Iterations for the Poincaré rotation number.
    #[arg(long)]
    n_iter: Option<u64>,
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
struct SpSource {
    /// Random matrices, e.g. `n=1,count=50` or `n=2,count=20,scale=0.5`.
    #[arg(long, group = "source")]
    random: Option<String>,
    /// Matrix files with whitespace-separated rows.
    #[arg(long = "matrix", group = "source", num_args = 1..)]
    matrices: Vec<PathBuf>,
}

#[derive(Debug, Args)]
struct SpArgs {
    #[command(flatten)]
    source: SpSource,
    #[arg(long)]
    kmax: Option<u64>,
    #[arg(long)]
    window: Option<u64>,
    #[arg(long = "N")]
    n: Option<u64>,
}

#[derive(Debug, Args)]
#[group(id = "target", required = true, multiple = false)]
struct ConvergeTarget {
    #[arg(long, group = "target")]
    spec: Option<String>,
    #[arg(long, group = "target")]
    matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    #[command(flatten)]
    target: ConvergeTarget,
    #[arg(long)]
    kmax: Option<u64>,
}

fn build_config(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(tol) = cli.tol_diff {
        cfg.tolerances.diff_mod1 = tol;
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    let set = |slot: &mut u64, v: Option<u64>| {
        if let Some(v) = v {
            *slot = v;
        }
    };
    match &cli.command {
        Command::Ghys(a) => {
            set(&mut cfg.window, a.window);
            set(&mut cfg.n, a.n);
            set(&mut cfg.n_iter_circle, a.n_iter);
        }
        Command::Sp(a) => {
            set(&mut cfg.k_max, a.kmax);
            set(&mut cfg.window, a.window);
            set(&mut cfg.n, a.n);
        }
        Command::Converge(a) => set(&mut cfg.k_max, a.kmax),
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = build_config(&cli).and_then(|cfg| match &cli.command {
        Command::Ghys(a) => commands::ghys(&cfg, &a.specs),
        Command::Sp(a) => {
            let source = match &a.source.random {
                Some(r) => commands::SpInput::Random(commands::parse_random(r)?),
                None => commands::SpInput::Files(a.source.matrices.clone()),
            };
            commands::sp(&cfg, source)
        }
        Command::Converge(a) => {
            let target = match (&a.target.spec, &a.target.matrix) {
                (Some(s), _) => commands::ConvergeInput::Spec(s.clone()),
                (None, Some(m)) => commands::ConvergeInput::Matrix(m.clone()),
                (None, None) => unreachable!("clap enforces one target"),
            };
            commands::converge(&cfg, target)
        }
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
