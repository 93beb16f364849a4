use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use polariton_wire::commands::{self, Overrides};
use polariton_wire::config::{Format, RunConfig};
use polariton_wire::Result;

/// Exciton wave packet transport in a disordered multimode polaritonic wire.
#[derive(Parser)]
#[command(name = "polwire", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ordered-system dispersion and effective group velocities.
    Dispersion(Args),
    /// One realization: observables, density profiles and fitted diagnostics.
    Propagate(Args),
    /// Disorder ensembles along the configured sweep axis.
    Sweep(Args),
    /// Bright modes, polariton gap and Rabi period against disorder.
    Signatures(Args),
}

#[derive(clap::Args)]
struct Args {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, replacing `output.directory`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Realizations per sweep point.
    #[arg(long)]
    realizations: Option<usize>,
    /// Worker threads for ensembles.
    #[arg(long)]
    threads: Option<usize>,
    /// Upper end of the ballistic fit window.
    #[arg(long)]
    fit_window_fs: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn run(cli: Cli) -> Result<()> {
    let (Command::Dispersion(args)
    | Command::Propagate(args)
    | Command::Sweep(args)
    | Command::Signatures(args)) = &cli.command;
    let overrides = Overrides {
        out: args.out.clone(),
        seed: args.seed,
        realizations: args.realizations,
        threads: args.threads,
        fit_window_fs: args.fit_window_fs,
        format: args.format.map(|f| match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }),
    };
    let mut cfg = RunConfig::from_path(&args.config)?;
    overrides.apply(&mut cfg)?;
    let stdout = &mut std::io::stdout().lock();
    match cli.command {
        Command::Dispersion(_) => commands::dispersion(&cfg, stdout),
        Command::Propagate(_) => commands::propagate(&cfg, stdout).map(drop),
        Command::Sweep(_) => commands::sweep(&cfg, overrides.threads, stdout).map(drop),
        Command::Signatures(_) => commands::signatures(&cfg, overrides.threads, stdout).map(drop),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("polwire: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
