//! `backhaul`: command-line front end for the relay-chain planner.
//!
//! Exit codes: 0 success, 1 I/O, 2 usage or configuration, 3 infeasible
//! geometry or design, 4 numerical failure.

mod commands;
mod config;
mod error;
mod plot;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Context, Format};
use config::RunConfig;
use error::{io_error, CliError};

#[derive(Debug, Parser)]
#[command(name = "backhaul", version, about = "Plan and analyze vibrating mmWave relay chains")]
struct Cli {
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override the simulation seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the number of Monte Carlo trials.
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Override the vibration standard deviation, degrees.
    #[arg(long, global = true)]
    sigma_deg: Option<f64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the effective configuration as TOML.
    Config,
    /// Specific attenuation of oxygen and water vapour over frequency.
    Attenuation(commands::AttenuationArgs),
    /// Gain cut of a square array: exact, radial and staircase.
    Pattern(commands::PatternArgs),
    /// Closed-form outage of the configured plan, or a single-hop sweep.
    Outage(commands::OutageArgs),
    /// Monte Carlo outage estimate.
    Simulate(commands::SimulateArgs),
    /// Search for the fewest relays that meet the outage target.
    Optimize(commands::OptimizeArgs),
    /// Render a CSV from the other subcommands as SVG.
    Plot(plot::PlotArgs),
}

fn load(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.simulation.seed = s;
    }
    if let Some(t) = cli.trials {
        if t == 0 {
            return Err(CliError::Usage("--trials must be positive".into()));
        }
        cfg.simulation.trials = t;
    }
    if let Some(s) = cli.sigma_deg {
        cfg.vibration.sigma_theta_deg = s;
    }
    cfg.check()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Command::Plot(args) = &cli.command {
        return plot::plot(args, cli.out.as_deref());
    }
    let ctx = Context {
        cfg: load(&cli)?,
        out: cli.out,
        format: cli.format,
    };
    match &cli.command {
        Command::Config => {
            let text = ctx.cfg.to_toml();
            match &ctx.out {
                Some(p) => std::fs::write(p, text).map_err(io_error(p)),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Attenuation(a) => commands::attenuation(&ctx, a),
        Command::Pattern(a) => commands::pattern(&ctx, a),
        Command::Outage(a) => commands::outage(&ctx, a),
        Command::Simulate(a) => commands::simulate(&ctx, a),
        Command::Optimize(a) => commands::optimize(&ctx, a),
        Command::Plot(_) => unreachable!(),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
