//! `carnot47` command-line front end.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::Failure;
use crate::config::Config;

#[derive(Debug, Parser)]
#[command(name = "carnot47", version, about = "Sub-Riemannian geodesics on the (4,7) Carnot group")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// RNG seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Newton / endpoint tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Relative collinearity tolerance for C_n membership.
    #[arg(long, global = true)]
    collinearity_tol: Option<f64>,
    /// Output file (default: standard output).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a geodesic as a CSV trajectory and classify it.
    Geodesic(commands::GeodesicArgs),
    /// Solve for a geodesic from the origin to an endpoint.
    Connect(commands::ConnectArgs),
    /// Report the class and cut time of a geodesic.
    Cut(commands::CutArgs),
    /// Sample the unit sphere at time 1.
    Sphere(commands::SphereArgs),
    /// Run the numerical verification suite.
    Verify(commands::VerifyArgs),
}

fn configure(global: &GlobalArgs) -> Result<Config, Failure> {
    let mut cfg = Config::load(global.config.as_deref()).map_err(Failure::Usage)?;
    if let Some(seed) = global.seed {
        cfg.seed = seed;
    }
    if let Some(tol) = global.tol {
        cfg.tolerances.newton = tol;
    }
    if let Some(tol) = global.collinearity_tol {
        cfg.tolerances.collinearity = tol;
    }
    cfg.validate().map_err(Failure::Usage)?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = configure(&cli.global)?;
    let out = cli.global.out.as_deref();
    match &cli.command {
        Command::Geodesic(args) => commands::geodesic(&cfg, args, out),
        Command::Connect(args) => commands::connect(&cfg, args, out),
        Command::Cut(args) => commands::cut(&cfg, args, out),
        Command::Sphere(args) => commands::sphere(&cfg, args, out),
        Command::Verify(args) => commands::verify(&cfg, args, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { commands::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
