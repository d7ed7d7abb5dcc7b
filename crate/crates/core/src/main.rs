use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qwalk::commands::{cmd_analytic, cmd_classify, cmd_compare, cmd_simulate, cmd_sweep, cmd_trajectory};
use qwalk::io::config::classify_params;
use qwalk::io::{ConfigMap, OutputSpec, RunConfig, SweepConfig};
use qwalk::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "qwalk", version, about = "Quantum walks with a time-varying coin")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact walk; writes P, P^R, P^L matrices
    Simulate(Common),
    /// Airy-kernel continuum solution on a ξ grid
    Analytic(Common),
    /// Closed-form trajectory branches x±(τ)
    Trajectory(Common),
    /// Prints the chain class of a linear schedule
    Classify(Common),
    /// Compares simulated peaks with a trajectory file
    Compare {
        /// probability.csv from `simulate`
        sim_csv: PathBuf,
        /// trajectory.csv from `trajectory`
        trajectory_csv: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Classifies every (θ₀, ω) pair; --theta0/--omega take comma lists
    Sweep(Common),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// key = value configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    steps: Option<String>,
    /// Radians or a multiple of pi such as pi/60
    #[arg(long, allow_hyphen_values = true)]
    theta0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    /// constant, linear, sinusoidal or tabulated
    #[arg(long)]
    schedule: Option<String>,
    /// Output directory
    #[arg(long)]
    out: Option<String>,
    /// Comma list drawn from csv, json, pgm
    #[arg(long)]
    formats: Option<String>,
    #[arg(long)]
    grid_spacing: Option<String>,
    /// Gaussian width of the initial packet
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    /// Bessel-series truncation for sinusoidal trajectories
    #[arg(long)]
    kmax: Option<String>,
}

impl Common {
    fn load(&self, sweep: bool) -> Result<ConfigMap> {
        let mut map = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
                })?;
                ConfigMap::parse(&text).map_err(|e| match e {
                    Error::Parse { line, message } => {
                        Error::Parse { line, message: format!("{}: {message}", path.display()) }
                    }
                    other => other,
                })?
            }
            None => ConfigMap::default(),
        };
        let (theta_key, omega_key) = if sweep {
            ("sweep.theta0", "sweep.omega")
        } else {
            ("schedule.theta0", "schedule.omega")
        };
        let overrides = [
            ("steps", &self.steps),
            (theta_key, &self.theta0),
            (omega_key, &self.omega),
            ("schedule.kind", &self.schedule),
            ("output.dir", &self.out),
            ("output.formats", &self.formats),
            ("analytic.grid_spacing", &self.grid_spacing),
            ("analytic.w", &self.w),
            ("trajectory.k_max", &self.kmax),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                map.set(key, v.as_str());
            }
        }
        Ok(map)
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(c) => cmd_simulate(&RunConfig::from_map(&c.load(false)?)?).map(drop),
        Command::Analytic(c) => cmd_analytic(&RunConfig::from_map(&c.load(false)?)?).map(drop),
        Command::Trajectory(c) => cmd_trajectory(&RunConfig::from_map(&c.load(false)?)?).map(drop),
        Command::Classify(c) => {
            let (theta0, omega) = classify_params(&c.load(false)?)?;
            println!("{}", cmd_classify(theta0, omega)?);
            Ok(())
        }
        Command::Compare { sim_csv, trajectory_csv, common } => {
            let output = OutputSpec::from_map(&common.load(false)?)?;
            cmd_compare(&sim_csv, &trajectory_csv, &output).map(drop)
        }
        Command::Sweep(c) => cmd_sweep(&SweepConfig::from_map(&c.load(true)?)?).map(drop),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qwalk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
