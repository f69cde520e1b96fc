//! Command-line front end for the `cogcap` library.

use std::ffi::OsString;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{cmd_capacity, cmd_rate_curve, cmd_sweep, cmd_verify, Outcome};
pub use config::{ChannelConfig, CommonArgs, Format, UnitTag};
pub use error::{exit, CliError};
pub use output::{Body, OutputRecord, Quantity};

#[derive(Debug, Parser)]
#[command(
    name = "cogcap",
    version,
    about = "Capacity of the Gaussian channel with correlated state information"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Capacity, achievability and converse values, and the optimal alpha
    Capacity(CommonArgs),
    /// Achievable rate over a grid of alpha values
    RateCurve(commands::RateCurveArgs),
    /// Capacity over a grid of one parameter, optionally for several curves
    Sweep(commands::SweepArgs),
    /// Monte Carlo check of every closed-form quantity
    Verify(commands::VerifyArgs),
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Capacity(a) => cmd_capacity(a),
        Command::RateCurve(a) => cmd_rate_curve(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

/// What the binary prints and returns for `args` (including the program name).
#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: u8,
}

pub fn run_args<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Invocation {
                    stdout: String::new(),
                    stderr: text,
                    exit_code: exit::INVALID_INPUT,
                }
            } else {
                Invocation {
                    stdout: text,
                    stderr: String::new(),
                    exit_code: exit::SUCCESS,
                }
            };
        }
    };
    match run(&cli) {
        Ok(o) => Invocation {
            stdout: o.stdout,
            stderr: String::new(),
            exit_code: o.exit_code,
        },
        Err(e) => Invocation {
            stdout: String::new(),
            stderr: format!("error: {}\n", e.message.replace('\n', " ")),
            exit_code: e.exit_code,
        },
    }
}
