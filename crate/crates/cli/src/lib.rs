//! Command-line front end: configuration, result persistence and the
//! verification pipeline built on `trinoperm-core`.

pub mod args;
pub mod artifacts;
pub mod commands;
pub mod config;
pub mod error;
pub mod suites;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::Cli;
pub use commands::{Outcome, VerifyPlan};
pub use config::{FieldSpec, Format, RunConfig};
pub use error::{CliError, ExitStatus};

use args::Command;
use config::Overrides;

/// Resolves flags and the optional config file into a [`RunConfig`].
pub fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let file = match &cli.global.config {
        Some(path) => Overrides::from_file(path)?,
        None => Overrides::default(),
    };
    RunConfig::layered([&file, &cli.global.overrides()])
}

/// Runs a parsed command inside a pool of the configured size.
pub fn execute(cli: Cli) -> Result<Outcome, CliError> {
    let cfg = resolve_config(&cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::ThreadPool(e.to_string()))?;
    pool.install(|| match cli.command {
        Command::Field { cmd } => match cmd {
            args::FieldCmd::Info(field) => commands::field_info(&cfg, field),
        },
        Command::Pp { cmd } => commands::pp(&cfg, cmd),
        Command::Gnq { cmd } => commands::gnq(&cfg, cmd),
        Command::Verify { cmd } => commands::verify(&cfg, cmd),
    })
}

/// Parses and runs without printing; usage errors become [`CliError::Usage`].
pub fn execute_args<I, T>(args: I) -> Result<Outcome, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    execute(cli)
}

/// Parses `args`, runs, prints, and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitStatus::Pass.code(),
                _ => ExitStatus::Usage.code(),
            };
        }
    };
    match execute(cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            outcome.status.code()
        }
        Err(err) => {
            eprintln!("error: {err}");
            err.status().code()
        }
    }
}
