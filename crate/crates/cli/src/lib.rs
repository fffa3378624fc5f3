//! Command-line front end for `pentachain`.
//!
//! Exit codes: 0 success, 2 usage, 3 engine disagreement, 4 formula mismatch
//! (1 is reserved for I/O failures).

pub mod args;
pub mod commands;
pub mod config;

use std::fmt;

pub use args::Cli;
use args::Command;
pub use config::RunConfig;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Disagreement(String),
    /// The report is still written before exiting.
    Mismatch {
        output: String,
        detail: String,
    },
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Disagreement(_) => 3,
            CliError::Mismatch { .. } => 4,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {}", m),
            CliError::Disagreement(m) => write!(f, "engine disagreement: {}", m),
            CliError::Mismatch { detail, .. } => write!(f, "formula mismatch: {}", detail),
            CliError::Failure(m) => write!(f, "error: {}", m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<pentachain::Error> for CliError {
    fn from(e: pentachain::Error) -> Self {
        use pentachain::Error as E;
        match e {
            E::EngineDisagreement(_) | E::LaplacianResidual(_) | E::SingularLaplacian => {
                CliError::Disagreement(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// Executes a parsed command line and returns what should be written out.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let ctx = commands::Context {
        enum_cap: cli.enum_cap.unwrap_or_else(pentachain::chain::enumeration_cap),
        workers: args::default_workers(),
    };
    if cli.print_config {
        eprintln!("{}", RunConfig::from_cli(cli, ctx.enum_cap, ctx.workers).to_json());
    }
    match &cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Indices(a) => commands::indices(a),
        Command::Report(a) => commands::report(a, &ctx),
        Command::Distribution(a) => commands::distribution(a, &ctx),
        Command::Sample(a) => commands::sample(a, &ctx),
        Command::Normality(a) => commands::normality(a, &ctx),
        Command::Matrix(a) => commands::matrix(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_stable() {
        assert_eq!(CliError::Usage(String::new()).exit_code(), 2);
        assert_eq!(CliError::Disagreement(String::new()).exit_code(), 3);
        assert_eq!(CliError::Mismatch { output: String::new(), detail: String::new() }.exit_code(), 4);
        assert_eq!(CliError::from(pentachain::Error::EngineDisagreement("x".into())).exit_code(), 3);
        assert_eq!(CliError::from(pentachain::Error::InvalidPentagonCount(0)).exit_code(), 2);
    }
}
