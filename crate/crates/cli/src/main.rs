use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use pentachain_cli::{run, Cli, CliError};

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    let (text, err) = match result {
        Ok(text) => (Some(text), None),
        Err(CliError::Mismatch { output, detail }) => {
            (Some(output.clone()), Some(CliError::Mismatch { output, detail }))
        }
        Err(e) => (None, Some(e)),
    };
    if let Some(text) = text {
        if let Err(e) = emit(&cli, &text) {
            eprintln!("error: cannot write output: {}", e);
            return ExitCode::from(1);
        }
    }
    match err {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("{}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
