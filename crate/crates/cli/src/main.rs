mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, OutputArgs};
use commands::CliError;

fn output_args(c: &Command) -> &OutputArgs {
    match c {
        Command::Dims(a) => &a.out,
        Command::Nichols(a) => &a.out,
        Command::Compare(a) => &a.out,
        Command::Factor(a) => &a.out,
        Command::Ybe(a) => &a.out,
    }
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    let out = output_args(&cli.command);
    if let Some(w) = out.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w as usize)
            .build_global()
            .map_err(|e| CliError::Internal(format!("cannot start worker pool: {e}")))?;
    }
    let report = match &cli.command {
        Command::Dims(a) => commands::dims(a)?,
        Command::Nichols(a) => commands::nichols(a)?,
        Command::Compare(a) => commands::compare(a)?,
        Command::Factor(a) => commands::factor(a)?,
        Command::Ybe(a) => commands::ybe(a)?,
    };
    let text = report.render();
    match &out.output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe is not worth a panic.
            let _ = stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush());
        }
    }
    if let Some(msg) = &report.message {
        if out.output.is_some() || out.format != args::Format::Human {
            eprintln!("{msg}");
        }
    }
    Ok(report.status.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            if e.exit_code() == 2 {
                eprintln!("run `fkalg --help` for usage");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
