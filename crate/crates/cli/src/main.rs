use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use deltachain_cli::{configure_threads, run, table, Cli, CliError};

fn execute(cli: &Cli) -> Result<(), CliError> {
    configure_threads()?;
    let table = run(cli)?;
    // Render fully before touching the destination, so failures leave no partial file.
    let mut buf = Vec::new();
    table::write(&table, cli.common.format, &mut buf)?;
    match &cli.common.out {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            out.write_all(&buf)?;
            out.flush()?;
        }
        None => io::stdout().lock().write_all(&buf)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.name());
            eprintln!("{e}");
            ExitCode::FAILURE
        }
    }
}
