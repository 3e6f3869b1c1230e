mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{load_config, merge, Cli, Command};
use commands::Sink;
use error::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Param("threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Param(format!("cannot set thread count: {e}")))?;
    }
    let config = cli.config.as_deref().map(load_config).transpose()?;
    let config = config.as_ref();
    let sink = Sink { dir: cli.out, format: cli.format };
    let written = match cli.command {
        Command::Sample(a) => commands::sample(merge(&a, config)?, &sink)?,
        Command::Kernel(a) => commands::kernel(merge(&a, config)?, &sink)?,
        Command::Phase(a) => commands::phase(merge(&a, config)?, &sink)?,
        Command::Edge(a) => commands::edge(merge(&a, config)?, &sink)?,
        Command::Verify(a) => commands::verify(merge(&a, config)?, &sink)?,
    };
    for path in written {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bgue: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
