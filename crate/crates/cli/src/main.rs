mod args;
mod commands;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::{CliError, Limits};
use report::Reporter;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    if let Some(j) = g.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(j as usize)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let out: Box<dyn Write> = match &g.output {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot open {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut rep = Reporter::new(out, g.format);
    let limits = Limits {
        size_cap: g.size_cap,
        a_cap: g.a_cap,
    };
    let result = commands::run(&cli.command, &limits, &mut rep).and_then(|()| Ok(rep.flush()?));
    match result {
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Ok(()) if rep.failures > 0 => ExitCode::from(1),
        Ok(()) => ExitCode::SUCCESS,
    }
}
