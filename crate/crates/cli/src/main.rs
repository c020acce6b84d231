mod args;
mod commands;
mod config;
mod error;
mod input;
mod output;
mod svg;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command};
use error::{CliError, CliResult};
use output::{render, write_output};

fn run(argv: Vec<OsString>) -> CliResult<()> {
    let argv = config::expand(argv)?;
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { error::EXIT_VALIDATION } else { 0 });
        }
    };
    if let Some(threads) = cli.threads.filter(|t| *t > 0) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::validation(format!("--threads: {e}")))?;
    }
    let command = config::recorded_command(&argv);
    let (report, output, svg) = match &cli.command {
        Command::Depth(a) => (commands::depth::run(a, &command)?, &a.output, None),
        Command::Simulate(a) => (commands::simulate::run(a, &command)?, &a.output, a.svg.as_deref()),
        Command::Asym(a) => (commands::asym::run(a, &command)?, &a.output, None),
    };
    write_output(output.out.as_deref(), &render(&report, output.format))?;
    if let Some(path) = svg {
        write_output(Some(path), &report.plot.render(&report.meta))?;
    }
    Ok(())
}

fn main() {
    let code = match run(std::env::args_os().collect()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("geodepth: {e}");
            e.code
        }
    };
    std::process::exit(code);
}
