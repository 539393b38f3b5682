mod args;
mod commands;
mod output;

use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

use args::{resolve_out, Cli, Command, Format, RunConfig};

fn run(cli: Cli) -> Result<ExitCode> {
    let (name, figure, common) = match cli.command {
        Command::Calibrate(out) => {
            let format = out.format.unwrap_or(Format::Csv);
            let path = resolve_out(out.out, "calibrate", None, format);
            let (table, ok) = commands::calibrate()?;
            output::emit(&table.render(format), path.as_deref())?;
            if !ok {
                eprintln!(
                    "error: calibration deviation exceeds {:e}",
                    commands::CALIBRATION_LIMIT
                );
                return Ok(ExitCode::FAILURE);
            }
            return Ok(ExitCode::SUCCESS);
        }
        Command::Curve(c) => ("curve", None, c),
        Command::Tc(c) => ("tc", None, c),
        Command::Rho(c) => ("rho", None, c),
        Command::Sweep(c) => ("sweep", None, c),
        Command::Figure { id, common } => ("figure", Some(id), common),
    };
    let cfg = RunConfig::resolve(name, figure, &common)?;
    let table = commands::run(&cfg)?;
    output::emit(&table.render(cfg.output.format), cfg.output.path.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
