use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ntbench_cli::{run, Cli, CliError, WorkbenchConfig};

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let cfg = match &cli.config {
        Some(p) => {
            log::debug!("loading config {}", p.display());
            WorkbenchConfig::load(p)?
        }
        None => WorkbenchConfig::default(),
    };
    let out = run(&cfg, cli.seed, &cli.command)?;
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match &cli.out {
        Some(p) => std::fs::write(p, &out.json).map_err(io)?,
        None => std::io::stdout().write_all(out.json.as_bytes()).map_err(io)?,
    }
    if let (Some(p), Some(csv)) = (&cli.csv, &out.csv) {
        std::fs::write(p, csv).map_err(io)?;
    }
    if out.status != 0 {
        eprintln!("certificate violated; see the report");
    }
    Ok(out.status)
}
