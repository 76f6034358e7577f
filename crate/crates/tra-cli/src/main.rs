//! `tra`: spectra, phase shifts, wavefunctions and polynomial tables from
//! the tridiagonal representation of Laguerre- and Jacobi-type ODEs.
//!
//! Exit status: 0 success, 1 configuration or domain error, 2 a verification
//! check outside tolerance.

mod commands;
mod config;
mod output;

use clap::Parser;
use commands::Failure;
use config::{Format, JobConfig};
use output::{emit, Diagnostic, Table};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "tra", version, about = "Series solutions through symmetric three-term recursions")]
struct Cli {
    #[command(flatten)]
    job: JobConfig,
}

fn load(flags: JobConfig) -> Result<JobConfig, String> {
    let mut cfg = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            JobConfig::merged(value, &flags)?
        }
        None => flags,
    };
    cfg.resolve_defaults()?;
    cfg.validate()?;
    Ok(cfg)
}

fn fail(cfg: &JobConfig, err: &Failure) -> ExitCode {
    eprintln!("error: {err}");
    if cfg.format() == Format::Json {
        let mut t = Table::new(&[]);
        t.diagnostics.push(Diagnostic::error(err.to_string()));
        let _ = emit(cfg, &t.render(cfg));
    }
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let flags = Cli::parse().job;
    let cfg = match load(flags.clone()) {
        Ok(c) => c,
        Err(e) => return fail(&flags, &Failure::Config(e)),
    };
    match commands::run(&cfg) {
        Ok((table, failed)) => {
            for d in &table.diagnostics {
                eprintln!("{}: {}", d.level, d.message);
            }
            if let Err(e) = emit(&cfg, &table.render(&cfg)) {
                eprintln!("error: IoError: {e}");
                return ExitCode::from(1);
            }
            if failed {
                eprintln!("error: VerificationFailed: a check is outside tolerance");
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => fail(&cfg, &e),
    }
}
