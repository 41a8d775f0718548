//! `wavebeam` command-line runner.
//!
//! Exit codes: 0 when every check of the run holds, 1 when a check fails,
//! 2 for configuration and I/O errors. The JSON report (or error report) goes
//! to stdout; the report is also written to `report.json` in the output
//! directory.

mod commands;
mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use wavebeam::checks::CHECKS;

use commands::{CliError, ErrorKind, Report};
use config::RunConfig;

#[derive(Debug, Parser)]
#[command(
    name = "wavebeam",
    version,
    about = "Schrödinger and Euler–Bernoulli equivalence experiments"
)]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true, env = "WAVEBEAM_CONFIG")]
    config: Option<PathBuf>,

    /// Output directory for reports and artifacts.
    #[arg(long, global = true, env = "WAVEBEAM_OUT")]
    out: Option<PathBuf>,

    /// Seed for generated initial data.
    #[arg(long, global = true, env = "WAVEBEAM_SEED")]
    seed: Option<u64>,

    /// Print every acceptance check with its tolerance and exit.
    #[arg(long)]
    list_checks: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Schrödinger flow against two coupled beams.
    VerifyEquivalence,
    /// Energy conservation of the exact and leapfrog (u, v) flows.
    Symplectic,
    /// cos/sin propagation for H = -Δ + V or H = -Δ_g.
    Hamiltonian,
    /// Beam natural frequencies against box energies.
    Eigenmodes,
    /// Barrier scattering on both sides of the equivalence.
    TwoSlit,
    /// The p-adic Schrödinger and beam evolutions.
    Padic,
}

const DEFAULT_OUT: &str = "wavebeam-out";

/// Writes to stdout, ignoring a closed pipe (`wavebeam ... | head`).
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn fail(err: CliError) -> ExitCode {
    let report = json!({ "pass": false, "error": err });
    emit(&serde_json::to_string_pretty(&report).expect("serializable"));
    ExitCode::from(2)
}

fn list_checks() {
    let lines: Vec<String> = CHECKS
        .iter()
        .map(|c| {
            format!(
                "{:>2}  {:<30} {:<20} tol {:e}  {}",
                c.id, c.name, c.command, c.tolerance, c.description
            )
        })
        .collect();
    emit(&lines.join("\n"));
}

fn write_report(report: &Report, out: &Path) -> Result<String, CliError> {
    let text = serde_json::to_string_pretty(report).expect("serializable");
    std::fs::write(out.join("report.json"), format!("{text}\n")).map_err(|e| CliError {
        kind: ErrorKind::Io,
        message: format!("cannot write report: {e}"),
    })?;
    Ok(text)
}

fn run(cli: Cli) -> Result<Option<Report>, CliError> {
    if cli.list_checks {
        list_checks();
        return Ok(None);
    }
    let command = cli
        .command
        .ok_or_else(|| CliError::config("no subcommand given; see --help"))?;
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    std::fs::create_dir_all(&out).map_err(|e| CliError {
        kind: ErrorKind::Io,
        message: format!("cannot create {}: {e}", out.display()),
    })?;
    let runner = match command {
        Command::VerifyEquivalence => commands::verify_equivalence_cmd,
        Command::Symplectic => commands::symplectic_cmd,
        Command::Hamiltonian => commands::hamiltonian_cmd,
        Command::Eigenmodes => commands::eigenmodes_cmd,
        Command::TwoSlit => commands::two_slit_cmd,
        Command::Padic => commands::padic_cmd,
    };
    let mut report = runner(&cfg, seed, &out)?;
    report.outputs.push("report.json".into());
    let text = write_report(&report, &out)?;
    emit(&text);
    Ok(Some(report))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            if matches!(e.kind(), K::DisplayHelp | K::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return fail(CliError::config(e.to_string().trim_end().to_string()));
        }
    };
    match run(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(report)) if report.pass => ExitCode::SUCCESS,
        Ok(Some(_)) => ExitCode::from(1),
        Err(e) => fail(e),
    }
}
