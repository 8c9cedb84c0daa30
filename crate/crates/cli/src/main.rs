//! `itmlab`: batch front end for the interval translation mapping toolkit.
//!
//! Exit codes: 0 when every check passes, 1 when a check is red, 2 on bad
//! input (flags, config, parameters outside their domain).

mod commands;
mod config;
mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use config::{Command, Format, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "itmlab", version, about = "Exact and Monte Carlo experiments on interval translation mappings")]
struct Cli {
    /// Output format; csv is only available for lyapunov.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file; overrides --out-dir.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for output files named after the command and seed.
    #[arg(long, global = true, env = "ITMLAB_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON run configuration; flags given on the command line take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the effective configuration here before running.
    #[arg(long, global = true)]
    save_config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

enum Failure {
    Input(anyhow::Error),
    Red,
}

fn resolve(cli: Cli) -> Result<(RunConfig, Option<PathBuf>, Option<PathBuf>)> {
    let base = match &cli.config {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Some(serde_json::from_str::<RunConfig>(&text).with_context(|| format!("parsing {}", p.display()))?)
        }
        None => None,
    };
    let command = match (cli.command, &base) {
        (Some(c), _) => c,
        (None, Some(b)) => b.command.clone(),
        (None, None) => anyhow::bail!("no command given; see --help"),
    };
    let cfg = RunConfig {
        command,
        out: cli.out.or_else(|| base.as_ref().and_then(|b| b.out.clone())),
        seed: cli.seed.or(base.as_ref().map(|b| b.seed)).unwrap_or(0),
        format: cli.format.or(base.as_ref().map(|b| b.format)).unwrap_or_default(),
    };
    Ok((cfg, cli.out_dir, cli.save_config))
}

fn destination(cfg: &RunConfig, out_dir: Option<&Path>) -> Option<PathBuf> {
    let ext = match cfg.format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    cfg.out
        .clone()
        .or_else(|| out_dir.map(|d| d.join(format!("{}-seed{}.{ext}", cfg.command.name(), cfg.seed))))
}

fn execute(cli: Cli) -> std::result::Result<(), Failure> {
    let (cfg, out_dir, save) = resolve(cli).map_err(Failure::Input)?;
    if let Some(p) = save {
        let text = serde_json::to_string_pretty(&cfg).map_err(|e| Failure::Input(e.into()))?;
        fs::write(&p, text + "\n").with_context(|| format!("writing {}", p.display())).map_err(Failure::Input)?;
    }
    let outcome = commands::run(&cfg.command, cfg.seed).map_err(Failure::Input)?;
    let stamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let text = output::render(&cfg, &outcome, stamp).map_err(Failure::Input)?;
    match destination(&cfg, out_dir.as_deref()) {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display())).map_err(Failure::Input)?;
            }
            fs::write(&p, text).with_context(|| format!("writing {}", p.display())).map_err(Failure::Input)?;
            eprintln!("wrote {}", p.display());
        }
        None => print!("{text}"),
    }
    for rep in &outcome.reports {
        for c in rep.failures() {
            eprintln!("FAIL {}: {}: {}", rep.title, c.name, c.detail);
        }
    }
    if output::passed(&outcome) {
        Ok(())
    } else {
        Err(Failure::Red)
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Red) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
