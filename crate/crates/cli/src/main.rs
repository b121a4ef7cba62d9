//! Command-line front end for the slab solver: figure data regeneration,
//! resolution tables, field maps and config validation.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical
//! non-convergence, 1 anything else (I/O and similar).

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;
use slablens::SlabError;

#[derive(Parser)]
#[command(
    name = "slablens",
    about = "Plane-wave spectrum solutions for a TE line source and a magnetodielectric slab",
    version
)]
struct Cli {
    /// JSON configuration file; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for CSV/JSON files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Worker threads (falls back to SLABLENS_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Config override of the form key=value (dotted paths, JSON values).
    #[arg(long = "override", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transmission-coefficient magnitude curves with enhancement markers.
    Fig2,
    /// Time-domain spectrum bandwidth curves with enhancement markers.
    Fig3,
    /// Two-source time-domain field profiles with resolution markers.
    Fig4,
    /// Forward/inverse resolution formulas as JSON.
    ResolutionTable,
    /// Frequency-domain field map with region tags and diagnostics.
    FieldMap,
    /// Parse, validate and echo the configuration.
    ValidateConfig,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let threads = cli.threads.or_else(|| {
        std::env::var("SLABLENS_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }

    let config_text = match &cli.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => text,
            Err(err) => {
                eprintln!("error: cannot read {}: {err}", path.display());
                return ExitCode::from(2);
            }
        },
        None => "{}".to_string(),
    };
    let resolved = match RunConfig::from_json(&config_text, &cli.overrides)
        .and_then(RunConfig::resolve)
    {
        Ok(resolved) => resolved,
        Err(err) => {
            eprintln!("configuration error: {err:#}");
            return ExitCode::from(2);
        }
    };

    let result = match cli.command {
        Command::Fig2 => commands::cmd_fig2(&resolved, &cli.out),
        Command::Fig3 => commands::cmd_fig3(&resolved, &cli.out),
        Command::Fig4 => commands::cmd_fig4(&resolved, &cli.out),
        Command::ResolutionTable => commands::cmd_resolution_table(&resolved, &cli.out),
        Command::FieldMap => commands::cmd_field_map(&resolved, &cli.out),
        Command::ValidateConfig => commands::cmd_validate_config(&resolved).map(|()| Vec::new()),
    };

    match result {
        Ok(paths) => {
            for path in paths {
                println!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}

/// Map failures onto the documented exit codes.
fn classify(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(slab) = cause.downcast_ref::<SlabError>() {
            return match slab {
                SlabError::QuadratureNonConvergence { .. }
                | SlabError::NonFiniteIntegrand { .. } => 3,
                // Everything else a slab error can signal is a bad
                // parameterization.
                _ => 2,
            };
        }
    }
    1
}
