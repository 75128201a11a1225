//! Command-line front end: configuration parsing, subcommands and the CSV
//! and JSON bundles read by the plotting scripts.
//!
//! Exit codes: 0 on success, 2 on configuration or input errors, 3 on
//! numeric failures.

pub mod commands;
pub mod config;
pub mod error;
pub mod figure;
pub mod output;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use frmod_core::Companion;

use commands::Overrides;
use config::Config;
use error::CliError;
use output::{json_bytes, write_output, Format};

#[derive(Debug, Parser)]
#[command(
    name = "frmod",
    version,
    about = "Cyclical long-memory models: parameters, autocovariances, spectra, simulation"
)]
pub struct Cli {
    /// JSON model configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (directory for `figure`); stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Master seed, overriding the configuration.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Replicate count, overriding the configuration.
    #[arg(long, global = true)]
    pub replicates: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompanionKind {
    Hilbert,
    Independent,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Limiting parameters of the configured model.
    Params,
    /// Theoretical (and optionally sample) autocovariances.
    Acvf {
        #[arg(long, default_value_t = 50)]
        hmax: usize,
        #[arg(long)]
        with_sample: bool,
    },
    /// Spectral density on a grid (or with the mean periodogram).
    Spectrum {
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        with_periodogram: bool,
    },
    /// Simulated paths; a `.meta.json` sidecar accompanies `--out`.
    Simulate,
    /// Data bundle of figure 1 to 7 written into the `--out` directory.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=7))]
        which: u8,
    },
    /// Rice demodulation of the `x` column of a CSV file.
    Demodulate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        lambda0: f64,
        #[arg(long, value_enum, default_value = "hilbert")]
        companion: CompanionKind,
    },
}

fn load_config(cli: &Cli) -> Result<Config, CliError> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config("this command needs --config".into()))?;
    Config::load(path)
}

/// Sidecar path next to an output file: `out.csv` → `out.csv.meta.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let ov = Overrides {
        seed: cli.seed,
        replicates: cli.replicates,
    };
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Params => {
            let config = load_config(cli)?;
            let bytes = match cli.format.unwrap_or(Format::Json) {
                Format::Json => json_bytes(&commands::params_json(&config)?)?,
                Format::Csv => commands::params_table(&config)?.to_csv()?,
            };
            write_output(&bytes, out)
        }
        Command::Acvf { hmax, with_sample } => {
            let config = load_config(cli)?;
            let table = commands::acvf_table(&config, *hmax, *with_sample, ov)?;
            write_output(&table.render(cli.format.unwrap_or_default())?, out)
        }
        Command::Spectrum {
            points,
            with_periodogram,
        } => {
            let config = load_config(cli)?;
            let table = commands::spectrum_table(&config, *points, *with_periodogram, ov)?;
            write_output(&table.render(cli.format.unwrap_or_default())?, out)
        }
        Command::Simulate => {
            let config = load_config(cli)?;
            let run = commands::simulate_run(&config, ov)?;
            write_output(&run.table.render(cli.format.unwrap_or_default())?, out)?;
            match out {
                Some(p) => write_output(&json_bytes(&run.metadata)?, Some(&sidecar_path(p))),
                None => {
                    eprintln!(
                        "{}",
                        serde_json::to_string(&run.metadata).unwrap_or_default()
                    );
                    Ok(())
                }
            }
        }
        Command::Figure { which } => {
            let dir = out.ok_or_else(|| CliError::Config("figure needs --out DIR".into()))?;
            figure::write_figure(*which, dir, cli.seed)?;
            Ok(())
        }
        Command::Demodulate {
            input,
            lambda0,
            companion,
        } => {
            let text = std::fs::read_to_string(input)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", input.display())))?;
            let x = output::read_column(&text, "x")?;
            let companion = match companion {
                CompanionKind::Hilbert => Companion::Hilbert,
                CompanionKind::Independent => Companion::Independent {
                    seed: cli.seed.unwrap_or(0),
                },
            };
            let result = commands::demodulate(&x, *lambda0, &companion)?;
            write_output(&result.table.render(cli.format.unwrap_or_default())?, out)?;
            match out {
                Some(p) => write_output(&json_bytes(&result.probe)?, Some(&sidecar_path(p))),
                None => Ok(()),
            }
        }
    }
}
