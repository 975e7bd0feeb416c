//! `usc`: runs configured studies of the ultrastrong-coupling engine and
//! writes CSV/JSON results, SVG plots and a hashed manifest.

mod config;
mod output;
mod physics;
mod plot;
mod scenarios;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use usc_core::profile_io::{convert_profile, PayloadFormat};

use crate::config::Scenario;
use crate::output::Artifacts;

#[derive(Parser)]
#[command(name = "usc", version, about = "Multimode ultrastrong-coupling studies from TOML configs")]
struct Cli {
    /// Worker threads for sweeps (defaults to all cores).
    #[arg(long, global = true, env = "USC_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a config file.
    Run {
        /// Config file (TOML).
        #[arg(long, short)]
        config: PathBuf,
        /// Output directory; overrides `out_dir` from the config.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Skip SVG plots.
        #[arg(long)]
        no_plots: bool,
        /// Seed for synthetic noise; overrides `seed` from the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the available scenarios and their config sections.
    ListScenarios {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Parse and check a config without running it.
    ValidateConfig {
        #[arg(long, short)]
        config: PathBuf,
    },
    /// Rewrite a profile manifest and its payload in another format.
    ConvertProfile {
        /// Profile manifest (TOML).
        manifest: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Binary,
    Csv,
}

#[derive(Serialize)]
struct CatalogEntry {
    name: &'static str,
    description: &'static str,
    required: &'static [&'static str],
    optional: &'static [&'static str],
}

fn list_scenarios(format: Format) -> Result<()> {
    let catalog: Vec<CatalogEntry> = Scenario::ALL
        .iter()
        .map(|s| CatalogEntry {
            name: s.name(),
            description: s.summary(),
            required: s.required(),
            optional: s.optional(),
        })
        .collect();
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&catalog)?),
        Format::Text => {
            for e in &catalog {
                println!("{}", e.name);
                println!("    {}", e.description);
                println!("    required: {}", e.required.join(", "));
                println!("    optional: {}", e.optional.join(", "));
            }
        }
    }
    Ok(())
}

fn run(config: PathBuf, out_dir: Option<PathBuf>, no_plots: bool, seed: Option<u64>) -> Result<()> {
    let mut cfg = config::load(&config)?;
    if let Some(s) = seed {
        cfg.config.seed = s;
    }
    let dir = out_dir
        .or_else(|| cfg.config.out_dir.as_ref().map(|d| cfg.resolve(d)))
        .unwrap_or_else(|| PathBuf::from("out"));
    let plots = cfg.config.output.plots && !no_plots;
    let mut out = Artifacts::create(&dir, plots)?;
    let scenario = cfg.config.scenario;
    eprintln!(
        "running {} -> {} ({} threads)",
        scenario.name(),
        dir.display(),
        rayon::current_num_threads()
    );
    match scenario {
        Scenario::Toy => scenarios::toy(&cfg, &mut out),
        Scenario::IngestProfiles => scenarios::ingest(&cfg, &mut out),
        Scenario::Magnetofilm => scenarios::magnetofilm(&cfg, &mut out),
        Scenario::SpectroPipeline => scenarios::spectro(&cfg, &mut out),
    }
    .with_context(|| format!("scenario {}", scenario.name()))?;
    let manifest = out.finish(scenario.name(), cfg.config.seed, &cfg.text)?;
    eprintln!("manifest: {}", manifest.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::FAILURE;
        }
    }
    let result = match cli.command {
        Command::Run {
            config,
            out_dir,
            no_plots,
            seed,
        } => run(config, out_dir, no_plots, seed),
        Command::ListScenarios { format } => list_scenarios(format),
        Command::ValidateConfig { config } => config::load(&config).map(|c| {
            println!("{}: ok ({})", config.display(), c.config.scenario.name());
        }),
        Command::ConvertProfile { manifest, to, out_dir } => {
            let fmt = match to {
                Target::Binary => PayloadFormat::Binary,
                Target::Csv => PayloadFormat::Csv,
            };
            std::fs::create_dir_all(&out_dir)
                .with_context(|| format!("creating {}", out_dir.display()))
                .and_then(|_| Ok(convert_profile(&manifest, &out_dir, fmt)?))
                .map(|p| println!("{}", p.display()))
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
