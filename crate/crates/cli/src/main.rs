//! `occ2vec` command-line pipeline.
//!
//! Stages: `ingest` (O*NET tables to a catalog file), `embed` (fill the
//! vector cache), `score`, `validate`, `reduce`, `compare`, `report`, and
//! `mlm-demo`.  Exit codes: 0 success, 2 bad input or missing upstream
//! stage, 3 refusal to overwrite, 4 numerical failure.

mod commands;
mod error;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use occ2vec::embedding::{EmbedderConfig, DEFAULT_DIM};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "occ2vec", version, about = "Occupation embeddings and characteristic scoring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Hash,
    Remote,
}

#[derive(Debug, Clone, Args)]
struct BackendArgs {
    #[arg(long, value_enum, default_value = "hash")]
    backend: BackendArg,
    #[arg(long, default_value_t = DEFAULT_DIM)]
    dim: usize,
    /// Base URL of the embedding service (remote backend only).
    #[arg(long, env = "OCC2VEC_ENDPOINT")]
    endpoint: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl BackendArgs {
    fn config(&self) -> Result<EmbedderConfig, CliError> {
        let config = match self.backend {
            BackendArg::Hash => EmbedderConfig::hash(self.dim, self.seed),
            BackendArg::Remote => {
                let url = self.endpoint.as_deref().ok_or_else(|| {
                    CliError::Usage("--backend remote needs --endpoint or OCC2VEC_ENDPOINT".into())
                })?;
                EmbedderConfig::remote(url, self.dim)
            }
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Clone, Args)]
struct Overwrite {
    /// Replace existing output files.
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse an O*NET release directory into a catalog file.
    Ingest {
        #[arg(long)]
        onet_dir: PathBuf,
        /// Attach education requirements from this labor statistics CSV.
        #[arg(long)]
        labor_stats: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        overwrite: Overwrite,
    },
    /// Embed every catalog descriptor (and characteristic definitions) into the cache.
    Embed {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        cache: PathBuf,
        #[arg(long)]
        characteristic: Vec<PathBuf>,
        #[command(flatten)]
        backend: BackendArgs,
    },
    /// Score occupations against a characteristic definition file.
    Score {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        cache: PathBuf,
        #[arg(long)]
        characteristic: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        backend: BackendArgs,
        #[command(flatten)]
        overwrite: Overwrite,
    },
    /// Between/within correlations, rho sweeps and the eight regressions.
    Validate {
        #[arg(long, required_unless_present = "panel")]
        catalog: Option<PathBuf>,
        #[arg(long, required_unless_present = "panel")]
        cache: Option<PathBuf>,
        /// Use an existing occupation × attribute panel CSV instead of
        /// building one from the catalog and cache.
        #[arg(long)]
        panel: Option<PathBuf>,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        backend: BackendArgs,
        #[command(flatten)]
        overwrite: Overwrite,
    },
    /// PCA then t-SNE of the occupation vectors, with scatter plots.
    Reduce {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        cache: PathBuf,
        #[arg(long)]
        labor_stats: Option<PathBuf>,
        #[arg(long, default_value_t = 30.0)]
        perplexity: f64,
        #[arg(long, default_value_t = 50)]
        pca_dims: usize,
        #[arg(long, default_value_t = 1000)]
        iterations: usize,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        backend: BackendArgs,
        #[command(flatten)]
        overwrite: Overwrite,
    },
    /// Correlate a score table with an external measure or a composite task measure.
    Compare {
        #[arg(long)]
        scores: PathBuf,
        /// CSV whose first column is a SOC code and second a numeric measure.
        #[arg(long, required_unless_present = "task_measure")]
        external: Option<PathBuf>,
        /// abstract, manual or routine (needs --catalog).
        #[arg(long, requires = "catalog")]
        task_measure: Option<String>,
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        overwrite: Overwrite,
    },
    /// Top/bottom tables, boxplots and smoothed curves for score tables.
    Report {
        #[arg(long, required = true)]
        scores: Vec<PathBuf>,
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        labor_stats: PathBuf,
        #[arg(long, default_value_t = occ2vec::stats::DEFAULT_BANDWIDTH)]
        bandwidth: f64,
        #[arg(long, default_value_t = 10)]
        top: usize,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        overwrite: Overwrite,
    },
    /// Walk one sentence pair through the masked-language-model input pipeline.
    MlmDemo {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "the drivers haul freight")]
        first: String,
        #[arg(long, default_value = "the trucks carry cargo")]
        second: String,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Ingest { onet_dir, labor_stats, out, overwrite } => {
            commands::ingest(&onet_dir, labor_stats.as_deref(), &out, overwrite.force)
        }
        Command::Embed { catalog, cache, characteristic, backend } => {
            commands::embed(&catalog, &cache, &characteristic, &backend.config()?)
        }
        Command::Score { catalog, cache, characteristic, out, backend, overwrite } => {
            commands::score(&catalog, &cache, &characteristic, &backend.config()?, &out, overwrite.force)
        }
        Command::Validate { catalog, cache, panel, alpha, out, backend, overwrite } => {
            let source = match panel {
                Some(p) => commands::PanelSource::File(p),
                None => commands::PanelSource::Build {
                    catalog: catalog.expect("clap enforces --catalog"),
                    cache: cache.expect("clap enforces --cache"),
                    config: backend.config()?,
                },
            };
            commands::validate(source, alpha, &out, overwrite.force)
        }
        Command::Reduce { catalog, cache, labor_stats, perplexity, pca_dims, iterations, out, backend, overwrite } => {
            let config = backend.config()?;
            let tsne = occ2vec::dimred::TsneConfig { perplexity, iterations, seed: backend.seed, ..Default::default() };
            commands::reduce(&catalog, &cache, labor_stats.as_deref(), &config, pca_dims, &tsne, &out, overwrite.force)
        }
        Command::Compare { scores, external, task_measure, catalog, out, overwrite } => {
            let target = match (external, task_measure) {
                (Some(path), None) => commands::CompareTarget::External(path),
                (None, Some(name)) => commands::CompareTarget::TaskMeasure {
                    measure: name.parse().map_err(|e: occ2vec::Error| CliError::Usage(e.to_string()))?,
                    catalog: catalog.expect("clap enforces --catalog"),
                },
                _ => return Err(CliError::Usage("give exactly one of --external and --task-measure".into())),
            };
            commands::compare(&scores, target, &out, overwrite.force)
        }
        Command::Report { scores, catalog, labor_stats, bandwidth, top, out, overwrite } => {
            commands::report(&scores, &catalog, &labor_stats, bandwidth, top, &out, overwrite.force)
        }
        Command::MlmDemo { seed, first, second } => commands::mlm_demo(seed, &first, &second),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
