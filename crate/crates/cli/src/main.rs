//! `ecm`: experiment runner for clustering in the erased configuration model.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ecm_core::experiment::{run, ExperimentConfig, ExperimentKind};
use ecm_core::hidden::{Kernel, WeightsSource};
use ecm_core::ingest::ParseMode;
use ecm_core::{DegreeBasis, Error};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "ecm", version, about = "Clustering spectra of the erased configuration model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate replicas and emit the pooled clustering spectrum c(k).
    Spectrum(Common),
    /// Split triangle counts by the contributing-degree windows.
    Regimes(Common),
    /// Evaluate the k = B sqrt(n) crossover integral over a grid of B.
    Crossover {
        #[command(flatten)]
        common: Common,
        /// B value; repeat for a custom grid.
        #[arg(long = "b")]
        b: Vec<f64>,
    },
    /// Predicted c(k) over a degree grid.
    Theory {
        #[command(flatten)]
        common: Common,
        /// Degree; repeat for a custom grid.
        #[arg(long = "k")]
        k: Vec<u64>,
    },
    /// Compare ECM and hidden-variable clustering on the same replicas.
    CompareHvm {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        kernel: Option<KernelArg>,
        #[arg(long, value_enum)]
        weights: Option<WeightsArg>,
    },
    /// Empirical versus model connection probabilities per degree cell.
    ConnectionCheck(Common),
    /// Clustering spectrum of an edge-list file.
    Ingest {
        #[command(flatten)]
        common: Common,
        /// Whitespace-separated edge list; '#' starts a comment line.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Skip malformed lines instead of failing.
        #[arg(long)]
        lenient: bool,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// JSON configuration; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replicas: Option<usize>,
    /// Window tolerance; repeat for a sweep.
    #[arg(long)]
    epsilon: Vec<f64>,
    #[arg(long)]
    bin_base: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// Also write per-replica rows.
    #[arg(long)]
    emit_raw: bool,
    #[arg(long, value_enum)]
    basis: Option<BasisArg>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BasisArg {
    Erased,
    Original,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum KernelArg {
    TruncatedProduct,
    Exponential,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum WeightsArg {
    FreshPowerlaw,
    ReuseDegrees,
}

impl Common {
    fn into_config(self, kind: ExperimentKind) -> Result<ExperimentConfig, Error> {
        let mut c = match &self.config {
            Some(path) => ExperimentConfig::from_json_file(path)?,
            None => ExperimentConfig::default(),
        };
        c.experiment = kind;
        if let Some(v) = self.n {
            c.n = v;
        }
        if let Some(v) = self.tau {
            c.tau = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.replicas {
            c.replicas = v;
        }
        if !self.epsilon.is_empty() {
            c.epsilon_sweep = self.epsilon;
        }
        if let Some(v) = self.bin_base {
            c.bin_base = v;
        }
        if let Some(v) = self.out {
            c.output_path = v;
        }
        if self.workers.is_some() {
            c.workers = self.workers;
        }
        if self.emit_raw {
            c.emit_raw = true;
        }
        if let Some(b) = self.basis {
            c.basis = match b {
                BasisArg::Erased => DegreeBasis::Erased,
                BasisArg::Original => DegreeBasis::Original,
            };
        }
        Ok(c)
    }
}

fn build_config(command: Command) -> Result<ExperimentConfig, Error> {
    Ok(match command {
        Command::Spectrum(c) => c.into_config(ExperimentKind::Spectrum)?,
        Command::Regimes(c) => c.into_config(ExperimentKind::Regimes)?,
        Command::ConnectionCheck(c) => c.into_config(ExperimentKind::ConnectionCheck)?,
        Command::Crossover { common, b } => {
            let mut c = common.into_config(ExperimentKind::Crossover)?;
            if !b.is_empty() {
                c.b_grid = Some(b);
            }
            c
        }
        Command::Theory { common, k } => {
            let mut c = common.into_config(ExperimentKind::Theory)?;
            if !k.is_empty() {
                c.k_grid = Some(k);
            }
            c
        }
        Command::CompareHvm { common, kernel, weights } => {
            let mut c = common.into_config(ExperimentKind::CompareHvm)?;
            if let Some(k) = kernel {
                c.kernel = match k {
                    KernelArg::TruncatedProduct => Kernel::TruncatedProduct,
                    KernelArg::Exponential => Kernel::Exponential,
                };
            }
            if let Some(w) = weights {
                c.weights_source = match w {
                    WeightsArg::FreshPowerlaw => WeightsSource::FreshPowerlaw,
                    WeightsArg::ReuseDegrees => WeightsSource::ReuseDegrees,
                };
            }
            c
        }
        Command::Ingest { common, input, lenient } => {
            let mut c = common.into_config(ExperimentKind::Ingest)?;
            if input.is_some() {
                c.input = input;
            }
            if lenient {
                c.parse_mode = ParseMode::Lenient;
            }
            c
        }
    })
}

fn fail(kind: &str, message: String, code: u8) -> ExitCode {
    eprintln!("{}", json!({ "error": kind, "message": message }));
    ExitCode::from(code)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Csv(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("usage", e.to_string().trim().to_string(), 2),
    };
    let config = match build_config(cli.command) {
        Ok(c) => c,
        Err(e) => return fail(e.kind(), e.to_string(), exit_code(&e)),
    };
    match run(&config) {
        Ok(manifest) => {
            let files: Vec<_> = manifest
                .outputs
                .iter()
                .map(|o| json!({ "file": o.file, "rows": o.rows, "sha256": o.sha256 }))
                .collect();
            println!(
                "{}",
                json!({
                    "experiment": manifest.experiment,
                    "output_path": config.output_path,
                    "outputs": files,
                    "wall_time_secs": manifest.wall_time_secs,
                })
            );
            ExitCode::SUCCESS
        }
        Err(e) => fail(e.kind(), e.to_string(), exit_code(&e)),
    }
}
