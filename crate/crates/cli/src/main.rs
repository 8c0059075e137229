use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use simkv::dynamics::RngStream;
use simkv::models::make_sin_cos_dataset;
use simkv_cli::{
    curie_weiss_fixed_points, parse_config, resolve_workers, run_experiment, theory_report,
    write_fixed_points_csv, write_theory_csv, CliError, ConfigError, DATASET_STREAM,
};

#[derive(Parser)]
#[command(
    name = "simkv",
    version,
    about = "Single-particle approximation of mean-field invariant measures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a batch simulation experiment described by a JSON config.
    Simulate {
        /// Experiment config file.
        #[arg(long)]
        config: PathBuf,
        /// Override the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (overrides the config's out_dir).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for repetition fan-out (never affects results).
        #[arg(long)]
        workers: Option<usize>,
        /// Override the config's repetition count.
        #[arg(long)]
        reps: Option<u32>,
    },
    /// Evaluate the contraction and stationary-distance calculators.
    Theory {
        /// JSON parameter file with "contraction" and/or "stationary" sections.
        #[arg(long)]
        config: PathBuf,
        /// Output directory for theory.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate the fixed points of the Curie-Weiss self-consistency map.
    CurieWeissFixedPoints {
        /// Interaction amplitude: l0(x) = alpha*tanh(beta*x).
        #[arg(long)]
        alpha: f64,
        /// Interaction slope.
        #[arg(long)]
        beta: f64,
        /// Scan resolution (defaults to alpha/400).
        #[arg(long)]
        grid_step: Option<f64>,
        /// Output directory for fixed_points.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a sin/cos regression dataset CSV.
    MakeDataset {
        /// Number of data points.
        #[arg(long)]
        k: usize,
        /// Seed for the sampling stream.
        #[arg(long)]
        seed: u64,
        /// Output directory for dataset.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn out_dir_or(default: Option<PathBuf>, flag: Option<PathBuf>) -> Result<PathBuf, CliError> {
    flag.or(default).ok_or_else(|| {
        CliError::Config(ConfigError::Invalid {
            field: "out_dir",
            message: "set out_dir in the config or pass --out".into(),
        })
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate {
            config,
            seed,
            out,
            workers,
            reps,
        } => {
            let mut cfg = parse_config(&config)?;
            if let Some(seed) = seed {
                cfg.master_seed = seed;
            }
            if let Some(reps) = reps {
                if reps < 1 {
                    return Err(CliError::Config(ConfigError::Invalid {
                        field: "reps",
                        message: "must be at least 1".into(),
                    }));
                }
                cfg.reps = reps;
            }
            let out_dir = out_dir_or(cfg.out_dir.clone(), out)?;
            let result = run_experiment(&cfg, &out_dir, resolve_workers(workers))?;
            for failure in &result.failures {
                eprintln!("rep {}: {}", failure.rep, failure.message);
            }
            if !result.failures.is_empty() {
                return Err(CliError::Divergence {
                    failed: result.failures.len(),
                    total: cfg.reps as usize,
                });
            }
            println!(
                "wrote {} loss rows and {} stationary metrics to {}",
                result.loss_series.len(),
                result.stationary.metrics.len(),
                out_dir.display()
            );
            Ok(())
        }
        Command::Theory { config, out } => {
            let rows = theory_report(&config)?;
            let out_dir = out_dir_or(None, out)?;
            std::fs::create_dir_all(&out_dir)?;
            let path = out_dir.join("theory.csv");
            write_theory_csv(&rows, &path)?;
            println!("wrote {} rows to {}", rows.len(), path.display());
            Ok(())
        }
        Command::CurieWeissFixedPoints {
            alpha,
            beta,
            grid_step,
            out,
        } => {
            let roots = curie_weiss_fixed_points(alpha, beta, grid_step)?;
            let out_dir = out_dir_or(None, out)?;
            std::fs::create_dir_all(&out_dir)?;
            let path = out_dir.join("fixed_points.csv");
            write_fixed_points_csv(&roots, &path)?;
            println!("wrote {} roots to {}", roots.len(), path.display());
            Ok(())
        }
        Command::MakeDataset { k, seed, out } => {
            if k < 1 {
                return Err(CliError::Config(ConfigError::Invalid {
                    field: "k",
                    message: "must be at least 1".into(),
                }));
            }
            let out_dir = out_dir_or(None, out)?;
            std::fs::create_dir_all(&out_dir)?;
            let mut rng = RngStream::new(seed, DATASET_STREAM);
            let dataset = make_sin_cos_dataset::<f64>(k, &mut rng);
            let path = out_dir.join("dataset.csv");
            dataset
                .write_csv(&path)
                .map_err(|e| CliError::Numeric(e.to_string()))?;
            println!("wrote {k} rows to {}", path.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
