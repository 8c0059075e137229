//! Batch experiment orchestration: construct the model and schedule, fan the
//! repetitions out across a worker pool with one RNG stream per repetition,
//! aggregate in repetition order and emit the CSV artifacts.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use simkv::analysis::{gaussian_oracle, stats_from_moments, RepMoments, StationaryReport};
use simkv::dynamics::{init_sample, simulate, GaussianInit, RngStream, TrajectoryRecorder};
use simkv::mean_field::CylindricalModel;
use simkv::models::{make_sin_cos_dataset, CurieWeissModel, Dataset, GaussianModel, NNetModel, NNetSpec};

use crate::config::{ModelConfig, RunConfig, ScheduleConfig};
use crate::csv_io::{fmt_opt, write_csv};
use crate::CliError;

/// RNG stream reserved for dataset generation; repetitions use `0..reps`.
pub const DATASET_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossPoint {
    pub t: f64,
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone)]
pub struct RepFailure {
    pub rep: u32,
    pub message: String,
}

#[derive(Debug)]
pub struct RunResult {
    pub loss_series: Vec<LossPoint>,
    pub stationary: StationaryReport<f64>,
    pub terminal_states_path: PathBuf,
    pub dataset_path: Option<PathBuf>,
    pub failures: Vec<RepFailure>,
}

/// Initial distribution used for each model family: the neural network uses
/// the wide 𝒩(0, 10²·I₄) start, the low-dimensional models a unit Gaussian.
pub fn default_init(model: &ModelConfig) -> GaussianInit<f64> {
    match model {
        ModelConfig::Gaussian { d } => GaussianInit::centered(*d, 1.0),
        ModelConfig::CurieWeiss { .. } => GaussianInit::centered(1, 1.0),
        ModelConfig::Nnet { .. } => GaussianInit::centered(4, 10.0),
    }
}

/// Builds the configured model; for the neural network this loads the
/// dataset from `dataset_path` or generates it from a reserved stream of the
/// master seed and serialises it next to the other outputs, so that
/// experiments compared against each other can share the file.
fn build_model(
    cfg: &RunConfig,
    out_dir: &Path,
) -> Result<(Box<dyn CylindricalModel<f64>>, Option<PathBuf>), CliError> {
    match &cfg.model {
        ModelConfig::Gaussian { d } => Ok((Box::new(GaussianModel::<f64>::new(*d)), None)),
        ModelConfig::CurieWeiss { alpha, beta } => {
            let model = CurieWeissModel::scaled_tanh(*alpha, *beta)
                .map_err(|e| CliError::Numeric(e.to_string()))?;
            Ok((Box::new(model), None))
        }
        ModelConfig::Nnet {
            k,
            l_trunc,
            sigma2_half,
            gamma,
            dataset_path,
        } => {
            let (dataset, path): (Dataset<f64>, PathBuf) = match dataset_path {
                Some(path) => {
                    let dataset = Dataset::read_csv(path)
                        .map_err(|e| CliError::Numeric(format!("dataset: {e}")))?;
                    if dataset.len() != *k {
                        return Err(CliError::Numeric(format!(
                            "dataset {} holds {} points but the config requests K = {k}",
                            path.display(),
                            dataset.len()
                        )));
                    }
                    (dataset, path.clone())
                }
                None => {
                    let mut rng = RngStream::new(cfg.master_seed, DATASET_STREAM);
                    let dataset = make_sin_cos_dataset(*k, &mut rng);
                    let path = out_dir.join("dataset.csv");
                    dataset
                        .write_csv(&path)
                        .map_err(|e| CliError::Numeric(format!("dataset: {e}")))?;
                    (dataset, path)
                }
            };
            let model = NNetModel::new(NNetSpec {
                dataset,
                truncation: *l_trunc,
                sigma2_half: *sigma2_half,
                gamma: *gamma,
            })
            .map_err(|e| CliError::Numeric(e.to_string()))?;
            Ok((Box::new(model), Some(path)))
        }
    }
}

struct RepOutput {
    rep: u32,
    losses: Vec<(f64, f64)>,
    moments: RepMoments<f64>,
    terminal_x: Vec<f64>,
    terminal_y: Vec<f64>,
    terminal_t: f64,
}

/// Runs the configured experiment and writes `loss.csv`, `stationary.csv`
/// and `terminal_states.csv` into `out_dir`.
///
/// Repetition `r` draws from stream `(master_seed, r)`, so the result is a
/// pure function of the config regardless of `workers`. Diverged repetitions
/// are excluded from the aggregates and reported in `failures`.
pub fn run_experiment(
    cfg: &RunConfig,
    out_dir: &Path,
    workers: usize,
) -> Result<RunResult, CliError> {
    std::fs::create_dir_all(out_dir)?;
    let (model, dataset_path) = build_model(cfg, out_dir)?;
    let model = model.as_ref();
    let schedule = cfg.schedule.build()?;
    let init_spec = default_init(&cfg.model);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;

    let outcomes: Vec<Result<RepOutput, RepFailure>> = pool.install(|| {
        (0..cfg.reps)
            .into_par_iter()
            .map(|rep| {
                let mut rng = RngStream::new(cfg.master_seed, rep as u64);
                let mut recorder = TrajectoryRecorder::new(cfg.record_stride)
                    .collecting_states_from(cfg.burn_in);
                let run = init_sample(model, &init_spec, &mut rng).and_then(|init| {
                    simulate(
                        model,
                        &schedule,
                        init,
                        cfg.dt,
                        cfg.horizon,
                        &mut rng,
                        &mut recorder,
                    )
                });
                match run {
                    Ok(terminal) => {
                        let mut moments =
                            RepMoments::new(model.particle_dim(), model.stat_block());
                        for state in &recorder.states {
                            moments.push(state);
                        }
                        Ok(RepOutput {
                            rep,
                            losses: recorder.losses.iter().map(|s| (s.t, s.value)).collect(),
                            moments,
                            terminal_x: terminal.x,
                            terminal_y: terminal.y,
                            terminal_t: terminal.t,
                        })
                    }
                    Err(err) => Err(RepFailure {
                        rep,
                        message: err.to_string(),
                    }),
                }
            })
            .collect()
    });

    let mut successes: Vec<RepOutput> = Vec::new();
    let mut failures: Vec<RepFailure> = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(output) => successes.push(output),
            Err(failure) => failures.push(failure),
        }
    }

    let loss_series = aggregate_losses(&successes);
    let oracle = match (&cfg.model, &cfg.schedule) {
        (ModelConfig::Gaussian { d }, ScheduleConfig::Constant { lambda }) => {
            Some(gaussian_oracle(*lambda, *d).map_err(|e| CliError::Numeric(e.to_string()))?)
        }
        _ => None,
    };
    let stationary = if successes.is_empty() {
        StationaryReport::default()
    } else {
        let moments: Vec<RepMoments<f64>> =
            successes.iter().map(|s| s.moments.clone()).collect();
        stats_from_moments(&moments, oracle.as_ref())
            .map_err(|e| CliError::Numeric(e.to_string()))?
    };

    write_csv(
        &out_dir.join("loss.csv"),
        "t,mean_loss,stderr",
        loss_series
            .iter()
            .map(|p| format!("{},{},{}", p.t, p.mean, p.stderr)),
    )?;
    write_csv(
        &out_dir.join("stationary.csv"),
        "metric,value,stderr",
        stationary
            .metrics
            .iter()
            .map(|m| format!("{},{},{}", m.name, m.value, fmt_opt(m.stderr))),
    )?;

    let terminal_states_path = out_dir.join("terminal_states.csv");
    let mut header = String::from("rep,t");
    for i in 0..model.particle_dim() {
        header.push_str(&format!(",x{i}"));
    }
    for j in 0..model.feature_dim() {
        header.push_str(&format!(",y{j}"));
    }
    write_csv(
        &terminal_states_path,
        &header,
        successes.iter().map(|s| {
            let mut row = format!("{},{}", s.rep, s.terminal_t);
            for v in s.terminal_x.iter().chain(&s.terminal_y) {
                row.push_str(&format!(",{v}"));
            }
            row
        }),
    )?;

    Ok(RunResult {
        loss_series,
        stationary,
        terminal_states_path,
        dataset_path,
        failures,
    })
}

fn aggregate_losses(successes: &[RepOutput]) -> Vec<LossPoint> {
    let Some(first) = successes.first() else {
        return Vec::new();
    };
    let len = first.losses.len();
    let count = successes.len() as f64;
    let mut points = Vec::with_capacity(len);
    for index in 0..len {
        let t = first.losses[index].0;
        let mut sum = 0.0;
        for rep in successes {
            debug_assert_eq!(rep.losses.len(), len);
            debug_assert_eq!(rep.losses[index].0, t);
            sum += rep.losses[index].1;
        }
        let mean = sum / count;
        let stderr = if successes.len() < 2 {
            0.0
        } else {
            let var = successes
                .iter()
                .map(|rep| (rep.losses[index].1 - mean).powi(2))
                .sum::<f64>()
                / (count - 1.0);
            (var / count).sqrt()
        };
        points.push(LossPoint { t, mean, stderr });
    }
    points
}
