//! Strict JSON experiment configuration: unknown keys are rejected and every
//! invariant violation names the offending field.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use simkv::schedules::{LambdaSchedule, Segment};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("config field {field}: {message}")]
    Invalid { field: &'static str, message: String },
}

fn invalid(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    Gaussian {
        d: usize,
    },
    CurieWeiss {
        alpha: f64,
        beta: f64,
    },
    Nnet {
        #[serde(rename = "K")]
        k: usize,
        #[serde(rename = "L_trunc")]
        l_trunc: f64,
        sigma2_half: f64,
        gamma: f64,
        #[serde(default)]
        dataset_path: Option<PathBuf>,
    },
}

/// Segment duration: a positive number of time units or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DurationConfig {
    Finite(f64),
    Unbounded,
}

impl<'de> Deserialize<'de> for DurationConfig {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Number(v) => Ok(DurationConfig::Finite(v)),
            Repr::Text(s) if s == "inf" => Ok(DurationConfig::Unbounded),
            Repr::Text(other) => Err(serde::de::Error::custom(format!(
                "duration must be a number or \"inf\", got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentConfig {
    pub duration: DurationConfig,
    pub value: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleConfig {
    Constant {
        lambda: f64,
    },
    /// The built-in power-of-four annealing ladder.
    #[serde(rename = "paper_annealing")]
    PowerOfFourAnnealing,
    Custom {
        segments: Vec<SegmentConfig>,
    },
}

impl ScheduleConfig {
    pub fn build(&self) -> Result<LambdaSchedule<f64>, ConfigError> {
        let schedule = match self {
            ScheduleConfig::Constant { lambda } => LambdaSchedule::constant(*lambda),
            ScheduleConfig::PowerOfFourAnnealing => {
                return Ok(LambdaSchedule::power_of_four_annealing())
            }
            ScheduleConfig::Custom { segments } => LambdaSchedule::from_segments(
                segments
                    .iter()
                    .map(|s| match s.duration {
                        DurationConfig::Finite(d) => Segment::finite(d, s.value),
                        DurationConfig::Unbounded => Segment::unbounded(s.value),
                    })
                    .collect(),
            ),
        };
        schedule.map_err(|e| invalid("schedule", e.to_string()))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfigFile {
    model: ModelConfig,
    schedule: ScheduleConfig,
    dt: f64,
    #[serde(rename = "T")]
    horizon: f64,
    reps: u32,
    master_seed: u64,
    record_stride: Option<u64>,
    burn_in: Option<f64>,
    out_dir: Option<PathBuf>,
}

/// Fully validated experiment description.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub schedule: ScheduleConfig,
    pub dt: f64,
    pub horizon: f64,
    pub reps: u32,
    pub master_seed: u64,
    pub record_stride: u64,
    pub burn_in: f64,
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    fn validate(mut file: RunConfigFile) -> Result<Self, ConfigError> {
        if !(file.dt > 0.0) || !file.dt.is_finite() {
            return Err(invalid("dt", "must be positive and finite"));
        }
        if !(file.horizon >= 0.0) || !file.horizon.is_finite() {
            return Err(invalid("T", "must be non-negative and finite"));
        }
        if file.reps < 1 {
            return Err(invalid("reps", "must be at least 1"));
        }
        let record_stride = file.record_stride.unwrap_or(100);
        if record_stride < 1 {
            return Err(invalid("record_stride", "must be at least 1"));
        }
        let burn_in = file.burn_in.unwrap_or(file.horizon / 2.0);
        if !(burn_in >= 0.0) || !burn_in.is_finite() {
            return Err(invalid("burn_in", "must be non-negative and finite"));
        }
        if burn_in > file.horizon {
            return Err(invalid("burn_in", "must not exceed T"));
        }

        match &file.model {
            ModelConfig::Gaussian { d } => {
                if *d < 1 {
                    return Err(invalid("model.d", "must be at least 1"));
                }
            }
            ModelConfig::CurieWeiss { alpha, beta } => {
                if !(*alpha > 0.0) || !alpha.is_finite() {
                    return Err(invalid("model.alpha", "must be positive and finite"));
                }
                if !(*beta > 0.0) || !beta.is_finite() {
                    return Err(invalid("model.beta", "must be positive and finite"));
                }
            }
            ModelConfig::Nnet {
                k,
                l_trunc,
                sigma2_half,
                gamma,
                ..
            } => {
                if *k < 1 {
                    return Err(invalid("model.K", "must be at least 1"));
                }
                if !(*l_trunc > 0.0) || !l_trunc.is_finite() {
                    return Err(invalid("model.L_trunc", "must be positive and finite"));
                }
                if !(*sigma2_half > 0.0) || !sigma2_half.is_finite() {
                    return Err(invalid("model.sigma2_half", "must be positive and finite"));
                }
                if !(*gamma > 0.0) || !gamma.is_finite() {
                    return Err(invalid("model.gamma", "must be positive and finite"));
                }
            }
        }

        let schedule = file.schedule.build()?;
        let max_lambda_dt = schedule.max_value() * file.dt;
        if !(max_lambda_dt < 1.0) {
            return Err(invalid(
                "schedule",
                format!(
                    "lambda*dt = {max_lambda_dt} violates the stability requirement lambda*dt < 1"
                ),
            ));
        }
        if !schedule.covers(file.horizon) {
            return Err(invalid(
                "schedule",
                format!(
                    "total duration {} does not cover T = {}",
                    schedule.total_finite_duration(),
                    file.horizon
                ),
            ));
        }

        Ok(RunConfig {
            model: file.model,
            schedule: file.schedule,
            dt: file.dt,
            horizon: file.horizon,
            reps: file.reps,
            master_seed: file.master_seed,
            record_stride,
            burn_in,
            out_dir: file.out_dir.take(),
        })
    }
}

/// Parses and validates a JSON experiment config.
pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_str(&text)
}

/// Parses and validates a JSON experiment config from a string.
pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigError> {
    let file: RunConfigFile = serde_json::from_str(text)?;
    RunConfig::validate(file)
}
