//! The `theory` and `curie-weiss-fixed-points` subcommands: evaluate the
//! closed-form calculators from a JSON parameter file and emit CSV rows.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use simkv::analysis::{
    contraction_constants, default_grid_step, self_consistency_fixed_points, stationary_bounds,
    AnalysisError, StationaryBoundParams, TheoryParams,
};
use simkv::models::CurieWeissModel;

use crate::config::ConfigError;
use crate::csv_io::{fmt_opt, write_csv};
use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TheoryParamsFile {
    contraction: Option<ContractionSection>,
    stationary: Option<StationarySection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContractionSection {
    kappa0: f64,
    #[serde(rename = "Mb")]
    mb: f64,
    #[serde(rename = "L")]
    l: f64,
    #[serde(rename = "M_omega")]
    m_omega: f64,
    lambda: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StationarySection {
    #[serde(rename = "D")]
    feature_dim: usize,
    d: usize,
    #[serde(rename = "M1", default)]
    m1: Option<f64>,
    #[serde(rename = "M2")]
    m2: f64,
    #[serde(rename = "C_LS")]
    c_ls: f64,
    lambda: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoryRow {
    pub metric: &'static str,
    pub value: Option<f64>,
    pub status: &'static str,
}

impl TheoryRow {
    fn ok(metric: &'static str, value: f64) -> Self {
        Self {
            metric,
            value: Some(value),
            status: "ok",
        }
    }

    fn from_option(metric: &'static str, value: Option<f64>) -> Self {
        Self {
            metric,
            value,
            status: if value.is_some() { "ok" } else { "out_of_range" },
        }
    }
}

fn numeric(err: AnalysisError) -> CliError {
    match err {
        AnalysisError::InvalidParameter { name, requirement } => {
            CliError::Config(ConfigError::Invalid {
                field: name,
                message: requirement.to_string(),
            })
        }
        other => CliError::Numeric(other.to_string()),
    }
}

/// Evaluates the requested calculators; at least one section must be present.
pub fn theory_report(params_path: &Path) -> Result<Vec<TheoryRow>, CliError> {
    let text = fs::read_to_string(params_path).map_err(|source| ConfigError::Read {
        path: params_path.to_path_buf(),
        source,
    })?;
    let file: TheoryParamsFile =
        serde_json::from_str(&text).map_err(ConfigError::Parse)?;
    if file.contraction.is_none() && file.stationary.is_none() {
        return Err(CliError::Config(ConfigError::Invalid {
            field: "contraction/stationary",
            message: "at least one parameter section is required".into(),
        }));
    }

    let mut rows = Vec::new();
    if let Some(section) = &file.contraction {
        let out = contraction_constants(&TheoryParams {
            kappa0: section.kappa0,
            drift_defect: section.mb,
            mean_field_lipschitz: section.l,
            modulus_bound: section.m_omega,
            lambda: section.lambda,
        })
        .map_err(numeric)?;
        rows.push(TheoryRow::ok("M", out.interaction_bound));
        rows.push(TheoryRow::ok("K0", out.base_rate));
        rows.push(TheoryRow::ok("C", out.prefactor));
        rows.push(TheoryRow::ok("c", out.rate));
    }
    if let Some(section) = &file.stationary {
        let out = stationary_bounds(&StationaryBoundParams {
            feature_dim: section.feature_dim,
            particle_dim: section.d,
            flat_bound: section.m1,
            intrinsic_bound: section.m2,
            log_sobolev: section.c_ls,
            lambda: section.lambda,
        })
        .map_err(numeric)?;
        rows.push(TheoryRow::ok("lambda0", out.lambda_max));
        rows.push(TheoryRow::from_option("H", out.entropy_scale));
        if let Some(h_prime) = out.entropy_scale_all_lambda {
            rows.push(TheoryRow::ok("H_prime", h_prime));
        }
        rows.push(TheoryRow::from_option("v_bound", out.feature_variance_bound));
        rows.push(TheoryRow::from_option("W2sq_bound", out.w2_squared_bound));
        rows.push(TheoryRow::from_option("TVsq_bound", out.tv_squared_bound));
        rows.push(TheoryRow::ok("concave_bound", out.concave_bound));
    }
    Ok(rows)
}

pub fn write_theory_csv(rows: &[TheoryRow], path: &Path) -> Result<(), CliError> {
    write_csv(
        path,
        "metric,value,status",
        rows.iter()
            .map(|r| format!("{},{},{}", r.metric, fmt_opt(r.value), r.status)),
    )?;
    Ok(())
}

/// Finds the fixed points of the Curie–Weiss self-consistency map for
/// `ℓ₀(x) = alpha·tanh(beta·x)`.
pub fn curie_weiss_fixed_points(
    alpha: f64,
    beta: f64,
    grid_step: Option<f64>,
) -> Result<Vec<f64>, CliError> {
    let model = CurieWeissModel::scaled_tanh(alpha, beta).map_err(|e| {
        CliError::Config(ConfigError::Invalid {
            field: "alpha/beta",
            message: e.to_string(),
        })
    })?;
    let step = grid_step.unwrap_or_else(|| default_grid_step(&model));
    self_consistency_fixed_points(&model, step).map_err(numeric)
}

pub fn write_fixed_points_csv(roots: &[f64], path: &Path) -> Result<(), CliError> {
    write_csv(path, "root", roots.iter().map(|r| r.to_string()))?;
    Ok(())
}
