//! Closed-form theory calculators, the Gaussian stationary oracle, the
//! Curie–Weiss self-consistency map with fixed-point search, and empirical
//! statistics over simulation output.

mod curie_weiss;
mod stats;
mod theory;

use thiserror::Error;

pub use curie_weiss::{
    default_grid_step, self_consistency_fixed_points, self_consistency_map,
};
pub use stats::{
    empirical_stats, stats_from_moments, w2_squared_1d, welch_one_sided_less, MetricValue,
    RepMoments, StationaryReport, WelchTest,
};
pub use theory::{
    contraction_constants, gaussian_oracle, stationary_bounds, ContractionConstants,
    GaussianStationary, StationaryBoundParams, StationaryBounds, TheoryParams,
};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("parameter {name} must be {requirement}")]
    InvalidParameter {
        name: &'static str,
        requirement: &'static str,
    },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("quadrature tail mass too large: the integration interval does not capture the weight")]
    QuadratureTail,
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("sample sets must have equal nonzero lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
}
