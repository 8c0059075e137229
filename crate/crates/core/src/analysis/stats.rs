//! Empirical statistics over recorded trajectory states: moment summaries
//! with repetition-level (batch-means) standard errors, the 1-D sorted
//! Wasserstein distance and a one-sided Welch test.

use std::ops::Range;

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::analysis::GaussianStationary;
use crate::dynamics::SIState;
use crate::scalar::{cast, cast_usize, Scalar};

use super::AnalysisError;

/// Per-repetition accumulator of the sums needed by the reports. Pushing is
/// O(d + |stat block|) per sample; accumulators merge associatively across
/// samples of the same repetition.
#[derive(Debug, Clone)]
pub struct RepMoments<T> {
    count: u64,
    sum_x: Vec<T>,
    sum_x_sq: Vec<T>,
    sum_stat_sq: T,
    stat_block: Range<usize>,
}

impl<T: Scalar> RepMoments<T> {
    pub fn new(particle_dim: usize, stat_block: Range<usize>) -> Self {
        Self {
            count: 0,
            sum_x: vec![T::zero(); particle_dim],
            sum_x_sq: vec![T::zero(); particle_dim],
            sum_stat_sq: T::zero(),
            stat_block,
        }
    }

    pub fn push(&mut self, state: &SIState<T>) {
        debug_assert_eq!(state.x.len(), self.sum_x.len());
        self.count += 1;
        for (sum, &v) in self.sum_x.iter_mut().zip(&state.x) {
            *sum += v;
        }
        for (sum_sq, &v) in self.sum_x_sq.iter_mut().zip(&state.x) {
            *sum_sq += v * v;
        }
        let stat = &state.y[self.stat_block.clone()];
        self.sum_stat_sq += stat.iter().map(|&v| v * v).fold(T::zero(), |a, v| a + v);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn particle_dim(&self) -> usize {
        self.sum_x.len()
    }

    fn n(&self) -> T {
        cast::<T>(self.count as f64)
    }

    /// Sample mean of coordinate `i` of `X`.
    pub fn x_mean(&self, i: usize) -> T {
        self.sum_x[i] / self.n()
    }

    /// Unbiased sample variance of coordinate `i` of `X`.
    pub fn x_variance(&self, i: usize) -> T {
        let n = self.n();
        let mean = self.x_mean(i);
        (self.sum_x_sq[i] - n * mean * mean) / (n - T::one())
    }

    /// Mean of `|Y₀|²` over the stat block.
    pub fn stat_second_moment(&self) -> T {
        self.sum_stat_sq / self.n()
    }
}

/// One named metric with an optional batch-means standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricValue<T> {
    pub name: String,
    pub value: T,
    pub stderr: Option<T>,
}

/// Flat key-value report; serialised as `metric,value,stderr` CSV rows.
#[derive(Debug, Clone)]
pub struct StationaryReport<T> {
    pub metrics: Vec<MetricValue<T>>,
}

impl<T> Default for StationaryReport<T> {
    fn default() -> Self {
        Self {
            metrics: Vec::new(),
        }
    }
}

impl<T: Scalar> StationaryReport<T> {
    pub fn get(&self, name: &str) -> Option<&MetricValue<T>> {
        self.metrics.iter().find(|m| m.name == name)
    }

    pub fn value(&self, name: &str) -> Option<T> {
        self.get(name).map(|m| m.value)
    }

    fn push(&mut self, name: String, value: T, stderr: Option<T>) {
        self.metrics.push(MetricValue {
            name,
            value,
            stderr,
        });
    }
}

fn mean_and_stderr<T: Scalar>(values: &[T]) -> (T, Option<T>) {
    let n = cast_usize::<T>(values.len());
    let mean = values.iter().fold(T::zero(), |a, &v| a + v) / n;
    if values.len() < 2 {
        return (mean, None);
    }
    let var = values
        .iter()
        .map(|&v| (v - mean) * (v - mean))
        .fold(T::zero(), |a, v| a + v)
        / (n - T::one());
    (mean, Some((var / n).sqrt()))
}

/// Builds the stationary report from per-repetition accumulators. Values are
/// means of the per-repetition statistics; standard errors are batch means
/// over repetitions (absent with a single repetition).
pub fn stats_from_moments<T: Scalar>(
    reps: &[RepMoments<T>],
    oracle: Option<&GaussianStationary<T>>,
) -> Result<StationaryReport<T>, AnalysisError> {
    if reps.is_empty() {
        return Err(AnalysisError::TooFewSamples { needed: 2, got: 0 });
    }
    let total: u64 = reps.iter().map(|r| r.count).sum();
    if total < 2 {
        return Err(AnalysisError::TooFewSamples {
            needed: 2,
            got: total as usize,
        });
    }
    for rep in reps {
        if rep.count < 2 {
            return Err(AnalysisError::TooFewSamples {
                needed: 2,
                got: rep.count as usize,
            });
        }
    }
    let dim = reps[0].particle_dim();

    let mut report = StationaryReport::default();

    let stat_sq: Vec<T> = reps.iter().map(|r| r.stat_second_moment()).collect();
    let (stat_mean, stat_se) = mean_and_stderr(&stat_sq);
    report.push("EY0sq".into(), stat_mean, stat_se);

    let mut x_means = Vec::with_capacity(dim);
    let mut x_vars = Vec::with_capacity(dim);
    for i in 0..dim {
        let means: Vec<T> = reps.iter().map(|r| r.x_mean(i)).collect();
        let (mean, se) = mean_and_stderr(&means);
        x_means.push(mean);
        report.push(format!("X_mean_{i}"), mean, se);
        let vars: Vec<T> = reps.iter().map(|r| r.x_variance(i)).collect();
        let (var, se) = mean_and_stderr(&vars);
        x_vars.push(var);
        report.push(format!("X_var_{i}"), var, se);
    }

    if let Some(oracle) = oracle {
        report.push("EY0sq_oracle".into(), oracle.y0_second_moment, None);
        report.push(
            "EY0sq_rel_err".into(),
            ((stat_mean - oracle.y0_second_moment) / oracle.y0_second_moment).abs(),
            None,
        );
        report.push("X_var_oracle".into(), oracle.cov_xx, None);
        for i in 0..dim {
            report.push(
                format!("X_var_rel_err_{i}"),
                ((x_vars[i] - oracle.cov_xx) / oracle.cov_xx).abs(),
                None,
            );
        }
        // W₂² between Gaussian fits: per-coordinate mean offsets plus the
        // standard-deviation gaps against the oracle covariance.
        let sigma = oracle.cov_xx.sqrt();
        let mut w2 = T::zero();
        for i in 0..dim {
            let gap = x_vars[i].max(T::zero()).sqrt() - sigma;
            w2 += x_means[i] * x_means[i] + gap * gap;
        }
        report.push("W2sq_x_vs_oracle".into(), w2, None);
    }

    Ok(report)
}

/// Convenience over [`stats_from_moments`] for already-collected samples,
/// grouped by repetition.
pub fn empirical_stats<T: Scalar>(
    rep_samples: &[Vec<SIState<T>>],
    stat_block: Range<usize>,
    oracle: Option<&GaussianStationary<T>>,
) -> Result<StationaryReport<T>, AnalysisError> {
    let dim = rep_samples
        .iter()
        .flat_map(|rep| rep.first())
        .map(|s| s.x.len())
        .next()
        .ok_or(AnalysisError::TooFewSamples { needed: 2, got: 0 })?;
    let moments: Vec<RepMoments<T>> = rep_samples
        .iter()
        .map(|samples| {
            let mut acc = RepMoments::new(dim, stat_block.clone());
            for state in samples {
                acc.push(state);
            }
            acc
        })
        .collect();
    stats_from_moments(&moments, oracle)
}

/// Squared 1-D Wasserstein-2 distance between two equally sized empirical
/// measures via the sorted (quantile) coupling, which is optimal in one
/// dimension.
pub fn w2_squared_1d<T: Scalar>(a: &[T], b: &[T]) -> Result<T, AnalysisError> {
    if a.is_empty() || a.len() != b.len() {
        return Err(AnalysisError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|u, v| u.partial_cmp(v).expect("samples must not contain NaN"));
    b.sort_by(|u, v| u.partial_cmp(v).expect("samples must not contain NaN"));
    let n = cast_usize::<T>(a.len());
    Ok(a.iter()
        .zip(&b)
        .map(|(&u, &v)| (u - v) * (u - v))
        .fold(T::zero(), |acc, v| acc + v)
        / n)
}

/// Result of a one-sided Welch two-sample test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelchTest<T> {
    pub t_statistic: T,
    pub degrees_of_freedom: T,
    /// p-value for the alternative `mean(a) < mean(b)`.
    pub p_value: T,
}

/// Welch's unequal-variance t-test with the one-sided alternative
/// `mean(a) < mean(b)` (small p favours the alternative).
pub fn welch_one_sided_less<T: Scalar>(a: &[T], b: &[T]) -> Result<WelchTest<T>, AnalysisError> {
    if a.len() < 2 || b.len() < 2 {
        return Err(AnalysisError::TooFewSamples {
            needed: 2,
            got: a.len().min(b.len()),
        });
    }
    let stats = |v: &[T]| {
        let n = cast_usize::<T>(v.len());
        let mean = v.iter().fold(T::zero(), |acc, &x| acc + x) / n;
        let var = v
            .iter()
            .map(|&x| (x - mean) * (x - mean))
            .fold(T::zero(), |acc, x| acc + x)
            / (n - T::one());
        (mean, var, n)
    };
    let (mean_a, var_a, n_a) = stats(a);
    let (mean_b, var_b, n_b) = stats(b);
    let se_a = var_a / n_a;
    let se_b = var_b / n_b;
    let pooled = se_a + se_b;

    if pooled == T::zero() {
        // Degenerate zero-variance samples: the ordering is decided exactly.
        let p = if mean_a < mean_b {
            T::zero()
        } else {
            T::one()
        };
        return Ok(WelchTest {
            t_statistic: if mean_a < mean_b {
                -T::infinity()
            } else {
                T::infinity()
            },
            degrees_of_freedom: T::infinity(),
            p_value: p,
        });
    }

    let t = (mean_a - mean_b) / pooled.sqrt();
    let dof = pooled * pooled
        / (se_a * se_a / (n_a - T::one()) + se_b * se_b / (n_b - T::one()));
    let dist = StudentsT::new(0.0, 1.0, dof.to_f64().expect("dof fits f64"))
        .expect("valid Student-t parameters");
    let p = dist.cdf(t.to_f64().expect("t statistic fits f64"));
    Ok(WelchTest {
        t_statistic: t,
        degrees_of_freedom: dof,
        p_value: cast(p),
    })
}
