//! Closed-form calculators for the contraction constants of the coupled
//! dynamics and for the stationary-measure distance bounds, plus the exact
//! stationary law of the Gaussian model.

use crate::scalar::{cast, cast_usize, Scalar};

use super::AnalysisError;

/// Inputs of the contraction calculator: the semi-monotonicity profile
/// `κ(r) = κ₀ − M_b/r` of the frozen-measure drift, the mean-field Lipschitz
/// constant `L` with modulus bound `M_ω`, and the interaction rate `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryParams<T> {
    pub kappa0: T,
    pub drift_defect: T,
    pub mean_field_lipschitz: T,
    pub modulus_bound: T,
    pub lambda: T,
}

/// Output of [`contraction_constants`]: the joint process contracts like
/// `C·e^{−c·t}` in the weighted metric with the listed base quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionConstants<T> {
    /// Prefactor `C ≥ 1`.
    pub prefactor: T,
    /// Exponential rate `c > 0`.
    pub rate: T,
    /// Combined interaction bound `M = M_b + 2·L·M_ω`.
    pub interaction_bound: T,
    /// Base rate `K₀ = min(κ₀, λ/2)`.
    pub base_rate: T,
}

/// Evaluates
/// `M = M_b + 2LM_ω`, `K₀ = min(κ₀, λ/2)`,
/// `C = 1 + (2M/√K₀)·exp(M²/4K₀)` and
/// `c = (1/K₀ + (2M/K₀^{3/2})·exp(M²/4K₀))⁻¹`.
pub fn contraction_constants<T: Scalar>(
    params: &TheoryParams<T>,
) -> Result<ContractionConstants<T>, AnalysisError> {
    if !(params.kappa0 > T::zero()) || !params.kappa0.is_finite() {
        return Err(AnalysisError::InvalidParameter {
            name: "kappa0",
            requirement: "positive and finite",
        });
    }
    if !(params.lambda > T::zero()) || !params.lambda.is_finite() {
        return Err(AnalysisError::InvalidParameter {
            name: "lambda",
            requirement: "positive and finite",
        });
    }
    for (name, value) in [
        ("drift_defect", params.drift_defect),
        ("mean_field_lipschitz", params.mean_field_lipschitz),
        ("modulus_bound", params.modulus_bound),
    ] {
        if !(value >= T::zero()) || !value.is_finite() {
            return Err(AnalysisError::InvalidParameter {
                name,
                requirement: "non-negative and finite",
            });
        }
    }

    let two = T::one() + T::one();
    let four = two + two;
    let interaction_bound =
        params.drift_defect + two * params.mean_field_lipschitz * params.modulus_bound;
    let base_rate = params.kappa0.min(params.lambda / two);
    let growth = (interaction_bound * interaction_bound / (four * base_rate)).exp();
    let prefactor = T::one() + two * interaction_bound / base_rate.sqrt() * growth;
    let rate = (T::one() / base_rate
        + two * interaction_bound / (base_rate * base_rate.sqrt()) * growth)
        .recip();
    Ok(ContractionConstants {
        prefactor,
        rate,
        interaction_bound,
        base_rate,
    })
}

/// Inputs of [`stationary_bounds`]: feature and particle dimensions, the
/// second-derivative bounds `M₁` (flat, optional) and `M₂` (intrinsic), the
/// uniform log-Sobolev constant and the interaction rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryBoundParams<T> {
    pub feature_dim: usize,
    pub particle_dim: usize,
    pub flat_bound: Option<T>,
    pub intrinsic_bound: T,
    pub log_sobolev: T,
    pub lambda: T,
}

/// Distance bounds between the stationary self-interacting law and the
/// mean-field invariant measure. The entropy-scale quantities based on `H`
/// exist only on `λ < lambda_max`; `entropy_scale_all_lambda` (`H′`) exists
/// only when the flat bound `M₁` is supplied and is valid for every `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryBounds<T> {
    /// `λ₀`, the upper edge of the small-λ regime.
    pub lambda_max: T,
    /// `H` (None when `λ ≥ λ₀`).
    pub entropy_scale: Option<T>,
    /// `H′ = (C_LS/2)(D + 2M₁)λ` (None when `M₁` is absent).
    pub entropy_scale_all_lambda: Option<T>,
    /// Bound on the feature-statistic variance `v(ρ²)`.
    pub feature_variance_bound: Option<T>,
    /// Bound on `W₂²` between the particle marginal and the invariant measure.
    pub w2_squared_bound: Option<T>,
    /// Bound on the squared total-variation distance.
    pub tv_squared_bound: Option<T>,
    /// Concave-potential bound `(M₂·C_LS²·D/2)·λ`.
    pub concave_bound: T,
}

/// Evaluates the stationary distance bounds
/// (`λ₀`, `H`, `H′` and the `H`-multiplied variance/W₂²/TV² bounds).
pub fn stationary_bounds<T: Scalar>(
    params: &StationaryBoundParams<T>,
) -> Result<StationaryBounds<T>, AnalysisError> {
    if params.feature_dim == 0 {
        return Err(AnalysisError::InvalidParameter {
            name: "feature_dim",
            requirement: "positive",
        });
    }
    if params.particle_dim == 0 {
        return Err(AnalysisError::InvalidParameter {
            name: "particle_dim",
            requirement: "positive",
        });
    }
    for (name, value) in [
        ("intrinsic_bound", params.intrinsic_bound),
        ("log_sobolev", params.log_sobolev),
        ("lambda", params.lambda),
    ] {
        if !(value > T::zero()) || !value.is_finite() {
            return Err(AnalysisError::InvalidParameter {
                name,
                requirement: "positive and finite",
            });
        }
    }
    if let Some(flat) = params.flat_bound {
        if !(flat > T::zero()) || !flat.is_finite() {
            return Err(AnalysisError::InvalidParameter {
                name: "flat_bound",
                requirement: "positive and finite when supplied",
            });
        }
    }

    let one = T::one();
    let two = one + one;
    let four = two + two;
    let m2 = params.intrinsic_bound;
    let cls = params.log_sobolev;
    let lambda = params.lambda;
    let dim_d: T = cast_usize(params.feature_dim);
    let dim_x: T = cast_usize(params.particle_dim);

    let m2cls = m2 * cls;
    let s = m2cls * m2cls + one;
    let root = s.sqrt();
    // a = 1 + 2·M₂·C_LS·√(M₂²C_LS² + 1), the bracket shared by λ₀ and H.
    let bracket = one + two * m2cls * root;
    let forty_eight: T = cast(48.0);
    let ninety_six: T = cast(96.0);
    let twenty_four: T = cast(24.0);

    let lambda_max = (forty_eight * m2 * cls * cls * bracket).recip();

    let entropy_scale = if lambda < lambda_max {
        let numerator = cls * (dim_d + twenty_four * m2cls * dim_x) * lambda;
        let denominator = two - ninety_six * m2 * cls * cls * bracket * lambda;
        Some(numerator / denominator)
    } else {
        None
    };

    let entropy_scale_all_lambda = params
        .flat_bound
        .map(|m1| cls / two * (dim_d + two * m1) * lambda);

    let variance_factor = four * m2cls * s;
    let w2_factor = two * cls + four * m2 * cls * cls * root;
    let tv_factor = four + four * two * m2cls * root;

    let concave_bound = m2 * cls * cls * dim_d / two * lambda;

    Ok(StationaryBounds {
        lambda_max,
        entropy_scale,
        entropy_scale_all_lambda,
        feature_variance_bound: entropy_scale.map(|h| variance_factor * h),
        w2_squared_bound: entropy_scale.map(|h| w2_factor * h),
        tv_squared_bound: entropy_scale.map(|h| tv_factor * h),
        concave_bound,
    })
}

/// Closed-form stationary law of the Gaussian model at interaction rate `λ`:
/// a centred Gaussian with isotropic covariances
/// `cov(X) = (λ+2)/(4(λ+1))`, `cov(Y₀) = cov(X, Y₀) = λ/(4(λ+1))`,
/// `E|Y₀|² = dλ/(4(1+λ))` and
/// `W₂²(Law(X), m*) = (d/2)(1 − √(1 − λ/(2(1+λ))))²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianStationary<T> {
    pub cov_xx: T,
    pub cov_yy: T,
    pub cov_xy: T,
    pub y0_second_moment: T,
    pub w2_squared: T,
}

pub fn gaussian_oracle<T: Scalar>(lambda: T, dim: usize) -> Result<GaussianStationary<T>, AnalysisError> {
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return Err(AnalysisError::InvalidParameter {
            name: "lambda",
            requirement: "positive and finite",
        });
    }
    if dim == 0 {
        return Err(AnalysisError::InvalidParameter {
            name: "dim",
            requirement: "positive",
        });
    }
    let one = T::one();
    let two = one + one;
    let four = two + two;
    let d: T = cast_usize(dim);

    let cov_xx = (lambda + two) / (four * (lambda + one));
    let cov_yy = lambda / (four * (lambda + one));
    let shrink = one - lambda / (two * (one + lambda));
    let gap = one - shrink.sqrt();
    Ok(GaussianStationary {
        cov_xx,
        cov_yy,
        cov_xy: cov_yy,
        y0_second_moment: d * cov_yy,
        w2_squared: d / two * gap * gap,
    })
}
