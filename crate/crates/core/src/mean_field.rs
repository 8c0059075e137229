//! Cylindrical mean-field functionals `F(m) = Φ(⟨ℓ, m⟩)` and the quantities
//! derived from them: the drift `−∇Φ(y)·∇ℓ(x)`, the Gibbs potential
//! `V(y, x) = ∇Φ(y)·ℓ(x)` and the scalar loss `Φ(y)`.

use std::ops::Range;

use thiserror::Error;

use crate::scalar::Scalar;

/// Errors raised when a model is queried with inconsistent dimensions or
/// constructed from unusable inputs.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("{quantity}: expected length {expected}, got {actual}")]
    DimensionMismatch {
        quantity: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("dataset must contain at least one point")]
    EmptyDataset,
    #[error("model parameter {name} must be {requirement}")]
    InvalidParameter {
        name: &'static str,
        requirement: &'static str,
    },
}

/// A mean-field model that depends on the measure only through the
/// finite-dimensional statistic `y = ⟨ℓ, m⟩`.
///
/// Implementations supply analytic Jacobians and gradients; finite
/// differences are reserved for test oracles. The Jacobian of ℓ is written
/// in row-major order, one feature gradient `∇ℓ^ν` per row, so that the
/// drift contraction walks rows sequentially (`D ≫ d` in the neural-network
/// model, which makes this the cache-friendly orientation).
///
/// Models are immutable after construction and can be shared freely across
/// concurrent trajectory workers.
pub trait CylindricalModel<T: Scalar>: Send + Sync {
    /// Particle-space dimension `d`.
    fn particle_dim(&self) -> usize;

    /// Feature-space dimension `D`.
    fn feature_dim(&self) -> usize;

    /// Diffusion coefficient σ. The convexity/contraction calculators in
    /// [`crate::analysis`] assume σ = 1; models with other values are
    /// simulated as configured.
    fn sigma(&self) -> T;

    /// Writes `ℓ(x)` into `out` (length `D`).
    fn features_into(&self, x: &[T], out: &mut [T]);

    /// Writes the row-major `D×d` Jacobian `∇ℓ(x)` into `out`.
    fn feature_jacobian_into(&self, x: &[T], out: &mut [T]);

    /// `Φ(y)`.
    fn potential(&self, y: &[T]) -> T;

    /// Writes `∇Φ(y)` into `out` (length `D`).
    fn potential_gradient_into(&self, y: &[T], out: &mut [T]);

    /// Feature coordinates holding the mean-field statistic reported as
    /// `E|Y₀|²` by the empirical summaries.
    fn stat_block(&self) -> Range<usize> {
        0..self.feature_dim()
    }

    /// Allocating convenience for [`Self::features_into`].
    fn features(&self, x: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.feature_dim()];
        self.features_into(x, &mut out);
        out
    }

    /// Allocating convenience for [`Self::feature_jacobian_into`].
    fn feature_jacobian(&self, x: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.feature_dim() * self.particle_dim()];
        self.feature_jacobian_into(x, &mut out);
        out
    }

    /// Allocating convenience for [`Self::potential_gradient_into`].
    fn potential_gradient(&self, y: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.feature_dim()];
        self.potential_gradient_into(y, &mut out);
        out
    }
}

impl<T: Scalar, M: CylindricalModel<T> + ?Sized> CylindricalModel<T> for &M {
    fn particle_dim(&self) -> usize {
        (**self).particle_dim()
    }
    fn feature_dim(&self) -> usize {
        (**self).feature_dim()
    }
    fn sigma(&self) -> T {
        (**self).sigma()
    }
    fn features_into(&self, x: &[T], out: &mut [T]) {
        (**self).features_into(x, out)
    }
    fn feature_jacobian_into(&self, x: &[T], out: &mut [T]) {
        (**self).feature_jacobian_into(x, out)
    }
    fn potential(&self, y: &[T]) -> T {
        (**self).potential(y)
    }
    fn potential_gradient_into(&self, y: &[T], out: &mut [T]) {
        (**self).potential_gradient_into(y, out)
    }
    fn stat_block(&self) -> Range<usize> {
        (**self).stat_block()
    }
}

fn check_len(quantity: &'static str, expected: usize, actual: usize) -> Result<(), ModelError> {
    if expected == actual {
        Ok(())
    } else {
        Err(ModelError::DimensionMismatch {
            quantity,
            expected,
            actual,
        })
    }
}

/// Scratch buffers for repeated drift evaluations.
#[derive(Debug, Clone)]
pub struct DriftScratch<T> {
    jacobian: Vec<T>,
    gradient: Vec<T>,
}

impl<T: Scalar> DriftScratch<T> {
    pub fn for_model<M: CylindricalModel<T> + ?Sized>(model: &M) -> Self {
        Self {
            jacobian: vec![T::zero(); model.feature_dim() * model.particle_dim()],
            gradient: vec![T::zero(); model.feature_dim()],
        }
    }
}

/// Drift `b(y, x) = −∇ℓ(x)ᵀ ∇Φ(y)`, written into `out` (length `d`).
///
/// Dimensions must have been validated by the caller; this is the
/// allocation-free kernel used inside the steppers.
pub fn drift_into<T: Scalar, M: CylindricalModel<T> + ?Sized>(
    model: &M,
    y: &[T],
    x: &[T],
    scratch: &mut DriftScratch<T>,
    out: &mut [T],
) {
    let d = model.particle_dim();
    debug_assert_eq!(x.len(), d);
    debug_assert_eq!(y.len(), model.feature_dim());
    debug_assert_eq!(out.len(), d);

    model.potential_gradient_into(y, &mut scratch.gradient);
    model.feature_jacobian_into(x, &mut scratch.jacobian);

    for o in out.iter_mut() {
        *o = T::zero();
    }
    for (feature, &g) in scratch.gradient.iter().enumerate() {
        if g == T::zero() {
            continue;
        }
        let row = &scratch.jacobian[feature * d..(feature + 1) * d];
        for (o, &j) in out.iter_mut().zip(row) {
            *o -= g * j;
        }
    }
}

/// Drift `b(y, x) = −∇Φ(y)·∇ℓ(x)` evaluated at features `y` and position `x`.
pub fn drift<T: Scalar, M: CylindricalModel<T> + ?Sized>(
    model: &M,
    y: &[T],
    x: &[T],
) -> Result<Vec<T>, ModelError> {
    check_len("drift position x", model.particle_dim(), x.len())?;
    check_len("drift features y", model.feature_dim(), y.len())?;
    let mut scratch = DriftScratch::for_model(model);
    let mut out = vec![T::zero(); model.particle_dim()];
    drift_into(model, y, x, &mut scratch, &mut out);
    Ok(out)
}

/// Gibbs potential `V(y, x) = ∇Φ(y)·ℓ(x)`; satisfies `−∇ₓV = drift`.
pub fn gibbs_potential<T: Scalar, M: CylindricalModel<T> + ?Sized>(
    model: &M,
    y: &[T],
    x: &[T],
) -> Result<T, ModelError> {
    check_len("gibbs position x", model.particle_dim(), x.len())?;
    check_len("gibbs features y", model.feature_dim(), y.len())?;
    let features = model.features(x);
    let gradient = model.potential_gradient(y);
    Ok(gradient
        .iter()
        .zip(&features)
        .map(|(&g, &f)| g * f)
        .fold(T::zero(), |acc, v| acc + v))
}

/// Scalar loss `Φ(y)`.
pub fn loss<T: Scalar, M: CylindricalModel<T> + ?Sized>(model: &M, y: &[T]) -> T {
    debug_assert_eq!(y.len(), model.feature_dim());
    model.potential(y)
}
