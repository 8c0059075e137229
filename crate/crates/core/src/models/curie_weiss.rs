//! Curie–Weiss ferromagnet: `ℓ(x) = (ℓ₀(x), x²/2)` with an odd, bounded,
//! increasing interaction function `ℓ₀ = α·tanh(βx)` and
//! `Φ(y₀, y₁) = −y₀²/2 + y₁`, giving the drift `y₀·ℓ₀′(x) − x`.

use std::ops::Range;

use crate::mean_field::{CylindricalModel, ModelError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct CurieWeissModel<T> {
    amplitude: T,
    slope: T,
}

impl<T: Scalar> CurieWeissModel<T> {
    /// Builds the model for `ℓ₀(x) = amplitude·tanh(slope·x)`.
    pub fn scaled_tanh(amplitude: T, slope: T) -> Result<Self, ModelError> {
        if !(amplitude > T::zero()) || !amplitude.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "amplitude",
                requirement: "positive and finite",
            });
        }
        if !(slope > T::zero()) || !slope.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "slope",
                requirement: "positive and finite",
            });
        }
        Ok(Self { amplitude, slope })
    }

    /// `ℓ₀(x)`.
    pub fn interaction(&self, x: T) -> T {
        self.amplitude * (self.slope * x).tanh()
    }

    /// `ℓ₀′(x) = αβ·(1 − tanh²(βx))`.
    pub fn interaction_derivative(&self, x: T) -> T {
        let th = (self.slope * x).tanh();
        self.amplitude * self.slope * (T::one() - th * th)
    }

    /// `‖ℓ₀‖_∞ = α`.
    pub fn sup_norm(&self) -> T {
        self.amplitude
    }

    /// `‖ℓ₀′‖_∞ = αβ` (the derivative peaks at the origin).
    pub fn derivative_sup_norm(&self) -> T {
        self.amplitude * self.slope
    }
}

impl<T: Scalar> CylindricalModel<T> for CurieWeissModel<T> {
    fn particle_dim(&self) -> usize {
        1
    }

    fn feature_dim(&self) -> usize {
        2
    }

    fn sigma(&self) -> T {
        T::one()
    }

    fn features_into(&self, x: &[T], out: &mut [T]) {
        let half = T::one() / (T::one() + T::one());
        out[0] = self.interaction(x[0]);
        out[1] = half * x[0] * x[0];
    }

    fn feature_jacobian_into(&self, x: &[T], out: &mut [T]) {
        out[0] = self.interaction_derivative(x[0]);
        out[1] = x[0];
    }

    fn potential(&self, y: &[T]) -> T {
        let half = T::one() / (T::one() + T::one());
        -half * y[0] * y[0] + y[1]
    }

    fn potential_gradient_into(&self, y: &[T], out: &mut [T]) {
        out[0] = -y[0];
        out[1] = T::one();
    }

    fn stat_block(&self) -> Range<usize> {
        0..1
    }
}
