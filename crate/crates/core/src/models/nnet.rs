//! Two-layer neural network trained through a single self-interacting
//! neuron `x = (c, a, b)`. The features are
//! `ℓ⁰(x) = |x|²` and `ℓᵏ(x) = f(x; z_k) − y_k` with
//! `f(x; z) = τ(c)·φ(a·z + b)`, and the outer potential is
//! `Φ(θ) = (σ²γ/2)·θ₀ + (1/2K)·Σ_k θ_k²`.

use std::ops::Range;

use crate::mean_field::{CylindricalModel, ModelError};
use crate::scalar::Scalar;

use super::Dataset;

/// Parameters of the neural-network model.
#[derive(Debug, Clone)]
pub struct NNetSpec<T> {
    pub dataset: Dataset<T>,
    /// Truncation threshold `L` of the output clamp `τ`.
    pub truncation: T,
    /// `σ²/2` of the driving noise.
    pub sigma2_half: T,
    /// Entropic regularisation weight `γ`.
    pub gamma: T,
}

#[derive(Debug, Clone)]
pub struct NNetModel<T> {
    dataset: Dataset<T>,
    truncation: T,
    gamma: T,
    sigma: T,
    /// `σ²γ/2`, the coefficient of `θ₀` in Φ.
    weight_decay_half: T,
    particle_dim: usize,
}

impl<T: Scalar> NNetModel<T> {
    pub fn new(spec: NNetSpec<T>) -> Result<Self, ModelError> {
        if spec.dataset.is_empty() {
            return Err(ModelError::EmptyDataset);
        }
        if !(spec.truncation > T::zero()) || !spec.truncation.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "truncation",
                requirement: "positive and finite",
            });
        }
        if !(spec.sigma2_half > T::zero()) || !spec.sigma2_half.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "sigma2_half",
                requirement: "positive and finite",
            });
        }
        if !(spec.gamma > T::zero()) || !spec.gamma.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "gamma",
                requirement: "positive and finite",
            });
        }
        let two = T::one() + T::one();
        let particle_dim = 1 + spec.dataset.input_dim() + 1;
        Ok(Self {
            sigma: (two * spec.sigma2_half).sqrt(),
            weight_decay_half: spec.sigma2_half * spec.gamma,
            dataset: spec.dataset,
            truncation: spec.truncation,
            gamma: spec.gamma,
            particle_dim,
        })
    }

    pub fn dataset(&self) -> &Dataset<T> {
        &self.dataset
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn truncation(&self) -> T {
        self.truncation
    }

    /// Numerically stable sigmoid `φ(u) = 1/(1 + e^{−u})`; the two branches
    /// keep the exponential argument non-positive so wide initialisations
    /// (|u| of order 10³) cannot overflow.
    fn sigmoid(u: T) -> T {
        if u >= T::zero() {
            T::one() / (T::one() + (-u).exp())
        } else {
            let e = u.exp();
            e / (T::one() + e)
        }
    }

    fn clamp(&self, c: T) -> T {
        c.max(-self.truncation).min(self.truncation)
    }

    /// Derivative of the clamp: 1 strictly inside `(−L, L)`, 0 at and beyond
    /// the saturation points (a saturated output stays frozen).
    fn clamp_derivative(&self, c: T) -> T {
        if c.abs() < self.truncation {
            T::one()
        } else {
            T::zero()
        }
    }

    /// `f(x; z_k) = τ(c)·φ(a·z_k + b)`.
    pub fn feature_output(&self, x: &[T], k: usize) -> T {
        let din = self.dataset.input_dim();
        let z = self.dataset.input(k);
        let mut u = x[1 + din];
        for (a, &zi) in x[1..1 + din].iter().zip(z) {
            u += *a * zi;
        }
        self.clamp(x[0]) * Self::sigmoid(u)
    }

    /// `∇f(x; z_k)` with respect to `x = (c, a, b)`.
    pub fn feature_output_gradient_into(&self, x: &[T], k: usize, out: &mut [T]) {
        let din = self.dataset.input_dim();
        let z = self.dataset.input(k);
        let mut u = x[1 + din];
        for (a, &zi) in x[1..1 + din].iter().zip(z) {
            u += *a * zi;
        }
        let s = Self::sigmoid(u);
        let s_prime = s * (T::one() - s);
        let tau = self.clamp(x[0]);
        out[0] = self.clamp_derivative(x[0]) * s;
        for ((o, &zi), _) in out[1..1 + din].iter_mut().zip(z).zip(0..din) {
            *o = tau * s_prime * zi;
        }
        out[1 + din] = tau * s_prime;
    }
}

impl<T: Scalar> CylindricalModel<T> for NNetModel<T> {
    fn particle_dim(&self) -> usize {
        self.particle_dim
    }

    fn feature_dim(&self) -> usize {
        self.dataset.len() + 1
    }

    fn sigma(&self) -> T {
        self.sigma
    }

    fn features_into(&self, x: &[T], out: &mut [T]) {
        out[0] = x.iter().map(|&v| v * v).fold(T::zero(), |acc, v| acc + v);
        for k in 0..self.dataset.len() {
            out[1 + k] = self.feature_output(x, k) - self.dataset.label(k);
        }
    }

    fn feature_jacobian_into(&self, x: &[T], out: &mut [T]) {
        let d = self.particle_dim;
        let two = T::one() + T::one();
        for (o, &v) in out[..d].iter_mut().zip(x) {
            *o = two * v;
        }
        for k in 0..self.dataset.len() {
            let row = &mut out[(1 + k) * d..(2 + k) * d];
            self.feature_output_gradient_into(x, k, row);
        }
    }

    fn potential(&self, y: &[T]) -> T {
        let two = T::one() + T::one();
        let count = T::from_usize(self.dataset.len()).expect("dataset size fits scalar");
        let data_term = y[1..]
            .iter()
            .map(|&v| v * v)
            .fold(T::zero(), |acc, v| acc + v)
            / (two * count);
        self.weight_decay_half * y[0] + data_term
    }

    fn potential_gradient_into(&self, y: &[T], out: &mut [T]) {
        let count = T::from_usize(self.dataset.len()).expect("dataset size fits scalar");
        out[0] = self.weight_decay_half;
        for (o, &v) in out[1..].iter_mut().zip(&y[1..]) {
            *o = v / count;
        }
    }

    /// The residual features `ℓ¹..ℓᴷ`; `ℓ⁰` tracks `⟨|x|², m⟩` and carries no
    /// fluctuation information of its own.
    fn stat_block(&self) -> Range<usize> {
        1..self.feature_dim()
    }
}
