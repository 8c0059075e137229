//! Exactly solvable Gaussian model: `ℓ(x) = (x, |x|²/2)`,
//! `Φ(y₀, y₁) = |y₀|²/2 + y₁`, so the drift is `−x − y₀` and every
//! stationary quantity has a closed form (see `analysis::gaussian_oracle`).

use std::ops::Range;

use crate::mean_field::CylindricalModel;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianModel<T> {
    dim: usize,
    sigma: T,
}

impl<T: Scalar> GaussianModel<T> {
    /// Particle dimension `d`; the feature dimension is `d + 1` and σ = 1.
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "particle dimension must be positive");
        Self {
            dim,
            sigma: T::one(),
        }
    }
}

impl<T: Scalar> CylindricalModel<T> for GaussianModel<T> {
    fn particle_dim(&self) -> usize {
        self.dim
    }

    fn feature_dim(&self) -> usize {
        self.dim + 1
    }

    fn sigma(&self) -> T {
        self.sigma
    }

    fn features_into(&self, x: &[T], out: &mut [T]) {
        let half = T::one() / (T::one() + T::one());
        let mut sq = T::zero();
        for (o, &v) in out[..self.dim].iter_mut().zip(x) {
            *o = v;
            sq += v * v;
        }
        out[self.dim] = half * sq;
    }

    fn feature_jacobian_into(&self, x: &[T], out: &mut [T]) {
        let d = self.dim;
        for v in out.iter_mut() {
            *v = T::zero();
        }
        for i in 0..d {
            out[i * d + i] = T::one();
        }
        out[d * d..d * d + d].copy_from_slice(x);
    }

    fn potential(&self, y: &[T]) -> T {
        let half = T::one() / (T::one() + T::one());
        let sq = y[..self.dim]
            .iter()
            .map(|&v| v * v)
            .fold(T::zero(), |acc, v| acc + v);
        half * sq + y[self.dim]
    }

    fn potential_gradient_into(&self, y: &[T], out: &mut [T]) {
        out[..self.dim].copy_from_slice(&y[..self.dim]);
        out[self.dim] = T::one();
    }

    fn stat_block(&self) -> Range<usize> {
        0..self.dim
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mean_field::{drift, gibbs_potential, loss};
    use approx::assert_relative_eq;

    #[test]
    fn drift_is_minus_x_minus_y0() {
        let model = GaussianModel::<f64>::new(1);
        assert_eq!(drift(&model, &[1.0, 0.0], &[2.0]).unwrap(), vec![-3.0]);
        // y₀ = 0 leaves the plain Ornstein–Uhlenbeck drift −x.
        assert_eq!(drift(&model, &[0.0, 7.0], &[2.0]).unwrap(), vec![-2.0]);

        let model = GaussianModel::<f64>::new(3);
        let y = vec![0.5, -1.0, 2.0, 0.3];
        let x = vec![1.0, 1.0, -1.0];
        assert_eq!(
            drift(&model, &y, &x).unwrap(),
            vec![-1.5, 0.0, -1.0]
        );
    }

    #[test]
    fn gibbs_potential_is_y0_dot_x_plus_half_x_sq() {
        let model = GaussianModel::<f64>::new(2);
        let y = vec![0.5, -0.25, 9.0];
        let x = vec![2.0, 4.0];
        let expected = 0.5 * 2.0 + (-0.25) * 4.0 + 0.5 * (4.0 + 16.0);
        assert_relative_eq!(
            gibbs_potential(&model, &y, &x).unwrap(),
            expected,
            max_relative = 1e-15
        );
        // Zero potential gradient block: only the |x|²/2 term survives.
        let y = vec![0.0, 0.0, 3.0];
        assert_relative_eq!(
            gibbs_potential(&model, &y, &x).unwrap(),
            10.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn loss_expands_directly() {
        let model = GaussianModel::<f64>::new(2);
        let y = vec![3.0, 4.0, 0.25];
        assert_relative_eq!(loss(&model, &y), 12.5 + 0.25, max_relative = 1e-15);
    }
}
