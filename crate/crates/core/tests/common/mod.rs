//! Shared finite-difference oracles and toy models for the integration
//! suites. These deliberately re-derive quantities from scratch instead of
//! calling the analytic code paths they check.

use simkv::dynamics::RngStream;
use simkv::mean_field::CylindricalModel;

pub const FD_STEP: f64 = 1e-5;
pub const FD_TOLERANCE: f64 = 1e-5;

/// Central finite-difference Jacobian of ℓ (row-major D×d).
pub fn fd_feature_jacobian<M: CylindricalModel<f64> + ?Sized>(model: &M, x: &[f64]) -> Vec<f64> {
    let d = model.particle_dim();
    let big_d = model.feature_dim();
    let mut jacobian = vec![0.0; big_d * d];
    let mut probe = x.to_vec();
    for j in 0..d {
        probe[j] = x[j] + FD_STEP;
        let plus = model.features(&probe);
        probe[j] = x[j] - FD_STEP;
        let minus = model.features(&probe);
        probe[j] = x[j];
        for nu in 0..big_d {
            jacobian[nu * d + j] = (plus[nu] - minus[nu]) / (2.0 * FD_STEP);
        }
    }
    jacobian
}

/// Central finite-difference gradient of Φ.
pub fn fd_potential_gradient<M: CylindricalModel<f64> + ?Sized>(model: &M, y: &[f64]) -> Vec<f64> {
    let big_d = model.feature_dim();
    let mut gradient = vec![0.0; big_d];
    let mut probe = y.to_vec();
    for nu in 0..big_d {
        probe[nu] = y[nu] + FD_STEP;
        let plus = model.potential(&probe);
        probe[nu] = y[nu] - FD_STEP;
        let minus = model.potential(&probe);
        probe[nu] = y[nu];
        gradient[nu] = (plus - minus) / (2.0 * FD_STEP);
    }
    gradient
}

/// Central finite-difference spatial gradient of the Gibbs potential
/// `V(y, ·)`.
pub fn fd_gibbs_gradient<M: CylindricalModel<f64> + ?Sized>(
    model: &M,
    y: &[f64],
    x: &[f64],
) -> Vec<f64> {
    let d = model.particle_dim();
    let mut gradient = vec![0.0; d];
    let mut probe = x.to_vec();
    for j in 0..d {
        probe[j] = x[j] + FD_STEP;
        let plus = simkv::gibbs_potential(model, y, &probe).unwrap();
        probe[j] = x[j] - FD_STEP;
        let minus = simkv::gibbs_potential(model, y, &probe).unwrap();
        probe[j] = x[j];
        gradient[j] = (plus - minus) / (2.0 * FD_STEP);
    }
    gradient
}

pub fn random_vector(rng: &mut RngStream, len: usize, scale: f64) -> Vec<f64> {
    (0..len).map(|_| scale * rng.standard_normal::<f64>()).collect()
}

pub fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|&u| u * u).sum::<f64>().sqrt()
}

/// Checks every entry of `analytic` against `reference` with the mixed
/// absolute/relative tolerance used across the gradient suites.
pub fn assert_entries_close(analytic: &[f64], reference: &[f64], label: &str) {
    assert_eq!(analytic.len(), reference.len(), "{label}: length mismatch");
    for (index, (&a, &r)) in analytic.iter().zip(reference).enumerate() {
        let err = (a - r).abs() / (1.0 + r.abs());
        assert!(
            err <= FD_TOLERANCE,
            "{label}[{index}]: analytic {a} vs reference {r} (err {err:.3e})"
        );
    }
}
