//! Approximation of mean-field invariant measures by a single
//! self-interacting particle.
//!
//! Instead of evolving an N-particle system, a lone particle `X_t` interacts
//! with an exponentially weighted occupation measure of its own past. For
//! mean-field functionals that depend on the measure only through finitely
//! many statistics `y = ⟨ℓ, m⟩` (the cylindrical case), that measure
//! collapses to the finite-dimensional companion state `Y_t`, and the pair
//! `(X_t, Y_t)` is simulated by a plain Euler scheme:
//!
//! ```text
//! X' = X + b(Y, X)·δt + σ·√δt·𝒩,   b(y, x) = −∇Φ(y)·∇ℓ(x)
//! Y' = (1 − λδt)·Y + λδt·ℓ(X')
//! ```
//!
//! The interaction rate `λ` may be constant or follow a non-increasing
//! piecewise-constant annealing schedule. The crate bundles:
//!
//! * [`mean_field`] — cylindrical models `(ℓ, Φ)` with drift, Gibbs
//!   potential and loss;
//! * [`schedules`] — `λ(t)` schedules;
//! * [`dynamics`] — the self-interacting stepper, the N-particle baseline
//!   and a synchronously coupled pair runner, all driven by per-repetition
//!   ChaCha streams;
//! * [`models`] — the exactly solvable Gaussian model, the Curie–Weiss
//!   ferromagnet and a two-layer neural network trained one neuron at a
//!   time;
//! * [`analysis`] — contraction and stationary-distance calculators, the
//!   Gaussian stationary oracle, the Curie–Weiss self-consistency map and
//!   empirical statistics.
//!
//! All numerics are generic over the scalar type through [`scalar::Scalar`]
//! (`f32` or `f64`); the `*64`/`*32` aliases below pin the common choices.

pub mod analysis;
pub mod dynamics;
pub mod mean_field;
pub mod models;
pub mod scalar;
pub mod schedules;

pub use mean_field::{drift, gibbs_potential, loss, CylindricalModel, ModelError};
pub use scalar::Scalar;

/// `f64` aliases for the main simulation types.
pub type SIState64 = dynamics::SIState<f64>;
pub type ParticleSystemState64 = dynamics::ParticleSystemState<f64>;
pub type LambdaSchedule64 = schedules::LambdaSchedule<f64>;
pub type GaussianModel64 = models::GaussianModel<f64>;
pub type CurieWeissModel64 = models::CurieWeissModel<f64>;
pub type NNetModel64 = models::NNetModel<f64>;
pub type GaussianStationary64 = analysis::GaussianStationary<f64>;

/// `f32` aliases for the main simulation types.
pub type SIState32 = dynamics::SIState<f32>;
pub type ParticleSystemState32 = dynamics::ParticleSystemState<f32>;
pub type LambdaSchedule32 = schedules::LambdaSchedule<f32>;
pub type GaussianModel32 = models::GaussianModel<f32>;
pub type CurieWeissModel32 = models::CurieWeissModel<f32>;
pub type NNetModel32 = models::NNetModel<f32>;
