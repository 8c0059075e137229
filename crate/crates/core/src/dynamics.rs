//! Time-stepping engines: the self-interacting Euler scheme, the N-particle
//! baseline and a synchronously coupled pair runner for contraction
//! diagnostics.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::mean_field::{drift_into, loss, CylindricalModel, DriftScratch, ModelError};
use crate::scalar::{cast_usize, Scalar};
use crate::schedules::{LambdaSchedule, ScheduleError};

/// States whose coordinates exceed this magnitude are treated as diverged.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("lambda*dt = {lambda_dt} violates the stability requirement lambda*dt < 1")]
    Unstable { lambda_dt: f64 },
    #[error("state diverged at step {step} (t = {t}): non-finite or above {DIVERGENCE_LIMIT:e}")]
    Diverged { step: u64, t: f64 },
    #[error("time step dt must be positive and finite")]
    InvalidTimeStep,
    #[error("horizon must be non-negative and finite")]
    InvalidHorizon,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

/// Reason a single step failed; callers attach the step index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepFailure {
    Unstable { lambda_dt: f64 },
    NonFinite,
}

impl StepFailure {
    fn into_error<T: Scalar>(self, step: u64, t: T) -> DynamicsError {
        match self {
            StepFailure::Unstable { lambda_dt } => DynamicsError::Unstable { lambda_dt },
            StepFailure::NonFinite => DynamicsError::Diverged {
                step,
                t: t.to_f64().unwrap_or(f64::NAN),
            },
        }
    }
}

/// Deterministic stream of random variates, one per repetition.
///
/// Built on ChaCha12: the master seed selects the key and the stream index
/// selects one of 2⁶⁴ independent streams, so per-repetition generators are
/// reproducible regardless of how repetitions are scheduled across worker
/// threads. Normal variates come from the ziggurat sampler of `rand_distr`
/// (see [`Scalar`]); no other Gaussian source is used anywhere.
#[derive(Debug, Clone)]
pub struct RngStream {
    inner: ChaCha12Rng,
    master_seed: u64,
    stream_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut inner = ChaCha12Rng::seed_from_u64(master_seed);
        inner.set_stream(stream_index);
        Self {
            inner,
            master_seed,
            stream_index,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    pub fn standard_normal<T: Scalar>(&mut self) -> T {
        T::standard_normal(&mut self.inner)
    }

    pub fn fill_standard_normal<T: Scalar>(&mut self, out: &mut [T]) {
        for slot in out.iter_mut() {
            *slot = T::standard_normal(&mut self.inner);
        }
    }

    pub fn unit_uniform<T: Scalar>(&mut self) -> T {
        T::unit_uniform(&mut self.inner)
    }
}

/// Joint state of the self-interacting particle: position `x`, weighted
/// occupation features `y = ⟨ℓ, m⟩` and simulation time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SIState<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
    pub t: T,
}

impl<T: Scalar> SIState<T> {
    pub fn new(x: Vec<T>, y: Vec<T>) -> Self {
        Self {
            x,
            y,
            t: T::zero(),
        }
    }

    pub fn validate_dimensions<M: CylindricalModel<T> + ?Sized>(
        &self,
        model: &M,
    ) -> Result<(), ModelError> {
        if self.x.len() != model.particle_dim() {
            return Err(ModelError::DimensionMismatch {
                quantity: "state position x",
                expected: model.particle_dim(),
                actual: self.x.len(),
            });
        }
        if self.y.len() != model.feature_dim() {
            return Err(ModelError::DimensionMismatch {
                quantity: "state features y",
                expected: model.feature_dim(),
                actual: self.y.len(),
            });
        }
        Ok(())
    }

    fn is_within_bounds(&self) -> bool {
        let limit = cast_limit::<T>();
        self.x
            .iter()
            .chain(self.y.iter())
            .all(|v| v.is_finite() && v.abs() <= limit)
    }
}

fn cast_limit<T: Scalar>() -> T {
    T::from_f64(DIVERGENCE_LIMIT).expect("divergence limit representable")
}

/// Euler stepper for the self-interacting dynamics. Owns the scratch
/// buffers, so one instance per trajectory avoids per-step allocation.
///
/// A step advances
/// `x' = x + b(y, x)·δt + σ·√δt·𝒩` and then
/// `y' = (1 − λδt)·y + λδt·ℓ(x')`,
/// with ℓ evaluated at the freshly moved position.
pub struct Stepper<'m, T, M: ?Sized> {
    model: &'m M,
    scratch: DriftScratch<T>,
    drift: Vec<T>,
    features: Vec<T>,
    noise: Vec<T>,
}

impl<'m, T: Scalar, M: CylindricalModel<T> + ?Sized> Stepper<'m, T, M> {
    pub fn new(model: &'m M) -> Self {
        Self {
            model,
            scratch: DriftScratch::for_model(model),
            drift: vec![T::zero(); model.particle_dim()],
            features: vec![T::zero(); model.feature_dim()],
            noise: vec![T::zero(); model.particle_dim()],
        }
    }

    pub fn model(&self) -> &'m M {
        self.model
    }

    /// Advances `state` by one step, drawing the Gaussian increment from
    /// `rng`.
    pub fn step(
        &mut self,
        state: &mut SIState<T>,
        lambda: T,
        dt: T,
        rng: &mut RngStream,
    ) -> Result<(), StepFailure> {
        for slot in self.noise.iter_mut() {
            *slot = rng.standard_normal();
        }
        self.advance(state, lambda, dt)
    }

    /// Advances `state` with an externally supplied standard-normal vector.
    pub fn step_with_noise(
        &mut self,
        state: &mut SIState<T>,
        lambda: T,
        dt: T,
        noise: &[T],
    ) -> Result<(), StepFailure> {
        debug_assert_eq!(noise.len(), self.noise.len());
        self.noise.copy_from_slice(noise);
        self.advance(state, lambda, dt)
    }

    fn advance(&mut self, state: &mut SIState<T>, lambda: T, dt: T) -> Result<(), StepFailure> {
        let lambda_dt = lambda * dt;
        if !(lambda_dt < T::one()) {
            return Err(StepFailure::Unstable {
                lambda_dt: lambda_dt.to_f64().unwrap_or(f64::NAN),
            });
        }

        drift_into(
            self.model,
            &state.y,
            &state.x,
            &mut self.scratch,
            &mut self.drift,
        );
        let diffusion = self.model.sigma() * dt.sqrt();
        for ((x, &b), &n) in state.x.iter_mut().zip(&self.drift).zip(&self.noise) {
            *x += b * dt + diffusion * n;
        }

        self.model.features_into(&state.x, &mut self.features);
        let keep = T::one() - lambda_dt;
        for (y, &f) in state.y.iter_mut().zip(&self.features) {
            *y = keep * *y + lambda_dt * f;
        }

        state.t += dt;
        if state.is_within_bounds() {
            Ok(())
        } else {
            Err(StepFailure::NonFinite)
        }
    }
}

/// One Euler step of the self-interacting dynamics (allocating convenience).
pub fn si_step<T: Scalar, M: CylindricalModel<T> + ?Sized>(
    model: &M,
    state: &SIState<T>,
    lambda: T,
    dt: T,
    rng: &mut RngStream,
) -> Result<SIState<T>, DynamicsError> {
    state.validate_dimensions(model)?;
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(DynamicsError::InvalidTimeStep);
    }
    let mut next = state.clone();
    let mut stepper = Stepper::new(model);
    stepper
        .step(&mut next, lambda, dt, rng)
        .map_err(|f| f.into_error(1, next.t))?;
    Ok(next)
}

/// Recorded loss value `Φ(Y_t)` at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossSample<T> {
    pub t: T,
    pub value: T,
}

/// Collects the loss series (and optionally full states) along a trajectory
/// at a configurable step stride. The initial and terminal states are always
/// recorded when the run performs at least one step.
#[derive(Debug, Clone)]
pub struct TrajectoryRecorder<T> {
    stride: u64,
    collect_states_from: Option<T>,
    pub losses: Vec<LossSample<T>>,
    pub states: Vec<SIState<T>>,
}

impl<T: Scalar> TrajectoryRecorder<T> {
    pub fn new(stride: u64) -> Self {
        assert!(stride >= 1, "record stride must be at least 1");
        Self {
            stride,
            collect_states_from: None,
            losses: Vec::new(),
            states: Vec::new(),
        }
    }

    /// Also keep full state samples with `t >= from_time` (used for
    /// post-burn-in stationary statistics).
    pub fn collecting_states_from(mut self, from_time: T) -> Self {
        self.collect_states_from = Some(from_time);
        self
    }

    pub(crate) fn observe(&mut self, step: u64, total_steps: u64, state: &SIState<T>, value: T) {
        if step % self.stride == 0 || step == total_steps {
            self.losses.push(LossSample { t: state.t, value });
            if let Some(from) = self.collect_states_from {
                if state.t >= from {
                    self.states.push(state.clone());
                }
            }
        }
    }
}

/// Runs the Euler scheme over `horizon` time units from `init`, evaluating
/// `λ` from `schedule` at the current step time and reporting recorded
/// samples through `recorder`. Returns the terminal state.
///
/// The number of steps is `round(horizon/dt)`; `horizon = 0` returns the
/// initial state untouched with an empty series.
pub fn simulate<T: Scalar, M: CylindricalModel<T> + ?Sized>(
    model: &M,
    schedule: &LambdaSchedule<T>,
    init: SIState<T>,
    dt: T,
    horizon: T,
    rng: &mut RngStream,
    recorder: &mut TrajectoryRecorder<T>,
) -> Result<SIState<T>, DynamicsError> {
    init.validate_dimensions(model)?;
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(DynamicsError::InvalidTimeStep);
    }
    if !(horizon >= T::zero()) || !horizon.is_finite() {
        return Err(DynamicsError::InvalidHorizon);
    }
    let end = init.t + horizon;
    if !schedule.covers(end) {
        return Err(DynamicsError::Schedule(ScheduleError::OutOfRange {
            t: end.to_f64().unwrap_or(f64::NAN),
            total: schedule.total_finite_duration().to_f64().unwrap_or(f64::NAN),
        }));
    }
    let max_lambda_dt = schedule.max_value() * dt;
    if !(max_lambda_dt < T::one()) {
        return Err(DynamicsError::Unstable {
            lambda_dt: max_lambda_dt.to_f64().unwrap_or(f64::NAN),
        });
    }

    let steps = (horizon / dt)
        .round()
        .to_u64()
        .ok_or(DynamicsError::InvalidHorizon)?;
    if steps == 0 {
        return Ok(init);
    }

    let t0 = init.t;
    let mut state = init;
    let mut stepper = Stepper::new(model);
    recorder.observe(0, steps, &state, loss(model, &state.y));
    for step in 1..=steps {
        let lambda = schedule.value_at(state.t)?;
        stepper
            .step(&mut state, lambda, dt, rng)
            .map_err(|f| f.into_error(step, state.t))?;
        // Pin the clock to t0 + step·dt; accumulating `+= dt` would drift.
        state.t = t0 + cast_usize::<T>(step as usize) * dt;
        recorder.observe(step, steps, &state, loss(model, &state.y));
    }
    Ok(state)
}

/// Isotropic Gaussian initial distribution `m₀ = 𝒩(mean, std²·I)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianInit<T> {
    pub mean: Vec<T>,
    pub std: T,
}

impl<T: Scalar> GaussianInit<T> {
    pub fn centered(dim: usize, std: T) -> Self {
        Self {
            mean: vec![T::zero(); dim],
            std,
        }
    }
}

/// Samples `X₀ ~ m₀`, sets `Y₀ = ℓ(X₀)` and `t = 0`.
pub fn init_sample<T: Scalar, M: CylindricalModel<T> + ?Sized>(
    model: &M,
    m0: &GaussianInit<T>,
    rng: &mut RngStream,
) -> Result<SIState<T>, DynamicsError> {
    if m0.mean.len() != model.particle_dim() {
        return Err(DynamicsError::Model(ModelError::DimensionMismatch {
            quantity: "initial mean",
            expected: model.particle_dim(),
            actual: m0.mean.len(),
        }));
    }
    if !(m0.std >= T::zero()) || !m0.std.is_finite() {
        return Err(DynamicsError::Model(ModelError::InvalidParameter {
            name: "initial std",
            requirement: "non-negative and finite",
        }));
    }
    let x: Vec<T> = m0
        .mean
        .iter()
        .map(|&mean| mean + m0.std * rng.standard_normal::<T>())
        .collect();
    let y = model.features(&x);
    Ok(SIState::new(x, y))
}

/// Positions of an N-particle system, stored flat (`count × dim`).
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSystemState<T> {
    data: Vec<T>,
    dim: usize,
    pub t: T,
}

impl<T: Scalar> ParticleSystemState<T> {
    pub fn new(data: Vec<T>, dim: usize) -> Result<Self, ModelError> {
        if dim == 0 || data.is_empty() || data.len() % dim != 0 {
            return Err(ModelError::InvalidParameter {
                name: "particle system data",
                requirement: "a non-empty multiple of the particle dimension",
            });
        }
        Ok(Self {
            data,
            dim,
            t: T::zero(),
        })
    }

    pub fn count(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn particle(&self, index: usize) -> &[T] {
        &self.data[index * self.dim..(index + 1) * self.dim]
    }

    pub fn positions(&self) -> &[T] {
        &self.data
    }

    fn is_within_bounds(&self) -> bool {
        let limit = cast_limit::<T>();
        self.data.iter().all(|v| v.is_finite() && v.abs() <= limit)
    }
}

/// Samples `count` particles independently from `m₀`.
pub fn particle_init_sample<T: Scalar, M: CylindricalModel<T> + ?Sized>(
    model: &M,
    m0: &GaussianInit<T>,
    count: usize,
    rng: &mut RngStream,
) -> Result<ParticleSystemState<T>, DynamicsError> {
    if m0.mean.len() != model.particle_dim() {
        return Err(DynamicsError::Model(ModelError::DimensionMismatch {
            quantity: "initial mean",
            expected: model.particle_dim(),
            actual: m0.mean.len(),
        }));
    }
    let mut data = Vec::with_capacity(count * model.particle_dim());
    for _ in 0..count {
        for &mean in &m0.mean {
            data.push(mean + m0.std * rng.standard_normal::<T>());
        }
    }
    Ok(ParticleSystemState::new(data, model.particle_dim())?)
}

/// Euler stepper for the N-particle baseline in cylindrical form: the
/// empirical features `Y = (1/N)Σ_j ℓ(Xʲ)` are recomputed once per step and
/// every particle moves by `b(Y, Xʲ)·δt + σ√δt·𝒩ʲ` with independent noise.
pub struct ParticleStepper<'m, T, M: ?Sized> {
    model: &'m M,
    scratch: DriftScratch<T>,
    drift: Vec<T>,
    features: Vec<T>,
    empirical: Vec<T>,
    noise: Vec<T>,
}

impl<'m, T: Scalar, M: CylindricalModel<T> + ?Sized> ParticleStepper<'m, T, M> {
    pub fn new(model: &'m M) -> Self {
        Self {
            model,
            scratch: DriftScratch::for_model(model),
            drift: vec![T::zero(); model.particle_dim()],
            features: vec![T::zero(); model.feature_dim()],
            empirical: vec![T::zero(); model.feature_dim()],
            noise: Vec::new(),
        }
    }

    pub fn step(
        &mut self,
        state: &mut ParticleSystemState<T>,
        dt: T,
        rng: &mut RngStream,
    ) -> Result<(), StepFailure> {
        self.noise.resize(state.data.len(), T::zero());
        for slot in self.noise.iter_mut() {
            *slot = rng.standard_normal();
        }
        self.advance(state, dt)
    }

    pub fn step_with_noise(
        &mut self,
        state: &mut ParticleSystemState<T>,
        dt: T,
        noise: &[T],
    ) -> Result<(), StepFailure> {
        debug_assert_eq!(noise.len(), state.data.len());
        self.noise.clear();
        self.noise.extend_from_slice(noise);
        self.advance(state, dt)
    }

    /// Empirical features of the current positions.
    pub fn empirical_features(&mut self, state: &ParticleSystemState<T>) -> Vec<T> {
        self.compute_empirical(state);
        self.empirical.clone()
    }

    fn compute_empirical(&mut self, state: &ParticleSystemState<T>) {
        let count = state.count();
        for slot in self.empirical.iter_mut() {
            *slot = T::zero();
        }
        for j in 0..count {
            self.model.features_into(state.particle(j), &mut self.features);
            for (acc, &f) in self.empirical.iter_mut().zip(&self.features) {
                *acc += f;
            }
        }
        let inv = T::one() / cast_usize::<T>(count);
        for slot in self.empirical.iter_mut() {
            *slot *= inv;
        }
    }

    fn advance(&mut self, state: &mut ParticleSystemState<T>, dt: T) -> Result<(), StepFailure> {
        self.compute_empirical(state);
        let d = state.dim;
        let diffusion = self.model.sigma() * dt.sqrt();
        for j in 0..state.count() {
            drift_into(
                self.model,
                &self.empirical,
                &state.data[j * d..(j + 1) * d],
                &mut self.scratch,
                &mut self.drift,
            );
            let xj = &mut state.data[j * d..(j + 1) * d];
            let nj = &self.noise[j * d..(j + 1) * d];
            for ((x, &b), &n) in xj.iter_mut().zip(&self.drift).zip(nj) {
                *x += b * dt + diffusion * n;
            }
        }
        state.t += dt;
        if state.is_within_bounds() {
            Ok(())
        } else {
            Err(StepFailure::NonFinite)
        }
    }
}

/// One Euler step of the N-particle baseline (allocating convenience).
pub fn particle_step<T: Scalar, M: CylindricalModel<T> + ?Sized>(
    model: &M,
    state: &ParticleSystemState<T>,
    dt: T,
    rng: &mut RngStream,
) -> Result<ParticleSystemState<T>, DynamicsError> {
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(DynamicsError::InvalidTimeStep);
    }
    if state.dim != model.particle_dim() {
        return Err(DynamicsError::Model(ModelError::DimensionMismatch {
            quantity: "particle dimension",
            expected: model.particle_dim(),
            actual: state.dim,
        }));
    }
    let mut next = state.clone();
    let mut stepper = ParticleStepper::new(model);
    stepper
        .step(&mut next, dt, rng)
        .map_err(|f| f.into_error(1, next.t))?;
    Ok(next)
}

/// Weights turning the coupled-pair feature gap into the diagnostic proxy
/// `|X−X′| + (2L/λ)·min(scale·|Y−Y′|, bound)`. Without weights the proxy is
/// the plain `|X−X′| + |Y−Y′|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingWeights<T> {
    pub mean_field_lipschitz: T,
    pub modulus_scale: T,
    pub modulus_bound: T,
}

#[derive(Debug, Clone)]
pub struct CoupledPairOutput<T> {
    /// `(t, proxy distance)` samples.
    pub proxy_series: Vec<(T, T)>,
    pub final_a: SIState<T>,
    pub final_b: SIState<T>,
}

fn l2_gap<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(&u, &v)| (u - v) * (u - v))
        .fold(T::zero(), |acc, v| acc + v)
        .sqrt()
}

fn proxy_distance<T: Scalar>(
    a: &SIState<T>,
    b: &SIState<T>,
    lambda: T,
    weights: Option<&CouplingWeights<T>>,
) -> T {
    let dx = l2_gap(&a.x, &b.x);
    let dy = l2_gap(&a.y, &b.y);
    match weights {
        None => dx + dy,
        Some(w) => {
            let capped = (w.modulus_scale * dy).min(w.modulus_bound);
            let two = T::one() + T::one();
            dx + two * w.mean_field_lipschitz / lambda * capped
        }
    }
}

/// Advances two trajectories of the same model with identical Gaussian
/// increments (synchronous coupling) and records the proxy distance at the
/// given stride.
///
/// The proxy is a computable diagnostic only; it is not the Wasserstein
/// metric of the contraction theory, whose occupation-measure term cannot be
/// evaluated from the feature projection.
#[allow(clippy::too_many_arguments)]
pub fn coupled_pair_run<T: Scalar, M: CylindricalModel<T> + ?Sized>(
    model: &M,
    schedule: &LambdaSchedule<T>,
    init_a: SIState<T>,
    init_b: SIState<T>,
    dt: T,
    horizon: T,
    rng: &mut RngStream,
    record_stride: u64,
    weights: Option<CouplingWeights<T>>,
) -> Result<CoupledPairOutput<T>, DynamicsError> {
    init_a.validate_dimensions(model)?;
    init_b.validate_dimensions(model)?;
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(DynamicsError::InvalidTimeStep);
    }
    if !(horizon >= T::zero()) || !horizon.is_finite() {
        return Err(DynamicsError::InvalidHorizon);
    }
    assert!(record_stride >= 1, "record stride must be at least 1");

    let steps = (horizon / dt)
        .round()
        .to_u64()
        .ok_or(DynamicsError::InvalidHorizon)?;
    let t0 = init_a.t;
    let mut state_a = init_a;
    let mut state_b = init_b;
    let mut stepper_a = Stepper::new(model);
    let mut stepper_b = Stepper::new(model);
    let mut noise = vec![T::zero(); model.particle_dim()];
    let mut series = Vec::new();

    let lambda0 = schedule.value_at(state_a.t)?;
    series.push((state_a.t, proxy_distance(&state_a, &state_b, lambda0, weights.as_ref())));

    for step in 1..=steps {
        let lambda = schedule.value_at(state_a.t)?;
        rng.fill_standard_normal(&mut noise);
        stepper_a
            .step_with_noise(&mut state_a, lambda, dt, &noise)
            .map_err(|f| f.into_error(step, state_a.t))?;
        stepper_b
            .step_with_noise(&mut state_b, lambda, dt, &noise)
            .map_err(|f| f.into_error(step, state_b.t))?;
        let t = t0 + cast_usize::<T>(step as usize) * dt;
        state_a.t = t;
        state_b.t = t;
        if step % record_stride == 0 || step == steps {
            series.push((t, proxy_distance(&state_a, &state_b, lambda, weights.as_ref())));
        }
    }

    Ok(CoupledPairOutput {
        proxy_series: series,
        final_a: state_a,
        final_b: state_b,
    })
}
