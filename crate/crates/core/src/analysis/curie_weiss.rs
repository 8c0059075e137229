//! Self-consistency map of the Curie–Weiss model and its fixed points.
//!
//! `Π₀(y₀)` is the mean of ℓ₀ under the tilted Gaussian weight
//! `exp(2y₀ℓ₀(x) − x²)`; its fixed points index the invariant measures of
//! the underlying mean-field dynamics.

use crate::models::CurieWeissModel;
use crate::scalar::{cast, Scalar};

use super::AnalysisError;

/// Composite-Simpson node count (even number of panels).
const SIMPSON_NODES: usize = 4001;

/// Relative endpoint-weight threshold for the truncated-tail check.
const TAIL_TOLERANCE: f64 = 1e-13;

/// Bisection stops when the bracket is narrower than this.
const ROOT_TOLERANCE: f64 = 1e-8;

fn simpson<T: Scalar, F: Fn(T) -> T>(f: &F, a: T, b: T, nodes: usize) -> T {
    debug_assert!(nodes >= 3 && nodes % 2 == 1);
    let panels = nodes - 1;
    let h = (b - a) / cast::<T>(panels as f64);
    let two = T::one() + T::one();
    let four = two + two;
    let mut sum = f(a) + f(b);
    for i in 1..panels {
        let x = a + cast::<T>(i as f64) * h;
        let w = if i % 2 == 1 { four } else { two };
        sum += w * f(x);
    }
    sum * h / (two + T::one())
}

/// `Π₀(y₀) = ∫ℓ₀(x)·w(x)dx / ∫w(x)dx` with `w(x) = exp(2y₀ℓ₀(x) − x²)`,
/// evaluated by a fixed composite Simpson rule on `[−R, R]` with
/// `R = 6 + 2·‖ℓ₀‖_∞·|y₀|`. The weight has Gaussian tails, so the truncated
/// mass is far below the tail tolerance; if it is not (which would indicate
/// an unusable parameter combination), a numeric error is returned.
pub fn self_consistency_map<T: Scalar>(
    model: &CurieWeissModel<T>,
    y0: T,
) -> Result<T, AnalysisError> {
    let sup = model.sup_norm();
    let two = T::one() + T::one();
    if !y0.is_finite() || y0.abs() > two * sup {
        return Err(AnalysisError::OutOfRange(format!(
            "y0 = {y0} outside [-2*sup_norm, 2*sup_norm] = [{}, {}]",
            -(two * sup),
            two * sup
        )));
    }

    let radius = cast::<T>(6.0) + two * sup * y0.abs();
    let weight = |x: T| (two * y0 * model.interaction(x) - x * x).exp();
    let numerator_fn = |x: T| model.interaction(x) * weight(x);

    let denominator = simpson(&weight, -radius, radius, SIMPSON_NODES);
    let numerator = simpson(&numerator_fn, -radius, radius, SIMPSON_NODES);

    // The maximal weight is at most exp(2|y₀|·sup); compare the endpoints
    // against it to confirm the interval captured the mass.
    let max_weight = (two * y0.abs() * sup).exp();
    let edge = weight(-radius) + weight(radius);
    if !(edge <= cast::<T>(TAIL_TOLERANCE) * max_weight) || !denominator.is_finite() {
        return Err(AnalysisError::QuadratureTail);
    }
    Ok(numerator / denominator)
}

/// Default fixed-point scan resolution, `‖ℓ₀‖_∞ / 400`.
pub fn default_grid_step<T: Scalar>(model: &CurieWeissModel<T>) -> T {
    model.sup_norm() / cast::<T>(400.0)
}

fn bisect<T: Scalar, F: Fn(T) -> Result<T, AnalysisError>>(
    f: &F,
    mut lo: T,
    mut hi: T,
    mut f_lo: T,
) -> Result<T, AnalysisError> {
    let tol = cast::<T>(ROOT_TOLERANCE);
    let two = T::one() + T::one();
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) / two;
        let f_mid = f(mid)?;
        if f_mid == T::zero() {
            return Ok(mid);
        }
        if (f_lo > T::zero()) == (f_mid > T::zero()) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / two)
}

/// All roots of `Π₀(y) − y` in `[−‖ℓ₀‖_∞, ‖ℓ₀‖_∞]`, sorted ascending.
///
/// Positive roots are bracketed by sign changes on a grid of the given step
/// and refined by bisection; the map is odd, so the negative roots are their
/// mirror images and 0 is always a fixed point.
pub fn self_consistency_fixed_points<T: Scalar>(
    model: &CurieWeissModel<T>,
    grid_step: T,
) -> Result<Vec<T>, AnalysisError> {
    if !(grid_step > T::zero()) || !grid_step.is_finite() {
        return Err(AnalysisError::InvalidParameter {
            name: "grid_step",
            requirement: "positive and finite",
        });
    }
    let sup = model.sup_norm();
    let excess = |y: T| -> Result<T, AnalysisError> { Ok(self_consistency_map(model, y)? - y) };

    let mut positive_roots: Vec<T> = Vec::new();
    let zero_guard = cast::<T>(1e-6);
    let mut prev_y = T::zero();
    let mut prev_g = T::zero(); // Π₀(0) − 0 = 0 exactly, by oddness.
    let mut y = grid_step;
    loop {
        let clipped = y.min(sup);
        let g = excess(clipped)?;
        if g == T::zero() {
            positive_roots.push(clipped);
        } else if prev_g != T::zero() && (g > T::zero()) != (prev_g > T::zero()) {
            let root = bisect(&excess, prev_y, clipped, prev_g)?;
            if root > zero_guard {
                positive_roots.push(root);
            }
        }
        prev_y = clipped;
        prev_g = g;
        if clipped >= sup {
            break;
        }
        y += grid_step;
    }

    positive_roots.dedup_by(|a, b| (*a - *b).abs() <= cast::<T>(1e-7));
    let mut roots: Vec<T> = positive_roots.iter().rev().map(|&r| -r).collect();
    roots.push(T::zero());
    roots.extend_from_slice(&positive_roots);
    Ok(roots)
}
