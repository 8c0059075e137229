//! Piecewise-constant, non-increasing interaction-rate schedules `λ(t)`.

use thiserror::Error;

use crate::scalar::{cast, Scalar};

#[derive(Debug, Error)]
pub enum ScheduleError {
    #[error("schedule must contain at least one segment")]
    Empty,
    #[error("segment {index}: value must be positive and finite")]
    NonPositiveValue { index: usize },
    #[error("segment {index}: duration must be positive and finite")]
    NonPositiveDuration { index: usize },
    #[error("segment {index}: values must be non-increasing")]
    IncreasingValue { index: usize },
    #[error("segment {index}: only the last segment may have unbounded duration")]
    UnboundedSegmentNotLast { index: usize },
    #[error("t = {t} is outside the schedule (total finite duration {total})")]
    OutOfRange { t: f64, total: f64 },
    #[error("t = {t} must be a finite non-negative time")]
    InvalidTime { t: f64 },
}

/// One constant piece of a schedule. `duration == None` marks an unbounded
/// tail and is only allowed on the last segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment<T> {
    pub duration: Option<T>,
    pub value: T,
}

impl<T> Segment<T> {
    pub fn finite(duration: T, value: T) -> Self {
        Self {
            duration: Some(duration),
            value,
        }
    }

    pub fn unbounded(value: T) -> Self {
        Self {
            duration: None,
            value,
        }
    }
}

/// Piecewise-constant `λ(t)`, non-increasing in `t`, with half-open segment
/// intervals `[start, end)` so that boundaries belong to the later segment.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSchedule<T> {
    segments: Vec<Segment<T>>,
}

impl<T: Scalar> LambdaSchedule<T> {
    /// Constant schedule `λ(t) ≡ value`.
    pub fn constant(value: T) -> Result<Self, ScheduleError> {
        Self::from_segments(vec![Segment::unbounded(value)])
    }

    /// Builds a schedule from explicit segments, validating positivity,
    /// monotonicity and that only the final segment may be unbounded.
    pub fn from_segments(segments: Vec<Segment<T>>) -> Result<Self, ScheduleError> {
        if segments.is_empty() {
            return Err(ScheduleError::Empty);
        }
        let last = segments.len() - 1;
        let mut previous: Option<T> = None;
        for (index, segment) in segments.iter().enumerate() {
            if !(segment.value > T::zero()) || !segment.value.is_finite() {
                return Err(ScheduleError::NonPositiveValue { index });
            }
            match segment.duration {
                Some(duration) => {
                    if !(duration > T::zero()) || !duration.is_finite() {
                        return Err(ScheduleError::NonPositiveDuration { index });
                    }
                }
                None => {
                    if index != last {
                        return Err(ScheduleError::UnboundedSegmentNotLast { index });
                    }
                }
            }
            if let Some(prev) = previous {
                if segment.value > prev {
                    return Err(ScheduleError::IncreasingValue { index });
                }
            }
            previous = Some(segment.value);
        }
        Ok(Self { segments })
    }

    /// The annealing schedule `λ(t) = 4⁻ⁱ` on successive intervals of length
    /// `4ⁱ`, `i = 2, …, 11`, extended by an unbounded tail at the final value
    /// so that runs longer than the listed segments remain well defined.
    pub fn power_of_four_annealing() -> Self {
        let mut segments = Vec::with_capacity(11);
        for i in 2..=11i32 {
            let length = cast::<T>(4.0f64.powi(i));
            let value = cast::<T>(4.0f64.powi(-i));
            segments.push(Segment::finite(length, value));
        }
        segments.push(Segment::unbounded(cast::<T>(4.0f64.powi(-11))));
        Self::from_segments(segments).expect("built-in annealing schedule is valid")
    }

    /// Value of the segment containing `t`; boundaries belong to the later
    /// segment.
    pub fn value_at(&self, t: T) -> Result<T, ScheduleError> {
        if !(t >= T::zero()) || !t.is_finite() {
            return Err(ScheduleError::InvalidTime {
                t: t.to_f64().unwrap_or(f64::NAN),
            });
        }
        let mut end = T::zero();
        for segment in &self.segments {
            match segment.duration {
                Some(duration) => {
                    end += duration;
                    if t < end {
                        return Ok(segment.value);
                    }
                }
                None => return Ok(segment.value),
            }
        }
        Err(ScheduleError::OutOfRange {
            t: t.to_f64().unwrap_or(f64::NAN),
            total: end.to_f64().unwrap_or(f64::NAN),
        })
    }

    /// Largest value taken by the schedule (the first segment's, by
    /// monotonicity). Used for the `λ·δt < 1` stability validation.
    pub fn max_value(&self) -> T {
        self.segments[0].value
    }

    pub fn has_unbounded_tail(&self) -> bool {
        self.segments.last().map(|s| s.duration.is_none()) == Some(true)
    }

    /// Sum of the finite segment durations.
    pub fn total_finite_duration(&self) -> T {
        self.segments
            .iter()
            .filter_map(|s| s.duration)
            .fold(T::zero(), |acc, d| acc + d)
    }

    /// Whether `value_at` is defined on all of `[0, t]`.
    pub fn covers(&self, t: T) -> bool {
        self.has_unbounded_tail() || self.total_finite_duration() >= t
    }

    pub fn segments(&self) -> &[Segment<T>] {
        &self.segments
    }
}
