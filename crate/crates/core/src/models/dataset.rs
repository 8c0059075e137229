//! Training data for the neural-network model, with CSV persistence so that
//! runs being compared can share one dataset file.

use std::fs;
use std::io::Write;
use std::path::Path;

use thiserror::Error;

use crate::dynamics::RngStream;
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("dataset line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("dataset CSV requires two input coordinates, got {0}")]
    UnsupportedInputDim(usize),
}

/// `K` labelled points, inputs stored flat (`K × input_dim`).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    inputs: Vec<T>,
    labels: Vec<T>,
    input_dim: usize,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(inputs: Vec<T>, labels: Vec<T>, input_dim: usize) -> Self {
        assert!(input_dim >= 1, "input dimension must be positive");
        assert_eq!(
            inputs.len(),
            labels.len() * input_dim,
            "inputs must hold input_dim values per label"
        );
        Self {
            inputs,
            labels,
            input_dim,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn input(&self, index: usize) -> &[T] {
        &self.inputs[index * self.input_dim..(index + 1) * self.input_dim]
    }

    pub fn label(&self, index: usize) -> T {
        self.labels[index]
    }

    /// Writes `z1,z2,label` rows in dataset order.
    pub fn write_csv(&self, path: &Path) -> Result<(), DatasetError> {
        if self.input_dim != 2 {
            return Err(DatasetError::UnsupportedInputDim(self.input_dim));
        }
        let mut out = String::from("z1,z2,label\n");
        for k in 0..self.len() {
            let z = self.input(k);
            out.push_str(&format!("{},{},{}\n", z[0], z[1], self.label(k)));
        }
        let mut file = fs::File::create(path)?;
        file.write_all(out.as_bytes())?;
        Ok(())
    }

    /// Reads a `z1,z2,label` CSV written by [`Dataset::write_csv`].
    pub fn read_csv(path: &Path) -> Result<Self, DatasetError> {
        let text = fs::read_to_string(path)?;
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim() == "z1,z2,label" => {}
            Some((_, header)) => {
                return Err(DatasetError::Parse {
                    line: 1,
                    message: format!("expected header z1,z2,label, got {header:?}"),
                })
            }
            None => {
                return Err(DatasetError::Parse {
                    line: 1,
                    message: "empty file".into(),
                })
            }
        }
        let mut inputs = Vec::new();
        let mut labels = Vec::new();
        for (index, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(DatasetError::Parse {
                    line: index + 1,
                    message: format!("expected 3 fields, got {}", fields.len()),
                });
            }
            let mut parsed = [T::zero(); 3];
            for (slot, field) in parsed.iter_mut().zip(&fields) {
                let value: f64 = field.trim().parse().map_err(|e| DatasetError::Parse {
                    line: index + 1,
                    message: format!("{e}"),
                })?;
                *slot = T::from_f64(value).ok_or_else(|| DatasetError::Parse {
                    line: index + 1,
                    message: format!("value {value} not representable"),
                })?;
            }
            inputs.push(parsed[0]);
            inputs.push(parsed[1]);
            labels.push(parsed[2]);
        }
        Ok(Self::new(inputs, labels, 2))
    }
}

/// Target function `g(z) = sin(2πz₁) + cos(2πz₂)`.
pub fn sin_cos_target<T: Scalar>(z: &[T]) -> T {
    let two_pi = (T::one() + T::one()) * T::PI();
    (two_pi * z[0]).sin() + (two_pi * z[1]).cos()
}

/// Draws `count` inputs uniformly from `[0, 1]²` and labels them with
/// [`sin_cos_target`]. Row order follows the draw order, so a fixed stream
/// reproduces the file byte for byte.
pub fn make_sin_cos_dataset<T: Scalar>(count: usize, rng: &mut RngStream) -> Dataset<T> {
    assert!(count >= 1, "dataset needs at least one point");
    let mut inputs = Vec::with_capacity(2 * count);
    let mut labels = Vec::with_capacity(count);
    for _ in 0..count {
        let z = [rng.unit_uniform::<T>(), rng.unit_uniform::<T>()];
        labels.push(sin_cos_target(&z));
        inputs.extend_from_slice(&z);
    }
    Dataset::new(inputs, labels, 2)
}
