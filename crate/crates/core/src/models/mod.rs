//! Concrete cylindrical models: the exactly solvable Gaussian model, the
//! Curie–Weiss ferromagnet and the two-layer neural network with its data
//! pipeline.

mod curie_weiss;
mod dataset;
mod gaussian;
mod nnet;

pub use curie_weiss::CurieWeissModel;
pub use dataset::{make_sin_cos_dataset, sin_cos_target, Dataset, DatasetError};
pub use gaussian::GaussianModel;
pub use nnet::{NNetModel, NNetSpec};
