//! Feedforward network used as the segment normalization sub-network.
//!
//! A model is a chain of dense layers, `y = act(W x + b)`, with weights stored
//! row-major as `(out_dim, in_dim)`. Normalization models map a 2-D vector to
//! the unit vector of the same orientation.

mod data;
mod model;
mod train;

pub use data::{evaluate_mse, generate_norm_dataset, split_dataset, Dataset, Sample};
pub use model::{init_model, Activation, Layer, MlpModel};
pub use train::{
    loss_and_gradient, run_protocol, train, AdamParams, ProtocolRun, TrainConfig, TrainOutcome,
};
