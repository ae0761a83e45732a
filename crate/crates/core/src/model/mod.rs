//! One LSTM layer, a tanh dense layer and a linear output, trained with Adam.

mod adam;
mod config;
mod loss;
mod lstm;
mod params;

pub use adam::{adam_step, clip_global_norm, AdamState};
pub use config::ModelConfig;
pub use loss::{mse_loss, MseReport};
pub use lstm::{backward, forward, predict_batch, Example, ForwardCache};
pub use params::{init_model, Gradients, ModelParams, ParamSet};
