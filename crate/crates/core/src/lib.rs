//! Online LSTM regression of greenhouse crop fluxes with an episodic replay
//! memory, and the experiment harness that measures how a model trained in
//! one greenhouse carries over to another.
//!
//! The numeric core is generic over [`numeric::Scalar`] (`f32` or `f64`); the
//! aliases below fix it to `f64`, which the experiment harness uses.

pub mod cli;
pub mod data;
pub mod error;
pub mod memory;
pub mod model;
pub mod numeric;
pub mod trainer;

pub use error::{Error, Result};

pub type Matrix = numeric::Matrix<f64>;
pub type Params = model::ModelParams<f64>;
pub type Sample = data::WindowedSample<f64>;
pub type Phase = trainer::Phase<f64>;
pub type Learner = trainer::Learner<f64>;
pub type Memory = memory::EpisodicMemory<data::WindowedSample<f64>>;
