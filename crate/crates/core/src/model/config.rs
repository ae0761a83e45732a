use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub input_dim: usize,
    pub hidden_dim: usize,
    pub dense_dim: usize,
    pub output_dim: usize,
    pub window_len: usize,
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_epsilon: f64,
    /// Rescale gradients whose global L2 norm exceeds this value. Off when `None`.
    #[serde(default)]
    pub clip_norm: Option<f64>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            input_dim: 5,
            hidden_dim: 32,
            dense_dim: 32,
            output_dim: 2,
            window_len: 250,
            learning_rate: 1e-3,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_epsilon: 1e-8,
            clip_norm: None,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        let dims = [
            ("model.input_dim", self.input_dim),
            ("model.hidden_dim", self.hidden_dim),
            ("model.dense_dim", self.dense_dim),
            ("model.output_dim", self.output_dim),
            ("model.window_len", self.window_len),
        ];
        for (key, v) in dims {
            if v == 0 {
                return Err(Error::invalid(key, "must be at least 1"));
            }
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::invalid("model.learning_rate", format!("{} must be positive", self.learning_rate)));
        }
        for (key, v) in [("model.adam_beta1", self.adam_beta1), ("model.adam_beta2", self.adam_beta2)] {
            if !(0.0..1.0).contains(&v) {
                return Err(Error::invalid(key, format!("{v} is outside [0, 1)")));
            }
        }
        if !(self.adam_epsilon.is_finite() && self.adam_epsilon > 0.0) {
            return Err(Error::invalid("model.adam_epsilon", "must be positive"));
        }
        if let Some(c) = self.clip_norm {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::invalid("model.clip_norm", format!("{c} must be positive")));
            }
        }
        Ok(())
    }
}
