use serde::{Deserialize, Serialize};

use super::phase::SampleRef;
use crate::data::WindowedSample;
use crate::error::{Error, Result};
use crate::memory::{EpisodicMemory, MemoryConfig};
use crate::model::{
    adam_step, backward, clip_global_norm, init_model, mse_loss, predict_batch, AdamState, ModelConfig, ModelParams,
};
use crate::numeric::{Matrix, Scalar, SeededRng};

/// Test-set errors in normalized units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalMetrics {
    pub mse_total: f64,
    pub mse_transpiration: f64,
    pub mse_photosynthesis: f64,
}

/// Predicts every test window and reduces the squared errors in test-set order.
pub fn evaluate<T: Scalar>(params: &ModelParams<T>, test_set: &[SampleRef<T>]) -> Result<EvalMetrics> {
    if test_set.is_empty() {
        return Err(Error::Empty("evaluation needs a non-empty test set".into()));
    }
    let predictions = predict_batch(params, test_set)?;
    let targets = Matrix::from_vec(test_set.len(), 2, test_set.iter().flat_map(|s| s.targets).collect())?;
    let report = mse_loss(&predictions, &targets)?;
    Ok(EvalMetrics {
        mse_total: report.total.as_f64(),
        mse_transpiration: report.per_output[0].as_f64(),
        mse_photosynthesis: report.per_output[1].as_f64(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpdateReport {
    pub update_index: usize,
    pub loss: f64,
    pub minibatch_size: usize,
}

/// Everything that persists across online updates: model, optimizer, memory and
/// the two random streams that drive memory substitution and replay draws.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct Learner<T> {
    pub model_config: ModelConfig,
    pub params: ModelParams<T>,
    pub adam: AdamState<T>,
    pub memory: EpisodicMemory<WindowedSample<T>>,
    memory_rng: SeededRng,
    replay_rng: SeededRng,
    /// Updates performed so far, counted globally across phases.
    pub updates: usize,
}

impl<T: Scalar> Learner<T> {
    /// Fresh model and empty memory. Initialisation, memory substitution and
    /// replay each use their own stream split from `seed`.
    pub fn new(model_config: ModelConfig, memory_config: MemoryConfig, seed: u64) -> Result<Self> {
        let root = SeededRng::new(seed);
        let params = init_model(&model_config, &mut root.split("init"))?;
        Ok(Self {
            adam: AdamState::new(&params),
            params,
            memory: EpisodicMemory::new(memory_config)?,
            memory_rng: root.split("memory"),
            replay_rng: root.split("replay"),
            updates: 0,
            model_config,
        })
    }

    /// One online update: replay is drawn from memory before the new batch is
    /// stored, the model takes a single Adam step on new ∪ replay, and then the
    /// new batch is observed by the memory.
    pub fn train_update(&mut self, new_batch: &[SampleRef<T>], replay_size: usize) -> Result<UpdateReport> {
        if new_batch.is_empty() {
            return Err(Error::Empty("train_update needs a non-empty batch".into()));
        }
        let replay_n = replay_size.min(self.memory.len());
        let replay = self.memory.draw_replay(replay_n, &mut self.replay_rng)?;
        let mut minibatch: Vec<SampleRef<T>> = Vec::with_capacity(new_batch.len() + replay.len());
        minibatch.extend_from_slice(new_batch);
        minibatch.extend(replay);

        let (loss, mut grads) = backward(&self.params, &minibatch)?;
        if let Some(max_norm) = self.model_config.clip_norm {
            clip_global_norm(&mut grads, T::of(max_norm));
        }
        adam_step(&mut self.params, &grads, &mut self.adam, &self.model_config)?;
        self.memory.observe_batch(new_batch, &mut self.memory_rng);
        self.updates += 1;
        Ok(UpdateReport { update_index: self.updates, loss: loss.as_f64(), minibatch_size: minibatch.len() })
    }

    pub fn evaluate(&self, test_set: &[SampleRef<T>]) -> Result<EvalMetrics> {
        evaluate(&self.params, test_set)
    }
}
