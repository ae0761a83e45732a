use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub batch_size: usize,
    /// Replayed samples added to each update's minibatch; 0 disables replay.
    pub replay_size: usize,
    pub eval_every: usize,
    pub test_size: usize,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self { batch_size: 100, replay_size: 100, eval_every: 3, test_size: 10_000, seed: 0 }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(Error::invalid("scenario.batch_size", "must be at least 1"));
        }
        if self.eval_every == 0 {
            return Err(Error::invalid("scenario.eval_every", "must be at least 1"));
        }
        if self.test_size == 0 {
            return Err(Error::invalid("scenario.test_size", "must be at least 1"));
        }
        Ok(())
    }
}

/// Extra diagnostics collected while a scenario runs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Also evaluate on the test sets of earlier phases at every evaluation.
    pub retention: bool,
    /// Record memory occupancy by origin label after every update.
    pub dump_memory: bool,
}
