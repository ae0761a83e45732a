//! The online continual-learning loop, evaluation schedule, transfer
//! scenarios across greenhouses and fresh-model baselines.

mod checkpoint;
mod compare;
mod config;
mod curve;
mod learner;
mod phase;
mod scenario;

pub use checkpoint::{Checkpoint, CHECKPOINT_FORMAT, CHECKPOINT_VERSION};
pub use compare::{compare, comparison_csv, Comparison};
pub use config::{RunOptions, ScenarioConfig};
pub use curve::{memory_csv, retention_csv, EvalPoint, LearningCurve, MemoryRow, PhaseBoundary, RetentionPoint};
pub use learner::{evaluate, EvalMetrics, Learner, UpdateReport};
pub use phase::{Phase, SampleRef};
pub use scenario::{phase_offset, run_baseline, run_phase, run_scenario, Diagnostics, ScenarioOutput};
