//! Experiment specs and the `generate`, `run`, `baseline` and `compare`
//! commands behind the binary.

mod commands;
mod spec;

pub use commands::{baseline, compare_dirs, find_baselines, format_table, generate, load_phases, run};
pub use spec::{
    DataPatch, Experiment, ExperimentSpec, Greenhouse, GreenhouseData, GreenhouseSource, MemoryPatch, ModelPatch,
    Overrides, Preset, PresetDefaults, ScenarioPatch,
};
