//! Experiment spec files: one JSON document selecting a preset and overriding
//! any part of it. Unknown keys are rejected. Command-line flags win over the file.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::{GreenhouseParams, Normalizer};
use crate::error::{Error, Result};
use crate::memory::{MemoryConfig, Strategy};
use crate::model::ModelConfig;
use crate::trainer::{RunOptions, ScenarioConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Window 50, hidden 16, 30 days per greenhouse, 1000 test windows.
    #[default]
    Desk,
    /// Window 250, hidden 32, 365 days per greenhouse, 10000 test windows.
    Paper,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreenhouseSource {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<GreenhouseParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    /// Overrides `data.days` for this greenhouse.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub days: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataPatch {
    pub days: Option<usize>,
    pub stride: Option<usize>,
    pub normalizer: Option<Normalizer>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelPatch {
    pub hidden_dim: Option<usize>,
    pub dense_dim: Option<usize>,
    pub window_len: Option<usize>,
    pub learning_rate: Option<f64>,
    pub adam_beta1: Option<f64>,
    pub adam_beta2: Option<f64>,
    pub adam_epsilon: Option<f64>,
    pub clip_norm: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemoryPatch {
    pub capacity: Option<usize>,
    pub substitution_probability: Option<f64>,
    pub strategy: Option<Strategy>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioPatch {
    pub batch_size: Option<usize>,
    pub replay_size: Option<usize>,
    pub eval_every: Option<usize>,
    pub test_size: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub preset: Option<Preset>,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub greenhouses: Option<Vec<GreenhouseSource>>,
    #[serde(default)]
    pub data: DataPatch,
    #[serde(default)]
    pub model: ModelPatch,
    #[serde(default)]
    pub memory: MemoryPatch,
    #[serde(default)]
    pub scenario: ScenarioPatch,
    #[serde(default)]
    pub retention: bool,
    #[serde(default)]
    pub dump_memory: bool,
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|source| Error::Json { context: "experiment spec".into(), source })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| Error::Json { context: path.display().to_string(), source })
    }
}

/// Command-line values that take precedence over the spec file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub preset: Option<Preset>,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub replay_size: Option<usize>,
    pub memory_strategy: Option<Strategy>,
    pub retention: bool,
    pub dump_memory: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GreenhouseData {
    Synthetic { params: GreenhouseParams, days: usize },
    Csv(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Greenhouse {
    pub label: String,
    pub data: GreenhouseData,
}

/// A fully resolved, validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub preset: Preset,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub greenhouses: Vec<Greenhouse>,
    pub stride: usize,
    pub normalizer: Normalizer,
    pub model: ModelConfig,
    pub memory: MemoryConfig,
    pub scenario: ScenarioConfig,
    pub options: RunOptions,
}

pub struct PresetDefaults {
    pub days: usize,
    pub stride: usize,
    pub model: ModelConfig,
    pub memory: MemoryConfig,
    pub scenario: ScenarioConfig,
}

impl Preset {
    pub fn defaults(self) -> PresetDefaults {
        let memory = MemoryConfig { capacity: 10_000, substitution_probability: 0.1, strategy: Strategy::PerBatch };
        let scenario = ScenarioConfig { batch_size: 100, replay_size: 100, eval_every: 3, test_size: 10_000, seed: 0 };
        match self {
            Preset::Desk => PresetDefaults {
                days: 30,
                stride: 2,
                model: ModelConfig { hidden_dim: 16, dense_dim: 16, window_len: 50, ..ModelConfig::default() },
                memory,
                scenario: ScenarioConfig { test_size: 1000, ..scenario },
            },
            Preset::Paper => PresetDefaults {
                days: 365,
                stride: 2,
                model: ModelConfig { hidden_dim: 32, dense_dim: 32, window_len: 250, ..ModelConfig::default() },
                memory,
                scenario,
            },
        }
    }
}

fn set<V: Clone>(slot: &mut V, value: &Option<V>) {
    if let Some(v) = value {
        *slot = v.clone();
    }
}

impl Experiment {
    /// Preset, then spec file values, then flags. Everything is validated here,
    /// before any command touches the file system.
    pub fn resolve(spec: &ExperimentSpec, flags: &Overrides) -> Result<Self> {
        let preset = flags.preset.or(spec.preset).unwrap_or_default();
        let PresetDefaults { mut days, mut stride, mut model, mut memory, mut scenario } = preset.defaults();

        set(&mut days, &spec.data.days);
        set(&mut stride, &spec.data.stride);
        let normalizer = spec.data.normalizer.unwrap_or_default();

        let m = &spec.model;
        set(&mut model.hidden_dim, &m.hidden_dim);
        set(&mut model.dense_dim, &m.dense_dim);
        set(&mut model.window_len, &m.window_len);
        set(&mut model.learning_rate, &m.learning_rate);
        set(&mut model.adam_beta1, &m.adam_beta1);
        set(&mut model.adam_beta2, &m.adam_beta2);
        set(&mut model.adam_epsilon, &m.adam_epsilon);
        if m.clip_norm.is_some() {
            model.clip_norm = m.clip_norm;
        }

        set(&mut memory.capacity, &spec.memory.capacity);
        set(&mut memory.substitution_probability, &spec.memory.substitution_probability);
        set(&mut memory.strategy, &spec.memory.strategy);
        set(&mut memory.strategy, &flags.memory_strategy);

        let s = &spec.scenario;
        set(&mut scenario.batch_size, &s.batch_size);
        set(&mut scenario.replay_size, &s.replay_size);
        set(&mut scenario.eval_every, &s.eval_every);
        set(&mut scenario.test_size, &s.test_size);
        set(&mut scenario.replay_size, &flags.replay_size);
        scenario.seed = flags.seed.or(spec.seed).unwrap_or(0);

        if days == 0 {
            return Err(Error::invalid("data.days", "must be at least 1"));
        }
        if stride == 0 {
            return Err(Error::invalid("data.stride", "must be at least 1"));
        }
        normalizer.validate()?;
        model.validate()?;
        memory.validate()?;
        scenario.validate()?;

        let sources = spec.greenhouses.clone().unwrap_or_else(|| {
            GreenhouseParams::PRESETS
                .iter()
                .map(|name| GreenhouseSource { label: name.to_string(), preset: Some(name.to_string()), ..Default::default() })
                .collect()
        });
        if sources.is_empty() {
            return Err(Error::invalid("greenhouses", "must list at least one greenhouse"));
        }
        let mut seen = HashSet::new();
        let mut greenhouses = Vec::with_capacity(sources.len());
        for (i, src) in sources.iter().enumerate() {
            let key = format!("greenhouses[{i}]");
            if src.label.is_empty() || src.label.contains([',', '\n', '\r', '/', '\\', '"']) {
                return Err(Error::invalid(format!("{key}.label"), format!("{:?} is empty or contains , / \\ \" or a newline", src.label)));
            }
            if !seen.insert(src.label.clone()) {
                return Err(Error::invalid(format!("{key}.label"), format!("duplicate label `{}`", src.label)));
            }
            let given = [src.preset.is_some(), src.params.is_some(), src.csv.is_some()].iter().filter(|&&b| b).count();
            if given != 1 {
                return Err(Error::invalid(key, "exactly one of `preset`, `params` or `csv` is required"));
            }
            let gh_days = src.days.unwrap_or(days);
            if gh_days == 0 {
                return Err(Error::invalid(format!("{key}.days"), "must be at least 1"));
            }
            let data = if let Some(name) = &src.preset {
                let params = GreenhouseParams::preset(name).ok_or_else(|| {
                    Error::invalid(format!("{key}.preset"), format!("unknown preset `{name}`, expected one of GH-A, GH-B, GH-C"))
                })?;
                GreenhouseData::Synthetic { params, days: gh_days }
            } else if let Some(params) = &src.params {
                params.validate(&format!("{key}.params"))?;
                GreenhouseData::Synthetic { params: params.clone(), days: gh_days }
            } else {
                GreenhouseData::Csv(src.csv.clone().expect("exactly one source is set"))
            };
            greenhouses.push(Greenhouse { label: src.label.clone(), data });
        }

        Ok(Self {
            preset,
            seed: scenario.seed,
            output_dir: flags.output_dir.clone().or_else(|| spec.output_dir.clone()).unwrap_or_else(|| PathBuf::from("out")),
            greenhouses,
            stride,
            normalizer,
            model,
            memory,
            scenario,
            options: RunOptions { retention: spec.retention || flags.retention, dump_memory: spec.dump_memory || flags.dump_memory },
        })
    }

    pub fn data_dir(&self) -> PathBuf {
        self.output_dir.join("data")
    }

    pub fn run_dir(&self) -> PathBuf {
        self.output_dir.join("run")
    }

    pub fn baseline_dir(&self, label: &str) -> PathBuf {
        self.output_dir.join(format!("baseline-{label}"))
    }

    /// CSV path the greenhouse's records are read from.
    pub fn dataset_path(&self, gh: &Greenhouse) -> PathBuf {
        match &gh.data {
            GreenhouseData::Csv(p) => p.clone(),
            GreenhouseData::Synthetic { .. } => self.data_dir().join(format!("{}.csv", gh.label)),
        }
    }
}
