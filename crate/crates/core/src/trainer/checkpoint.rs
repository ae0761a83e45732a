//! JSON checkpoint of a [`Learner`]: model configuration, parameters, Adam
//! state, episodic memory and random stream states. Floats are written in
//! shortest round-trip form, so save → load → save is byte-identical.

use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::learner::Learner;
use crate::error::{Error, Result};
use crate::numeric::Scalar;

pub const CHECKPOINT_FORMAT: &str = "ghadapt-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct Checkpoint<T> {
    pub format: String,
    pub version: u32,
    pub scalar: String,
    pub learner: Learner<T>,
}

impl<T: Scalar> Checkpoint<T> {
    pub fn new(learner: Learner<T>) -> Self {
        Self {
            format: CHECKPOINT_FORMAT.into(),
            version: CHECKPOINT_VERSION,
            scalar: std::any::type_name::<T>().into(),
            learner,
        }
    }

    pub fn to_string(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|source| Error::Json { context: "checkpoint".into(), source })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        serde_json::to_writer(&mut w, self)
            .map_err(|source| Error::Json { context: path.display().to_string(), source })?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let ck: Self = serde_json::from_reader(BufReader::new(file))
            .map_err(|source| Error::Json { context: path.display().to_string(), source })?;
        if ck.format != CHECKPOINT_FORMAT || ck.version != CHECKPOINT_VERSION {
            return Err(Error::invalid("format", format!("unsupported checkpoint {} v{}", ck.format, ck.version)));
        }
        if ck.scalar != std::any::type_name::<T>() {
            return Err(Error::invalid("scalar", format!("checkpoint holds {}, expected {}", ck.scalar, std::any::type_name::<T>())));
        }
        ck.learner.params.check_shapes(&ck.learner.model_config)?;
        Ok(ck)
    }
}
