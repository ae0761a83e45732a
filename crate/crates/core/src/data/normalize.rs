use serde::{Deserialize, Serialize};

use super::ClimateRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    TAir,
    Rh,
    Radiation,
    Co2,
    TLeaf,
    Transpiration,
    Photosynthesis,
}

impl Feature {
    pub const INPUTS: [Feature; 5] = [Feature::TAir, Feature::Rh, Feature::Radiation, Feature::Co2, Feature::TLeaf];
    pub const TARGETS: [Feature; 2] = [Feature::Transpiration, Feature::Photosynthesis];
    pub const ALL: [Feature; 7] = [
        Feature::TAir,
        Feature::Rh,
        Feature::Radiation,
        Feature::Co2,
        Feature::TLeaf,
        Feature::Transpiration,
        Feature::Photosynthesis,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Feature::TAir => "t_air",
            Feature::Rh => "rh",
            Feature::Radiation => "radiation",
            Feature::Co2 => "co2",
            Feature::TLeaf => "t_leaf",
            Feature::Transpiration => "transpiration",
            Feature::Photosynthesis => "photosynthesis",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    pub min: f64,
    pub max: f64,
}

impl Bounds {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }
}

/// Number of values that fell outside their bounds and were clamped.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClampCounter {
    pub events: u64,
}

/// Fixed physical ranges mapping every feature affinely onto [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Normalizer {
    pub t_air: Bounds,
    pub rh: Bounds,
    pub radiation: Bounds,
    pub co2: Bounds,
    pub t_leaf: Bounds,
    pub transpiration: Bounds,
    pub photosynthesis: Bounds,
}

impl Default for Normalizer {
    fn default() -> Self {
        Self {
            t_air: Bounds::new(0.0, 50.0),
            rh: Bounds::new(0.0, 100.0),
            radiation: Bounds::new(0.0, 1200.0),
            co2: Bounds::new(0.0, 2000.0),
            t_leaf: Bounds::new(0.0, 50.0),
            transpiration: Bounds::new(0.0, 5.0),
            photosynthesis: Bounds::new(0.0, 50.0),
        }
    }
}

impl Normalizer {
    pub fn bounds(&self, f: Feature) -> Bounds {
        match f {
            Feature::TAir => self.t_air,
            Feature::Rh => self.rh,
            Feature::Radiation => self.radiation,
            Feature::Co2 => self.co2,
            Feature::TLeaf => self.t_leaf,
            Feature::Transpiration => self.transpiration,
            Feature::Photosynthesis => self.photosynthesis,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for f in Feature::ALL {
            let b = self.bounds(f);
            if !(b.min.is_finite() && b.max.is_finite() && b.max > b.min) {
                return Err(Error::invalid(
                    format!("normalizer.{}", f.name()),
                    format!("max {} must exceed min {}", b.max, b.min),
                ));
            }
        }
        Ok(())
    }

    pub fn normalize(&self, f: Feature, x: f64, clamps: &mut ClampCounter) -> f64 {
        let b = self.bounds(f);
        let z = (x - b.min) / (b.max - b.min);
        if !(0.0..=1.0).contains(&z) {
            clamps.events += 1;
        }
        z.clamp(0.0, 1.0)
    }

    pub fn denormalize(&self, f: Feature, z: f64) -> f64 {
        let b = self.bounds(f);
        b.min + z * (b.max - b.min)
    }

    pub fn normalize_inputs(&self, r: &ClimateRecord, clamps: &mut ClampCounter) -> [f64; 5] {
        let raw = r.inputs();
        std::array::from_fn(|i| self.normalize(Feature::INPUTS[i], raw[i], clamps))
    }

    pub fn normalize_targets(&self, r: &ClimateRecord, clamps: &mut ClampCounter) -> [f64; 2] {
        let raw = r.targets();
        std::array::from_fn(|i| self.normalize(Feature::TARGETS[i], raw[i], clamps))
    }
}
