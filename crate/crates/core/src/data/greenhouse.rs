use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::physics::{photosynthesis_oracle, transpiration_oracle, vapor_pressure_deficit};
use crate::error::{Error, Result};
use crate::numeric::SeededRng;

pub const SAMPLE_INTERVAL_S: i64 = 300;
pub const SAMPLES_PER_DAY: usize = 288;
/// 2011-01-01T00:00:00Z
pub const SERIES_START: i64 = 1_293_840_000;

/// One 5-minute measurement: five climate inputs and the two crop fluxes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClimateRecord {
    pub timestamp: i64,
    pub t_air: f64,
    pub rh: f64,
    pub radiation: f64,
    pub co2: f64,
    pub t_leaf: f64,
    pub transpiration: f64,
    pub photosynthesis: f64,
}

impl ClimateRecord {
    pub fn inputs(&self) -> [f64; 5] {
        [self.t_air, self.rh, self.radiation, self.co2, self.t_leaf]
    }

    pub fn targets(&self) -> [f64; 2] {
        [self.transpiration, self.photosynthesis]
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        let values = [self.t_air, self.rh, self.radiation, self.co2, self.t_leaf, self.transpiration, self.photosynthesis];
        if values.iter().any(|v| !v.is_finite()) {
            return Err("non-finite value".into());
        }
        if self.radiation < 0.0 {
            return Err(format!("radiation {} is negative", self.radiation));
        }
        if !(0.0..=100.0).contains(&self.rh) {
            return Err(format!("rh {} is outside [0, 100]", self.rh));
        }
        if self.co2 <= 0.0 {
            return Err(format!("co2 {} is not positive", self.co2));
        }
        Ok(())
    }
}

/// Parameters of one synthetic greenhouse. Differences between parameter sets
/// are the source of domain shift between greenhouses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreenhouseParams {
    pub name: String,
    /// Peak transmitted radiation, W m⁻².
    pub i_max: f64,
    /// Light-use slope, µmol J⁻¹.
    pub alpha: f64,
    /// Light-saturated photosynthesis, µmol m⁻² s⁻¹.
    pub p_max: f64,
    /// CO₂ half-saturation, ppm.
    pub k_c: f64,
    pub a_rad: f64,
    pub b_vpd: f64,
    pub t_base: f64,
    pub t_amp: f64,
    pub co2_day: f64,
    pub co2_night: f64,
    pub noise_sd: f64,
    pub day_length_h: f64,
}

impl GreenhouseParams {
    pub const PRESETS: [&'static str; 3] = ["GH-A", "GH-B", "GH-C"];

    /// GH-A and GH-B differ by ±10 % on `a_rad` and `p_max`; GH-C has 30 % less
    /// light, 40 % stronger VPD response, warmer air and different CO₂ setpoints.
    pub fn preset(name: &str) -> Option<Self> {
        let a = Self {
            name: "GH-A".into(),
            i_max: 800.0,
            alpha: 0.05,
            p_max: 30.0,
            k_c: 300.0,
            a_rad: 2.5e-3,
            b_vpd: 0.6,
            t_base: 20.0,
            t_amp: 8.0,
            co2_day: 700.0,
            co2_night: 450.0,
            noise_sd: 0.03,
            day_length_h: 14.0,
        };
        match name {
            "GH-A" => Some(a),
            "GH-B" => Some(Self { name: "GH-B".into(), a_rad: a.a_rad * 1.1, p_max: a.p_max * 0.9, ..a }),
            "GH-C" => Some(Self {
                name: "GH-C".into(),
                i_max: a.i_max * 0.7,
                b_vpd: a.b_vpd * 1.4,
                t_base: 23.0,
                t_amp: 6.0,
                co2_day: 950.0,
                co2_night: 550.0,
                day_length_h: 12.0,
                ..a
            }),
            _ => None,
        }
    }

    /// Checks every field, naming the offending one as `<prefix>.<field>`.
    pub fn validate(&self, prefix: &str) -> Result<()> {
        let positive = [
            ("i_max", self.i_max),
            ("alpha", self.alpha),
            ("p_max", self.p_max),
            ("k_c", self.k_c),
            ("a_rad", self.a_rad),
            ("b_vpd", self.b_vpd),
            ("t_base", self.t_base),
            ("t_amp", self.t_amp),
            ("co2_day", self.co2_day),
            ("co2_night", self.co2_night),
        ];
        for (key, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{prefix}.{key}"), format!("{v} must be positive")));
            }
        }
        if !(self.noise_sd.is_finite() && self.noise_sd >= 0.0) {
            return Err(Error::invalid(format!("{prefix}.noise_sd"), format!("{} must be non-negative", self.noise_sd)));
        }
        if !(self.day_length_h > 0.0 && self.day_length_h < 24.0) {
            return Err(Error::invalid(
                format!("{prefix}.day_length_h"),
                format!("{} is outside (0, 24)", self.day_length_h),
            ));
        }
        if self.name.is_empty() {
            return Err(Error::invalid(format!("{prefix}.name"), "must not be empty"));
        }
        Ok(())
    }
}

/// Diurnal daylight shape in [0, 1]: a half sine between sunrise and sunset.
fn daylight(hour: f64, day_length_h: f64) -> f64 {
    let sunrise = 12.0 - day_length_h / 2.0;
    let phase = (hour - sunrise) / day_length_h;
    if (0.0..=1.0).contains(&phase) {
        (PI * phase).sin().max(0.0)
    } else {
        0.0
    }
}

const RH_REFERENCE: f64 = 75.0;
const RH_PER_DEGREE: f64 = 3.0;
const CO2_DRAWDOWN: f64 = 0.15;

/// Synthetic 5-minute series of `days` days.
///
/// Weather (daily cloudiness, daily temperature anomaly) is part of the true
/// climate; `noise_sd` sets relative sensor noise on the reported inputs and
/// multiplicative noise on the targets, both truncated at 3σ. Targets come
/// from the oracles applied to the noise-free climate.
pub fn generate_series(p: &GreenhouseParams, days: usize, rng: &mut SeededRng) -> Result<Vec<ClimateRecord>> {
    p.validate("params")?;
    if days == 0 {
        return Err(Error::invalid("days", "must be at least 1"));
    }
    let mut out = Vec::with_capacity(days * SAMPLES_PER_DAY);
    for day in 0..days {
        let cloud = rng.uniform(0.45, 1.0);
        let t_anomaly = 1.5 * rng.truncated_normal(3.0);
        for slot in 0..SAMPLES_PER_DAY {
            let hour = slot as f64 * SAMPLE_INTERVAL_S as f64 / 3600.0;
            let shape = daylight(hour, p.day_length_h);
            let radiation = (p.i_max * shape * cloud).clamp(0.0, p.i_max);
            let light = radiation / p.i_max;
            let t_air = p.t_base + p.t_amp * light + t_anomaly;
            let rh = (RH_REFERENCE - RH_PER_DEGREE * (t_air - p.t_base)).clamp(20.0, 100.0);
            let co2 = (p.co2_night + (p.co2_day - p.co2_night) * shape - CO2_DRAWDOWN * p.co2_day * light).max(1.0);
            let t_leaf = t_air + 0.1 * light;

            let vpd = vapor_pressure_deficit(t_air, rh)?;
            let transpiration = transpiration_oracle(radiation, vpd, p);
            let photosynthesis = photosynthesis_oracle(radiation, co2, p);

            let mut noisy = |x: f64| x * (1.0 + p.noise_sd * rng.truncated_normal(3.0));
            let record = ClimateRecord {
                timestamp: SERIES_START + ((day * SAMPLES_PER_DAY + slot) as i64) * SAMPLE_INTERVAL_S,
                t_air: noisy(t_air),
                rh: noisy(rh).clamp(20.0, 100.0),
                radiation: noisy(radiation).max(0.0),
                co2: noisy(co2).max(1.0),
                t_leaf: noisy(t_leaf),
                transpiration: noisy(transpiration).max(0.0),
                photosynthesis: noisy(photosynthesis).max(0.0),
            };
            out.push(record);
        }
    }
    Ok(out)
}
