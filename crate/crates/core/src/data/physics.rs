//! Closed-form climate relations used by the generator to produce targets.

use super::GreenhouseParams;
use crate::error::{Error, Result};

/// Saturation vapour pressure over water in kPa (Magnus form).
pub fn saturation_vapor_pressure(t_celsius: f64) -> f64 {
    debug_assert!(t_celsius > -237.3);
    0.6108 * (17.27 * t_celsius / (t_celsius + 237.3)).exp()
}

/// Vapour pressure deficit in kPa for air at `t_celsius` and relative humidity `rh` (%).
pub fn vapor_pressure_deficit(t_celsius: f64, rh: f64) -> Result<f64> {
    if !(0.0..=100.0).contains(&rh) {
        return Err(Error::invalid("rh", format!("{rh} is outside [0, 100]")));
    }
    Ok(saturation_vapor_pressure(t_celsius) * (1.0 - rh / 100.0))
}

/// Gross photosynthesis (µmol m⁻² s⁻¹): rectangular-hyperbola light response
/// scaled by a Michaelis-Menten CO₂ factor.
pub fn photosynthesis_oracle(radiation: f64, co2: f64, p: &GreenhouseParams) -> f64 {
    let light = p.alpha * radiation;
    if light <= 0.0 {
        return 0.0;
    }
    p.p_max * light / (light + p.p_max) * co2 / (co2 + p.k_c)
}

/// Transpiration (g m⁻² min⁻¹), linear in radiation and VPD.
pub fn transpiration_oracle(radiation: f64, vpd: f64, p: &GreenhouseParams) -> f64 {
    p.a_rad * radiation + p.b_vpd * vpd
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::GreenhouseParams;

    fn params() -> GreenhouseParams {
        GreenhouseParams { p_max: 30.0, alpha: 0.05, k_c: 300.0, a_rad: 3e-4, b_vpd: 0.02, ..GreenhouseParams::preset("GH-A").unwrap() }
    }

    #[test]
    fn magnus_values() {
        assert_eq!(saturation_vapor_pressure(0.0), 0.6108);
        // 0.6108 * exp(1.3424019) = 2.3382813; psychrometric tables list 2.339 kPa at 20 °C
        let es20 = saturation_vapor_pressure(20.0);
        assert!((es20 - 2.338_281_3).abs() < 1e-6, "{es20}");
        assert!((es20 - 2.339).abs() < 2e-3);
        assert!(saturation_vapor_pressure(30.0) > es20);
    }

    #[test]
    fn vpd_values_and_range_check() {
        assert_eq!(vapor_pressure_deficit(20.0, 100.0).unwrap(), 0.0);
        assert!((vapor_pressure_deficit(20.0, 50.0).unwrap() - 1.169).abs() < 1e-3);
        assert_eq!(vapor_pressure_deficit(0.0, 0.0).unwrap(), 0.6108);
        assert!(vapor_pressure_deficit(20.0, 101.0).is_err());
        assert!(vapor_pressure_deficit(20.0, -0.1).is_err());
    }

    #[test]
    fn photosynthesis_values() {
        let p = params();
        assert_eq!(photosynthesis_oracle(0.0, 800.0, &p), 0.0);
        let expected = 30.0 * (30.0 / 60.0) * (800.0 / 1100.0);
        assert!((photosynthesis_oracle(600.0, 800.0, &p) - expected).abs() < 1e-12);
        assert!((expected - 10.909).abs() < 1e-3);
        // co2 = k_c halves the light-limited value
        let light_limited = 30.0 * 0.5;
        assert!((photosynthesis_oracle(600.0, p.k_c, &p) - light_limited / 2.0).abs() < 1e-12);
    }

    #[test]
    fn photosynthesis_monotone_on_grid() {
        let p = params();
        let rad: Vec<f64> = (0..20).map(|i| i as f64 * 60.0).collect();
        let co2: Vec<f64> = (1..=20).map(|i| i as f64 * 100.0).collect();
        for (ri, &r) in rad.iter().enumerate() {
            for (ci, &c) in co2.iter().enumerate() {
                let v = photosynthesis_oracle(r, c, &p);
                assert!((0.0..p.p_max).contains(&v));
                if ri > 0 {
                    assert!(v >= photosynthesis_oracle(rad[ri - 1], c, &p));
                }
                if ci > 0 {
                    assert!(v >= photosynthesis_oracle(r, co2[ci - 1], &p));
                }
            }
        }
    }

    #[test]
    fn transpiration_values() {
        let p = params();
        assert_eq!(transpiration_oracle(0.0, 0.0, &p), 0.0);
        assert!((transpiration_oracle(500.0, 1.0, &p) - 0.17).abs() < 1e-12);
        let no_vpd = GreenhouseParams { b_vpd: 0.0, ..p };
        assert_eq!(transpiration_oracle(400.0, 2.0, &no_vpd), 2.0 * transpiration_oracle(200.0, 2.0, &no_vpd));
    }
}
