use serde::{Deserialize, Serialize};

use super::normalize::{ClampCounter, Normalizer};
use super::ClimateRecord;
use crate::numeric::{Matrix, Scalar};

/// Where a sample came from. Kept for diagnostics only; the model never sees it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Origin {
    pub label: String,
    pub end_timestamp: i64,
}

impl std::fmt::Display for Origin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}@{}", self.label, self.end_timestamp)
    }
}

/// A window of normalized inputs (`window_len × 5`) and the normalized target
/// pair of its final record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowedSample<T = f64> {
    pub inputs: Matrix<T>,
    pub targets: [T; 2],
    pub origin: Origin,
}

impl<T: Scalar> WindowedSample<T> {
    pub fn from_window(window: &[ClimateRecord], label: &str, normalizer: &Normalizer, clamps: &mut ClampCounter) -> Self {
        let last = window.last().expect("windows are non-empty");
        let data = window
            .iter()
            .flat_map(|r| normalizer.normalize_inputs(r, clamps))
            .map(T::of)
            .collect();
        let targets = normalizer.normalize_targets(last, clamps).map(T::of);
        Self {
            inputs: Matrix::from_vec(window.len(), 5, data).expect("normalized values are finite"),
            targets,
            origin: Origin { label: label.to_string(), end_timestamp: last.timestamp },
        }
    }

    pub fn cast<U: Scalar>(&self) -> WindowedSample<U> {
        WindowedSample {
            inputs: self.inputs.cast(),
            targets: self.targets.map(|t| U::of(t.as_f64())),
            origin: self.origin.clone(),
        }
    }
}

/// Number of windows `extract_windows` yields.
pub fn window_count(n: usize, window_len: usize, stride: usize) -> usize {
    if n < window_len {
        0
    } else {
        (n - window_len) / stride + 1
    }
}

/// Overlapping windows of `window_len` consecutive records, starting every `stride` records.
pub fn extract_windows(records: &[ClimateRecord], window_len: usize, stride: usize) -> Vec<&[ClimateRecord]> {
    assert!(window_len >= 1 && stride >= 1, "window_len and stride must be positive");
    (0..window_count(records.len(), window_len, stride))
        .map(|k| &records[k * stride..k * stride + window_len])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{generate_series, GreenhouseParams};
    use crate::numeric::SeededRng;
    use proptest::prelude::*;

    fn dummy(n: usize) -> Vec<ClimateRecord> {
        (0..n)
            .map(|i| ClimateRecord {
                timestamp: i as i64 * 300,
                t_air: 20.0,
                rh: 60.0,
                radiation: 0.0,
                co2: 400.0,
                t_leaf: 20.0,
                transpiration: 0.0,
                photosynthesis: 0.0,
            })
            .collect()
    }

    #[test]
    fn counts() {
        assert_eq!(extract_windows(&dummy(250), 250, 2).len(), 1);
        assert_eq!(extract_windows(&dummy(254), 250, 2).len(), 3);
        assert_eq!(extract_windows(&dummy(249), 250, 2).len(), 0);
    }

    #[test]
    fn windows_are_contiguous_and_target_the_last_record() {
        let p = GreenhouseParams::preset("GH-A").unwrap();
        let series = generate_series(&p, 1, &mut SeededRng::new(0)).unwrap();
        let n = Normalizer::default();
        let mut clamps = ClampCounter::default();
        for w in extract_windows(&series, 10, 3) {
            assert!(w.windows(2).all(|p| p[1].timestamp - p[0].timestamp == 300));
            let s: WindowedSample = WindowedSample::from_window(w, "GH-A", &n, &mut clamps);
            assert_eq!(s.inputs.shape(), (10, 5));
            assert_eq!(s.origin.end_timestamp, w[9].timestamp);
            assert_eq!(s.targets, n.normalize_targets(&w[9], &mut clamps));
            assert!(s.inputs.as_slice().iter().all(|v| (0.0..=1.0).contains(v)));
        }
        assert_eq!(clamps.events, 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn count_matches_closed_form(n in 0usize..600, window_len in 1usize..300, stride in 1usize..20) {
            let records = dummy(n);
            let windows = extract_windows(&records, window_len, stride);
            let expected = if n >= window_len { (n - window_len) / stride + 1 } else { 0 };
            prop_assert_eq!(windows.len(), expected);
            prop_assert!(windows.iter().all(|w| w.len() == window_len));
        }
    }
}
