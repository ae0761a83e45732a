use std::collections::HashSet;
use std::sync::Arc;

use crate::data::{extract_windows, ClampCounter, ClimateRecord, Normalizer, WindowedSample};
use crate::error::{Error, Result};
use crate::numeric::{Scalar, SeededRng};

pub type SampleRef<T> = Arc<WindowedSample<T>>;

/// One greenhouse: a chronological training stream and a held-out test set.
#[derive(Debug, Clone)]
pub struct Phase<T> {
    label: String,
    stream: Vec<SampleRef<T>>,
    test_set: Vec<SampleRef<T>>,
}

impl<T: Scalar> Phase<T> {
    /// Fails if a test window shares its end timestamp with a training window.
    pub fn new(label: impl Into<String>, stream: Vec<SampleRef<T>>, test_set: Vec<SampleRef<T>>) -> Result<Self> {
        let label = label.into();
        let train_ends: HashSet<i64> = stream.iter().map(|s| s.origin.end_timestamp).collect();
        if let Some(s) = test_set.iter().find(|s| train_ends.contains(&s.origin.end_timestamp)) {
            return Err(Error::invalid(
                format!("phases.{label}.test_set"),
                format!("window ending at {} is also in the training stream", s.origin.end_timestamp),
            ));
        }
        Ok(Self { label, stream, test_set })
    }

    /// Windows the records, draws `test_size` of them uniformly at random as the
    /// test set and keeps the rest, in time order, as the training stream.
    pub fn from_records(
        label: &str,
        records: &[ClimateRecord],
        window_len: usize,
        stride: usize,
        normalizer: &Normalizer,
        test_size: usize,
        rng: &mut SeededRng,
    ) -> Result<(Self, ClampCounter)> {
        let windows = extract_windows(records, window_len, stride);
        if test_size >= windows.len() {
            return Err(Error::invalid(
                "scenario.test_size",
                format!("{test_size} test windows requested but `{label}` only yields {}", windows.len()),
            ));
        }
        let mut clamps = ClampCounter::default();
        let samples: Vec<SampleRef<T>> = windows
            .iter()
            .map(|w| Arc::new(WindowedSample::from_window(w, label, normalizer, &mut clamps)))
            .collect();

        let mut order: Vec<usize> = (0..samples.len()).collect();
        rng.shuffle(&mut order);
        let mut is_test = vec![false; samples.len()];
        for &k in &order[..test_size] {
            is_test[k] = true;
        }
        let (mut stream, mut test_set) = (Vec::new(), Vec::new());
        for (s, t) in samples.into_iter().zip(is_test) {
            if t {
                test_set.push(s);
            } else {
                stream.push(s);
            }
        }
        Ok((Self::new(label, stream, test_set)?, clamps))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn stream(&self) -> &[SampleRef<T>] {
        &self.stream
    }

    pub fn test_set(&self) -> &[SampleRef<T>] {
        &self.test_set
    }

    pub fn update_count(&self, batch_size: usize) -> usize {
        self.stream.len() / batch_size
    }
}
