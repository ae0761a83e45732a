//! Fixed-capacity episodic memory.
//!
//! The memory appends every observed sample until it reaches capacity. After
//! that, new samples enter by probabilistic substitution with probability `p`,
//! at one of three granularities:
//!
//! * [`Strategy::PerElement`]: for every observed sample, each slot is
//!   independently overwritten by it with probability `p`. One sample can
//!   therefore occupy many slots.
//! * [`Strategy::PerSample`]: with probability `p` the sample overwrites one
//!   uniformly chosen slot.
//! * [`Strategy::PerBatch`]: samples are collected until the batch boundary
//!   ([`EpisodicMemory::flush`], called by [`EpisodicMemory::observe_batch`]);
//!   then each slot is, with probability `p`, overwritten by a uniformly chosen
//!   member of the batch. Turnover is `p` of the memory per batch.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::data::WindowedSample;
use crate::error::{Error, Result};
use crate::numeric::SeededRng;

/// Items stored in memory expose an origin label for occupancy statistics.
pub trait Labeled {
    fn label(&self) -> &str;
}

impl<T> Labeled for WindowedSample<T> {
    fn label(&self) -> &str {
        &self.origin.label
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    PerElement,
    PerSample,
    PerBatch,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-element" => Ok(Strategy::PerElement),
            "per-sample" => Ok(Strategy::PerSample),
            "per-batch" => Ok(Strategy::PerBatch),
            other => Err(Error::invalid(
                "memory.strategy",
                format!("`{other}` is not one of per-element, per-sample, per-batch"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemoryConfig {
    pub capacity: usize,
    pub substitution_probability: f64,
    pub strategy: Strategy,
}

impl Default for MemoryConfig {
    fn default() -> Self {
        Self { capacity: 10_000, substitution_probability: 0.1, strategy: Strategy::PerBatch }
    }
}

impl MemoryConfig {
    pub fn validate(&self) -> Result<()> {
        if self.capacity == 0 {
            return Err(Error::invalid("memory.capacity", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.substitution_probability) {
            return Err(Error::invalid(
                "memory.substitution_probability",
                format!("{} is outside [0, 1]", self.substitution_probability),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelShare {
    pub label: String,
    pub count: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone)]
pub struct EpisodicMemory<S> {
    config: MemoryConfig,
    slots: Vec<Arc<S>>,
    pending: Vec<Arc<S>>,
    observed: u64,
}

impl<S> EpisodicMemory<S> {
    pub fn new(config: MemoryConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { slots: Vec::with_capacity(config.capacity.min(1 << 16)), pending: Vec::new(), observed: 0, config })
    }

    pub fn config(&self) -> &MemoryConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.slots.len() >= self.config.capacity
    }

    pub fn observed_count(&self) -> u64 {
        self.observed
    }

    pub fn slots(&self) -> &[Arc<S>] {
        &self.slots
    }

    /// Samples held back under [`Strategy::PerBatch`] until the next [`flush`](Self::flush).
    pub fn pending(&self) -> &[Arc<S>] {
        &self.pending
    }

    pub fn observe(&mut self, sample: Arc<S>, rng: &mut SeededRng) {
        self.observed += 1;
        if !self.is_full() {
            self.slots.push(sample);
            return;
        }
        let p = self.config.substitution_probability;
        match self.config.strategy {
            Strategy::PerElement => {
                for slot in &mut self.slots {
                    if rng.bernoulli(p) {
                        *slot = Arc::clone(&sample);
                    }
                }
            }
            Strategy::PerSample => {
                if rng.bernoulli(p) {
                    let k = rng.below(self.slots.len());
                    self.slots[k] = sample;
                }
            }
            Strategy::PerBatch => self.pending.push(sample),
        }
        debug_assert!(self.slots.len() <= self.config.capacity);
    }

    /// Applies the batch-level substitution to the samples collected since the last flush.
    pub fn flush(&mut self, rng: &mut SeededRng) {
        if self.pending.is_empty() {
            return;
        }
        let batch = std::mem::take(&mut self.pending);
        let p = self.config.substitution_probability;
        for slot in &mut self.slots {
            if rng.bernoulli(p) {
                *slot = Arc::clone(&batch[rng.below(batch.len())]);
            }
        }
    }

    /// Observes the whole batch in order and, under [`Strategy::PerBatch`], closes it.
    pub fn observe_batch(&mut self, batch: &[Arc<S>], rng: &mut SeededRng) {
        for s in batch {
            self.observe(Arc::clone(s), rng);
        }
        self.flush(rng);
    }

    /// `n` uniform draws with replacement.
    pub fn draw_replay(&self, n: usize, rng: &mut SeededRng) -> Result<Vec<Arc<S>>> {
        if n == 0 {
            return Ok(Vec::new());
        }
        if self.slots.is_empty() {
            return Err(Error::Empty("cannot replay from an empty memory".into()));
        }
        Ok((0..n).map(|_| Arc::clone(&self.slots[rng.below(self.slots.len())])).collect())
    }
}

impl<S: Labeled> EpisodicMemory<S> {
    /// Slot counts and fractions per origin label, sorted by label.
    pub fn occupancy_stats(&self) -> Vec<LabelShare> {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for s in &self.slots {
            *counts.entry(s.label()).or_default() += 1;
        }
        let total = self.slots.len() as f64;
        counts
            .into_iter()
            .map(|(label, count)| LabelShare { label: label.to_string(), count, fraction: count as f64 / total })
            .collect()
    }
}

/// Serialized form: each distinct sample once, slots as indices into it.
#[derive(Serialize, Deserialize)]
struct Snapshot<S> {
    config: MemoryConfig,
    observed: u64,
    samples: Vec<Arc<S>>,
    slots: Vec<u32>,
    pending: Vec<u32>,
}

impl<S: Serialize> Serialize for EpisodicMemory<S> {
    fn serialize<Ser: serde::Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut index: HashMap<*const S, u32> = HashMap::new();
        let mut samples = Vec::new();
        let mut intern = |s: &Arc<S>| -> u32 {
            *index.entry(Arc::as_ptr(s)).or_insert_with(|| {
                samples.push(Arc::clone(s));
                (samples.len() - 1) as u32
            })
        };
        let slots: Vec<u32> = self.slots.iter().map(&mut intern).collect();
        let pending: Vec<u32> = self.pending.iter().map(&mut intern).collect();
        Snapshot { config: self.config.clone(), observed: self.observed, samples, slots, pending }.serialize(serializer)
    }
}

impl<'de, S: DeserializeOwned> Deserialize<'de> for EpisodicMemory<S> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let snap = Snapshot::<S>::deserialize(deserializer)?;
        let lookup = |i: &u32| {
            snap.samples.get(*i as usize).cloned().ok_or_else(|| D::Error::custom(format!("slot index {i} out of range")))
        };
        let slots = snap.slots.iter().map(lookup).collect::<std::result::Result<Vec<_>, _>>()?;
        let pending = snap.pending.iter().map(lookup).collect::<std::result::Result<Vec<_>, _>>()?;
        if slots.len() > snap.config.capacity {
            return Err(D::Error::custom("memory snapshot exceeds its capacity"));
        }
        Ok(Self { config: snap.config, slots, pending, observed: snap.observed })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
    struct Item {
        id: u32,
        label: String,
    }

    impl Labeled for Item {
        fn label(&self) -> &str {
            &self.label
        }
    }

    fn item(id: u32, label: &str) -> Arc<Item> {
        Arc::new(Item { id, label: label.into() })
    }

    fn memory(capacity: usize, p: f64, strategy: Strategy) -> EpisodicMemory<Item> {
        EpisodicMemory::new(MemoryConfig { capacity, substitution_probability: p, strategy }).unwrap()
    }

    #[test]
    fn fill_phase_appends() {
        let mut m = memory(3, 0.5, Strategy::PerElement);
        let mut rng = SeededRng::new(0);
        m.observe(item(0, "a"), &mut rng);
        assert_eq!(m.len(), 1);
        assert_eq!(m.slots()[0].id, 0);
        m.observe_batch(&[item(1, "a"), item(2, "a")], &mut rng);
        assert_eq!(m.slots().iter().map(|s| s.id).collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn zero_probability_never_substitutes() {
        for strategy in [Strategy::PerElement, Strategy::PerSample, Strategy::PerBatch] {
            let mut m = memory(5, 0.0, strategy);
            let mut rng = SeededRng::new(1);
            let initial: Vec<_> = (0..5).map(|i| item(i, "old")).collect();
            m.observe_batch(&initial, &mut rng);
            let before: Vec<u32> = m.slots().iter().map(|s| s.id).collect();
            for k in 0..20 {
                m.observe_batch(&[item(100 + k, "new"), item(200 + k, "new")], &mut rng);
            }
            assert_eq!(m.slots().iter().map(|s| s.id).collect::<Vec<_>>(), before);
            assert_eq!(m.observed_count(), 45);
        }
    }

    #[test]
    fn per_batch_defers_single_observations_until_flush() {
        let mut m = memory(2, 1.0, Strategy::PerBatch);
        let mut rng = SeededRng::new(2);
        m.observe_batch(&[item(0, "a"), item(1, "a")], &mut rng);
        m.observe(item(9, "b"), &mut rng);
        assert_eq!(m.pending().len(), 1);
        assert!(m.slots().iter().all(|s| s.label == "a"));
        m.flush(&mut rng);
        assert!(m.pending().is_empty());
        assert!(m.slots().iter().all(|s| s.id == 9));
    }

    #[test]
    fn per_sample_replaces_at_most_one_slot() {
        let mut m = memory(50, 1.0, Strategy::PerSample);
        let mut rng = SeededRng::new(3);
        m.observe_batch(&(0..50).map(|i| item(i, "old")).collect::<Vec<_>>(), &mut rng);
        m.observe(item(999, "new"), &mut rng);
        assert_eq!(m.slots().iter().filter(|s| s.id == 999).count(), 1);
    }

    #[test]
    fn replay_edge_cases() {
        let mut m = memory(4, 0.1, Strategy::PerBatch);
        let mut rng = SeededRng::new(4);
        assert!(m.draw_replay(0, &mut rng).unwrap().is_empty());
        assert!(matches!(m.draw_replay(1, &mut rng), Err(Error::Empty(_))));
        m.observe(item(7, "a"), &mut rng);
        let drawn = m.draw_replay(5, &mut rng).unwrap();
        assert_eq!(drawn.len(), 5);
        assert!(drawn.iter().all(|s| s.id == 7));
    }

    #[test]
    fn replay_frequencies_are_uniform() {
        let mut m = memory(10, 0.1, Strategy::PerBatch);
        let mut rng = SeededRng::new(5);
        m.observe_batch(&(0..10).map(|i| item(i, "a")).collect::<Vec<_>>(), &mut rng);
        let n = 100_000;
        let mut counts = [0usize; 10];
        for s in m.draw_replay(n, &mut rng).unwrap() {
            counts[s.id as usize] += 1;
        }
        // 3σ of a Binomial(1e5, 0.1) frequency: 3 · sqrt(0.09 / 1e5) ≈ 0.0028
        for c in counts {
            assert!((c as f64 / n as f64 - 0.1).abs() < 0.003, "{counts:?}");
        }
    }

    #[test]
    fn replay_returns_existing_slots_only() {
        let mut m = memory(20, 0.3, Strategy::PerElement);
        let mut rng = SeededRng::new(6);
        for i in 0..60 {
            m.observe(item(i, "x"), &mut rng);
        }
        for s in m.draw_replay(200, &mut rng).unwrap() {
            assert!(m.slots().iter().any(|slot| Arc::ptr_eq(slot, &s)));
        }
    }

    #[test]
    fn occupancy() {
        let mut m = memory(10, 1.0, Strategy::PerBatch);
        assert!(m.occupancy_stats().is_empty());
        let mut rng = SeededRng::new(7);
        m.observe_batch(&(0..4).map(|i| item(i, "GH-A")).collect::<Vec<_>>(), &mut rng);
        assert_eq!(m.occupancy_stats(), vec![LabelShare { label: "GH-A".into(), count: 4, fraction: 1.0 }]);
        m.observe_batch(&(0..4).map(|i| item(i, "GH-B")).collect::<Vec<_>>(), &mut rng);
        let stats = m.occupancy_stats();
        assert_eq!(stats.iter().map(|s| s.count).sum::<usize>(), m.len());
        assert!((stats.iter().map(|s| s.fraction).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn snapshot_round_trip_preserves_sharing() {
        let mut m = memory(30, 0.2, Strategy::PerElement);
        let mut rng = SeededRng::new(8);
        for i in 0..40 {
            m.observe(item(i, if i < 30 { "a" } else { "b" }), &mut rng);
        }
        let text = serde_json::to_string(&m).unwrap();
        let back: EpisodicMemory<Item> = serde_json::from_str(&text).unwrap();
        assert_eq!(back.len(), m.len());
        assert_eq!(back.observed_count(), m.observed_count());
        for (a, b) in m.slots().iter().zip(back.slots()) {
            assert_eq!(a, b);
        }
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn strategy_parsing() {
        assert_eq!("per-batch".parse::<Strategy>().unwrap(), Strategy::PerBatch);
        assert!("batch".parse::<Strategy>().is_err());
        assert!(MemoryConfig { capacity: 0, ..MemoryConfig::default() }.validate().is_err());
        assert!(MemoryConfig { substitution_probability: 1.5, ..MemoryConfig::default() }.validate().is_err());
    }
}
