use super::config::{RunOptions, ScenarioConfig};
use super::curve::{EvalPoint, LearningCurve, MemoryRow, PhaseBoundary, RetentionPoint};
use super::learner::Learner;
use super::phase::Phase;
use crate::error::{Error, Result};
use crate::memory::MemoryConfig;
use crate::model::ModelConfig;
use crate::numeric::Scalar;

#[derive(Debug, Clone, Default)]
pub struct Diagnostics {
    pub retention: Vec<RetentionPoint>,
    pub memory: Vec<MemoryRow>,
    pub losses: Vec<f64>,
}

/// Consumes `phase`'s stream in `batch_size` chunks (the trailing partial chunk
/// is dropped), one update per chunk, and evaluates on `phase`'s test set
/// whenever the global update count is a multiple of `eval_every`.
/// `earlier` supplies the test sets for retention evaluation.
pub fn run_phase<T: Scalar>(
    learner: &mut Learner<T>,
    phase: &Phase<T>,
    earlier: &[&Phase<T>],
    cfg: &ScenarioConfig,
    opts: RunOptions,
    curve: &mut LearningCurve,
    diag: &mut Diagnostics,
) -> Result<()> {
    cfg.validate()?;
    curve.boundaries.push(PhaseBoundary { phase: phase.label().to_string(), start_update: learner.updates });
    for chunk in phase.stream().chunks_exact(cfg.batch_size) {
        let report = learner.train_update(chunk, cfg.replay_size)?;
        diag.losses.push(report.loss);
        let u = report.update_index;
        if opts.dump_memory {
            diag.memory.extend(learner.memory.occupancy_stats().into_iter().map(|s| MemoryRow {
                update_index: u,
                label: s.label,
                fraction: s.fraction,
            }));
        }
        if u % cfg.eval_every == 0 {
            let m = learner.evaluate(phase.test_set())?;
            curve.points.push(EvalPoint::new(u, cfg.eval_every, phase.label(), m));
            if opts.retention {
                for old in earlier {
                    let m = learner.evaluate(old.test_set())?;
                    diag.retention.push(RetentionPoint {
                        point: EvalPoint::new(u, cfg.eval_every, phase.label(), m),
                        test_phase: old.label().to_string(),
                    });
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ScenarioOutput<T> {
    pub curve: LearningCurve,
    pub diagnostics: Diagnostics,
    pub learner: Learner<T>,
}

/// Trains one model and one memory through every phase in order.
pub fn run_scenario<T: Scalar>(
    phases: &[Phase<T>],
    model_cfg: &ModelConfig,
    memory_cfg: &MemoryConfig,
    cfg: &ScenarioConfig,
    opts: RunOptions,
) -> Result<ScenarioOutput<T>> {
    if phases.is_empty() {
        return Err(Error::Empty("a scenario needs at least one phase".into()));
    }
    let mut learner = Learner::new(model_cfg.clone(), memory_cfg.clone(), cfg.seed)?;
    let mut curve = LearningCurve::default();
    let mut diag = Diagnostics::default();
    for (k, phase) in phases.iter().enumerate() {
        let earlier: Vec<&Phase<T>> = phases[..k].iter().collect();
        run_phase(&mut learner, phase, &earlier, cfg, opts, &mut curve, &mut diag)?;
    }
    Ok(ScenarioOutput { curve, diagnostics: diag, learner })
}

/// Global update index at which `label` starts in a scenario over `phases`.
pub fn phase_offset<T: Scalar>(phases: &[Phase<T>], label: &str, batch_size: usize) -> Result<(usize, usize)> {
    let index = phases
        .iter()
        .position(|p| p.label() == label)
        .ok_or_else(|| Error::UnknownPhase(label.to_string()))?;
    let offset = phases[..index].iter().map(|p| p.update_count(batch_size)).sum();
    Ok((index, offset))
}

/// A fresh model with an empty memory trained only on phase `label`. Its update
/// indices start at the phase's offset in the full scenario so the curve
/// overlays the transferred model's curve point for point.
pub fn run_baseline<T: Scalar>(
    phases: &[Phase<T>],
    label: &str,
    model_cfg: &ModelConfig,
    memory_cfg: &MemoryConfig,
    cfg: &ScenarioConfig,
) -> Result<LearningCurve> {
    let (index, offset) = phase_offset(phases, label, cfg.batch_size)?;
    let phase = &phases[index];
    if phase.update_count(cfg.batch_size) == 0 {
        return Err(Error::Empty(format!(
            "phase `{label}` has {} training samples, fewer than one batch of {}",
            phase.stream().len(),
            cfg.batch_size
        )));
    }
    let mut learner = Learner::new(model_cfg.clone(), memory_cfg.clone(), cfg.seed)?;
    learner.updates = offset;
    let mut curve = LearningCurve::default();
    run_phase(&mut learner, phase, &[], cfg, RunOptions::default(), &mut curve, &mut Diagnostics::default())?;
    Ok(curve)
}
