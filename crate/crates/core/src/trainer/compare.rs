use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::curve::{EvalPoint, LearningCurve};
use crate::error::{Error, Result};

/// First evaluation after a phase switch: transferred model vs a fresh model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub phase: String,
    pub start_update: usize,
    pub update_index: usize,
    pub transferred_mse: f64,
    pub fresh_mse: f64,
    /// `transferred_mse / fresh_mse`
    pub ratio: f64,
    pub transferred_better: bool,
}

fn spacing(points: &[&EvalPoint]) -> Option<usize> {
    points.windows(2).map(|w| w[1].update_index - w[0].update_index).next()
}

/// One row per run boundary that has a baseline with the same phase label.
pub fn compare(run: &LearningCurve, baselines: &[LearningCurve]) -> Result<Vec<Comparison>> {
    for b in baselines {
        let Some(start) = b.boundaries.first() else {
            return Err(Error::CurveMismatch("baseline curve has no phase boundary".into()));
        };
        if !run.boundaries.contains(start) {
            return Err(Error::CurveMismatch(format!(
                "baseline starts phase `{}` at update {}, which is not a boundary of the run",
                start.phase, start.start_update
            )));
        }
    }

    let mut rows = Vec::new();
    for boundary in &run.boundaries {
        let Some(base) = baselines.iter().find(|b| b.boundaries[0].phase == boundary.phase) else {
            continue;
        };
        let ours: Vec<&EvalPoint> = run.phase_points(&boundary.phase).collect();
        let theirs: Vec<&EvalPoint> = base.phase_points(&boundary.phase).collect();
        let (Some(first_ours), Some(first_theirs)) = (ours.first(), theirs.first()) else {
            return Err(Error::CurveMismatch(format!("phase `{}` has no evaluation points", boundary.phase)));
        };
        if first_ours.update_index != first_theirs.update_index
            || (spacing(&ours).is_some() && spacing(&theirs).is_some() && spacing(&ours) != spacing(&theirs))
        {
            return Err(Error::CurveMismatch(format!(
                "evaluation cadence differs in phase `{}`: run evaluates first at update {}, baseline at {}",
                boundary.phase, first_ours.update_index, first_theirs.update_index
            )));
        }
        let ratio = first_ours.mse_total / first_theirs.mse_total;
        rows.push(Comparison {
            phase: boundary.phase.clone(),
            start_update: boundary.start_update,
            update_index: first_ours.update_index,
            transferred_mse: first_ours.mse_total,
            fresh_mse: first_theirs.mse_total,
            ratio,
            transferred_better: first_ours.mse_total < first_theirs.mse_total,
        });
    }
    Ok(rows)
}

pub fn comparison_csv(rows: &[Comparison]) -> String {
    let mut s = String::from("phase,start_update,update_index,transferred_mse,fresh_mse,ratio,result\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.phase,
            r.start_update,
            r.update_index,
            r.transferred_mse,
            r.fresh_mse,
            r.ratio,
            if r.transferred_better { "pass" } else { "fail" }
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trainer::curve::PhaseBoundary;

    fn point(u: usize, phase: &str, mse: f64) -> EvalPoint {
        EvalPoint {
            update_index: u,
            eval_index: u / 3,
            phase: phase.into(),
            mse_total: mse,
            mse_transpiration: mse,
            mse_photosynthesis: mse,
        }
    }

    fn boundary(phase: &str, start: usize) -> PhaseBoundary {
        PhaseBoundary { phase: phase.into(), start_update: start }
    }

    fn run() -> LearningCurve {
        LearningCurve {
            points: vec![point(3, "A", 0.05), point(6, "A", 0.03), point(9, "B", 0.02), point(12, "B", 0.01)],
            boundaries: vec![boundary("A", 0), boundary("B", 7)],
        }
    }

    #[test]
    fn identical_curves_fail_with_unit_ratio() {
        let r = run();
        let rows = compare(&r, std::slice::from_ref(&r)).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].ratio, 1.0);
        assert!(!rows[0].transferred_better);
        assert!(comparison_csv(&rows).contains(",fail"));
    }

    #[test]
    fn better_transfer_passes() {
        let fresh = LearningCurve { points: vec![point(9, "B", 0.08), point(12, "B", 0.04)], boundaries: vec![boundary("B", 7)] };
        let rows = compare(&run(), &[fresh]).unwrap();
        assert_eq!(rows[0].phase, "B");
        assert!((rows[0].ratio - 0.25).abs() < 1e-15);
        assert!(rows[0].transferred_better);
    }

    #[test]
    fn baseline_off_boundary_is_an_error() {
        let fresh = LearningCurve { points: vec![point(9, "B", 0.08)], boundaries: vec![boundary("B", 6)] };
        assert!(matches!(compare(&run(), &[fresh]), Err(Error::CurveMismatch(_))));
        let headless = LearningCurve { points: vec![point(9, "B", 0.08)], boundaries: vec![] };
        assert!(compare(&run(), &[headless]).is_err());
    }

    #[test]
    fn cadence_mismatch_is_an_error() {
        let fresh = LearningCurve { points: vec![point(8, "B", 0.08), point(10, "B", 0.04)], boundaries: vec![boundary("B", 7)] };
        let err = compare(&run(), &[fresh]).unwrap_err().to_string();
        assert!(err.contains("cadence"), "{err}");
    }
}
