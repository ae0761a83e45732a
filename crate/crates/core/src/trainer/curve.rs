//! Learning curves and their CSV files.
//!
//! * curve: `update_index,eval_index,phase,mse_total,mse_transpiration,mse_photosynthesis`
//! * boundaries: `phase,start_update` (`start_update` counts the updates done before the phase)
//! * retention: the curve columns plus `test_phase`
//! * memory dump: `update_index,label,fraction`

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::learner::EvalMetrics;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalPoint {
    pub update_index: usize,
    pub eval_index: usize,
    pub phase: String,
    pub mse_total: f64,
    pub mse_transpiration: f64,
    pub mse_photosynthesis: f64,
}

impl EvalPoint {
    pub fn new(update_index: usize, eval_every: usize, phase: &str, m: EvalMetrics) -> Self {
        Self {
            update_index,
            eval_index: update_index / eval_every,
            phase: phase.to_string(),
            mse_total: m.mse_total,
            mse_transpiration: m.mse_transpiration,
            mse_photosynthesis: m.mse_photosynthesis,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseBoundary {
    pub phase: String,
    pub start_update: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LearningCurve {
    pub points: Vec<EvalPoint>,
    pub boundaries: Vec<PhaseBoundary>,
}

impl LearningCurve {
    /// Points recorded while training on `phase`.
    pub fn phase_points<'a>(&'a self, phase: &'a str) -> impl Iterator<Item = &'a EvalPoint> + 'a {
        self.points.iter().filter(move |p| p.phase == phase)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("update_index,eval_index,phase,mse_total,mse_transpiration,mse_photosynthesis\n");
        for p in &self.points {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                p.update_index, p.eval_index, p.phase, p.mse_total, p.mse_transpiration, p.mse_photosynthesis
            );
        }
        s
    }

    pub fn boundaries_csv(&self) -> String {
        let mut s = String::from("phase,start_update\n");
        for b in &self.boundaries {
            let _ = writeln!(s, "{},{}", b.phase, b.start_update);
        }
        s
    }

    pub fn write(&self, curve_path: &Path, boundaries_path: &Path) -> Result<()> {
        write_text(curve_path, &self.to_csv())?;
        write_text(boundaries_path, &self.boundaries_csv())
    }

    pub fn read(curve_path: &Path, boundaries_path: &Path) -> Result<Self> {
        let points = read_rows(curve_path, 6, |line, f| {
            Ok(EvalPoint {
                update_index: parse(curve_path, line, f[0])?,
                eval_index: parse(curve_path, line, f[1])?,
                phase: f[2].to_string(),
                mse_total: parse(curve_path, line, f[3])?,
                mse_transpiration: parse(curve_path, line, f[4])?,
                mse_photosynthesis: parse(curve_path, line, f[5])?,
            })
        })?;
        let boundaries = read_rows(boundaries_path, 2, |line, f| {
            Ok(PhaseBoundary { phase: f[0].to_string(), start_update: parse(boundaries_path, line, f[1])? })
        })?;
        Ok(Self { points, boundaries })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetentionPoint {
    pub point: EvalPoint,
    pub test_phase: String,
}

pub fn retention_csv(points: &[RetentionPoint]) -> String {
    let mut s =
        String::from("update_index,eval_index,phase,test_phase,mse_total,mse_transpiration,mse_photosynthesis\n");
    for r in points {
        let p = &r.point;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            p.update_index, p.eval_index, p.phase, r.test_phase, p.mse_total, p.mse_transpiration, p.mse_photosynthesis
        );
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoryRow {
    pub update_index: usize,
    pub label: String,
    pub fraction: f64,
}

pub fn memory_csv(rows: &[MemoryRow]) -> String {
    let mut s = String::from("update_index,label,fraction\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{}", r.update_index, r.label, r.fraction);
    }
    s
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn parse<V: std::str::FromStr>(path: &Path, line: u64, raw: &str) -> Result<V> {
    raw.trim().parse().map_err(|_| Error::Csv { path: path.to_path_buf(), line, message: format!("cannot parse {raw:?}") })
}

fn read_rows<R>(path: &Path, width: usize, mut row: impl FnMut(u64, &[&str]) -> Result<R>) -> Result<Vec<R>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let line_no = i as u64 + 1;
        if fields.len() != width {
            return Err(Error::Csv {
                path: path.to_path_buf(),
                line: line_no,
                message: format!("expected {width} fields, found {}", fields.len()),
            });
        }
        out.push(row(line_no, &fields)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let m = EvalMetrics { mse_total: 0.0125, mse_transpiration: 0.01, mse_photosynthesis: 0.015 };
        let curve = LearningCurve {
            points: vec![EvalPoint::new(3, 3, "GH-A", m), EvalPoint::new(6, 3, "GH-B", m)],
            boundaries: vec![
                PhaseBoundary { phase: "GH-A".into(), start_update: 0 },
                PhaseBoundary { phase: "GH-B".into(), start_update: 4 },
            ],
        };
        let dir = tempfile::tempdir().unwrap();
        let (c, b) = (dir.path().join("curve.csv"), dir.path().join("boundaries.csv"));
        curve.write(&c, &b).unwrap();
        assert_eq!(LearningCurve::read(&c, &b).unwrap(), curve);
        assert_eq!(curve.points[1].eval_index, 2);
        assert_eq!(curve.phase_points("GH-B").count(), 1);
    }
}
