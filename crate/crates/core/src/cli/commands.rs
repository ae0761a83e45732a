use std::path::{Path, PathBuf};

use serde::Serialize;

use super::spec::{Experiment, GreenhouseData};
use crate::data::{generate_series, read_csv, write_csv, ClampCounter, GreenhouseParams};
use crate::error::{Error, Result};
use crate::numeric::SeededRng;
use crate::trainer::{
    compare, comparison_csv, memory_csv, retention_csv, run_baseline, run_scenario, Checkpoint, Comparison,
    LearningCurve, Phase,
};

#[derive(Debug, Serialize)]
struct ManifestEntry<'a> {
    label: &'a str,
    file: String,
    days: usize,
    rows: usize,
    params: &'a GreenhouseParams,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    seed: u64,
    greenhouses: Vec<ManifestEntry<'a>>,
}

fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| Error::Io { path: path.to_path_buf(), source: e })
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes `<out>/data/<label>.csv` for every synthetic greenhouse and a
/// `manifest.json` with the parameters and seed. Greenhouses are generated on
/// separate threads; each draws from its own labeled stream.
pub fn generate(exp: &Experiment) -> Result<Vec<PathBuf>> {
    let root = SeededRng::new(exp.seed).split("generator");
    let jobs: Vec<(&str, &GreenhouseParams, usize)> = exp
        .greenhouses
        .iter()
        .filter_map(|g| match &g.data {
            GreenhouseData::Synthetic { params, days } => Some((g.label.as_str(), params, *days)),
            GreenhouseData::Csv(_) => None,
        })
        .collect();

    let series = std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(label, params, days)| {
                let mut rng = root.split(label);
                s.spawn(move || generate_series(params, days, &mut rng))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("generator thread panicked")).collect::<Result<Vec<_>>>()
    })?;

    let dir = exp.data_dir();
    create_dir(&dir)?;
    let mut written = Vec::new();
    let mut manifest = Manifest { seed: exp.seed, greenhouses: Vec::new() };
    for ((label, params, days), records) in jobs.iter().zip(&series) {
        let path = dir.join(format!("{label}.csv"));
        write_csv(&path, records)?;
        manifest.greenhouses.push(ManifestEntry {
            label,
            file: format!("{label}.csv"),
            days: *days,
            rows: records.len(),
            params,
        });
        written.push(path);
    }
    let text = serde_json::to_string_pretty(&manifest)
        .map_err(|source| Error::Json { context: "manifest".into(), source })?;
    write(&dir.join("manifest.json"), &(text + "\n"))?;
    Ok(written)
}

/// Reads every greenhouse's CSV and splits it into a phase. Returns the
/// phases in spec order plus the number of values clamped by the normalizer.
pub fn load_phases(exp: &Experiment) -> Result<(Vec<Phase<f64>>, u64)> {
    let root = SeededRng::new(exp.seed).split("test-sampling");
    let mut phases = Vec::with_capacity(exp.greenhouses.len());
    let mut clamps = ClampCounter::default();
    for gh in &exp.greenhouses {
        let records = read_csv(&exp.dataset_path(gh))?;
        let (phase, c) = Phase::from_records(
            &gh.label,
            &records,
            exp.model.window_len,
            exp.stride,
            &exp.normalizer,
            exp.scenario.test_size,
            &mut root.split(&gh.label),
        )?;
        clamps.events += c.events;
        phases.push(phase);
    }
    Ok((phases, clamps.events))
}

/// Trains through all greenhouses in order and writes `<out>/run/`.
pub fn run(exp: &Experiment) -> Result<LearningCurve> {
    let (phases, _) = load_phases(exp)?;
    let out = run_scenario(&phases, &exp.model, &exp.memory, &exp.scenario, exp.options)?;
    let dir = exp.run_dir();
    create_dir(&dir)?;
    out.curve.write(&dir.join("curve.csv"), &dir.join("boundaries.csv"))?;
    if exp.options.retention {
        write(&dir.join("retention.csv"), &retention_csv(&out.diagnostics.retention))?;
    }
    if exp.options.dump_memory {
        write(&dir.join("memory.csv"), &memory_csv(&out.diagnostics.memory))?;
    }
    Checkpoint::new(out.learner).save(&dir.join("checkpoint.json"))?;
    Ok(out.curve)
}

/// Trains a fresh model on greenhouse `label` alone and writes
/// `<out>/baseline-<label>/`.
pub fn baseline(exp: &Experiment, label: &str) -> Result<LearningCurve> {
    if !exp.greenhouses.iter().any(|g| g.label == label) {
        return Err(Error::UnknownPhase(label.to_string()));
    }
    let (phases, _) = load_phases(exp)?;
    let curve = run_baseline(&phases, label, &exp.model, &exp.memory, &exp.scenario)?;
    let dir = exp.baseline_dir(label);
    create_dir(&dir)?;
    curve.write(&dir.join("curve.csv"), &dir.join("boundaries.csv"))?;
    Ok(curve)
}

/// Baseline directories under `out`, sorted by name.
pub fn find_baselines(out: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(out).map_err(|e| Error::io(out, e))?;
    let mut dirs: Vec<PathBuf> = entries
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().starts_with("baseline-") && e.path().is_dir())
        .map(|e| e.path())
        .collect();
    dirs.sort();
    Ok(dirs)
}

fn read_curve(dir: &Path) -> Result<LearningCurve> {
    LearningCurve::read(&dir.join("curve.csv"), &dir.join("boundaries.csv"))
}

/// Compares the run's first evaluation after each boundary with the matching
/// baseline and writes the table to `out_file`.
pub fn compare_dirs(run_dir: &Path, baseline_dirs: &[PathBuf], out_file: &Path) -> Result<Vec<Comparison>> {
    if baseline_dirs.is_empty() {
        return Err(Error::Empty("no baseline curves to compare against".into()));
    }
    let run = read_curve(run_dir)?;
    let baselines = baseline_dirs.iter().map(|d| read_curve(d)).collect::<Result<Vec<_>>>()?;
    let rows = compare(&run, &baselines)?;
    write(out_file, &comparison_csv(&rows))?;
    Ok(rows)
}

pub fn format_table(rows: &[Comparison]) -> String {
    let mut s = format!(
        "{:<10} {:>6} {:>6} {:>14} {:>14} {:>8}  result\n",
        "phase", "start", "update", "transferred", "fresh", "ratio"
    );
    for r in rows {
        s.push_str(&format!(
            "{:<10} {:>6} {:>6} {:>14.6e} {:>14.6e} {:>8.4}  {}\n",
            r.phase,
            r.start_update,
            r.update_index,
            r.transferred_mse,
            r.fresh_mse,
            r.ratio,
            if r.transferred_better { "pass" } else { "fail" }
        ));
    }
    s
}
