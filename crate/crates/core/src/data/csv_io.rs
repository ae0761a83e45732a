//! `timestamp,t_air,rh,radiation,co2,t_leaf,transpiration,photosynthesis`
//! with integer-second timestamps and 9 significant digits per float.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use super::ClimateRecord;
use crate::error::{Error, Result};

pub const COLUMNS: [&str; 8] = ["timestamp", "t_air", "rh", "radiation", "co2", "t_leaf", "transpiration", "photosynthesis"];

/// Shortest plain rendering of `x` rounded to 9 significant digits.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&exp) {
        return format!("{x:.8e}");
    }
    let decimals = (8 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn write_csv(path: &Path, records: &[ClimateRecord]) -> Result<()> {
    let mut file = std::io::BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?);
    let mut text = COLUMNS.join(",");
    text.push('\n');
    for r in records {
        text.push_str(&r.timestamp.to_string());
        for v in [r.t_air, r.rh, r.radiation, r.co2, r.t_leaf, r.transpiration, r.photosynthesis] {
            text.push(',');
            text.push_str(&format_sig9(v));
        }
        text.push('\n');
    }
    file.write_all(text.as_bytes()).and_then(|_| file.flush()).map_err(|e| Error::io(path, e))
}

pub fn read_csv(path: &Path) -> Result<Vec<ClimateRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(file);
    let csv_err = |line: u64, message: String| Error::Csv { path: path.to_path_buf(), line, message };

    let headers = reader.headers().map_err(|e| csv_err(1, e.to_string()))?.clone();
    let mut index = [0usize; 8];
    for (slot, name) in index.iter_mut().zip(COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| csv_err(1, format!("missing column `{name}`")))?;
    }

    let mut records: Vec<ClimateRecord> = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = row.position().map_or(0, |p| p.line());
        let cell = |i: usize| -> Result<&str> {
            row.get(index[i]).ok_or_else(|| csv_err(line, format!("missing value for `{}`", COLUMNS[i])))
        };
        let num = |i: usize| -> Result<f64> {
            let raw = cell(i)?;
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| csv_err(line, format!("`{}` is not a finite number: {raw:?}", COLUMNS[i])))
        };
        let ts_raw = cell(0)?;
        let timestamp = ts_raw
            .parse::<i64>()
            .map_err(|_| csv_err(line, format!("`timestamp` is not an integer: {ts_raw:?}")))?;
        let record = ClimateRecord {
            timestamp,
            t_air: num(1)?,
            rh: num(2)?,
            radiation: num(3)?,
            co2: num(4)?,
            t_leaf: num(5)?,
            transpiration: num(6)?,
            photosynthesis: num(7)?,
        };
        if let Some(prev) = records.last() {
            if record.timestamp <= prev.timestamp {
                return Err(csv_err(
                    line,
                    format!("timestamp {} does not increase (previous {})", record.timestamp, prev.timestamp),
                ));
            }
        }
        record.validate().map_err(|m| csv_err(line, m))?;
        records.push(record);
    }
    Ok(records)
}
