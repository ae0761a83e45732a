//! Synthetic greenhouse series, CSV ingestion, normalization and windowing.

mod csv_io;
mod greenhouse;
mod normalize;
mod physics;
mod window;

pub use csv_io::{format_sig9, read_csv, write_csv, COLUMNS};
pub use greenhouse::{generate_series, ClimateRecord, GreenhouseParams, SAMPLES_PER_DAY, SAMPLE_INTERVAL_S, SERIES_START};
pub use normalize::{Bounds, ClampCounter, Feature, Normalizer};
pub use physics::{photosynthesis_oracle, saturation_vapor_pressure, transpiration_oracle, vapor_pressure_deficit};
pub use window::{extract_windows, window_count, Origin, WindowedSample};
