//! CSV file formats.
//!
//! Two UTF-8 schemas, both with a required header row, `#` comment lines,
//! dot decimal separators, and rows in any order:
//!
//! - samples: `frequency_ghz,theta_deg,gamma_mag`
//! - powers:  `frequency_ghz,theta_deg,p_r,p_ref,d_t_m,d_r_m,d_ref_m`
//!
//! Numeric output uses nine significant digits, enough that a written file
//! reloads and rewrites byte-identically.

use farc_core::measurement::{
    Dataset, GridPolicy, MeasurementError, MeasurementGrid, PowerRecord, ReflectionSample,
};
use farc_core::reflection::MaterialClass;
use serde::Deserialize;
use std::io::{Read, Write};
use thiserror::Error;

/// Significant digits in CSV output.
pub const CSV_SIG_DIGITS: u32 = 9;

/// Significant digits in human-readable output.
pub const DISPLAY_SIG_DIGITS: u32 = 6;

/// Header of the samples schema.
pub const SAMPLES_HEADER: &str = "frequency_ghz,theta_deg,gamma_mag";

/// Errors raised while loading CSV input, with row numbers where one row is
/// at fault.
#[derive(Debug, Error)]
pub enum LoadError {
    /// Malformed CSV (bad field count, unparsable number, missing column);
    /// the message carries the record position.
    #[error(transparent)]
    Csv(#[from] csv::Error),
    /// A row parsed but violated a domain rule.
    #[error("row {row}: {source}")]
    Row { row: u64, source: MeasurementError },
    /// Two rows landed on the same (frequency, angle) point.
    #[error("row {row}: duplicate sample at ({frequency_ghz} GHz, {theta_deg} deg)")]
    DuplicateRow {
        row: u64,
        frequency_ghz: f64,
        theta_deg: f64,
    },
    /// A row lies off the declared grid and strict validation is in force.
    #[error(
        "row {row}: sample at ({frequency_ghz} GHz, {theta_deg} deg) is off the declared grid"
    )]
    OffGridRow {
        row: u64,
        frequency_ghz: f64,
        theta_deg: f64,
    },
    /// Dataset-level validation failure not tied to a single row.
    #[error(transparent)]
    Dataset(MeasurementError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl LoadError {
    /// True when the underlying failure is an I/O problem rather than bad
    /// input content.
    pub fn is_io(&self) -> bool {
        match self {
            LoadError::Io(_) => true,
            LoadError::Csv(e) => matches!(e.kind(), csv::ErrorKind::Io(_)),
            _ => false,
        }
    }
}

#[derive(Debug, Deserialize)]
struct SampleRow {
    frequency_ghz: f64,
    theta_deg: f64,
    gamma_mag: f64,
}

#[derive(Debug, Deserialize)]
struct PowerRow {
    frequency_ghz: f64,
    theta_deg: f64,
    p_r: f64,
    p_ref: f64,
    d_t_m: f64,
    d_r_m: f64,
    d_ref_m: f64,
}

fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader)
}

/// Load a samples CSV into a validated [`Dataset`].
///
/// Rows may appear in any order; duplicates are rejected, and off-grid rows
/// are rejected under [`GridPolicy::Strict`]. Errors name the offending file
/// row.
pub fn load_samples_csv<R: Read>(
    reader: R,
    material_name: &str,
    material_class: MaterialClass,
    grid: MeasurementGrid,
    policy: GridPolicy,
) -> Result<Dataset, LoadError> {
    let mut csv = csv_reader(reader);
    let headers = csv.headers()?.clone();
    let mut samples = Vec::new();
    let mut rows = Vec::new();
    for record in csv.records() {
        let record = record?;
        let row = record.position().map(|p| p.line()).unwrap_or(0);
        let parsed: SampleRow = record.deserialize(Some(&headers))?;
        let sample =
            ReflectionSample::new(parsed.frequency_ghz, parsed.theta_deg, parsed.gamma_mag)
                .map_err(|source| LoadError::Row { row, source })?;
        samples.push(sample);
        rows.push(row);
    }
    Dataset::new(material_name, material_class, grid, samples, policy).map_err(|e| match e {
        MeasurementError::DuplicateSample {
            index,
            frequency_ghz,
            theta_deg,
        } => LoadError::DuplicateRow {
            row: rows[index],
            frequency_ghz,
            theta_deg,
        },
        MeasurementError::OffGridSample {
            index,
            frequency_ghz,
            theta_deg,
        } => LoadError::OffGridRow {
            row: rows[index],
            frequency_ghz,
            theta_deg,
        },
        other => LoadError::Dataset(other),
    })
}

/// Load a power-record CSV, keeping each record's file row for diagnostics.
///
/// With `powers_in_db` the `p_r` and `p_ref` columns are interpreted as
/// decibel values and converted to linear (`10^(x/10)`) before validation;
/// distances stay in metres either way.
pub fn load_power_csv<R: Read>(
    reader: R,
    powers_in_db: bool,
) -> Result<Vec<(u64, PowerRecord)>, LoadError> {
    let mut csv = csv_reader(reader);
    let headers = csv.headers()?.clone();
    let mut records = Vec::new();
    for record in csv.records() {
        let record = record?;
        let row = record.position().map(|p| p.line()).unwrap_or(0);
        let parsed: PowerRow = record.deserialize(Some(&headers))?;
        let (p_r, p_ref) = if powers_in_db {
            (
                10f64.powf(parsed.p_r / 10.0),
                10f64.powf(parsed.p_ref / 10.0),
            )
        } else {
            (parsed.p_r, parsed.p_ref)
        };
        let power = PowerRecord::new(
            parsed.frequency_ghz,
            parsed.theta_deg,
            p_r,
            p_ref,
            parsed.d_t_m,
            parsed.d_r_m,
            parsed.d_ref_m,
        )
        .map_err(|source| LoadError::Row { row, source })?;
        records.push((row, power));
    }
    Ok(records)
}

/// Write `(frequency_ghz, theta_deg, gamma_mag)` rows in the samples schema.
pub fn write_samples_csv<W: Write>(
    mut writer: W,
    rows: impl IntoIterator<Item = (f64, f64, f64)>,
) -> std::io::Result<()> {
    writeln!(writer, "{SAMPLES_HEADER}")?;
    for (f, theta, gamma) in rows {
        writeln!(
            writer,
            "{},{},{}",
            format_significant(f, CSV_SIG_DIGITS),
            format_significant(theta, CSV_SIG_DIGITS),
            format_significant(gamma, CSV_SIG_DIGITS),
        )?;
    }
    Ok(())
}

/// Write a dataset's samples in the samples schema, preserving sample order.
pub fn write_dataset_csv<W: Write>(writer: W, dataset: &Dataset) -> std::io::Result<()> {
    write_samples_csv(
        writer,
        dataset
            .samples()
            .iter()
            .map(|s| (s.frequency_ghz(), s.theta_deg(), s.gamma_mag())),
    )
}

/// Fixed-notation formatting with the given number of significant digits.
///
/// Parse-then-reprint is idempotent, so written files round-trip exactly.
pub fn format_significant(value: f64, digits: u32) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    format!("{value:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> MeasurementGrid {
        MeasurementGrid::standard()
    }

    #[test]
    fn format_significant_digit_counts() {
        assert_eq!(format_significant(0.0, 6), "0");
        assert_eq!(format_significant(220.0, 9), "220.000000");
        assert_eq!(format_significant(0.30333704464193667, 6), "0.303337");
        assert_eq!(format_significant(-0.30333704464193667, 6), "-0.303337");
        assert_eq!(format_significant(0.9877055817520872, 9), "0.987705582");
        assert_eq!(format_significant(1.0, 6), "1.00000");
    }

    #[test]
    fn load_full_grid_samples() {
        let mut body = String::from("frequency_ghz,theta_deg,gamma_mag\n# comment line\n");
        for (f, t) in grid().points() {
            body.push_str(&format!("{f},{t},0.5\n"));
        }
        let dataset = load_samples_csv(
            body.as_bytes(),
            "glass",
            MaterialClass::NonMetallic,
            grid(),
            GridPolicy::Strict,
        )
        .unwrap();
        assert_eq!(dataset.len(), 72);
    }

    #[test]
    fn duplicate_row_error_names_the_row() {
        let body = "frequency_ghz,theta_deg,gamma_mag\n260,40,0.5\n220,10,0.4\n260,40,0.6\n";
        let err = load_samples_csv(
            body.as_bytes(),
            "glass",
            MaterialClass::NonMetallic,
            grid(),
            GridPolicy::Strict,
        )
        .unwrap_err();
        match err {
            LoadError::DuplicateRow { row, .. } => assert_eq!(row, 4),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn off_grid_row_strict_vs_permissive() {
        let body = "frequency_ghz,theta_deg,gamma_mag\n270,40,0.5\n";
        let err = load_samples_csv(
            body.as_bytes(),
            "glass",
            MaterialClass::NonMetallic,
            grid(),
            GridPolicy::Strict,
        )
        .unwrap_err();
        match err {
            LoadError::OffGridRow {
                row, frequency_ghz, ..
            } => {
                assert_eq!(row, 2);
                assert_eq!(frequency_ghz, 270.0);
            }
            other => panic!("unexpected error {other}"),
        }
        let dataset = load_samples_csv(
            body.as_bytes(),
            "glass",
            MaterialClass::NonMetallic,
            grid(),
            GridPolicy::Permissive,
        )
        .unwrap();
        assert_eq!(dataset.len(), 1);
    }

    #[test]
    fn missing_column_is_a_csv_error() {
        let body = "frequency_ghz,theta_deg\n260,40\n";
        let err = load_samples_csv(
            body.as_bytes(),
            "glass",
            MaterialClass::NonMetallic,
            grid(),
            GridPolicy::Strict,
        )
        .unwrap_err();
        assert!(matches!(err, LoadError::Csv(_)), "got {err}");
    }

    #[test]
    fn domain_error_names_the_row() {
        let body = "frequency_ghz,theta_deg,gamma_mag\n260,40,-0.5\n";
        let err = load_samples_csv(
            body.as_bytes(),
            "glass",
            MaterialClass::NonMetallic,
            grid(),
            GridPolicy::Strict,
        )
        .unwrap_err();
        match err {
            LoadError::Row { row, .. } => assert_eq!(row, 2),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn canonical_files_round_trip_bit_identically() {
        let rows: Vec<(f64, f64, f64)> = grid()
            .points()
            .enumerate()
            .map(|(i, (f, t))| (f, t, 0.1 + 0.007 * i as f64))
            .collect();
        let mut first = Vec::new();
        write_samples_csv(&mut first, rows).unwrap();
        let dataset = load_samples_csv(
            first.as_slice(),
            "glass",
            MaterialClass::NonMetallic,
            grid(),
            GridPolicy::Strict,
        )
        .unwrap();
        let mut second = Vec::new();
        write_dataset_csv(&mut second, &dataset).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn power_rows_convert_from_db() {
        let body =
            "frequency_ghz,theta_deg,p_r,p_ref,d_t_m,d_r_m,d_ref_m\n260,40,-3,0,0.05,0.05,0.10\n";
        let records = load_power_csv(body.as_bytes(), true).unwrap();
        assert_eq!(records.len(), 1);
        let (row, record) = &records[0];
        assert_eq!(*row, 2);
        assert!((record.p_r() - 10f64.powf(-0.3)).abs() < 1e-15);
        assert_eq!(record.p_ref(), 1.0);
    }

    #[test]
    fn power_schema_mismatch_is_an_error() {
        let body = "frequency_ghz,theta_deg,p_r,p_ref,d_t_m,d_r_m\n260,40,1,1,0.05,0.05\n";
        assert!(matches!(
            load_power_csv(body.as_bytes(), false),
            Err(LoadError::Csv(_))
        ));
    }
}
