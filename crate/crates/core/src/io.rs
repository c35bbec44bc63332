//! CSV file formats: the `t,value` series, the forecast band and the tuning
//! chart. Numbers are written with Rust's shortest round-trip rendering, so
//! re-reading a file reproduces every value exactly.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::forecast::{BandForecast, TuningChart};

/// Relative tolerance on the spacing of a series' time column.
pub const SPACING_TOLERANCE: f64 = 1e-6;

/// A uniformly sampled series.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl Series {
    /// Validates ordering and uniform spacing of `times`.
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::MalformedInput(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.len() < 2 {
            return Err(Error::MalformedInput("a series needs at least two rows".into()));
        }
        if let Some(i) = times.iter().chain(&values).position(|v| !v.is_finite()) {
            return Err(Error::MalformedInput(format!("non-finite number in row {}", i % times.len() + 1)));
        }
        let step = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
        for (i, w) in times.windows(2).enumerate() {
            let d = w[1] - w[0];
            if d <= 0.0 {
                return Err(Error::MalformedInput(format!(
                    "time column not strictly increasing at row {}",
                    i + 2
                )));
            }
            if (d - step).abs() > SPACING_TOLERANCE * step {
                return Err(Error::MalformedInput(format!(
                    "non-uniform spacing at row {}: step {d}, expected {step}",
                    i + 2
                )));
            }
        }
        Ok(Self { times, values })
    }

    /// Series starting at `start` with constant `step`.
    pub fn regular(start: f64, step: f64, values: Vec<f64>) -> Result<Self> {
        let times = (0..values.len()).map(|i| start + i as f64 * step).collect();
        Self::new(times, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> f64 {
        (self.times[self.len() - 1] - self.times[0]) / (self.len() - 1) as f64
    }
}

fn parse_number(field: &str, row: usize, column: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::MalformedInput(format!("row {row}: cannot parse {column} value {field:?}")))
}

pub fn read_series(path: &Path) -> Result<Series> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.len() != 2 || headers[0].trim() != "t" || headers[1].trim() != "value" {
        return Err(Error::MalformedInput(format!(
            "{}: expected header `t,value`",
            path.display()
        )));
    }
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != 2 {
            return Err(Error::MalformedInput(format!("row {}: expected 2 fields", i + 2)));
        }
        times.push(parse_number(&record[0], i + 2, "t")?);
        values.push(parse_number(&record[1], i + 2, "value")?);
    }
    Series::new(times, values)
}

/// Writes a CSV table; cells are already rendered.
pub fn write_table(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let mut out = csv::Writer::from_path(path)?;
    out.write_record(header)?;
    for row in rows {
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

fn write_rows(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    write_table(path, header, rows.map(|r| r.iter().map(f64::to_string).collect()))
}

pub fn write_series(path: &Path, series: &Series) -> Result<()> {
    write_rows(
        path,
        &["t", "value"],
        series.times.iter().zip(&series.values).map(|(&t, &v)| vec![t, v]),
    )
}

/// Writes the band and point forecast on the forecast segment; `times`
/// holds one time stamp per forecast grid point.
pub fn write_band(path: &Path, forecast: &BandForecast, times: &[f64]) -> Result<()> {
    let lower = &forecast.forecast.lower;
    let upper = &forecast.forecast.upper;
    if times.len() != lower.len() {
        return Err(Error::Contract(format!(
            "{} time stamps for a band of {} points",
            times.len(),
            lower.len()
        )));
    }
    let offset = forecast.point.len() - lower.len();
    write_rows(
        path,
        &["t", "lower", "upper", "point"],
        (0..times.len()).map(|i| vec![times[i], lower[i], upper[i], forecast.point[offset + i]]),
    )
}

pub fn write_chart(path: &Path, chart: &TuningChart) -> Result<()> {
    write_rows(
        path,
        &["k", "mean_coverage", "alpha_percentile", "mean_width"],
        chart
            .rows
            .iter()
            .map(|r| vec![r.k as f64, r.mean_coverage, r.alpha_percentile, r.mean_width]),
    )
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = std::io::BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let values = vec![0.1 + 0.2, -1e-300, 123456.789, std::f64::consts::PI];
        let s = Series::regular(0.5 / 48.0, 1.0 / 48.0, values).unwrap();
        write_series(&path, &s).unwrap();
        assert_eq!(read_series(&path).unwrap(), s);
    }

    #[test]
    fn rejects_bad_time_columns() {
        assert!(Series::new(vec![0.0, 1.0, 1.0], vec![0.0; 3]).is_err());
        assert!(Series::new(vec![0.0, 1.0, 2.5], vec![0.0; 3]).is_err());
        assert!(Series::new(vec![0.0, 1.0, 2.0 + 1e-9], vec![0.0; 3]).is_ok());
        assert!(Series::new(vec![0.0], vec![0.0]).is_err());
    }

    #[test]
    fn rejects_bad_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        std::fs::write(&path, "time,y\n0,1\n1,2\n").unwrap();
        assert!(matches!(read_series(&path), Err(Error::MalformedInput(_))));
        std::fs::write(&path, "t,value\n0,1\n1,abc\n").unwrap();
        assert!(matches!(read_series(&path), Err(Error::MalformedInput(_))));
    }
}
