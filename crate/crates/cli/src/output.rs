//! Summary rows and their CSV/JSON files.

use std::path::Path;

use fracwalk_core::{EstimatorSummary, Point};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// One estimator result; field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub case_id: String,
    pub n: usize,
    pub s: f64,
    /// Coordinates joined by `;`, each in shortest round-trip form.
    pub point: String,
    pub estimate: f64,
    pub std_error: f64,
    pub variance: f64,
    pub avg_steps: f64,
    pub n_samples: u64,
    pub n_capped: u64,
    pub wall_seconds: f64,
}

pub fn format_point(p: &[f64]) -> String {
    p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")
}

pub fn parse_point(text: &str) -> CliResult<Vec<f64>> {
    text.split(';').map(|t| t.trim().parse::<f64>().map_err(|e| CliError::Output(format!("bad point `{text}`: {e}")))).collect()
}

impl SummaryRow {
    pub fn new(case_id: &str, s: f64, point: &Point, sm: &EstimatorSummary) -> Self {
        SummaryRow {
            case_id: case_id.to_string(),
            n: point.dim(),
            s,
            point: format_point(point),
            estimate: sm.estimate,
            std_error: sm.std_error,
            variance: sm.sample_variance,
            avg_steps: sm.avg_steps,
            n_samples: sm.n_samples,
            n_capped: sm.n_capped,
            wall_seconds: sm.wall_seconds,
        }
    }
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

/// Serializes any row type as CSV into a string.
pub fn to_csv<T: Serialize>(rows: &[T]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Output(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

/// Writes rows as JSON when the path ends in `.json`, CSV otherwise.
pub fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> CliResult<()> {
    let text = if is_json(path) {
        let mut t = serde_json::to_string_pretty(rows).map_err(|e| CliError::Output(e.to_string()))?;
        t.push('\n');
        t
    } else {
        to_csv(rows)?
    };
    std::fs::write(path, text).map_err(io(path))
}

pub fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<Vec<T>> {
    let text = std::fs::read_to_string(path).map_err(io(path))?;
    if is_json(path) {
        return serde_json::from_str(&text).map_err(|e| CliError::Output(e.to_string()));
    }
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(|e| CliError::Output(e.to_string()))
}
