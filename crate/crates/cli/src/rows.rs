//! CSV and JSON serialization of sweep cells and threshold reports.
//!
//! The CSV schema is stable: the header is exactly
//! `decoder,schedule,d,p,trials,failures,ler,ler_stderr,converged_trials,`
//! `converged_failures,converged_ler,r_nc,mean_iters,mean_decode_ns`.
//! Floats are written in shortest round-trip form.

use std::path::Path;

use serde::{Deserialize, Serialize};

use bp4m::harness::{SweepCell, SweepResult};

use crate::error::{CliError, Result};

pub const CSV_COLUMNS: [&str; 14] = [
    "decoder",
    "schedule",
    "d",
    "p",
    "trials",
    "failures",
    "ler",
    "ler_stderr",
    "converged_trials",
    "converged_failures",
    "converged_ler",
    "r_nc",
    "mean_iters",
    "mean_decode_ns",
];

/// One sweep cell in CSV field order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CsvRow {
    pub decoder: String,
    pub schedule: String,
    pub d: usize,
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
    pub ler: f64,
    pub ler_stderr: f64,
    pub converged_trials: u64,
    pub converged_failures: u64,
    pub converged_ler: f64,
    pub r_nc: f64,
    pub mean_iters: f64,
    pub mean_decode_ns: f64,
}

impl CsvRow {
    pub fn from_cell(c: &SweepCell) -> Self {
        Self {
            decoder: c.decoder.to_string(),
            schedule: c.schedule.to_string(),
            d: c.d,
            p: c.p,
            trials: c.trials,
            failures: c.failures,
            ler: c.ler(),
            ler_stderr: c.ler_stderr(),
            converged_trials: c.converged_trials,
            converged_failures: c.converged_failures,
            converged_ler: c.converged_ler(),
            r_nc: c.r_nc(),
            mean_iters: c.mean_iters(),
            mean_decode_ns: c.mean_decode_ns(),
        }
    }
}

pub fn write_csv(path: &Path, rows: &[CsvRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    for row in rows {
        w.serialize(row)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    w.flush()
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let mut rdr = csv::Reader::from_path(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let headers = rdr
        .headers()
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?
        .clone();
    let missing: Vec<&str> = CSV_COLUMNS
        .iter()
        .filter(|c| !headers.iter().any(|h| h == **c))
        .copied()
        .collect();
    if !missing.is_empty() {
        return Err(CliError::Schema(format!(
            "{}: missing columns {:?}",
            path.display(),
            missing
        )));
    }
    let mut rows = Vec::new();
    for rec in rdr.deserialize() {
        let row: CsvRow =
            rec.map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
        if row.trials == 0 {
            return Err(CliError::Schema(format!(
                "{}: row with zero trials",
                path.display()
            )));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Rebuild the aggregate counts a threshold estimate needs from CSV rows.
/// Fields the CSV does not carry (per-sector counts, totals) are zeroed.
pub fn rows_to_sweep(rows: &[CsvRow]) -> Result<SweepResult> {
    let mut cells = Vec::with_capacity(rows.len());
    for r in rows {
        let decoder = r
            .decoder
            .parse()
            .map_err(|e| CliError::Schema(format!("decoder column: {e}")))?;
        let schedule = r
            .schedule
            .parse()
            .map_err(|e| CliError::Schema(format!("schedule column: {e}")))?;
        cells.push(SweepCell {
            decoder,
            schedule,
            d: r.d,
            p: r.p,
            trials: r.trials,
            failures: r.failures,
            converged_trials: r.converged_trials,
            converged_failures: r.converged_failures,
            converged_x_sector: 0,
            converged_z_sector: 0,
            mwpm_trials: 0,
            total_iterations: (r.mean_iters * 2.0 * r.trials as f64).round() as u64,
            total_decode_ns: (r.mean_decode_ns * 2.0 * r.trials as f64).round() as u64,
        });
    }
    Ok(SweepResult { cells })
}

/// JSON summary row: the CSV fields plus the counts only exported here.
#[derive(Debug, Serialize)]
pub struct JsonRow {
    #[serde(flatten)]
    pub row: CsvRow,
    pub converged_x_sector: u64,
    pub converged_z_sector: u64,
    pub mwpm_trials: u64,
}

impl JsonRow {
    pub fn from_cell(c: &SweepCell) -> Self {
        Self {
            row: CsvRow::from_cell(c),
            converged_x_sector: c.converged_x_sector,
            converged_z_sector: c.converged_z_sector,
            mwpm_trials: c.mwpm_trials,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SweepSummary {
    pub build_id: String,
    pub config: serde_json::Value,
    pub rows: Vec<JsonRow>,
}

#[derive(Debug, Serialize)]
pub struct CrossingJson {
    pub d_low: usize,
    pub d_high: usize,
    pub crossing: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct PseudoThresholdJson {
    pub d: usize,
    pub crossing: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct ThresholdEntryJson {
    pub decoder: String,
    pub schedule: String,
    pub crossings: Vec<CrossingJson>,
    pub estimate: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub pseudo_thresholds: Vec<PseudoThresholdJson>,
    pub out_of_range: bool,
}

#[derive(Debug, Serialize)]
pub struct ThresholdReport {
    pub build_id: String,
    pub csv: String,
    pub entries: Vec<ThresholdEntryJson>,
}
