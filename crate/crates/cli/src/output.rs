//! The versioned report envelope and its JSON and CSV writers.

use anyhow::{bail, Result};
use serde::Serialize;
use serde_json::Value as Json;

use itmlab::Report;

use crate::commands::{Outcome, Row};
use crate::config::{Format, RunConfig};

/// Bumped on any incompatible change to the envelope or payloads.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Envelope<'a> {
    pub schema_version: u32,
    pub tool_version: &'static str,
    /// RFC 3339, UTC; the only field that varies between identical runs.
    pub timestamp: String,
    pub config: &'a RunConfig,
    pub passed: bool,
    pub reports: &'a [Report],
    pub data: &'a Json,
}

pub fn passed(outcome: &Outcome) -> bool {
    outcome.reports.iter().all(Report::passed)
}

pub fn render(cfg: &RunConfig, outcome: &Outcome, timestamp: String) -> Result<String> {
    match cfg.format {
        Format::Json => {
            let env = Envelope {
                schema_version: SCHEMA_VERSION,
                tool_version: env!("CARGO_PKG_VERSION"),
                timestamp,
                config: cfg,
                passed: passed(outcome),
                reports: &outcome.reports,
                data: &outcome.data,
            };
            let mut s = serde_json::to_string_pretty(&env)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => match &outcome.table {
            Some(rows) => csv_table(rows),
            None => bail!("csv output is only available for lyapunov; use --format json"),
        },
    }
}

fn csv_table(rows: &[Row]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
