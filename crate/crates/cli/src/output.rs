//! Deterministic JSON report output: same inputs and seed give the same
//! bytes (keys are sorted, no timestamps, no floats).

use std::path::Path;

use anyhow::Context;
use serde::Serialize;

use anomaly_core::report::Report;

#[derive(Serialize)]
pub struct ReportDoc<'a> {
    pub command: String,
    pub passed: bool,
    pub report: &'a Report,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value).context("serialization failed")?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}
