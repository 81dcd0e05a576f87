//! Writes the CSV table, `verdict.json` and `manifest.json` of a run.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::CliResult;
use crate::experiments::{Experiment, Report, Table};

pub const MANIFEST_FILE: &str = "manifest.json";

pub fn table_file(experiment: &str) -> String {
    format!("{experiment}.csv")
}

pub fn verdict_file(experiment: &str) -> String {
    format!("{experiment}.verdict.json")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn write_table(path: &Path, table: &Table) -> CliResult<()> {
    let mut file = fs::File::create(path)?;
    if let Some(meta) = &table.metadata {
        writeln!(file, "# {meta}")?;
    }
    let mut w = csv::Writer::from_writer(file);
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn write_json(path: &Path, value: &Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("json values always serialize");
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub struct RunRecord<'a> {
    pub experiment: &'a Experiment,
    pub report: &'a Report,
    pub config_text: &'a str,
    pub seed: u64,
    pub wall_time_s: f64,
}

/// Writes all artifacts into `dir` (created if missing) and returns their paths.
pub fn write_run(dir: &Path, rec: &RunRecord<'_>) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let name = rec.experiment.name;
    let (table_name, verdict_name) = (table_file(name), verdict_file(name));
    let table = dir.join(&table_name);
    write_table(&table, &rec.report.table)?;
    let verdict = dir.join(&verdict_name);
    write_json(
        &verdict,
        &json!({
            "experiment": rec.experiment.name,
            "anchor": rec.experiment.anchor,
            "pass": rec.report.pass,
            "description": rec.experiment.description,
            "metrics": Value::Object(rec.report.metrics.clone()),
            "notes": rec.report.notes,
        }),
    )?;
    let manifest = dir.join(MANIFEST_FILE);
    write_json(
        &manifest,
        &json!({
            "experiment": rec.experiment.name,
            "anchor": rec.experiment.anchor,
            "config_sha256": sha256_hex(rec.config_text.as_bytes()),
            "versions": {"conic-em": env!("CARGO_PKG_VERSION"), "conic-em-core": conic_em_core::VERSION},
            "seed": rec.seed,
            "files": [table_name, verdict_name],
            "pass": rec.report.pass,
            "wall_time_s": rec.wall_time_s,
        }),
    )?;
    Ok(vec![table, verdict, manifest])
}
