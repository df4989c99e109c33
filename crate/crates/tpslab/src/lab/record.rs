//! On-disk run records: an append-only JSONL file per (run id, seed) pair
//! plus CSV sidecars.
//!
//! Each record line is `{"meta": .., "payload": ..}`. Volatile facts (wall
//! time) live only in `meta`; the `payload` bytes are a pure function of the
//! configuration, so identical seeds yield byte-identical payloads and runs
//! can be diffed mechanically.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::error::Result;

#[derive(Debug, Serialize, Deserialize)]
struct RecordMeta {
    wall_time_ms: u128,
    tool_version: String,
}

#[derive(Serialize)]
struct RecordLineOut<'a> {
    meta: RecordMeta,
    payload: &'a RawValue,
}

#[derive(Deserialize)]
struct RecordLineIn {
    #[allow(dead_code)]
    meta: RecordMeta,
    payload: Box<RawValue>,
}

/// Writer for one run directory: `<root>/<run_id>/<seed>/`.
pub struct RunWriter {
    dir: PathBuf,
    record_path: PathBuf,
}

impl RunWriter {
    /// Creates the run directory (parents included) and positions the record
    /// file for appending.
    pub fn create(root: &Path, run_id: &str, seed: u64) -> Result<Self> {
        let dir = root.join(run_id).join(seed.to_string());
        std::fs::create_dir_all(&dir)?;
        let record_path = dir.join("record.jsonl");
        Ok(Self { dir, record_path })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn record_path(&self) -> &Path {
        &self.record_path
    }

    /// Appends one record line wrapping `payload`. The payload is serialized
    /// on its own first, so its bytes never depend on the metadata.
    pub fn append<T: Serialize>(&self, payload: &T) -> Result<()> {
        let payload_text = serde_json::to_string(payload)?;
        let raw: Box<RawValue> = RawValue::from_string(payload_text)?;
        let wall_time_ms = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis())
            .unwrap_or(0);
        let line = serde_json::to_string(&RecordLineOut {
            meta: RecordMeta {
                wall_time_ms,
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
            },
            payload: &raw,
        })?;
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.record_path)?;
        file.write_all(line.as_bytes())?;
        file.write_all(b"\n")?;
        Ok(())
    }

    /// Writes a CSV sidecar next to the record file. Rows are taken as-is;
    /// callers keep cells free of commas and newlines.
    pub fn write_csv(&self, name: &str, header: &str, rows: &[String]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        let mut file = File::create(&path)?;
        writeln!(file, "{header}")?;
        for row in rows {
            writeln!(file, "{row}")?;
        }
        Ok(path)
    }
}

/// The raw payload bytes of every line in a record file, in order. This is
/// the comparison key for reproducibility checks.
pub fn read_payload_strings(path: &Path) -> Result<Vec<String>> {
    let file = File::open(path)?;
    let mut payloads = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: RecordLineIn = serde_json::from_str(&line)?;
        payloads.push(parsed.payload.get().to_string());
    }
    Ok(payloads)
}
