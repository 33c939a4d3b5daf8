use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::experiments::{ExperimentConfig, ScenarioResult};
use crate::model::SequenceSample;

use super::sequence::write_sequence;

/// Largest `N` whose sampled sequences are written into a run directory.
pub const SEQUENCE_SAVE_LIMIT: u64 = 10_000_000;

const CSV_COLUMNS: [&str; 6] = [
    "window_lo",
    "window_hi",
    "trial_id",
    "exceptional_count",
    "density",
    "max_gap_ratio",
];

/// One CSV line: a window of one trial. An absent gap ratio is an empty field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowRow {
    pub window_lo: u64,
    pub window_hi: u64,
    pub trial_id: u64,
    pub exceptional_count: u64,
    pub density: f64,
    pub max_gap_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Everything needed to re-run a directory's trials on the same build.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub tool_version: String,
    pub config: ExperimentConfig,
    pub seed: u64,
    pub trial_ids: Vec<u64>,
    pub created_unix: u64,
    pub files: Vec<FileDigest>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn window_rows(result: &ScenarioResult) -> Vec<WindowRow> {
    result
        .reports
        .iter()
        .flat_map(|r| {
            r.windows.iter().map(move |w| WindowRow {
                window_lo: w.lo,
                window_hi: w.hi,
                trial_id: r.trial_id,
                exceptional_count: w.exceptional_count,
                density: w.density,
                max_gap_ratio: w.max_gap_ratio,
            })
        })
        .collect()
}

/// CSV with the fixed columns `window_lo, window_hi, trial_id,
/// exceptional_count, density, max_gap_ratio`; the header is always written.
pub fn write_windows_csv<W: Write>(rows: &[WindowRow], w: W) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record(CSV_COLUMNS).map_err(csv_error)?;
    for row in rows {
        out.serialize(row).map_err(csv_error)?;
    }
    out.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::format(format!("{other:?}")),
    }
}

/// One trial report per line.
pub fn write_ndjson<W: Write>(result: &ScenarioResult, mut w: W) -> Result<()> {
    for r in &result.reports {
        serde_json::to_writer(&mut w, r).map_err(|e| Error::format(e.to_string()))?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_result(path: &Path) -> Result<ScenarioResult> {
    let text = fs::read(path)?;
    serde_json::from_slice(&text).map_err(|e| Error::format(format!("{}: {e}", path.display())))
}

fn write_file(dir: &Path, rel: &str, bytes: &[u8], digests: &mut Vec<FileDigest>) -> Result<()> {
    fs::write(dir.join(rel), bytes)?;
    digests.push(FileDigest {
        path: rel.to_string(),
        bytes: bytes.len() as u64,
        sha256: sha256_hex(bytes),
    });
    Ok(())
}

/// Writes `result.json`, `windows.csv`, optional `sequences/trial-<id>.txt`
/// and finally `manifest.json` into `dir`, creating it if needed.
pub fn emit_results(
    result: &ScenarioResult,
    dir: &Path,
    sequences: &[SequenceSample],
) -> Result<RunManifest> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let json = serde_json::to_vec_pretty(result).map_err(|e| Error::format(e.to_string()))?;
    write_file(dir, "result.json", &json, &mut files)?;
    let mut csv_bytes = Vec::new();
    write_windows_csv(&window_rows(result), &mut csv_bytes)?;
    write_file(dir, "windows.csv", &csv_bytes, &mut files)?;
    if !sequences.is_empty() {
        if let Some(big) = sequences.iter().find(|s| s.limit() > SEQUENCE_SAVE_LIMIT) {
            return Err(Error::guard(format!(
                "refusing to save sequences with N = {} > {SEQUENCE_SAVE_LIMIT}",
                big.limit()
            )));
        }
        fs::create_dir_all(dir.join("sequences"))?;
        for s in sequences {
            let mut buf = Vec::new();
            write_sequence(s, &mut buf)?;
            write_file(
                dir,
                &format!("sequences/trial-{}.txt", s.trial_id()),
                &buf,
                &mut files,
            )?;
        }
    }
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: result.config.clone(),
        seed: result.config.seed,
        trial_ids: result.reports.iter().map(|r| r.trial_id).collect(),
        created_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
        files,
    };
    let bytes = serde_json::to_vec_pretty(&manifest).map_err(|e| Error::format(e.to_string()))?;
    fs::write(dir.join("manifest.json"), bytes)?;
    Ok(manifest)
}
