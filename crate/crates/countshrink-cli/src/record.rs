//! Result serialization: the CSV table, its metadata sidecar, and the
//! decimal float format shared by both.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::Failure;

/// Everything worth knowing about one finished run, written next to the
/// results as `<out stem>.meta.json`.
#[derive(Debug, Serialize)]
pub struct RunRecord {
    /// Subcommand that produced the run.
    pub command: String,
    /// SHA-256 of the input file bytes, when the command read one.
    pub input_digest: Option<String>,
    /// SHA-256 of the results file bytes; equal digests mean bit-identical
    /// tables.
    pub output_digest: String,
    /// Full echo of the effective configuration.
    pub config: serde_json::Value,
    /// Small command-specific outputs (fitted parameters, thresholds, …).
    pub summary: serde_json::Value,
    /// Data rows in the results file, excluding the header.
    pub rows_written: usize,
    /// Wall-clock duration of the run.
    pub elapsed_ms: u64,
}

/// Serializes a float with 17 significant digits, enough for `f64` to
/// round-trip bit-exactly through the results file.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Hex SHA-256 of raw bytes.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for b in digest {
        hex.push_str(&format!("{b:02x}"));
    }
    hex
}

/// The sidecar path for a results file: the extension becomes `meta.json`.
pub fn meta_path(out: &Path) -> PathBuf {
    out.with_extension("meta.json")
}

/// Writes the results table and its metadata record, returning the record.
///
/// The table is rendered fully in memory first so the digest stored in the
/// sidecar is the digest of the exact bytes on disk.
#[allow(clippy::too_many_arguments)]
pub fn write_run(
    command: &str,
    out: &Path,
    header: &[&str],
    rows: &[Vec<String>],
    input_digest: Option<String>,
    config: serde_json::Value,
    summary: serde_json::Value,
    started: Instant,
) -> Result<RunRecord, Failure> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(header)
        .and_then(|()| rows.iter().try_for_each(|row| writer.write_record(row)))
        .map_err(|e| Failure::Data(format!("cannot render results table: {e}")))?;
    let bytes = writer
        .into_inner()
        .map_err(|e| Failure::Data(format!("cannot render results table: {e}")))?;

    std::fs::write(out, &bytes)
        .map_err(|e| Failure::Data(format!("cannot write {}: {e}", out.display())))?;

    let record = RunRecord {
        command: command.to_string(),
        input_digest,
        output_digest: sha256_hex(&bytes),
        config,
        summary,
        rows_written: rows.len(),
        elapsed_ms: started.elapsed().as_millis() as u64,
    };
    let meta = meta_path(out);
    let json = serde_json::to_string_pretty(&record)
        .map_err(|e| Failure::Data(format!("cannot serialize run record: {e}")))?;
    std::fs::write(&meta, json)
        .map_err(|e| Failure::Data(format!("cannot write {}: {e}", meta.display())))?;

    println!(
        "{command}: wrote {} rows to {} (digest {})",
        rows.len(),
        out.display(),
        &record.output_digest[..12]
    );
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_bit_exactly() {
        for &x in &[
            0.0,
            -0.0,
            1.0,
            8.2,
            1e-300,
            -3.5e291,
            0.1 + 0.2,
            std::f64::consts::PI,
            f64::MIN_POSITIVE,
        ] {
            let back: f64 = fmt_f64(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "failed for {x}");
        }
    }

    #[test]
    fn digest_is_stable_and_content_sensitive() {
        assert_eq!(sha256_hex(b"abc"), sha256_hex(b"abc"));
        assert_ne!(sha256_hex(b"abc"), sha256_hex(b"abd"));
        // Known SHA-256 of the empty string.
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn sidecar_sits_next_to_the_results() {
        assert_eq!(
            meta_path(Path::new("/tmp/run/table1.csv")),
            Path::new("/tmp/run/table1.meta.json")
        );
        assert_eq!(
            meta_path(Path::new("results")),
            Path::new("results.meta.json")
        );
    }
}
