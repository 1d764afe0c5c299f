//! Artifact emission: atomic writes, CSV/JSON tables, and the embedded
//! provenance header (config hash + tool version).

use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::config::Format;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug)]
pub struct Meta {
    pub config_sha256: String,
    pub version: &'static str,
}

impl Meta {
    pub fn from_canonical(canonical: &str) -> Meta {
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        Meta { config_sha256: hex, version: VERSION }
    }

    pub fn json(&self) -> serde_json::Value {
        serde_json::json!({ "config_sha256": self.config_sha256, "version": self.version })
    }
}

/// Writes `bytes` to `path` via a temp file in the same directory plus
/// rename, so readers never observe a partial artifact.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    {
        let mut file = std::fs::File::create(&tmp)?;
        file.write_all(bytes)?;
        file.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

/// A rectangular table emitted as CSV (with `#` provenance comments) or
/// as a JSON object with a `meta` block and one object per row.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Table {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_csv(&self, meta: &Meta) -> String {
        let mut out = String::new();
        out.push_str(&format!("# config_sha256 = {}\n", meta.config_sha256));
        out.push_str(&format!("# version = {}\n", meta.version));
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self, meta: &Meta) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (col, cell) in self.columns.iter().zip(row) {
                    // numeric cells stay numbers in JSON output
                    let v = cell
                        .parse::<f64>()
                        .ok()
                        .and_then(serde_json::Number::from_f64)
                        .map(serde_json::Value::Number)
                        .unwrap_or_else(|| serde_json::Value::String(cell.clone()));
                    obj.insert(col.to_string(), v);
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        let doc = serde_json::json!({ "meta": meta.json(), "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).expect("table serialization");
        s.push('\n');
        s
    }

    /// Writes `<dir>/<stem>.<ext>` and returns the path.
    pub fn write(&self, dir: &Path, stem: &str, format: Format, meta: &Meta) -> std::io::Result<PathBuf> {
        let path = dir.join(format!("{stem}.{}", format.extension()));
        let body = match format {
            Format::Csv => self.to_csv(meta),
            Format::Json => self.to_json(meta),
        };
        write_atomic(&path, body.as_bytes())?;
        Ok(path)
    }
}

/// Writes a JSON report with the provenance block injected at the top
/// level; returns the path.
pub fn write_report(
    dir: &Path,
    stem: &str,
    meta: &Meta,
    mut body: serde_json::Value,
) -> std::io::Result<PathBuf> {
    let path = dir.join(format!("{stem}.json"));
    if let Some(obj) = body.as_object_mut() {
        obj.insert("meta".into(), meta.json());
    }
    let mut s = serde_json::to_string_pretty(&body).expect("report serialization");
    s.push('\n');
    write_atomic(&path, s.as_bytes())?;
    Ok(path)
}

/// Canonical float formatting for table cells: shortest round-trip.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}
