//! CSV output with run provenance and idempotent appends.
//!
//! Every file starts with comment lines carrying the command, the
//! config hash, and the resolved config, then a header row whose column
//! names carry units. Each data row ends with the config hash; a row is
//! identified by (hash, leading key columns) and re-running the same
//! config appends nothing new.

use anyhow::{bail, Context, Result};
use std::collections::HashSet;
use std::io::Write;
use std::path::{Path, PathBuf};

pub struct CsvSink {
    path: PathBuf,
    command: String,
    hash: String,
    resolved: String,
    header: Vec<String>,
    key_cols: usize,
}

impl CsvSink {
    pub fn new(
        path: &Path,
        command: &str,
        hash: &str,
        resolved_config: &str,
        columns: &[&str],
        key_cols: usize,
    ) -> CsvSink {
        let mut header: Vec<String> = columns.iter().map(|s| s.to_string()).collect();
        header.push("config_hash".into());
        CsvSink {
            path: path.to_path_buf(),
            command: command.into(),
            hash: hash.into(),
            resolved: resolved_config.into(),
            header,
            key_cols,
        }
    }

    fn preamble(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# command = {}\n", self.command));
        s.push_str(&format!("# config_hash = {}\n", self.hash));
        for line in self.resolved.lines() {
            s.push_str(&format!("# config: {line}\n"));
        }
        s
    }

    fn row_key(&self, fields: &[&str], hash: &str) -> String {
        let mut key = String::from(hash);
        for f in &fields[..self.key_cols.min(fields.len())] {
            key.push(',');
            key.push_str(f);
        }
        key
    }

    /// Appends rows not already present; returns (appended, skipped).
    /// Creates the file with preamble and header on first use, and logs
    /// this run's preamble when its hash is new to the file.
    pub fn write(&self, rows: &[Vec<String>]) -> Result<(usize, usize)> {
        for r in rows {
            if r.len() + 1 != self.header.len() {
                bail!("row width {} does not match header {}", r.len() + 1, self.header.len());
            }
        }
        let mut existing: HashSet<String> = HashSet::new();
        let mut hash_logged = false;
        let file_exists = self.path.exists();
        if file_exists {
            let text = std::fs::read_to_string(&self.path)
                .with_context(|| format!("cannot read {}", self.path.display()))?;
            let header_line = self.header.join(",");
            for line in text.lines() {
                if let Some(rest) = line.strip_prefix("# config_hash = ") {
                    if rest.trim() == self.hash {
                        hash_logged = true;
                    }
                    continue;
                }
                if line.starts_with('#') || line.is_empty() || line == header_line {
                    continue;
                }
                let fields: Vec<&str> = line.split(',').collect();
                let Some(hash) = fields.last() else { continue };
                existing.insert(self.row_key(&fields[..fields.len() - 1], hash));
            }
        }

        let mut out = String::new();
        if !file_exists {
            out.push_str(&self.preamble());
            out.push_str(&self.header.join(","));
            out.push('\n');
        } else if !hash_logged {
            out.push_str(&self.preamble());
        }

        let mut appended = 0;
        let mut skipped = 0;
        for row in rows {
            let fields: Vec<&str> = row.iter().map(|s| s.as_str()).collect();
            let key = self.row_key(&fields, &self.hash);
            if existing.contains(&key) {
                skipped += 1;
                continue;
            }
            existing.insert(key);
            out.push_str(&row.join(","));
            out.push(',');
            out.push_str(&self.hash);
            out.push('\n');
            appended += 1;
        }

        if !out.is_empty() {
            let mut f = std::fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(&self.path)
                .with_context(|| format!("cannot open {}", self.path.display()))?;
            f.write_all(out.as_bytes())?;
        }
        Ok((appended, skipped))
    }
}

/// Exact shortest decimal for grid coordinates (stable row keys).
pub fn key_num(v: f64) -> String {
    format!("{v}")
}

/// Fixed precision for computed values.
pub fn val(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.6}")
    } else {
        format!("{v}")
    }
}

/// Scientific notation for values spanning decades (noise powers).
pub fn val_sci(v: f64) -> String {
    format!("{v:.6e}")
}
