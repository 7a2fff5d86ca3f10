//! CSV artifacts: a block of `# key: value` metadata lines followed by a
//! header row and data rows. Floats carry 17 significant digits so that a
//! rerun can be compared bit for bit.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::Error;

/// Ordered `key: value` lines written before the header row.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Metadata {
    entries: Vec<(String, String)>,
}

impl Metadata {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    /// Records the resolved configuration line by line, plus its hash.
    pub fn push_config(&mut self, toml: &str) -> &mut Self {
        self.push("config_sha256", content_hash(toml));
        for line in toml.lines().filter(|l| !l.trim().is_empty()) {
            self.push("config", line);
        }
        self
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }
}

/// SHA-256 of `"blob <len>\0" + text`, the object hash git uses in SHA-256
/// repositories.
pub fn content_hash(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", text.len()).as_bytes());
    h.update(text.as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `meta`, then `header`, then each row.
pub fn write_csv<P: AsRef<Path>>(path: P, meta: &Metadata, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), Error> {
    let path = path.as_ref();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut out = BufWriter::new(File::create(path)?);
    for (k, v) in meta.entries() {
        writeln!(out, "# {k}: {v}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads back a file written by [`write_csv`]: metadata pairs, header and
/// rows.
pub fn read_csv<P: AsRef<Path>>(path: P) -> Result<(Vec<(String, String)>, Vec<String>, Vec<Vec<String>>), Error> {
    let text = std::fs::read_to_string(path)?;
    let mut meta = Vec::new();
    let mut body = String::new();
    for line in text.lines() {
        match line.strip_prefix("# ") {
            Some(m) if body.is_empty() => {
                let (k, v) = m.split_once(": ").unwrap_or((m, ""));
                meta.push((k.to_string(), v.to_string()));
            }
            _ => {
                body.push_str(line);
                body.push('\n');
            }
        }
    }
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header = r.headers()?.iter().map(str::to_string).collect();
    let rows = r.records().map(|rec| rec.map(|r| r.iter().map(str::to_string).collect())).collect::<Result<_, _>>()?;
    Ok((meta, header, rows))
}
