//! File writers. CSV files open with `#` metadata lines; JSON reports carry the
//! same metadata under `meta`.

use crate::config::RunConfig;
use crate::error::CliError;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub command: String,
    pub papt_cli: String,
    pub papt_core: String,
    pub seed: u64,
    pub config_sha256: String,
    /// Effective configuration as compact JSON, defaults filled in.
    #[serde(skip)]
    pub config_json: String,
}

impl Meta {
    pub fn new(command: &str, cfg: &RunConfig) -> Result<Self, CliError> {
        let config_json = serde_json::to_string(cfg).map_err(|e| CliError::Config(e.to_string()))?;
        let digest = Sha256::digest(config_json.as_bytes());
        let mut hex = String::with_capacity(64);
        for b in digest.iter() {
            let _ = write!(hex, "{b:02x}");
        }
        Ok(Self {
            command: command.to_string(),
            papt_cli: env!("CARGO_PKG_VERSION").to_string(),
            papt_core: papt_core::VERSION.to_string(),
            seed: cfg.seed.unwrap_or(0),
            config_sha256: hex,
            config_json,
        })
    }

    fn header(&self, notes: &[String]) -> String {
        let mut h = String::new();
        let _ = writeln!(h, "# command: {}", self.command);
        let _ = writeln!(h, "# papt-cli: {}", self.papt_cli);
        let _ = writeln!(h, "# papt-core: {}", self.papt_core);
        let _ = writeln!(h, "# seed: {}", self.seed);
        let _ = writeln!(h, "# config_sha256: {}", self.config_sha256);
        let _ = writeln!(h, "# config: {}", self.config_json);
        for n in notes {
            let _ = writeln!(h, "# note: {n}");
        }
        h
    }
}

/// Shortest round-trip representation, in exponent form outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Empty field for a missing value.
pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, meta: &Meta, dir: &Path, name: &str) -> Result<(), CliError> {
        let path = dir.join(name);
        let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
        let mut file = std::io::BufWriter::new(std::fs::File::create(&path).map_err(io)?);
        file.write_all(meta.header(&self.notes).as_bytes()).map_err(io)?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner()
            .map_err(|e| CliError::Io(format!("{}: {}", path.display(), e.error())))?
            .flush()
            .map_err(io)?;
        log::info!("wrote {}", path.display());
        Ok(())
    }
}

/// Pretty JSON with `meta` and the effective `config` prepended to `body`.
pub fn write_json(meta: &Meta, dir: &Path, name: &str, body: serde_json::Value) -> Result<(), CliError> {
    let path = dir.join(name);
    let config: serde_json::Value =
        serde_json::from_str(&meta.config_json).map_err(|e| CliError::Config(e.to_string()))?;
    let mut doc = serde_json::Map::new();
    doc.insert(
        "meta".into(),
        serde_json::to_value(meta).map_err(|e| CliError::Config(e.to_string()))?,
    );
    doc.insert("config".into(), config);
    if let serde_json::Value::Object(m) = body {
        doc.extend(m);
    }
    let mut text =
        serde_json::to_string_pretty(&serde_json::Value::Object(doc)).map_err(|e| CliError::Config(e.to_string()))?;
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    log::info!("wrote {}", path.display());
    Ok(())
}
