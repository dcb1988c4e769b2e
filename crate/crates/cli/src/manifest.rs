//! Run manifests: one JSON object per line, appended to `manifest.jsonl`
//! in the run's output directory.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const MANIFEST_FILE: &str = "manifest.jsonl";

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: Value,
    /// Input path to lowercase hex SHA-256 of its bytes.
    pub inputs: BTreeMap<String, String>,
    pub shape: Value,
    pub stats: Value,
    pub wall_time_s: f64,
    pub version: &'static str,
}

impl RunManifest {
    pub fn new(subcommand: &str, parameters: Value) -> Self {
        RunManifest {
            subcommand: subcommand.into(),
            parameters,
            inputs: BTreeMap::new(),
            shape: Value::Null,
            stats: Value::Null,
            wall_time_s: 0.0,
            version: env!("CARGO_PKG_VERSION"),
        }
    }

    pub fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.insert(path.display().to_string(), digest(bytes));
    }

    pub fn finish(&mut self, elapsed: Duration) {
        self.wall_time_s = elapsed.as_secs_f64();
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("manifest serializes")
    }

    pub fn append_to(&self, dir: &Path) -> std::io::Result<()> {
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(dir.join(MANIFEST_FILE))?;
        writeln!(f, "{}", self.to_line())
    }
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
