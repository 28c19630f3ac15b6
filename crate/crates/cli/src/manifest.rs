use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use subfreeze::Error;

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

#[derive(Serialize)]
pub struct OutputEntry {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Record of one CLI invocation, written as manifest.json next to its outputs.
#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: &'static str,
    pub spec_hash: Option<String>,
    pub input_hash: Option<String>,
    pub params: Map<String, Value>,
    pub parallel: bool,
    pub started: u64,
    pub finished: Option<u64>,
    pub outputs: Vec<OutputEntry>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION"),
            spec_hash: None,
            input_hash: None,
            params: Map::new(),
            parallel: cfg!(feature = "parallel"),
            started: now(),
            finished: None,
            outputs: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.params.insert(key.to_string(), v);
    }

    pub fn record_output(&mut self, path: &Path) -> Result<(), Error> {
        let bytes = std::fs::read(path)?;
        let file = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        self.outputs.retain(|o| o.file != file);
        self.outputs.push(OutputEntry {
            file,
            sha256: sha256_hex(&bytes),
            bytes: bytes.len() as u64,
        });
        Ok(())
    }

    pub fn finish(&mut self) {
        self.finished = Some(now());
    }
}
