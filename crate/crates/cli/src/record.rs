use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything a run produced except wall-clock data; this is what the
/// record digest covers.
#[derive(Debug, Clone, Serialize)]
struct Content<'a> {
    command: &'a str,
    input_digest: &'a str,
    parameters: &'a Value,
    verdicts: &'a Value,
    artifact_version: &'a str,
}

/// A persisted account of one CLI invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub input_digest: String,
    pub parameters: Value,
    pub verdicts: Value,
    pub artifact_version: String,
    /// SHA-256 of every field above, serialized in this order.
    pub digest: String,
    pub timings: Value,
}

impl RunRecord {
    pub fn new(command: &str, input_digest: String, parameters: Value, verdicts: Value, timings: Value) -> Self {
        let content = Content {
            command,
            input_digest: &input_digest,
            parameters: &parameters,
            verdicts: &verdicts,
            artifact_version: ARTIFACT_VERSION,
        };
        let bytes = serde_json::to_vec(&content).expect("record content serializes");
        RunRecord {
            command: command.to_owned(),
            digest: hex::encode(Sha256::digest(bytes)),
            input_digest,
            parameters,
            verdicts,
            artifact_version: ARTIFACT_VERSION.to_owned(),
            timings,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text).with_context(|| format!("writing run record {}", path.display()))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
