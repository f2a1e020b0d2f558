//! JSON certificates.

use std::path::Path;

use hat_core::check::Check;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

impl InputHash {
    pub fn of(path: &Path, bytes: &[u8]) -> Self {
        InputHash {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub command: String,
    pub inputs: Vec<InputHash>,
    pub interpretation_notes: Vec<String>,
    pub checks: Vec<Check>,
    /// Command-specific results.
    pub data: serde_json::Value,
}

impl CertificateDocument {
    pub fn new(command: &str) -> Self {
        CertificateDocument {
            command: command.to_string(),
            inputs: Vec::new(),
            interpretation_notes: Vec::new(),
            checks: Vec::new(),
            data: serde_json::Value::Object(Default::default()),
        }
    }

    pub fn passed(&self) -> bool {
        hat_core::check::all_pass(&self.checks)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
