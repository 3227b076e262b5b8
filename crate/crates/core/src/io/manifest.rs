//! `manifest.json` written next to every set of artifacts.

use std::path::Path;

use chrono::{SecondsFormat, Utc};
use serde::Serialize;

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub timestamp_utc: String,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub axes: Vec<String>,
    pub artifacts: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: impl Into<String>) -> Self {
        RunManifest {
            tool: "noblespin",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: subcommand.into(),
            config_digest: None,
            seed: None,
            timestamp_utc: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
            warnings: Vec::new(),
            axes: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        super::write_atomic(dir.as_ref().join("manifest.json"), self.to_json().as_bytes())
    }
}
